#include <iostream>

#include "cmg/cli.hpp"

int main(int argc, char** argv) {
    return cmg::dispatch(argc, argv, std::cout, std::cerr).exit_code;
}
