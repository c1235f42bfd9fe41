#include "cmg/strategy.hpp"

#include <stdexcept>
#include <string>

namespace cmg {

InfoState encode(std::span<const SignBit> history, SignBit expectation, int memory) {
    if (memory < 0 || history.size() != static_cast<std::size_t>(memory)) {
        throw std::invalid_argument("encode: history length " + std::to_string(history.size()) +
                                    " does not match memory " + std::to_string(memory));
    }
    std::uint32_t packed = 0;
    for (const SignBit bit : history) packed = (packed << 1) | static_cast<std::uint32_t>(bit);
    return encode_packed(packed, expectation);
}

Strategy::Strategy(std::vector<Decision> table) : table_(std::move(table)) {
    const auto n = table_.size();
    if (n < 4 || (n & (n - 1)) != 0) {
        throw std::invalid_argument("Strategy: table length must be 2^(m+1) with m >= 1");
    }
}

Decision random_decision(Rng& rng, DecisionSet decisions) {
    if (decisions == DecisionSet::Binary) {
        std::uniform_int_distribution<int> coin(0, 1);
        return coin(rng) == 0 ? Decision::Sell : Decision::Buy;
    }
    std::uniform_int_distribution<int> die(-1, 1);
    return static_cast<Decision>(die(rng));
}

Strategy sample_strategy(Rng& rng, int memory, DecisionSet decisions) {
    std::vector<Decision> table(state_count(memory));
    for (auto& entry : table) entry = random_decision(rng, decisions);
    return Strategy(std::move(table));
}

}  // namespace cmg
