#pragma once

#include <vector>

#include "cmg/core.hpp"

namespace cmg {

/// Agent i's weights on the other stock's lagged return: b1 enters stock 1's
/// expectation, b2 enters stock 2's.
struct CouplingCoefficients {
    double b1 = 0.0;
    double b2 = 0.0;
    double operator[](std::size_t stock) const noexcept { return stock == 0 ? b1 : b2; }
    bool operator==(const CouplingCoefficients&) const = default;
};

/// a * r_own_lag + b * r_other_lag.
constexpr double expected_return(double a, double b, double r_own_lag, double r_other_lag) noexcept {
    return a * r_own_lag + b * r_other_lag;
}

/// Homogeneous: every agent gets (b1, b2) and no randomness is consumed.
/// Uniform: b1 values come from `rng_b1`, b2 values from `rng_b2`, one draw
/// per agent each.
std::vector<CouplingCoefficients> sample_couplings(const CouplingSpec& spec, int n_agents, Rng& rng_b1,
                                                   Rng& rng_b2);

/// Population-mean change of the expected return when the mean coupling
/// equals `c`.
constexpr double mean_expected_return_delta(double a, double c, double dr_own_lag, double dr_other_lag) noexcept {
    return a * dr_own_lag + c * dr_other_lag;
}

/// Mean coupling the spec implies for stock index 0 or 1 (b_j or c_j).
double coupling_center(const CouplingSpec& spec, std::size_t stock) noexcept;

}  // namespace cmg
