#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "cmg/core.hpp"

namespace cmg {

class NonPositivePriceError : public Error {
public:
    NonPositivePriceError(double prev_price, double demand, double result);

    /// Main-loop step (or -1 for warm-up / unknown) set by the engine.
    int step = -1;
};

/// Exact integer sum of the decisions.
std::int64_t excess_demand(std::span<const Decision> decisions) noexcept;

/// Per-stock external event parameters. Impact is strength * baseline_std.
struct EventState {
    double baseline_std = 0.0;
    double strength = 0.0;
    double probability = 0.0;

    double impact() const noexcept { return strength * baseline_std; }
};

/// With probability p returns +impact or -impact (parity of a uniformly random
/// integer decides the sign, even is positive), otherwise 0.
double external_demand(const EventState& state, Rng& rng);

constexpr double combined_demand(std::int64_t internal, double external) noexcept {
    return static_cast<double>(internal) + external;
}

/// prev + sgn(demand) * sqrt(|demand|). Throws NonPositivePriceError when the
/// result is not positive.
double update_price(double prev_price, double total_demand);

double log_return(double p_now, double p_prev);

/// Series for one stock. Index 0 of `price` is P0; entries k >= 1 of every
/// series refer to step k. Expectations are NaN during warm-up.
struct StockSeries {
    std::vector<double> price;
    std::vector<double> returns;             // r(t), t >= 1
    std::vector<std::int64_t> internal;      // A_int(t)
    std::vector<double> demand;              // A(t) = A_int + A_ext
    std::vector<double> mean_expectation;    // population mean r^e(t)
};

class MarketState {
public:
    MarketState() = default;
    MarketState(double initial_price, std::size_t warmup_steps, std::size_t horizon);

    /// Append one step for stock j. Returns the realized return.
    double record(std::size_t stock, std::int64_t internal, double demand, double mean_expectation);

    const StockSeries& stock(std::size_t j) const noexcept { return stocks_[j]; }
    std::size_t warmup_steps() const noexcept { return warmup_; }
    /// Steps recorded so far (warm-up included).
    std::size_t steps() const noexcept { return stocks_[0].returns.size(); }

    double last_return(std::size_t j) const noexcept { return stocks_[j].returns.back(); }
    double last_price(std::size_t j) const noexcept { return stocks_[j].price.back(); }

    /// Main-loop window (warm-up excluded) of each series.
    std::span<const double> window_returns(std::size_t j) const noexcept;
    std::span<const double> window_expectations(std::size_t j) const noexcept;
    std::span<const double> window_prices(std::size_t j) const noexcept;
    std::span<const double> window_demand(std::size_t j) const noexcept;
    std::span<const std::int64_t> window_internal(std::size_t j) const noexcept;

private:
    std::array<StockSeries, kStocks> stocks_;
    std::size_t warmup_ = 0;
};

/// Columns t, P1, r1, A1, re1_mean, P2, r2, A2, re2_mean over the main-loop
/// window; t counts main-loop steps from 1.
void write_trajectory_csv(std::ostream& out, const MarketState& market);

}  // namespace cmg
