#include "cmg/market.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "cmg/config_io.hpp"

namespace cmg {

NonPositivePriceError::NonPositivePriceError(double prev_price, double demand, double result)
    : Error("market", "update_price",
            "NonPositivePrice: price " + format_double(prev_price) + " with demand " + format_double(demand) +
                " would become " + format_double(result)) {}

std::int64_t excess_demand(std::span<const Decision> decisions) noexcept {
    std::int64_t sum = 0;
    for (const Decision d : decisions) sum += to_int(d);
    return sum;
}

double external_demand(const EventState& state, Rng& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    if (!(unit(rng) < state.probability)) return 0.0;
    std::uniform_int_distribution<std::uint32_t> theta;
    const bool even = theta(rng) % 2 == 0;
    return even ? state.impact() : -state.impact();
}

double update_price(double prev_price, double total_demand) {
    const double next = prev_price + sgn(total_demand) * std::sqrt(std::abs(total_demand));
    if (!(next > 0.0)) throw NonPositivePriceError(prev_price, total_demand, next);
    return next;
}

double log_return(double p_now, double p_prev) {
    return std::log(p_now) - std::log(p_prev);
}

MarketState::MarketState(double initial_price, std::size_t warmup_steps, std::size_t horizon)
    : warmup_(warmup_steps) {
    const std::size_t total = warmup_steps + horizon;
    for (auto& s : stocks_) {
        s.price.reserve(total + 1);
        s.price.push_back(initial_price);
        s.returns.reserve(total);
        s.internal.reserve(total);
        s.demand.reserve(total);
        s.mean_expectation.reserve(total);
    }
}

double MarketState::record(std::size_t stock, std::int64_t internal, double demand, double mean_expectation) {
    auto& s = stocks_[stock];
    const double prev = s.price.back();
    const double next = update_price(prev, demand);
    const double r = log_return(next, prev);
    s.price.push_back(next);
    s.returns.push_back(r);
    s.internal.push_back(internal);
    s.demand.push_back(demand);
    s.mean_expectation.push_back(mean_expectation);
    return r;
}

std::span<const double> MarketState::window_returns(std::size_t j) const noexcept {
    return std::span<const double>(stocks_[j].returns).subspan(warmup_);
}
std::span<const double> MarketState::window_expectations(std::size_t j) const noexcept {
    return std::span<const double>(stocks_[j].mean_expectation).subspan(warmup_);
}
std::span<const double> MarketState::window_prices(std::size_t j) const noexcept {
    return std::span<const double>(stocks_[j].price).subspan(warmup_ + 1);
}
std::span<const double> MarketState::window_demand(std::size_t j) const noexcept {
    return std::span<const double>(stocks_[j].demand).subspan(warmup_);
}
std::span<const std::int64_t> MarketState::window_internal(std::size_t j) const noexcept {
    return std::span<const std::int64_t>(stocks_[j].internal).subspan(warmup_);
}

void write_trajectory_csv(std::ostream& out, const MarketState& market) {
    out << "t,P1,r1,A1,re1_mean,P2,r2,A2,re2_mean\n";
    const auto n = market.window_returns(0).size();
    for (std::size_t k = 0; k < n; ++k) {
        out << (k + 1);
        for (std::size_t j = 0; j < kStocks; ++j) {
            out << ',' << format_double(market.window_prices(j)[k]) << ','
                << format_double(market.window_returns(j)[k]) << ','
                << format_double(market.window_demand(j)[k]) << ','
                << format_double(market.window_expectations(j)[k]);
        }
        out << '\n';
    }
}

}  // namespace cmg
