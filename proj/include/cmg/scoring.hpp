#pragma once

#include <array>
#include <span>
#include <vector>

#include "cmg/core.hpp"
#include "cmg/expectation.hpp"
#include "cmg/strategy.hpp"

namespace cmg {

/// S strategies shared by both stocks (each stock keeps its own scores for
/// them) plus personal coupling coefficients.
struct Agent {
    std::vector<Strategy> strategies;
    CouplingCoefficients coupling;
};

/// Minority payoff: -sgn(A) * decision.
constexpr double payoff(double total_demand, Decision decision) noexcept {
    return -sgn(total_demand) * to_int(decision);
}

/// Cumulative scores U[stock][agent][slot], zero-initialized.
class AgentScores {
public:
    AgentScores() = default;
    AgentScores(std::size_t n_agents, std::size_t n_strategies);

    std::span<double> slots(std::size_t stock, std::size_t agent) noexcept {
        return {data_.data() + offset(stock, agent), n_strategies_};
    }
    std::span<const double> slots(std::size_t stock, std::size_t agent) const noexcept {
        return {data_.data() + offset(stock, agent), n_strategies_};
    }
    std::size_t n_agents() const noexcept { return n_agents_; }
    std::size_t n_strategies() const noexcept { return n_strategies_; }

private:
    std::size_t offset(std::size_t stock, std::size_t agent) const noexcept {
        return (stock * n_agents_ + agent) * n_strategies_;
    }
    std::size_t n_agents_ = 0;
    std::size_t n_strategies_ = 0;
    std::vector<double> data_;
};

/// Every slot of every agent gains the payoff of the decision it would have
/// made in that agent's information state, whether or not it was played.
/// `states[j][i]` is agent i's state for stock j.
void update_all_scores(AgentScores& scores, std::span<const Agent> agents,
                       const std::array<std::span<const InfoState>, kStocks>& states,
                       const std::array<double, kStocks>& demand);

/// Index of a maximal score. Ties are broken uniformly at random; the RNG is
/// consumed only when there is a tie.
std::size_t select_strategy(std::span<const double> scores, Rng& rng);

}  // namespace cmg
