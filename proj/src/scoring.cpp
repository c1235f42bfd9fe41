#include "cmg/scoring.hpp"

#include <cassert>

namespace cmg {

AgentScores::AgentScores(std::size_t n_agents, std::size_t n_strategies)
    : n_agents_(n_agents), n_strategies_(n_strategies), data_(kStocks * n_agents * n_strategies, 0.0) {}

void update_all_scores(AgentScores& scores, std::span<const Agent> agents,
                       const std::array<std::span<const InfoState>, kStocks>& states,
                       const std::array<double, kStocks>& demand) {
    for (std::size_t j = 0; j < kStocks; ++j) {
        const double against = -sgn(demand[j]);
        assert(states[j].size() == agents.size());
        for (std::size_t i = 0; i < agents.size(); ++i) {
            const auto& book = agents[i].strategies;
            auto u = scores.slots(j, i);
            const InfoState state = states[j][i];
            for (std::size_t s = 0; s < book.size(); ++s) u[s] += against * to_int(book[s].lookup(state));
        }
    }
}

std::size_t select_strategy(std::span<const double> scores, Rng& rng) {
    assert(!scores.empty());
    std::size_t best = 0;
    std::size_t ties = 1;
    for (std::size_t s = 1; s < scores.size(); ++s) {
        if (scores[s] > scores[best]) {
            best = s;
            ties = 1;
        } else if (scores[s] == scores[best]) {
            ++ties;
        }
    }
    if (ties == 1) return best;
    std::uniform_int_distribution<std::size_t> pick(0, ties - 1);
    std::size_t k = pick(rng);
    for (std::size_t s = best; s < scores.size(); ++s) {
        if (scores[s] == scores[best]) {
            if (k == 0) return s;
            --k;
        }
    }
    return best;
}

}  // namespace cmg
