#include "cmg/engine.hpp"

#include <cmath>
#include <limits>

#include "cmg/config_io.hpp"
#include "cmg/expectation.hpp"
#include "cmg/parallel.hpp"
#include "cmg/scoring.hpp"
#include "cmg/stats.hpp"
#include "cmg/strategy.hpp"

namespace cmg {

const char* to_string(Phase phase) noexcept {
    switch (phase) {
        case Phase::Expectation: return "expectation";
        case Phase::State: return "state";
        case Phase::Selection: return "selection";
        case Phase::Decision: return "decision";
        case Phase::Demand: return "demand";
        case Phase::PriceReturn: return "price_return";
        case Phase::Scoring: return "scoring";
    }
    return "unknown";
}

RunError::RunError(int index, const Error& cause)
    : Error(cause.module(), cause.operation(), "run " + std::to_string(index) + ": " + cause.what()),
      run_index(index) {}

namespace {

struct Completed {
    MarketState market;
    // Population-mean expectation formed from the final returns; the step
    // after the horizon would have used it.
    std::array<double, kStocks> forward_expectation{};
};

class Simulation {
public:
    Simulation(const ModelConfig& config, int run_index, const RunOptions& options,
               const std::optional<std::array<EventState, kStocks>>& events)
        : config_(config),
          options_(options),
          events_(events),
          n_(static_cast<std::size_t>(config.n_agents)),
          warmup_(static_cast<std::size_t>(warmup_steps(config.memory))),
          history_mask_((std::uint32_t{1} << config.memory) - 1),
          market_(config.initial_price, warmup_, static_cast<std::size_t>(config.horizon)),
          scores_(n_, static_cast<std::size_t>(config.n_strategies)) {
        const auto run = static_cast<std::uint64_t>(run_index);
        for (std::size_t j = 0; j < kStocks; ++j) {
            const std::size_t src = options.swap_stock_streams ? 1 - j : j;
            decision_rng_[j] = make_rng(config.master_seed, run, decisions_stream(src));
            event_rng_[j] = make_rng(config.master_seed, run, events_stream(src));
        }
        init_agents(run);
        for (auto& s : states_) s.resize(n_);
        for (auto& d : decisions_) d.resize(n_);
        for (auto& e : expectations_) e.resize(n_);
    }

    Completed execute() {
        for (std::size_t w = 0; w < warmup_; ++w) warmup_step();
        for (int t = 1; t <= config_.horizon; ++t) {
            try {
                main_step(t);
            } catch (NonPositivePriceError& e) {
                e.step = t;
                throw;
            }
        }
        Completed done;
        done.forward_expectation = form_expectations();
        done.market = std::move(market_);
        return done;
    }

private:
    void init_agents(std::uint64_t run) {
        agents_.resize(n_);
        const auto decisions = alphabet();
        const auto slots = static_cast<std::size_t>(config_.n_strategies);
        Rng rng = make_rng(config_.master_seed, run, Stream::AgentInit);
        for (auto& agent : agents_) {
            agent.strategies.reserve(slots);
            for (std::size_t s = 0; s < slots; ++s) {
                agent.strategies.push_back(sample_strategy(rng, config_.memory, decisions));
            }
        }
        std::array<Rng, kStocks> coupling_rng;
        for (std::size_t j = 0; j < kStocks; ++j) {
            const std::size_t src = options_.swap_stock_streams ? 1 - j : j;
            coupling_rng[j] = make_rng(config_.master_seed, run, couplings_stream(src));
        }
        const auto couplings = sample_couplings(config_.b_spec, config_.n_agents, coupling_rng[0], coupling_rng[1]);
        for (std::size_t i = 0; i < n_; ++i) agents_[i].coupling = couplings[i];
    }

    DecisionSet alphabet() const { return options_.strategy_alphabet.value_or(config_.decision_set()); }

    void notify(Phase phase, int t) const {
        if (options_.observer) options_.observer(PhaseEvent{phase, t, market_.steps()});
    }

    void push_history(std::size_t j, double r) {
        history_[j] = ((history_[j] << 1) | static_cast<std::uint32_t>(sign_bit(r))) & history_mask_;
    }

    void warmup_step() {
        const auto set = alphabet();
        std::array<std::int64_t, kStocks> internal{};
        for (std::size_t j = 0; j < kStocks; ++j) {
            for (auto& d : decisions_[j]) d = random_decision(decision_rng_[j], set);
            internal[j] = excess_demand(decisions_[j]);
        }
        for (std::size_t j = 0; j < kStocks; ++j) {
            const double r = market_.record(j, internal[j], static_cast<double>(internal[j]),
                                            std::numeric_limits<double>::quiet_NaN());
            push_history(j, r);
        }
    }

    /// Fills expectations_ from the latest returns; returns the population means.
    std::array<double, kStocks> form_expectations() {
        const std::array<double, kStocks> lag{market_.last_return(0), market_.last_return(1)};
        std::array<double, kStocks> mean{};
        for (std::size_t j = 0; j < kStocks; ++j) {
            double sum = 0.0;
            for (std::size_t i = 0; i < n_; ++i) {
                const double re = expected_return(config_.a[j], agents_[i].coupling[j], lag[j], lag[1 - j]);
                expectations_[j][i] = re;
                sum += re;
            }
            mean[j] = sum / static_cast<double>(n_);
        }
        return mean;
    }

    void main_step(int t) {
        notify(Phase::Expectation, t);
        const std::array<double, kStocks> mean_expectation = form_expectations();

        notify(Phase::State, t);
        for (std::size_t j = 0; j < kStocks; ++j) {
            for (std::size_t i = 0; i < n_; ++i) {
                states_[j][i] = encode_packed(history_[j], sign_bit(expectations_[j][i]));
            }
        }

        notify(Phase::Selection, t);
        std::array<std::vector<std::size_t>, kStocks>& chosen = chosen_;
        for (std::size_t j = 0; j < kStocks; ++j) {
            chosen[j].resize(n_);
            for (std::size_t i = 0; i < n_; ++i) chosen[j][i] = select_strategy(scores_.slots(j, i), decision_rng_[j]);
        }

        notify(Phase::Decision, t);
        for (std::size_t j = 0; j < kStocks; ++j) {
            for (std::size_t i = 0; i < n_; ++i) {
                decisions_[j][i] = agents_[i].strategies[chosen[j][i]].lookup(states_[j][i]);
            }
        }

        notify(Phase::Demand, t);
        std::array<std::int64_t, kStocks> internal{};
        std::array<double, kStocks> total{};
        for (std::size_t j = 0; j < kStocks; ++j) {
            internal[j] = excess_demand(decisions_[j]);
            const double ext = events_ ? external_demand((*events_)[j], event_rng_[j]) : 0.0;
            total[j] = combined_demand(internal[j], ext);
        }

        notify(Phase::PriceReturn, t);
        for (std::size_t j = 0; j < kStocks; ++j) {
            const double r = market_.record(j, internal[j], total[j], mean_expectation[j]);
            push_history(j, r);
        }

        notify(Phase::Scoring, t);
        update_all_scores(scores_, agents_, {std::span<const InfoState>(states_[0]), std::span<const InfoState>(states_[1])},
                          total);
    }

    const ModelConfig& config_;
    const RunOptions& options_;
    std::optional<std::array<EventState, kStocks>> events_;
    std::size_t n_;
    std::size_t warmup_;
    std::uint32_t history_mask_;
    MarketState market_;
    AgentScores scores_;
    std::vector<Agent> agents_;
    std::array<Rng, kStocks> decision_rng_;
    std::array<Rng, kStocks> event_rng_;
    std::array<std::uint32_t, kStocks> history_{};
    std::array<std::vector<InfoState>, kStocks> states_;
    std::array<std::vector<Decision>, kStocks> decisions_;
    std::array<std::vector<double>, kStocks> expectations_;
    std::array<std::vector<std::size_t>, kStocks> chosen_;
};

RunResult finish(const ModelConfig& config, int run_index, Completed done) {
    RunResult result;
    result.run_index = run_index;
    result.master_seed = config.master_seed;
    result.config_hash = config_hash(config);
    MarketState& market = done.market;
    for (std::size_t j = 0; j < kStocks; ++j) {
        // r(t) pairs with the expectation formed from it, i.e. the one used at t+1.
        const auto re = market.window_expectations(j);
        const auto r = market.window_returns(j);
        auto& out = result.samples[j];
        out.expected.assign(re.begin() + 1, re.end());
        out.expected.push_back(done.forward_expectation[j]);
        out.realized.assign(r.begin(), r.end());
    }
    result.correlation = pearson(market.window_returns(0), market.window_returns(1));
    result.market = std::move(market);
    return result;
}

}  // namespace

RunResult run_with_events(const ModelConfig& config, int run_index,
                          const std::optional<std::array<EventState, kStocks>>& events, const RunOptions& options) {
    validate(config);
    Simulation sim(config, run_index, options, events);
    return finish(config, run_index, sim.execute());
}

RunResult run(const ModelConfig& config, int run_index, const RunOptions& options) {
    if (!config.events) return run_with_events(config, run_index, std::nullopt, options);
    validate(config);
    // Calibration pass: same seeds, no events, no observer.
    RunOptions quiet = options;
    quiet.observer = nullptr;
    Simulation calibration(config, run_index, quiet, std::nullopt);
    const MarketState baseline = calibration.execute().market;
    std::array<EventState, kStocks> states{};
    std::array<double, kStocks> s{};
    for (std::size_t j = 0; j < kStocks; ++j) {
        const auto a_int = baseline.window_internal(j);
        std::vector<double> as_real(a_int.begin(), a_int.end());
        s[j] = stddev(as_real);
        states[j] = EventState{s[j], config.events->strength, config.events->probability};
    }
    auto result = run_with_events(config, run_index, states, options);
    result.baseline_demand_std = s;
    return result;
}

BatchResult run_many(const ModelConfig& config, unsigned threads) {
    validate(config);
    BatchResult batch;
    batch.runs.resize(static_cast<std::size_t>(config.n_runs));
    parallel_for(batch.runs.size(), threads, [&](std::size_t k) {
        try {
            batch.runs[k] = run(config, static_cast<int>(k));
        } catch (const Error& e) {
            throw RunError(static_cast<int>(k), e);
        }
    });
    double sum = 0.0;
    for (const auto& r : batch.runs) sum += r.correlation;
    batch.mean_correlation = sum / static_cast<double>(batch.runs.size());
    return batch;
}

}  // namespace cmg
