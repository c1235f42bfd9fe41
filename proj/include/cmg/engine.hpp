#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "cmg/core.hpp"
#include "cmg/market.hpp"

namespace cmg {

/// Regression samples for one stock: realized return r_j(t) against the
/// population-mean expected return formed from it (the one steering step t+1).
struct SampleSeries {
    std::vector<double> expected;
    std::vector<double> realized;
};

struct RunResult {
    MarketState market;
    double correlation = 0.0;  // Pearson of the two return series over the main window
    std::array<SampleSeries, kStocks> samples;
    /// Std of A_int from the calibration pass; only set when events are on.
    std::optional<std::array<double, kStocks>> baseline_demand_std;
    int run_index = 0;
    std::uint64_t master_seed = 0;
    std::uint64_t config_hash = 0;
};

/// Sub-steps of one main-loop step, in execution order.
enum class Phase : std::uint8_t { Expectation, State, Selection, Decision, Demand, PriceReturn, Scoring };

const char* to_string(Phase phase) noexcept;

struct PhaseEvent {
    Phase phase;
    int step;                     // main-loop step, from 1
    std::size_t returns_visible;  // returns recorded (warm-up included) when the phase ran
};

struct RunOptions {
    /// Stock 1 draws from stock 2's streams and vice versa.
    bool swap_stock_streams = false;
    /// Alphabet for strategy tables and warm-up draws; defaults to the config's.
    std::optional<DecisionSet> strategy_alphabet;
    std::function<void(const PhaseEvent&)> observer;
};

class RunError : public Error {
public:
    RunError(int run_index, const Error& cause);
    int run_index;
};

/// Number of unscored random-decision steps before the main loop.
constexpr int warmup_steps(int memory) noexcept { return memory > 1 ? memory : 1; }

/// One full simulation. When events are configured, a calibration pass with
/// events disabled (same seeds) fixes the baseline demand std first.
RunResult run(const ModelConfig& config, int run_index, const RunOptions& options = {});

/// Single pass with explicit per-stock event states (no calibration).
RunResult run_with_events(const ModelConfig& config, int run_index,
                          const std::optional<std::array<EventState, kStocks>>& events,
                          const RunOptions& options = {});

struct BatchResult {
    std::vector<RunResult> runs;
    double mean_correlation = 0.0;
};

/// config.n_runs independent runs on up to `threads` workers (0 = hardware).
BatchResult run_many(const ModelConfig& config, unsigned threads = 0);

}  // namespace cmg
