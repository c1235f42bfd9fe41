#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cmg/core.hpp"
#include "cmg/engine.hpp"

namespace cmg {

/// One grid axis: either start..stop by step (both ends inclusive) or an
/// explicit list. Values are snapped to 1e-9 so 0.1 steps land on decimals.
struct Axis {
    std::string name;
    std::vector<double> points;

    static Axis range(std::string name, double start, double stop, double step);
    static Axis list(std::string name, std::vector<double> values);

    std::size_t size() const noexcept { return points.size(); }
};

double snap(double value) noexcept;

enum class Layout : std::uint8_t {
    Product,   // every (x, y) pair
    Diagonal,  // x[k] paired with y[k]; axes must have equal length
};

struct SweepSpec {
    Axis x;
    Axis y;
    Layout layout = Layout::Product;
    /// Keep per-run regression samples in every cell.
    bool collect_samples = false;
    unsigned threads = 0;
    /// Optional permutation of cell indices for execution; results do not depend on it.
    std::optional<std::vector<std::size_t>> cell_order;
};

struct SweepCell {
    double x = 0.0;
    double y = 0.0;
    std::vector<double> rhos;  // per run, in run order
    double mean_rho = 0.0;
    double std_rho = 0.0;      // sample std over runs; 0 for a single run
    std::uint64_t seed = 0;    // master seed the cell's runs derive from
    /// Per run, per stock; empty unless collect_samples.
    std::vector<std::array<SampleSeries, kStocks>> samples;
};

struct SweepGrid {
    Axis x_axis;
    Axis y_axis;
    Layout layout = Layout::Product;
    std::vector<SweepCell> cells;  // Product: row-major with x outer
    ModelConfig base;
    std::string label;
    double wall_seconds = 0.0;

    const SweepCell& at(double x, double y) const;
};

class SweepError : public Error {
public:
    SweepError(double x, double y, const Error& cause);
    double x;
    double y;
};

/// Seed for every run of a cell: a function of the master seed and the
/// coupling specification only, so equal configurations share runs whatever
/// experiment or position produced them.
std::uint64_t cell_seed(std::uint64_t master_seed, const CouplingSpec& spec) noexcept;

/// Cell (x, y) runs make_cell(x, y) with master_seed replaced by
/// cell_seed(base.master_seed, b_spec). All (cell, run) pairs share one pool.
SweepGrid sweep_custom(const ModelConfig& base, const SweepSpec& spec,
                       const std::function<ModelConfig(double, double)>& make_cell);

/// Axes are b1 and b2.
SweepGrid sweep_homogeneous(const ModelConfig& base, const SweepSpec& spec);

/// Axes are c1 and c2 with fixed half-ranges.
SweepGrid sweep_centers(const ModelConfig& base, std::pair<double, double> delta, const SweepSpec& spec);

/// Axes are delta1 and delta2 with fixed centers.
SweepGrid sweep_ranges(const ModelConfig& base, std::pair<double, double> center, const SweepSpec& spec);

/// Homogeneous grid with holding enabled; seeds match sweep_homogeneous.
SweepGrid sweep_holding(const ModelConfig& base, const SweepSpec& spec);

/// Element 0 is the event-free baseline; one grid per k follows, all on the
/// same seeds as the baseline.
std::vector<SweepGrid> sweep_events(const ModelConfig& base, const SweepSpec& spec, const std::vector<double>& k_values,
                                    double probability = kNewsEventProbability);

/// Default axes: b in [-1, 1] by 0.1, c in [-1, 1] by 0.2, delta in [1, 5] by 0.5.
Axis default_b_axis(std::string name);
Axis default_c_axis(std::string name);
Axis default_delta_axis(std::string name);

/// Pools the samples of every run of every cell for one stock.
SampleSeries pooled_samples(const SweepGrid& grid, std::size_t stock);

}  // namespace cmg
