#include "cmg/sweep.hpp"

#include <chrono>
#include <cmath>
#include <numeric>

#include "cmg/config_io.hpp"
#include "cmg/parallel.hpp"
#include "cmg/stats.hpp"

namespace cmg {

double snap(double value) noexcept {
    const double snapped = std::round(value * 1e9) / 1e9;
    return snapped == 0.0 ? 0.0 : snapped;  // no -0
}

Axis Axis::range(std::string name, double start, double stop, double step) {
    if (!(step > 0.0) || !std::isfinite(step) || !std::isfinite(start) || !std::isfinite(stop) || stop < start) {
        throw Error("sweep", "axis", name + ": need start <= stop and step > 0");
    }
    Axis axis{std::move(name), {}};
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    axis.points.reserve(count);
    for (std::size_t k = 0; k < count; ++k) axis.points.push_back(snap(start + static_cast<double>(k) * step));
    return axis;
}

Axis Axis::list(std::string name, std::vector<double> values) {
    if (values.empty()) throw Error("sweep", "axis", name + ": empty value list");
    for (double& v : values) v = snap(v);
    return Axis{std::move(name), std::move(values)};
}

Axis default_b_axis(std::string name) { return Axis::range(std::move(name), -1.0, 1.0, 0.1); }
Axis default_c_axis(std::string name) { return Axis::range(std::move(name), -1.0, 1.0, 0.2); }
Axis default_delta_axis(std::string name) { return Axis::range(std::move(name), 1.0, 5.0, 0.5); }

const SweepCell& SweepGrid::at(double x, double y) const {
    const double sx = snap(x);
    const double sy = snap(y);
    for (const auto& cell : cells) {
        if (cell.x == sx && cell.y == sy) return cell;
    }
    throw Error("sweep", "at", "no cell at (" + std::to_string(x) + ", " + std::to_string(y) + ")");
}

SweepError::SweepError(double x_, double y_, const Error& cause)
    : Error(cause.module(), cause.operation(),
            "cell (" + std::to_string(x_) + ", " + std::to_string(y_) + "): " + cause.what()),
      x(x_),
      y(y_) {}

namespace {

std::uint64_t fold(std::uint64_t h, double v) noexcept {
    return mix64(h ^ static_cast<std::uint64_t>(std::llround(snap(v) * 1e9)));
}

}  // namespace

std::uint64_t cell_seed(std::uint64_t master_seed, const CouplingSpec& spec) noexcept {
    std::uint64_t h = mix64(master_seed);
    if (const auto* hom = std::get_if<Homogeneous>(&spec)) {
        h = mix64(h ^ 1);
        h = fold(h, hom->b1);
        return fold(h, hom->b2);
    }
    const auto& u = std::get<Uniform>(spec);
    h = mix64(h ^ 2);
    h = fold(h, u.c1);
    h = fold(h, u.delta1);
    h = fold(h, u.c2);
    return fold(h, u.delta2);
}

SweepGrid sweep_custom(const ModelConfig& base, const SweepSpec& spec,
                       const std::function<ModelConfig(double, double)>& make_cell) {
    validate(base);
    const auto started = std::chrono::steady_clock::now();
    SweepGrid grid;
    grid.x_axis = spec.x;
    grid.y_axis = spec.y;
    grid.layout = spec.layout;
    grid.base = base;

    if (spec.layout == Layout::Diagonal) {
        if (spec.x.size() != spec.y.size()) throw Error("sweep", "layout", "diagonal layout needs equal-length axes");
        for (std::size_t k = 0; k < spec.x.size(); ++k) {
            SweepCell cell;
            cell.x = spec.x.points[k];
            cell.y = spec.y.points[k];
            grid.cells.push_back(std::move(cell));
        }
    } else {
        for (double x : spec.x.points) {
            for (double y : spec.y.points) {
                SweepCell cell;
                cell.x = x;
                cell.y = y;
                grid.cells.push_back(std::move(cell));
            }
        }
    }

    std::vector<ModelConfig> configs;
    configs.reserve(grid.cells.size());
    for (auto& cell : grid.cells) {
        ModelConfig c = make_cell(cell.x, cell.y);
        c.master_seed = cell_seed(base.master_seed, c.b_spec);
        validate(c);
        cell.seed = c.master_seed;
        cell.rhos.assign(static_cast<std::size_t>(c.n_runs), 0.0);
        if (spec.collect_samples) cell.samples.resize(static_cast<std::size_t>(c.n_runs));
        configs.push_back(std::move(c));
    }

    std::vector<std::size_t> order(grid.cells.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (spec.cell_order) {
        if (spec.cell_order->size() != order.size()) throw Error("sweep", "cell_order", "permutation size mismatch");
        order = *spec.cell_order;
    }
    // Flat (cell, run) task list so a few cells still fill every worker.
    std::vector<std::pair<std::size_t, std::size_t>> tasks;
    for (std::size_t c : order) {
        for (std::size_t r = 0; r < grid.cells[c].rhos.size(); ++r) tasks.emplace_back(c, r);
    }

    parallel_for(tasks.size(), spec.threads, [&](std::size_t k) {
        const auto [c, r] = tasks[k];
        SweepCell& cell = grid.cells[c];
        try {
            RunResult result = run(configs[c], static_cast<int>(r));
            cell.rhos[r] = result.correlation;
            if (spec.collect_samples) cell.samples[r] = std::move(result.samples);
        } catch (const Error& e) {
            throw SweepError(cell.x, cell.y, RunError(static_cast<int>(r), e));
        }
    });

    for (auto& cell : grid.cells) {
        cell.mean_rho = mean(cell.rhos);
        cell.std_rho = stddev(cell.rhos);
    }
    grid.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return grid;
}

SweepGrid sweep_homogeneous(const ModelConfig& base, const SweepSpec& spec) {
    auto grid = sweep_custom(base, spec, [&](double b1, double b2) {
        ModelConfig c = base;
        c.b_spec = Homogeneous{b1, b2};
        return c;
    });
    grid.label = "homogeneous";
    return grid;
}

SweepGrid sweep_centers(const ModelConfig& base, std::pair<double, double> delta, const SweepSpec& spec) {
    auto grid = sweep_custom(base, spec, [&](double c1, double c2) {
        ModelConfig c = base;
        c.b_spec = Uniform{c1, delta.first, c2, delta.second};
        return c;
    });
    grid.label = "centers";
    return grid;
}

SweepGrid sweep_ranges(const ModelConfig& base, std::pair<double, double> center, const SweepSpec& spec) {
    auto grid = sweep_custom(base, spec, [&](double d1, double d2) {
        ModelConfig c = base;
        c.b_spec = Uniform{center.first, d1, center.second, d2};
        return c;
    });
    grid.label = "ranges";
    return grid;
}

SweepGrid sweep_holding(const ModelConfig& base, const SweepSpec& spec) {
    ModelConfig holding = base;
    holding.allow_hold = true;
    auto grid = sweep_homogeneous(holding, spec);
    grid.label = "holding";
    return grid;
}

std::vector<SweepGrid> sweep_events(const ModelConfig& base, const SweepSpec& spec, const std::vector<double>& k_values,
                                    double probability) {
    std::vector<SweepGrid> grids;
    ModelConfig quiet = base;
    quiet.events.reset();
    grids.push_back(sweep_homogeneous(quiet, spec));
    grids.back().label = "k=0";
    for (double k : k_values) {
        ModelConfig noisy = base;
        noisy.events = EventModel{probability, k};
        grids.push_back(sweep_homogeneous(noisy, spec));
        grids.back().label = "k=" + format_double(k);
    }
    return grids;
}

SampleSeries pooled_samples(const SweepGrid& grid, std::size_t stock) {
    SampleSeries pooled;
    for (const auto& cell : grid.cells) {
        for (const auto& run : cell.samples) {
            const auto& s = run[stock];
            pooled.expected.insert(pooled.expected.end(), s.expected.begin(), s.expected.end());
            pooled.realized.insert(pooled.realized.end(), s.realized.begin(), s.realized.end());
        }
    }
    return pooled;
}

}  // namespace cmg
