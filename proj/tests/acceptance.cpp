// Acceptance checks at desk scale. One PASS/FAIL line per criterion; the exit
// code is nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "cmg/analytic.hpp"
#include "cmg/engine.hpp"
#include "cmg/stats.hpp"
#include "cmg/sweep.hpp"
#include "reference_engine.hpp"

using namespace cmg;

namespace {

// Initial price for every acceptance run. At the default 2000 a sizeable share
// of runs reaches a non-positive price; see the robustness line at the end.
constexpr double kAcceptanceP0 = 1e6;

// Criterion 1 and 7 thresholds.
constexpr double kStrongRho = 0.15;
constexpr double kZeroRho = 0.1;
constexpr double kMixedRho = 0.15;
constexpr int kGridRuns = 20;
// Criterion 2.
constexpr int kMonotoneRuns = 50;
// Criterion 3.
constexpr double kPooledBetaLow = 0.57;
constexpr double kPooledBetaHigh = 0.87;
constexpr double kPooledR2Low = 0.6;
constexpr double kPooledR2High = 0.9;
// Criterion 4.
constexpr int kHeteroRuns = 20;
constexpr double kCenteredBetaLow = 0.95;
constexpr double kCenteredBetaHigh = 1.05;
constexpr double kCenteredR2 = 0.97;
// Criterion 5.
constexpr double kCenterSpearman = 0.9;
// Criterion 6.
constexpr double kRangeRho = 0.1;
// Criterion 7.
constexpr double kHoldingSlack = 0.05;
// Criterion 8.
constexpr int kEventRuns = 20;
// Criterion 9.
constexpr std::uint64_t kAppendixSamples = 1000000;
constexpr std::uint64_t kAppendixSeed = 20190601;
// Criterion 10.
constexpr double kReconstructionTolerance = 1e-9;
// Criterion 11.
constexpr int kAr1Runs = 50;

int failures = 0;

void report(int id, const char* name, bool pass, const std::string& detail) {
    std::printf("[%s] %2d %-28s %s\n", pass ? "PASS" : "FAIL", id, name, detail.c_str());
    std::fflush(stdout);
    failures += pass ? 0 : 1;
}

std::string fmt(const char* pattern, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, pattern, a);
    return buf;
}

ModelConfig base_config() {
    ModelConfig c;
    c.initial_price = kAcceptanceP0;
    return c;
}

SweepSpec axes(std::vector<double> x, std::vector<double> y, Layout layout = Layout::Product) {
    SweepSpec s;
    s.x = Axis::list("x", std::move(x));
    s.y = Axis::list("y", std::move(y));
    s.layout = layout;
    return s;
}

struct SignCheck {
    bool pass = true;
    std::string detail;
};

SignCheck sign_structure(const SweepGrid& g) {
    SignCheck out;
    const double pp = g.at(0.9, 0.9).mean_rho;
    const double mm = g.at(-0.9, -0.9).mean_rho;
    const double zz = g.at(0.0, 0.0).mean_rho;
    const double pm = g.at(0.9, -0.9).mean_rho;
    const double mp = g.at(-0.9, 0.9).mean_rho;
    out.pass = pp > kStrongRho && mm < -kStrongRho && std::abs(zz) < kZeroRho && std::abs(pm) < kMixedRho &&
               std::abs(mp) < kMixedRho;
    char buf[256];
    std::snprintf(buf, sizeof buf, "(.9,.9)=%+.3f (-.9,-.9)=%+.3f (0,0)=%+.3f (.9,-.9)=%+.3f (-.9,.9)=%+.3f", pp, mm,
                  zz, pm, mp);
    out.detail = buf;
    return out;
}

bool same_market(const MarketState& x, const MarketState& y) {
    for (std::size_t j = 0; j < kStocks; ++j) {
        const auto& a = x.stock(j);
        const auto& b = y.stock(j);
        if (a.price != b.price || a.returns != b.returns || a.internal != b.internal) return false;
    }
    return true;
}

void criteria_1_3(SweepGrid& grid) {
    ModelConfig base = base_config();
    base.n_runs = kGridRuns;
    SweepSpec spec = axes({-0.9, 0.0, 0.9}, {-0.9, 0.0, 0.9});
    spec.collect_samples = true;
    grid = sweep_homogeneous(base, spec);
    const SignCheck s = sign_structure(grid);
    report(1, "sign structure", s.pass, s.detail);

    ModelConfig diag = base_config();
    diag.n_runs = kMonotoneRuns;
    const std::vector<double> b{0.1, 0.5, 0.9};
    const SweepGrid g = sweep_homogeneous(diag, axes(b, b, Layout::Diagonal));
    std::vector<double> means;
    for (const auto& cell : g.cells) means.push_back(cell.mean_rho);
    const double rank = spearman(b, means);
    char buf[160];
    std::snprintf(buf, sizeof buf, "b=.1 %+.3f  b=.5 %+.3f  b=.9 %+.3f  spearman %.2f", means[0], means[1], means[2],
                  rank);
    report(2, "strength monotonicity", rank == 1.0, buf);

    bool pass = true;
    std::string detail;
    for (std::size_t j = 0; j < kStocks; ++j) {
        const SampleSeries pooled = pooled_samples(grid, j);
        const auto r = ols(pooled.expected, pooled.realized);
        pass = pass && r.beta1 >= kPooledBetaLow && r.beta1 <= kPooledBetaHigh && r.r_squared >= kPooledR2Low &&
               r.r_squared <= kPooledR2High;
        char line[96];
        std::snprintf(line, sizeof line, "stock%zu beta1 %.4f R2 %.4f n %zu  ", j + 1, r.beta1, r.r_squared, r.n);
        detail += line;
    }
    report(3, "pooled regression", pass, detail);
}

void criterion_4() {
    ModelConfig c = base_config();
    c.b_spec = Uniform{0.0, 1.0, 0.0, 1.0};
    c.n_runs = kHeteroRuns;
    const BatchResult batch = run_many(c);
    bool pass = true;
    std::string detail;
    for (std::size_t j = 0; j < kStocks; ++j) {
        SampleSeries pooled;
        for (const auto& r : batch.runs) {
            pooled.expected.insert(pooled.expected.end(), r.samples[j].expected.begin(), r.samples[j].expected.end());
            pooled.realized.insert(pooled.realized.end(), r.samples[j].realized.begin(), r.samples[j].realized.end());
        }
        const auto r = ols(pooled.expected, pooled.realized);
        pass = pass && r.beta1 >= kCenteredBetaLow && r.beta1 <= kCenteredBetaHigh && r.r_squared > kCenteredR2;
        char line[96];
        std::snprintf(line, sizeof line, "stock%zu beta1 %.4f R2 %.4f  ", j + 1, r.beta1, r.r_squared);
        detail += line;
    }
    report(4, "centered regression", pass, detail);
}

void criterion_5() {
    ModelConfig c = base_config();
    c.n_runs = kHeteroRuns;
    const std::vector<double> centers{-1.0, -0.5, 0.0, 0.5, 1.0};
    const SweepGrid g = sweep_centers(c, {1.0, 1.0}, axes(centers, centers, Layout::Diagonal));
    std::vector<double> means;
    std::string detail;
    for (const auto& cell : g.cells) {
        means.push_back(cell.mean_rho);
        detail += fmt("%+.3f ", cell.mean_rho);
    }
    const double rank = spearman(centers, means);
    report(5, "center proportionality", rank > kCenterSpearman, detail + fmt(" spearman %.2f", rank));
}

void criterion_6() {
    ModelConfig c = base_config();
    c.n_runs = kHeteroRuns;
    const std::vector<double> widths{1.0, 3.0, 5.0};
    const SweepGrid g = sweep_ranges(c, {0.0, 0.0}, axes(widths, widths, Layout::Diagonal));
    bool pass = true;
    std::string detail;
    for (const auto& cell : g.cells) {
        pass = pass && std::abs(cell.mean_rho) < kRangeRho;
        detail += fmt("delta=%.0f ", cell.x) + fmt("%+.3f  ", cell.mean_rho);
    }
    report(6, "range insensitivity", pass, detail);
}

void criterion_7(const SweepGrid& plain) {
    ModelConfig base = base_config();
    base.n_runs = kGridRuns;
    const SweepGrid hold = sweep_holding(base, axes({-0.9, 0.0, 0.9}, {-0.9, 0.0, 0.9}));
    const double h = hold.at(0.9, 0.9).mean_rho;
    const double p = plain.at(0.9, 0.9).mean_rho;
    const SignCheck s = sign_structure(hold);
    const bool pass = h > 0.0 && h <= p + kHoldingSlack && s.pass;
    report(7, "holding variant", pass, fmt("hold %+.3f", h) + fmt(" vs plain %+.3f; ", p) + s.detail);
}

void criterion_8() {
    ModelConfig base = base_config();
    base.n_runs = kEventRuns;
    const auto grids = sweep_events(base, axes({0.9}, {0.9}), {1.0, 4.0});
    const double k1 = grids[1].cells[0].mean_rho;
    const double k4 = grids[2].cells[0].mean_rho;
    const bool pass = k4 < k1 && k4 > 0.0 && k1 > 0.0;
    report(8, "external events", pass,
           fmt("k=0 %+.3f", grids[0].cells[0].mean_rho) + fmt("  k=1 %+.3f", k1) + fmt("  k=4 %+.3f", k4));
}

void criterion_9() {
    const AppendixReport r = verify_appendix(kAppendixSamples, kAppendixSeed);
    report(9, "appendix oracle", r.passed(),
           std::to_string(r.cells.size()) + " cells, " + std::to_string(r.failures()) + " failures at 1e6 samples");
}

void criterion_10() {
    ModelConfig c = base_config();
    c.b_spec = Homogeneous{0.5, 0.5};
    bool parity = true;
    bool reconstruct = true;
    bool replay = true;
    for (int k = 0; k < 3; ++k) {
        const RunResult r = run(c, k);
        replay = replay && same_market(r.market, run(c, k).market);
        for (std::size_t j = 0; j < kStocks; ++j) {
            const auto& s = r.market.stock(j);
            for (auto a : s.internal) parity = parity && std::abs(a) % 2 == 1;
            double logp = std::log(s.price.front());
            for (std::size_t t = 0; t < s.returns.size(); ++t) {
                logp += s.returns[t];
                reconstruct = reconstruct && std::abs(std::exp(logp) - s.price[t + 1]) / s.price[t + 1] <
                                                 kReconstructionTolerance;
            }
        }
    }
    ModelConfig decoupled = base_config();
    decoupled.b_spec = Homogeneous{0.0, 0.0};
    bool reference = true;
    for (int k = 0; k < 3; ++k) {
        const RunResult r = run(decoupled, k);
        for (std::size_t j = 0; j < kStocks; ++j) {
            const auto ref = cmg::testing::reference_single_asset(decoupled, k, decisions_stream(j));
            const auto demand = r.market.window_internal(j);
            reference = reference && demand.size() == ref.demand.size() &&
                        std::equal(demand.begin(), demand.end(), ref.demand.begin()) &&
                        r.market.stock(j).price == ref.price;
        }
    }
    auto yn = [](bool v) { return v ? "ok" : "broken"; };
    report(10, "structural invariants", parity && reconstruct && replay && reference,
           std::string("parity ") + yn(parity) + ", reconstruction " + yn(reconstruct) + ", replay " + yn(replay) +
               ", single-asset reference " + yn(reference));
}

void criterion_11() {
    ModelConfig c = base_config();
    c.b_spec = Homogeneous{0.5, 0.5};
    c.n_runs = kAr1Runs;
    const BatchResult batch = run_many(c);
    std::string detail;
    bool pass = true;
    for (std::size_t j = 0; j < kStocks; ++j) {
        std::vector<std::vector<double>> series;
        for (const auto& r : batch.runs) {
            const auto w = r.market.window_returns(j);
            series.emplace_back(w.begin(), w.end());
        }
        const auto a = ar1_pooled(series);
        pass = pass && a.phi > 0.0;
        detail += fmt("stock%.0f ", static_cast<double>(j + 1)) + fmt("phi %+.4f  ", a.phi);
    }
    report(11, "AR(1) sanity", pass, detail);
}

void price_robustness() {
    std::string detail;
    for (double p0 : {1000.0, 2000.0, 4000.0}) {
        ModelConfig c;
        c.initial_price = p0;
        c.b_spec = Homogeneous{0.5, 0.5};
        int aborted = 0;
        const int runs = 20;
        for (int k = 0; k < runs; ++k) {
            try {
                run(c, k);
            } catch (const NonPositivePriceError&) {
                ++aborted;
            }
        }
        detail += fmt("P0=%.0f ", p0) + std::to_string(aborted) + "/" + std::to_string(runs) + " aborted  ";
    }
    std::printf("[INFO]    initial price robustness     %s\n", detail.c_str());
}

}  // namespace

int main() {
    const auto start = std::chrono::steady_clock::now();
    SweepGrid grid;
    criteria_1_3(grid);
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7(grid);
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11();
    price_robustness();
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%d of 11 criteria failed (%.0f s)\n", failures, seconds);
    return failures == 0 ? 0 : 1;
}
