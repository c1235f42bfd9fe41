#include "cmg/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cmg/parallel.hpp"

namespace cmg {

const char* to_string(Regime regime) noexcept {
    switch (regime) {
        case Regime::I: return "I";
        case Regime::II: return "II";
        case Regime::III: return "III";
        case Regime::IV: return "IV";
    }
    return "?";
}

const char* to_string(Trend trend) noexcept {
    switch (trend) {
        case Trend::None: return "none";
        case Trend::Increasing: return "increasing";
        case Trend::Decreasing: return "decreasing";
    }
    return "?";
}

const char* to_string(CorrelationSign sign) noexcept {
    switch (sign) {
        case CorrelationSign::Positive: return "positive";
        case CorrelationSign::Negative: return "negative";
        case CorrelationSign::Weak: return "weak";
    }
    return "?";
}

std::string to_string(Quadrant q) {
    std::string s = "(";
    s += q.first_up ? '+' : '-';
    s += ',';
    s += q.second_up ? '+' : '-';
    s += ')';
    return s;
}

namespace {

// Signs of (b1, b2) per regime.
constexpr std::array<std::pair<int, int>, 4> kRegimeSigns{{{1, 1}, {-1, -1}, {1, -1}, {-1, 1}}};

std::pair<int, int> regime_signs(Regime r) noexcept { return kRegimeSigns[static_cast<std::size_t>(r)]; }

bool open_unit(double v, int sign) noexcept { return sign > 0 ? (v > 0.0 && v < 1.0) : (v < 0.0 && v > -1.0); }

}  // namespace

std::optional<Regime> regime_of(std::pair<double, double> b) noexcept {
    for (Regime r : kRegimes) {
        const auto [s1, s2] = regime_signs(r);
        if (open_unit(b.first, s1) && open_unit(b.second, s2)) return r;
    }
    return std::nullopt;
}

double Bound::value(std::pair<double, double> b, double other) const noexcept {
    const double bk = coefficient == 1 ? b.first : b.second;
    return kind == Kind::ScaledOther ? -bk * other : -other / bk;
}

std::string Bound::describe(const char* other_name) const {
    const std::string bk = "b" + std::to_string(coefficient);
    if (kind == Kind::ScaledOther) return "-" + bk + "*" + other_name;
    return std::string("-") + other_name + "/" + bk;
}

bool Condition::holds(std::pair<double, double> b, std::pair<double, double> dr) const noexcept {
    const double x = variable == 1 ? dr.first : dr.second;
    const double other = variable == 1 ? dr.second : dr.first;
    if (lower && !(x > lower->value(b, other))) return false;
    if (upper && !(x < upper->value(b, other))) return false;
    return true;
}

std::string Condition::describe() const {
    const char* self = variable == 1 ? "dr1" : "dr2";
    const char* other = variable == 1 ? "dr2" : "dr1";
    std::string s;
    if (lower) s += lower->describe(other) + " < ";
    s += self;
    if (upper) s += " < " + upper->describe(other);
    return s;
}

bool FeasibilityVerdict::admits(std::pair<double, double> b, std::pair<double, double> dr) const noexcept {
    if (!feasible) return false;
    if (deterministic || !condition) return true;
    return condition->holds(b, dr);
}

std::string FeasibilityVerdict::describe() const {
    if (!feasible) return "infeasible";
    if (deterministic) return "always";
    std::string s = condition ? condition->describe() : "always";
    if (trend != Trend::None) {
        s += "; ";
        s += to_string(trend);
        s += driver == Driver::B1 ? " as |b1|->1" : driver == Driver::B2 ? " as |b2|->1" : " as |b1|,|b2|->1";
    }
    return s;
}

namespace {

using K = Bound::Kind;
constexpr Bound nb1{K::ScaledOther, 1};
constexpr Bound nb2{K::ScaledOther, 2};
constexpr Bound inv1{K::InverseOther, 1};
constexpr Bound inv2{K::InverseOther, 2};

constexpr Quadrant PP{true, true};
constexpr Quadrant PM{true, false};
constexpr Quadrant MP{false, true};
constexpr Quadrant MM{false, false};

struct Row {
    Regime regime;
    Quadrant input;
    Quadrant output;
    bool deterministic;
    int variable;
    std::optional<Bound> lower;
    std::optional<Bound> upper;
    Trend trend;
    Driver driver;
};

constexpr Trend Inc = Trend::Increasing;
constexpr Trend Dec = Trend::Decreasing;
constexpr Trend Flat = Trend::None;
constexpr std::nullopt_t none = std::nullopt;

// Every feasible (regime, input, output) triple; anything absent is infeasible.
// dr1 = x, dr2 = y, a = (1, 1):  dr1^e = x + b1 y,  dr2^e = y + b2 x.
const std::vector<Row>& table() {
    static const std::vector<Row> rows{
        // I: both positive.
        {Regime::I, PP, PP, true, 1, none, none, Flat, Driver::None},
        {Regime::I, MM, MM, true, 1, none, none, Flat, Driver::None},
        {Regime::I, PM, PP, false, 1, inv2, none, Inc, Driver::B2},
        {Regime::I, PM, PM, false, 1, nb1, inv2, Dec, Driver::Both},
        {Regime::I, PM, MM, false, 1, none, nb1, Inc, Driver::B1},
        {Regime::I, MP, PP, false, 1, nb1, none, Inc, Driver::B1},
        {Regime::I, MP, MP, false, 1, inv2, nb1, Dec, Driver::Both},
        {Regime::I, MP, MM, false, 1, none, inv2, Inc, Driver::B2},
        // II: both negative.
        {Regime::II, PM, PM, true, 1, none, none, Flat, Driver::None},
        {Regime::II, MP, MP, true, 1, none, none, Flat, Driver::None},
        {Regime::II, PP, PP, false, 1, nb1, inv2, Dec, Driver::Both},
        {Regime::II, PP, PM, false, 1, inv2, none, Inc, Driver::B2},
        {Regime::II, PP, MP, false, 1, none, nb1, Inc, Driver::B1},
        {Regime::II, MM, MM, false, 1, inv2, nb1, Dec, Driver::Both},
        {Regime::II, MM, PM, false, 1, nb1, none, Inc, Driver::B1},
        {Regime::II, MM, MP, false, 1, none, inv2, Inc, Driver::B2},
        // III: b1 positive, b2 negative.
        {Regime::III, PP, PP, false, 2, nb2, none, Dec, Driver::B2},
        {Regime::III, PP, PM, false, 2, none, nb2, Inc, Driver::B2},
        {Regime::III, MM, MP, false, 2, nb2, none, Inc, Driver::B2},
        {Regime::III, MM, MM, false, 2, none, nb2, Dec, Driver::B2},
        {Regime::III, PM, PM, false, 2, inv1, none, Dec, Driver::B1},
        {Regime::III, PM, MM, false, 2, none, inv1, Inc, Driver::B1},
        {Regime::III, MP, PP, false, 2, inv1, none, Inc, Driver::B1},
        {Regime::III, MP, MP, false, 2, none, inv1, Dec, Driver::B1},
        // IV: b1 negative, b2 positive.
        {Regime::IV, PP, PP, false, 1, nb1, none, Dec, Driver::B1},
        {Regime::IV, PP, MP, false, 1, none, nb1, Inc, Driver::B1},
        {Regime::IV, MM, PM, false, 1, nb1, none, Inc, Driver::B1},
        {Regime::IV, MM, MM, false, 1, none, nb1, Dec, Driver::B1},
        {Regime::IV, MP, MP, false, 1, inv2, none, Dec, Driver::B2},
        {Regime::IV, MP, MM, false, 1, none, inv2, Inc, Driver::B2},
        {Regime::IV, PM, PP, false, 1, inv2, none, Inc, Driver::B2},
        {Regime::IV, PM, PM, false, 1, none, inv2, Dec, Driver::B2},
    };
    return rows;
}

}  // namespace

FeasibilityVerdict classify(Regime regime, Quadrant input, Quadrant output, std::pair<double, double> a) {
    if (a.first != 1.0 || a.second != 1.0) {
        throw Error("analytic", "classify", "sign cases are tabulated for a = (1, 1) only");
    }
    for (const Row& row : table()) {
        if (row.regime != regime || row.input != input || row.output != output) continue;
        FeasibilityVerdict v;
        v.feasible = true;
        v.deterministic = row.deterministic;
        if (!row.deterministic) v.condition = Condition{row.variable, row.lower, row.upper};
        v.trend = row.trend;
        v.driver = row.driver;
        return v;
    }
    return {};
}

namespace {

struct SignedBox {
    double sx;
    double sy;
};

// Magnitudes uniform on (0, 1].
std::pair<double, double> draw(Rng& rng, SignedBox box) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double u = 1.0 - unit(rng);
    const double v = 1.0 - unit(rng);
    return {box.sx * u, box.sy * v};
}

SignedBox box_of(Quadrant q) noexcept { return {q.first_up ? 1.0 : -1.0, q.second_up ? 1.0 : -1.0}; }

constexpr std::pair<double, double> kUnitA{1.0, 1.0};

}  // namespace

QuadrantFrequencies brute_force_feasibility(Regime regime, std::pair<double, double> b, Quadrant input,
                                            std::uint64_t n_samples, Rng& rng) {
    if (regime_of(b) != regime) {
        throw Error("analytic", "brute_force_feasibility",
                    "b is not inside regime " + std::string(to_string(regime)));
    }
    std::array<std::uint64_t, 4> counts{};
    const SignedBox box = box_of(input);
    for (std::uint64_t k = 0; k < n_samples; ++k) {
        const auto e = expectation_delta(kUnitA, b, draw(rng, box));
        ++counts[static_cast<std::size_t>(Quadrant::of(e.first, e.second).index())];
    }
    QuadrantFrequencies f{};
    for (std::size_t q = 0; q < 4; ++q) {
        f[q] = n_samples == 0 ? 0.0 : static_cast<double>(counts[q]) / static_cast<double>(n_samples);
    }
    return f;
}

CorrelationSign predict_correlation_sign(std::pair<double, double> b) noexcept {
    if (std::abs(b.first) < kWeakCoupling || std::abs(b.second) < kWeakCoupling) return CorrelationSign::Weak;
    if (b.first > 0.0 && b.second > 0.0) return CorrelationSign::Positive;
    if (b.first < 0.0 && b.second < 0.0) return CorrelationSign::Negative;
    return CorrelationSign::Weak;
}

std::vector<std::pair<double, double>> feasibility_grid(Regime regime) {
    const auto [s1, s2] = regime_signs(regime);
    std::vector<std::pair<double, double>> grid;
    for (double m1 : {0.1, 0.5, 0.9}) {
        for (double m2 : {0.1, 0.5, 0.9}) grid.emplace_back(s1 * m1, s2 * m2);
    }
    return grid;
}

std::vector<std::pair<double, double>> trend_grid(Regime regime, Driver driver) {
    if (driver == Driver::None) return {};
    const auto [s1, s2] = regime_signs(regime);
    std::vector<std::pair<double, double>> grid;
    for (double m : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        const double m1 = driver == Driver::B2 ? 0.5 : m;
        const double m2 = driver == Driver::B1 ? 0.5 : m;
        grid.emplace_back(s1 * m1, s2 * m2);
    }
    return grid;
}

bool AppendixReport::passed() const noexcept { return failures() == 0; }

std::size_t AppendixReport::failures() const noexcept {
    return static_cast<std::size_t>(std::count_if(cells.begin(), cells.end(), [](const auto& c) { return !c.passed(); }));
}

namespace {

struct PointTally {
    std::array<std::uint64_t, 4> counts{};
    std::array<std::uint64_t, 4> mismatches{};
};

PointTally tally(std::pair<double, double> b, const std::vector<std::pair<double, double>>& samples,
                 const std::array<FeasibilityVerdict, 4>& verdicts) {
    PointTally t;
    for (const auto& dr : samples) {
        const auto e = expectation_delta(kUnitA, b, dr);
        const int observed = Quadrant::of(e.first, e.second).index();
        ++t.counts[static_cast<std::size_t>(observed)];
        for (int q = 0; q < 4; ++q) {
            if (verdicts[static_cast<std::size_t>(q)].admits(b, dr) != (q == observed)) {
                ++t.mismatches[static_cast<std::size_t>(q)];
            }
        }
    }
    return t;
}

double frequency(const PointTally& t, int q, std::size_t n) {
    return static_cast<double>(t.counts[static_cast<std::size_t>(q)]) / static_cast<double>(n);
}

bool monotone(const std::vector<double>& f, Trend trend) {
    for (std::size_t k = 1; k < f.size(); ++k) {
        if (trend == Trend::Increasing && !(f[k] > f[k - 1])) return false;
        if (trend == Trend::Decreasing && !(f[k] < f[k - 1])) return false;
    }
    return true;
}

}  // namespace

AppendixReport verify_appendix(std::uint64_t n_samples, std::uint64_t seed, unsigned threads) {
    if (n_samples == 0) throw Error("analytic", "verify_appendix", "n_samples must be positive");
    AppendixReport report;
    report.samples_per_point = n_samples;
    report.seed = seed;
    report.cells.resize(64);

    // One task per (regime, input); each owns its 4 output cells.
    parallel_for(16, threads, [&](std::size_t task) {
        const Regime regime = kRegimes[task / 4];
        const Quadrant input = kQuadrants[task % 4];
        Rng rng = make_rng(seed, task, Stream::AppendixOracle);
        std::vector<std::pair<double, double>> samples(n_samples);
        for (auto& s : samples) s = draw(rng, box_of(input));

        std::array<FeasibilityVerdict, 4> verdicts;
        for (int q = 0; q < 4; ++q) verdicts[static_cast<std::size_t>(q)] = classify(regime, input, Quadrant::from_index(q));

        std::array<AppendixCell*, 4> cells{};
        for (int q = 0; q < 4; ++q) {
            AppendixCell& cell = report.cells[task * 4 + static_cast<std::size_t>(q)];
            cell.regime = regime;
            cell.input = input;
            cell.output = Quadrant::from_index(q);
            cell.verdict = verdicts[static_cast<std::size_t>(q)];
            cell.min_frequency = 1.0;
            cell.max_frequency = 0.0;
            cells[static_cast<std::size_t>(q)] = &cell;
        }

        for (const auto& b : feasibility_grid(regime)) {
            const PointTally t = tally(b, samples, verdicts);
            for (int q = 0; q < 4; ++q) {
                AppendixCell& cell = *cells[static_cast<std::size_t>(q)];
                const double f = frequency(t, q, n_samples);
                cell.min_frequency = std::min(cell.min_frequency, f);
                cell.max_frequency = std::max(cell.max_frequency, f);
                if ((f > 0.0) != cell.verdict.feasible) cell.feasibility_agrees = false;
                cell.condition_mismatches += t.mismatches[static_cast<std::size_t>(q)];
            }
        }

        for (int q = 0; q < 4; ++q) {
            AppendixCell& cell = *cells[static_cast<std::size_t>(q)];
            if (cell.verdict.trend == Trend::None) continue;
            for (const auto& b : trend_grid(regime, cell.verdict.driver)) {
                const PointTally t = tally(b, samples, verdicts);
                cell.trend_frequencies.push_back(frequency(t, q, n_samples));
                cell.condition_mismatches += t.mismatches[static_cast<std::size_t>(q)];
            }
            cell.trend_monotone = monotone(cell.trend_frequencies, cell.verdict.trend);
        }
    });
    return report;
}

}  // namespace cmg
