#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cmg/core.hpp"

namespace cmg {

/// Sign regimes of the coupling pair, all on open intervals:
/// I: b1, b2 > 0.  II: b1, b2 < 0.  III: b1 > 0 > b2.  IV: b1 < 0 < b2.
enum class Regime : std::uint8_t { I, II, III, IV };

inline constexpr std::array<Regime, 4> kRegimes{Regime::I, Regime::II, Regime::III, Regime::IV};

const char* to_string(Regime regime) noexcept;

/// Regime containing b, or nullopt when a component is not inside (-1, 0) or (0, 1).
std::optional<Regime> regime_of(std::pair<double, double> b) noexcept;

/// Signs of a pair of changes. Zero counts as negative.
struct Quadrant {
    bool first_up = true;
    bool second_up = true;

    /// (+,+)=0, (+,-)=1, (-,+)=2, (-,-)=3.
    constexpr int index() const noexcept { return (first_up ? 0 : 2) + (second_up ? 0 : 1); }
    static constexpr Quadrant from_index(int k) noexcept { return {k < 2, k % 2 == 0}; }
    static Quadrant of(double first, double second) noexcept { return {first > 0.0, second > 0.0}; }
    /// Stock relabeling: swap components.
    constexpr Quadrant swapped() const noexcept { return {second_up, first_up}; }
    bool operator==(const Quadrant&) const = default;
};

inline constexpr std::array<Quadrant, 4> kQuadrants{Quadrant{true, true}, Quadrant{true, false},
                                                     Quadrant{false, true}, Quadrant{false, false}};

std::string to_string(Quadrant q);

/// (a1 dr1 + b1 dr2, a2 dr2 + b2 dr1).
constexpr std::pair<double, double> expectation_delta(std::pair<double, double> a, std::pair<double, double> b,
                                                      std::pair<double, double> dr) noexcept {
    return {a.first * dr.first + b.first * dr.second, a.second * dr.second + b.second * dr.first};
}

/// One endpoint of an interval on dr_j, in terms of the other change:
/// ScaledOther is -b_k * other, InverseOther is -other / b_k.
struct Bound {
    enum class Kind : std::uint8_t { ScaledOther, InverseOther };
    Kind kind;
    int coefficient;  // 1 or 2

    double value(std::pair<double, double> b, double other) const noexcept;
    std::string describe(const char* other_name) const;
    bool operator==(const Bound&) const = default;
};

/// lower < dr_variable < upper; a missing side is unbounded.
struct Condition {
    int variable = 1;  // 1 constrains dr1 given dr2, 2 the reverse
    std::optional<Bound> lower;
    std::optional<Bound> upper;

    bool holds(std::pair<double, double> b, std::pair<double, double> dr) const noexcept;
    std::string describe() const;
    bool operator==(const Condition&) const = default;
};

enum class Trend : std::uint8_t { None, Increasing, Decreasing };

const char* to_string(Trend trend) noexcept;

/// Which coefficient moving toward its regime limit (|b| -> 1) drives the trend.
enum class Driver : std::uint8_t { None, B1, B2, Both };

struct FeasibilityVerdict {
    bool feasible = false;
    /// Feasible for every input in the quadrant.
    bool deterministic = false;
    std::optional<Condition> condition;
    Trend trend = Trend::None;
    Driver driver = Driver::None;

    /// Whether a concrete (b, dr) lands in this output quadrant according to the verdict.
    bool admits(std::pair<double, double> b, std::pair<double, double> dr) const noexcept;
    std::string describe() const;
};

/// Symbolic verdict for a = (1, 1). Throws Error("analytic", "classify") for other a.
FeasibilityVerdict classify(Regime regime, Quadrant input, Quadrant output,
                            std::pair<double, double> a = {1.0, 1.0});

/// Output-quadrant frequencies, indexed by Quadrant::index().
using QuadrantFrequencies = std::array<double, 4>;

/// Samples dr uniformly with magnitudes in (0, 1] and signs from `input`,
/// applies expectation_delta with a = (1, 1) and tallies output quadrants.
/// Throws Error("analytic", "brute_force_feasibility") if b is outside the regime.
QuadrantFrequencies brute_force_feasibility(Regime regime, std::pair<double, double> b, Quadrant input,
                                            std::uint64_t n_samples, Rng& rng);

enum class CorrelationSign : std::uint8_t { Positive, Negative, Weak };

const char* to_string(CorrelationSign sign) noexcept;

/// Components below 0.1 in magnitude count as zero.
inline constexpr double kWeakCoupling = 0.1;

CorrelationSign predict_correlation_sign(std::pair<double, double> b) noexcept;

// ---------------------------------------------------------------------------
// Oracle suite

struct AppendixCell {
    Regime regime;
    Quadrant input;
    Quadrant output;
    FeasibilityVerdict verdict;
    /// Smallest and largest empirical frequency over the feasibility grid.
    double min_frequency = 0.0;
    double max_frequency = 0.0;
    bool feasibility_agrees = true;
    /// Samples where the verdict's admits() disagreed with the observed quadrant.
    std::uint64_t condition_mismatches = 0;
    /// Frequencies along the 5-point trend grid (empty without a trend).
    std::vector<double> trend_frequencies;
    bool trend_monotone = true;

    bool passed() const noexcept { return feasibility_agrees && condition_mismatches == 0 && trend_monotone; }
};

struct AppendixReport {
    std::vector<AppendixCell> cells;  // 4 regimes x 4 inputs x 4 outputs
    std::uint64_t samples_per_point = 0;
    std::uint64_t seed = 0;

    bool passed() const noexcept;
    std::size_t failures() const noexcept;
};

/// Couplings at {0.1, 0.5, 0.9} magnitudes with the regime's signs (9 points).
std::vector<std::pair<double, double>> feasibility_grid(Regime regime);

/// Five points moving the driver toward |b| = 1; the other coefficient sits at 0.5 magnitude.
std::vector<std::pair<double, double>> trend_grid(Regime regime, Driver driver);

/// Runs every cell against the brute-force sampler. Samples are shared across
/// the b points of one (regime, input) pair.
AppendixReport verify_appendix(std::uint64_t n_samples, std::uint64_t seed, unsigned threads = 0);

}  // namespace cmg
