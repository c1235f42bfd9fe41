#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <variant>

namespace cmg {

/// Engine used for every stochastic draw. Seeded from derive_seed().
using Rng = std::mt19937_64;

/// Stocks are indexed 0 and 1 internally; user-facing output uses 1 and 2.
inline constexpr std::size_t kStocks = 2;

enum class Decision : std::int8_t { Sell = -1, Hold = 0, Buy = 1 };

constexpr int to_int(Decision d) noexcept { return static_cast<int>(d); }

enum class DecisionSet : std::uint8_t {
    Binary,    // {-1, +1}
    WithHold,  // {-1, 0, +1}
};

enum class SignBit : std::uint8_t { Minus = 0, Plus = 1 };

/// Zero maps to Plus. NaN maps to Minus.
constexpr SignBit sign_bit(double x) noexcept {
    return x >= 0.0 ? SignBit::Plus : SignBit::Minus;
}

constexpr double sgn(double x) noexcept {
    return static_cast<double>((x > 0.0) - (x < 0.0));
}

// ---------------------------------------------------------------------------
// Errors. Every library error names the module and operation that raised it so
// the CLI can report them.

class Error : public std::runtime_error {
public:
    Error(std::string module, std::string operation, const std::string& message)
        : std::runtime_error(message),
          module_(std::move(module)),
          operation_(std::move(operation)) {}

    const std::string& module() const noexcept { return module_; }
    const std::string& operation() const noexcept { return operation_; }

private:
    std::string module_;
    std::string operation_;
};

enum class ConfigErrorCode {
    EvenAgentCount,
    CoefficientOutOfRange,
    NegativeRange,
    ProbabilityOutOfRange,
    NegativeStrength,
    NonPositiveParameter,
    MemoryTooLarge,
    Parse,
};

const char* to_string(ConfigErrorCode code) noexcept;

class ConfigError : public Error {
public:
    ConfigError(ConfigErrorCode code, const std::string& message)
        : Error("core", "validate", std::string(to_string(code)) + ": " + message),
          code_(code) {}
    ConfigErrorCode code() const noexcept { return code_; }

private:
    ConfigErrorCode code_;
};

// ---------------------------------------------------------------------------
// Configuration

/// Every agent shares (b1, b2).
struct Homogeneous {
    double b1 = 0.0;
    double b2 = 0.0;
    bool operator==(const Homogeneous&) const = default;
};

/// b_{j,i} ~ U(c_j - delta_j, c_j + delta_j), independently per agent and stock.
struct Uniform {
    double c1 = 0.0;
    double delta1 = 1.0;
    double c2 = 0.0;
    double delta2 = 1.0;
    bool operator==(const Uniform&) const = default;
};

using CouplingSpec = std::variant<Homogeneous, Uniform>;

struct EventModel {
    double probability = 0.0082;
    double strength = 1.0;  // k; impact is k times the baseline demand std
    bool operator==(const EventModel&) const = default;
};

inline constexpr double kNewsEventProbability = 0.0082;

struct ModelConfig {
    int n_agents = 1001;
    int memory = 1;
    int n_strategies = 2;
    int horizon = 1000;
    double initial_price = 2000.0;
    std::array<double, kStocks> a{1.0, 1.0};
    CouplingSpec b_spec = Homogeneous{};
    bool allow_hold = false;
    std::optional<EventModel> events;
    int n_runs = 50;
    std::uint64_t master_seed = 20190601;

    DecisionSet decision_set() const noexcept {
        return allow_hold ? DecisionSet::WithHold : DecisionSet::Binary;
    }
    bool operator==(const ModelConfig&) const = default;
};

inline constexpr int kMaxMemory = 16;

/// Returns the config unchanged iff every invariant holds; throws ConfigError otherwise.
const ModelConfig& validate(const ModelConfig& config);

// ---------------------------------------------------------------------------
// Seeding

enum class Stream : std::uint8_t {
    AgentInit = 1,
    CouplingsStock1,
    CouplingsStock2,
    DecisionsStock1,
    DecisionsStock2,
    EventsStock1,
    EventsStock2,
    AppendixOracle,
};

/// Stream of the given purpose for stock index 0 or 1.
Stream couplings_stream(std::size_t stock) noexcept;
Stream decisions_stream(std::size_t stock) noexcept;
Stream events_stream(std::size_t stock) noexcept;

/// splitmix64 finalizer; a bijection on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Injective in (run_index, stream) for a fixed master seed while
/// run_index < 2^56.
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t run_index, Stream stream) noexcept;

Rng make_rng(std::uint64_t master_seed, std::uint64_t run_index, Stream stream);

}  // namespace cmg
