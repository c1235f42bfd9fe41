#include "cmg/core.hpp"

#include <cmath>
#include <string>

namespace cmg {

const char* to_string(ConfigErrorCode code) noexcept {
    switch (code) {
        case ConfigErrorCode::EvenAgentCount: return "EvenAgentCount";
        case ConfigErrorCode::CoefficientOutOfRange: return "CoefficientOutOfRange";
        case ConfigErrorCode::NegativeRange: return "NegativeRange";
        case ConfigErrorCode::ProbabilityOutOfRange: return "ProbabilityOutOfRange";
        case ConfigErrorCode::NegativeStrength: return "NegativeStrength";
        case ConfigErrorCode::NonPositiveParameter: return "NonPositiveParameter";
        case ConfigErrorCode::MemoryTooLarge: return "MemoryTooLarge";
        case ConfigErrorCode::Parse: return "Parse";
    }
    return "Unknown";
}

namespace {

void require_positive(int value, const char* name) {
    if (value <= 0) {
        throw ConfigError(ConfigErrorCode::NonPositiveParameter,
                          std::string(name) + " must be positive, got " + std::to_string(value));
    }
}

void require_finite(double value, const char* name) {
    if (!std::isfinite(value)) {
        throw ConfigError(ConfigErrorCode::CoefficientOutOfRange, std::string(name) + " must be finite");
    }
}

}  // namespace

const ModelConfig& validate(const ModelConfig& config) {
    require_positive(config.n_agents, "n_agents");
    if (config.n_agents % 2 == 0) {
        throw ConfigError(ConfigErrorCode::EvenAgentCount,
                          "n_agents must be odd, got " + std::to_string(config.n_agents));
    }
    require_positive(config.memory, "memory");
    if (config.memory > kMaxMemory) {
        throw ConfigError(ConfigErrorCode::MemoryTooLarge,
                          "memory must be at most " + std::to_string(kMaxMemory));
    }
    require_positive(config.n_strategies, "n_strategies");
    require_positive(config.horizon, "horizon");
    require_positive(config.n_runs, "n_runs");
    if (!(config.initial_price > 0.0) || !std::isfinite(config.initial_price)) {
        throw ConfigError(ConfigErrorCode::NonPositiveParameter, "initial_price must be positive");
    }
    for (std::size_t j = 0; j < kStocks; ++j) {
        const double a = config.a[j];
        if (!(a > 0.0 && a <= 1.0)) {
            throw ConfigError(ConfigErrorCode::CoefficientOutOfRange,
                              "a" + std::to_string(j + 1) + " must lie in (0, 1], got " + std::to_string(a));
        }
    }
    if (const auto* h = std::get_if<Homogeneous>(&config.b_spec)) {
        require_finite(h->b1, "b1");
        require_finite(h->b2, "b2");
    } else {
        const auto& u = std::get<Uniform>(config.b_spec);
        require_finite(u.c1, "c1");
        require_finite(u.c2, "c2");
        require_finite(u.delta1, "delta1");
        require_finite(u.delta2, "delta2");
        if (u.delta1 < 0.0 || u.delta2 < 0.0) {
            throw ConfigError(ConfigErrorCode::NegativeRange, "delta1 and delta2 must be non-negative");
        }
    }
    if (config.events) {
        const double p = config.events->probability;
        if (!(p >= 0.0 && p <= 1.0)) {
            throw ConfigError(ConfigErrorCode::ProbabilityOutOfRange,
                              "event probability must lie in [0, 1], got " + std::to_string(p));
        }
        if (!(config.events->strength >= 0.0) || !std::isfinite(config.events->strength)) {
            throw ConfigError(ConfigErrorCode::NegativeStrength, "event strength must be finite and >= 0");
        }
    }
    return config;
}

Stream couplings_stream(std::size_t stock) noexcept {
    return stock == 0 ? Stream::CouplingsStock1 : Stream::CouplingsStock2;
}
Stream decisions_stream(std::size_t stock) noexcept {
    return stock == 0 ? Stream::DecisionsStock1 : Stream::DecisionsStock2;
}
Stream events_stream(std::size_t stock) noexcept {
    return stock == 0 ? Stream::EventsStock1 : Stream::EventsStock2;
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t run_index, Stream stream) noexcept {
    const std::uint64_t key = (run_index << 8) | static_cast<std::uint64_t>(stream);
    return mix64(mix64(master_seed) ^ key);
}

Rng make_rng(std::uint64_t master_seed, std::uint64_t run_index, Stream stream) {
    return Rng(derive_seed(master_seed, run_index, stream));
}

}  // namespace cmg
