#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cmg/core.hpp"

namespace cmg {

/// Row key of a strategy table: m history signs followed by one expectation
/// sign. The oldest history bit is the most significant, the expectation bit
/// the least significant.
struct InfoState {
    std::uint32_t index = 0;
    bool operator==(const InfoState&) const = default;
};

constexpr std::size_t state_count(int memory) noexcept {
    return std::size_t{1} << (memory + 1);
}

/// Throws std::invalid_argument if history.size() != memory.
InfoState encode(std::span<const SignBit> history, SignBit expectation, int memory);

/// Incremental form used by the engine: `history_index` holds the last m
/// return signs packed with the newest in bit 0.
constexpr InfoState encode_packed(std::uint32_t history_index, SignBit expectation) noexcept {
    return InfoState{(history_index << 1) | static_cast<std::uint32_t>(expectation)};
}

/// A fixed decision table with 2^(m+1) entries.
class Strategy {
public:
    Strategy() = default;
    explicit Strategy(std::vector<Decision> table);

    Decision lookup(InfoState state) const noexcept { return table_[state.index]; }
    std::size_t size() const noexcept { return table_.size(); }
    std::span<const Decision> table() const noexcept { return table_; }

    bool operator==(const Strategy&) const = default;

private:
    std::vector<Decision> table_;
};

/// Each entry drawn independently and uniformly from the decision set.
Strategy sample_strategy(Rng& rng, int memory, DecisionSet decisions);

inline Decision lookup(const Strategy& strategy, InfoState state) noexcept {
    return strategy.lookup(state);
}

/// Uniform draw from the decision set.
Decision random_decision(Rng& rng, DecisionSet decisions);

}  // namespace cmg
