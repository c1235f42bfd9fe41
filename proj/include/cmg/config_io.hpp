#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cmg/core.hpp"

namespace cmg {

/// Flat key-value text format, one `key = value` per line, `#` starts a comment.
///
/// Keys: n_agents memory n_strategies horizon initial_price a1 a2 b_spec
/// b1 b2 c1 delta1 c2 delta2 allow_hold events event_probability
/// event_strength n_runs master_seed. Unknown keys are errors.
using Setting = std::pair<std::string, std::string>;

std::vector<Setting> parse_settings(std::string_view text);

/// Applies settings in order on top of `base`. Later settings win. Mixing
/// homogeneous (b1, b2) and uniform (c*, delta*) keys in one batch is an error.
ModelConfig apply_settings(ModelConfig base, const std::vector<Setting>& settings);

ModelConfig parse_config(std::string_view text);
ModelConfig load_config(const std::string& path);

/// Writes every key; doubles use the shortest round-trip representation.
std::string serialize_config(const ModelConfig& config);

/// 64-bit FNV-1a of serialize_config().
std::uint64_t config_hash(const ModelConfig& config);

std::string format_double(double value);
double parse_double(std::string_view text, std::string_view key);

}  // namespace cmg
