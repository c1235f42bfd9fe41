#include "cmg/config_io.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace cmg {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

[[noreturn]] void parse_error(const std::string& message) {
    throw ConfigError(ConfigErrorCode::Parse, message);
}

template <typename Int>
Int parse_integer(std::string_view text, std::string_view key) {
    Int value{};
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end) {
        parse_error("invalid integer for '" + std::string(key) + "': '" + std::string(text) + "'");
    }
    return value;
}

bool parse_bool(std::string_view text, std::string_view key) {
    if (text == "true" || text == "1" || text == "on" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "off" || text == "no") return false;
    parse_error("invalid boolean for '" + std::string(key) + "': '" + std::string(text) + "'");
}

const std::set<std::string_view> kHomogeneousKeys{"b1", "b2"};
const std::set<std::string_view> kUniformKeys{"c1", "delta1", "c2", "delta2"};

Uniform& as_uniform(ModelConfig& config) {
    if (!std::holds_alternative<Uniform>(config.b_spec)) config.b_spec = Uniform{};
    return std::get<Uniform>(config.b_spec);
}

Homogeneous& as_homogeneous(ModelConfig& config) {
    if (!std::holds_alternative<Homogeneous>(config.b_spec)) config.b_spec = Homogeneous{};
    return std::get<Homogeneous>(config.b_spec);
}

EventModel& as_events(ModelConfig& config) {
    if (!config.events) config.events = EventModel{};
    return *config.events;
}

void apply_one(ModelConfig& config, std::string_view key, std::string_view value) {
    if (key == "n_agents") config.n_agents = parse_integer<int>(value, key);
    else if (key == "memory") config.memory = parse_integer<int>(value, key);
    else if (key == "n_strategies") config.n_strategies = parse_integer<int>(value, key);
    else if (key == "horizon") config.horizon = parse_integer<int>(value, key);
    else if (key == "initial_price") config.initial_price = parse_double(value, key);
    else if (key == "a1") config.a[0] = parse_double(value, key);
    else if (key == "a2") config.a[1] = parse_double(value, key);
    else if (key == "b_spec") {
        if (value == "homogeneous") as_homogeneous(config);
        else if (value == "uniform") as_uniform(config);
        else parse_error("b_spec must be 'homogeneous' or 'uniform', got '" + std::string(value) + "'");
    }
    else if (key == "b1") as_homogeneous(config).b1 = parse_double(value, key);
    else if (key == "b2") as_homogeneous(config).b2 = parse_double(value, key);
    else if (key == "c1") as_uniform(config).c1 = parse_double(value, key);
    else if (key == "delta1") as_uniform(config).delta1 = parse_double(value, key);
    else if (key == "c2") as_uniform(config).c2 = parse_double(value, key);
    else if (key == "delta2") as_uniform(config).delta2 = parse_double(value, key);
    else if (key == "allow_hold") config.allow_hold = parse_bool(value, key);
    else if (key == "events") {
        if (parse_bool(value, key)) as_events(config);
        else config.events.reset();
    }
    else if (key == "event_probability") as_events(config).probability = parse_double(value, key);
    else if (key == "event_strength") as_events(config).strength = parse_double(value, key);
    else if (key == "n_runs") config.n_runs = parse_integer<int>(value, key);
    else if (key == "master_seed") config.master_seed = parse_integer<std::uint64_t>(value, key);
    else parse_error("unknown key '" + std::string(key) + "'");
}

}  // namespace

std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

double parse_double(std::string_view text, std::string_view key) {
    double value{};
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end) {
        parse_error("invalid number for '" + std::string(key) + "': '" + std::string(text) + "'");
    }
    return value;
}

std::vector<Setting> parse_settings(std::string_view text) {
    std::vector<Setting> settings;
    std::set<std::string, std::less<>> seen;
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            parse_error("line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            parse_error("line " + std::to_string(line_no) + ": empty key or value");
        }
        if (!seen.emplace(key).second) {
            parse_error("line " + std::to_string(line_no) + ": duplicate key '" + std::string(key) + "'");
        }
        settings.emplace_back(std::string(key), std::string(value));
    }
    return settings;
}

ModelConfig apply_settings(ModelConfig base, const std::vector<Setting>& settings) {
    bool homogeneous_keys = false;
    bool uniform_keys = false;
    for (const auto& [key, value] : settings) {
        homogeneous_keys |= kHomogeneousKeys.contains(key) || (key == "b_spec" && value == "homogeneous");
        uniform_keys |= kUniformKeys.contains(key) || (key == "b_spec" && value == "uniform");
    }
    if (homogeneous_keys && uniform_keys) {
        parse_error("homogeneous (b1, b2) and uniform (c1, delta1, c2, delta2) couplings are mutually exclusive");
    }
    for (const auto& [key, value] : settings) apply_one(base, key, value);
    return base;
}

ModelConfig parse_config(std::string_view text) {
    return apply_settings(ModelConfig{}, parse_settings(text));
}

ModelConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) parse_error("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string serialize_config(const ModelConfig& config) {
    std::ostringstream out;
    out << "n_agents = " << config.n_agents << '\n'
        << "memory = " << config.memory << '\n'
        << "n_strategies = " << config.n_strategies << '\n'
        << "horizon = " << config.horizon << '\n'
        << "initial_price = " << format_double(config.initial_price) << '\n'
        << "a1 = " << format_double(config.a[0]) << '\n'
        << "a2 = " << format_double(config.a[1]) << '\n';
    if (const auto* h = std::get_if<Homogeneous>(&config.b_spec)) {
        out << "b_spec = homogeneous\n"
            << "b1 = " << format_double(h->b1) << '\n'
            << "b2 = " << format_double(h->b2) << '\n';
    } else {
        const auto& u = std::get<Uniform>(config.b_spec);
        out << "b_spec = uniform\n"
            << "c1 = " << format_double(u.c1) << '\n'
            << "delta1 = " << format_double(u.delta1) << '\n'
            << "c2 = " << format_double(u.c2) << '\n'
            << "delta2 = " << format_double(u.delta2) << '\n';
    }
    out << "allow_hold = " << (config.allow_hold ? "true" : "false") << '\n';
    out << "events = " << (config.events ? "true" : "false") << '\n';
    if (config.events) {
        out << "event_probability = " << format_double(config.events->probability) << '\n'
            << "event_strength = " << format_double(config.events->strength) << '\n';
    }
    out << "n_runs = " << config.n_runs << '\n'
        << "master_seed = " << config.master_seed << '\n';
    return out.str();
}

std::uint64_t config_hash(const ModelConfig& config) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char ch : serialize_config(config)) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace cmg
