#include "cmg/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>

#include "cmg/analytic.hpp"
#include "cmg/config_io.hpp"
#include "cmg/csv.hpp"
#include "cmg/engine.hpp"
#include "cmg/stats.hpp"
#include "cmg/sweep.hpp"

namespace cmg {

namespace {

using nlohmann::json;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Value-taking config keys and their flag spellings.
const std::vector<std::pair<std::string, std::string>> kValueFlags{
    {"n_agents", "--n-agents"},
    {"memory", "--memory"},
    {"n_strategies", "--n-strategies"},
    {"horizon", "--horizon"},
    {"initial_price", "--initial-price"},
    {"a1", "--a1"},
    {"a2", "--a2"},
    {"b_spec", "--b-spec"},
    {"b1", "--b1"},
    {"b2", "--b2"},
    {"c1", "--c1"},
    {"delta1", "--delta1"},
    {"c2", "--c2"},
    {"delta2", "--delta2"},
    {"event_probability", "--event-probability"},
    {"event_strength", "--event-strength"},
    {"n_runs", "--runs,--n-runs"},
    {"master_seed", "--seed,--master-seed"},
};

/// Config file plus per-field overrides for one subcommand.
struct ModelFlags {
    std::string config_path;
    std::map<std::string, std::string> values;
    std::map<std::string, CLI::Option*> options;
    bool allow_hold = false;
    bool events = false;
    CLI::Option* hold_option = nullptr;
    CLI::Option* events_option = nullptr;

    void attach(CLI::App& app) {
        app.add_option("--config", config_path, std::string("Config file (default: $") + kConfigEnvVar + ")");
        for (const auto& [key, flag] : kValueFlags) {
            options[key] = app.add_option(flag, values[key], key)->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
        }
        hold_option = app.add_flag("--allow-hold,!--no-allow-hold", allow_hold, "Allow the hold decision");
        events_option = app.add_flag("--events,!--no-events", events, "Enable external events");
    }

    std::string source() const {
        if (!config_path.empty()) return config_path;
        const char* env = std::getenv(kConfigEnvVar);
        return env ? std::string(env) : std::string();
    }

    std::vector<Setting> overrides() const {
        std::vector<Setting> out;
        for (const auto& [key, flag] : kValueFlags) {
            if (options.at(key)->count() > 0) out.emplace_back(key, values.at(key));
        }
        if (hold_option->count() > 0) out.emplace_back("allow_hold", allow_hold ? "true" : "false");
        if (events_option->count() > 0) out.emplace_back("events", events ? "true" : "false");
        return out;
    }

    ModelConfig resolve() const {
        const std::string path = source();
        ModelConfig base = path.empty() ? ModelConfig{} : load_config(path);
        return validate(apply_settings(base, overrides()));
    }
};

json config_json(const ModelConfig& c) {
    json j;
    j["n_agents"] = c.n_agents;
    j["memory"] = c.memory;
    j["n_strategies"] = c.n_strategies;
    j["horizon"] = c.horizon;
    j["initial_price"] = c.initial_price;
    j["a"] = {c.a[0], c.a[1]};
    if (const auto* h = std::get_if<Homogeneous>(&c.b_spec)) {
        j["b_spec"] = {{"kind", "homogeneous"}, {"b1", h->b1}, {"b2", h->b2}};
    } else {
        const auto& u = std::get<Uniform>(c.b_spec);
        j["b_spec"] = {{"kind", "uniform"}, {"c1", u.c1}, {"delta1", u.delta1}, {"c2", u.c2}, {"delta2", u.delta2}};
    }
    j["allow_hold"] = c.allow_hold;
    if (c.events) {
        j["events"] = {{"probability", c.events->probability}, {"strength", c.events->strength}};
    } else {
        j["events"] = nullptr;
    }
    j["n_runs"] = c.n_runs;
    j["master_seed"] = c.master_seed;
    j["config_hash"] = config_hash(c);
    return j;
}

json provenance_json(const ModelFlags& flags, const ModelConfig& config) {
    json j;
    j["config"] = config_json(config);
    j["config_source"] = flags.source();
    json overrides = json::array();
    for (const auto& [key, value] : flags.overrides()) overrides.push_back({{"key", key}, {"value", value}});
    j["overrides"] = overrides;
    j["seed_rule"] = "run stream seed = mix64(mix64(master_seed) ^ (run << 8 | stream))";
    j["expectation_regressor"] = "population mean of r^e formed from r(t)";
    return j;
}

void echo_overrides(std::ostream& out, const ModelFlags& flags) {
    for (const auto& [key, value] : flags.overrides()) out << "# override " << key << " = " << value << '\n';
}

void write_json(const std::string& path, const json& j) {
    write_atomically(path, [&](std::ostream& o) { o << j.dump(2) << '\n'; });
}

std::string with_suffix(const std::string& path, const std::string& suffix) {
    const std::filesystem::path p(path);
    return (p.parent_path() / (p.stem().string() + suffix + p.extension().string())).string();
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateArgs {
    ModelFlags model;
    std::string out_path;
    std::string summary_path;
    std::string scatter_path;
    int trajectory_run = 0;
    unsigned threads = 0;
};

int simulate(const SimulateArgs& args, std::ostream& out) {
    const ModelConfig config = args.model.resolve();
    if (args.trajectory_run < 0 || args.trajectory_run >= config.n_runs) {
        throw UsageError("--trajectory-run must lie in [0, n_runs)");
    }
    echo_overrides(out, args.model);
    const BatchResult batch = run_many(config, args.threads);
    out << "mean_rho = " << format_double(batch.mean_correlation) << " over " << batch.runs.size() << " runs\n";

    if (!args.out_path.empty()) {
        const auto& market = batch.runs[static_cast<std::size_t>(args.trajectory_run)].market;
        write_atomically(args.out_path, [&](std::ostream& o) { write_trajectory_csv(o, market); });
    }
    if (!args.scatter_path.empty()) {
        write_atomically(args.scatter_path, [&](std::ostream& o) { write_scatter_csv(o, batch.runs); });
    }
    if (!args.summary_path.empty()) {
        json j = provenance_json(args.model, config);
        j["mean_rho"] = batch.mean_correlation;
        json rhos = json::array();
        json baseline = json::array();
        for (const auto& r : batch.runs) {
            rhos.push_back(r.correlation);
            if (r.baseline_demand_std) baseline.push_back({(*r.baseline_demand_std)[0], (*r.baseline_demand_std)[1]});
        }
        j["rhos"] = rhos;
        if (!baseline.empty()) j["baseline_demand_std"] = baseline;
        j["trajectory_run"] = args.trajectory_run;
        write_json(args.summary_path, j);
    }
    return kExitSuccess;
}

// ---------------------------------------------------------------------------
// sweep

struct AxisFlags {
    double start = 0.0;
    double stop = 0.0;
    double step = 0.0;
    std::vector<double> values;
    CLI::Option* start_opt = nullptr;
    CLI::Option* stop_opt = nullptr;
    CLI::Option* step_opt = nullptr;

    void attach(CLI::App& app, const std::string& name) {
        start_opt = app.add_option("--" + name + "-start", start, name + " axis start");
        stop_opt = app.add_option("--" + name + "-stop", stop, name + " axis stop (inclusive)");
        step_opt = app.add_option("--" + name + "-step", step, name + " axis step");
        app.add_option("--" + name + "-values", values, name + " axis explicit values")->delimiter(',');
    }

    Axis resolve(const Axis& fallback) const {
        if (!values.empty()) return Axis::list(fallback.name, values);
        if (!start_opt->count() && !stop_opt->count() && !step_opt->count()) return fallback;
        const double lo = start_opt->count() ? start : fallback.points.front();
        const double hi = stop_opt->count() ? stop : fallback.points.back();
        double dx = step;
        if (!step_opt->count()) dx = fallback.size() > 1 ? fallback.points[1] - fallback.points[0] : 1.0;
        return Axis::range(fallback.name, lo, hi, dx);
    }
};

struct SweepArgs {
    ModelFlags model;
    std::string experiment = "homogeneous";
    std::map<std::string, AxisFlags> axes;
    bool diagonal = false;
    std::vector<double> k_values{1.0, 2.0, 3.0, 4.0};
    std::string out_path;
    std::string scatter_path;
    unsigned threads = 0;
};

json axis_json(const Axis& a) { return {{"name", a.name}, {"points", a.points}}; }

void report_grid(std::ostream& out, const SweepGrid& grid) {
    out << "# " << grid.label << ": " << grid.x_axis.name << " x " << grid.y_axis.name << ", " << grid.cells.size()
        << " cells, " << std::fixed << std::setprecision(1) << grid.wall_seconds << " s\n";
    out.unsetf(std::ios::floatfield);
    write_grid_csv(out, grid);
}

int sweep(const SweepArgs& args, std::ostream& out) {
    ModelConfig base = args.model.resolve();
    echo_overrides(out, args.model);

    SweepSpec spec;
    spec.layout = args.diagonal ? Layout::Diagonal : Layout::Product;
    spec.collect_samples = !args.scatter_path.empty();
    spec.threads = args.threads;

    std::vector<SweepGrid> grids;
    const std::string& e = args.experiment;
    if (e == "homogeneous" || e == "holding" || e == "events") {
        spec.x = args.axes.at("b1").resolve(default_b_axis("b1"));
        spec.y = args.axes.at("b2").resolve(default_b_axis("b2"));
        if (e == "homogeneous") {
            grids.push_back(sweep_homogeneous(base, spec));
        } else if (e == "holding") {
            grids.push_back(sweep_holding(base, spec));
        } else {
            const double p = base.events ? base.events->probability : kNewsEventProbability;
            grids = sweep_events(base, spec, args.k_values, p);
        }
    } else if (e == "centers") {
        spec.x = args.axes.at("c1").resolve(default_c_axis("c1"));
        spec.y = args.axes.at("c2").resolve(default_c_axis("c2"));
        const auto* u = std::get_if<Uniform>(&base.b_spec);
        const std::pair<double, double> delta = u ? std::pair{u->delta1, u->delta2} : std::pair{1.0, 1.0};
        grids.push_back(sweep_centers(base, delta, spec));
    } else if (e == "ranges") {
        spec.x = args.axes.at("delta1").resolve(default_delta_axis("delta1"));
        spec.y = args.axes.at("delta2").resolve(default_delta_axis("delta2"));
        const auto* u = std::get_if<Uniform>(&base.b_spec);
        const std::pair<double, double> center = u ? std::pair{u->c1, u->c2} : std::pair{0.0, 0.0};
        grids.push_back(sweep_ranges(base, center, spec));
    } else {
        throw UsageError("unknown experiment '" + e + "'");
    }

    for (const auto& grid : grids) {
        report_grid(out, grid);
        const std::string suffix = grids.size() > 1 ? "_" + grid.label : std::string();
        if (!args.out_path.empty()) {
            const std::string path = with_suffix(args.out_path, suffix);
            write_atomically(path, [&](std::ostream& o) { write_grid_csv(o, grid); });
            json meta = provenance_json(args.model, grid.base);
            meta["experiment"] = args.experiment;
            meta["label"] = grid.label;
            meta["axis1"] = axis_json(grid.x_axis);
            meta["axis2"] = axis_json(grid.y_axis);
            meta["layout"] = grid.layout == Layout::Diagonal ? "diagonal" : "product";
            meta["seed_rule_cell"] = "cell master seed = cell_seed(master_seed, coupling spec)";
            meta["wall_seconds"] = grid.wall_seconds;
            json cells = json::array();
            for (const auto& c : grid.cells) cells.push_back({{"axis1", c.x}, {"axis2", c.y}, {"seed", c.seed}, {"rhos", c.rhos}});
            meta["cells"] = cells;
            write_json(path + ".meta.json", meta);
        }
        if (!args.scatter_path.empty()) {
            write_atomically(with_suffix(args.scatter_path, suffix),
                             [&](std::ostream& o) { write_grid_scatter_csv(o, grid); });
        }
    }
    return kExitSuccess;
}

// ---------------------------------------------------------------------------
// regress

struct RegressArgs {
    std::vector<std::string> inputs;
    std::string out_path;
    bool by_cell = false;
};

SampleSeries samples_from(const CsvTable& t, std::size_t stock) {
    if (t.has_column("expected_return")) return scatter_samples(t, stock);
    if (t.has_column("r1")) return trajectory_samples(t, stock);
    throw Error("cli", "regress", "input is neither a trajectory nor a scatter table");
}

void append(SampleSeries& into, const SampleSeries& from) {
    into.expected.insert(into.expected.end(), from.expected.begin(), from.expected.end());
    into.realized.insert(into.realized.end(), from.realized.begin(), from.realized.end());
}

int regress(const RegressArgs& args, std::ostream& out) {
    std::vector<CsvTable> tables;
    for (const auto& path : args.inputs) tables.push_back(read_csv_file(path));

    std::ostringstream report;
    if (!args.by_cell) {
        std::array<RegressionReport, kStocks> reports;
        for (std::size_t j = 0; j < kStocks; ++j) {
            SampleSeries pooled;
            for (const auto& t : tables) append(pooled, samples_from(t, j));
            reports[j] = ols(pooled.expected, pooled.realized);
        }
        write_regression_csv(report, reports);
    } else {
        // Group scatter rows by cell coordinates, keeping first-seen order.
        std::vector<std::pair<std::string, std::string>> order;
        std::map<std::pair<std::string, std::string>, std::array<SampleSeries, kStocks>> groups;
        for (const auto& t : tables) {
            const std::size_t cx = t.column("axis1");
            const std::size_t cy = t.column("axis2");
            const std::size_t cs = t.column("stock");
            const std::size_t ce = t.column("expected_return");
            const std::size_t cr = t.column("return");
            for (const auto& row : t.rows) {
                const auto key = std::pair{row[cx], row[cy]};
                if (!groups.contains(key)) order.push_back(key);
                const std::size_t j = row[cs] == "1" ? 0 : 1;
                groups[key][j].expected.push_back(parse_double(row[ce], "expected_return"));
                groups[key][j].realized.push_back(parse_double(row[cr], "return"));
            }
        }
        report << "axis1,axis2,stock,beta0,beta1,p_value,r_squared,n\n";
        for (const auto& key : order) {
            for (std::size_t j = 0; j < kStocks; ++j) {
                const auto& s = groups[key][j];
                const RegressionReport r = ols(s.expected, s.realized);
                report << key.first << ',' << key.second << ',' << (j + 1) << ',' << format_double(r.beta0) << ','
                       << format_double(r.beta1) << ',' << format_double(r.p_value) << ','
                       << format_double(r.r_squared) << ',' << r.n << '\n';
            }
        }
    }
    out << report.str();
    if (!args.out_path.empty()) write_atomically(args.out_path, [&](std::ostream& o) { o << report.str(); });
    return kExitSuccess;
}

// ---------------------------------------------------------------------------
// verify-appendix

struct VerifyArgs {
    std::uint64_t samples = 1'000'000;
    std::uint64_t seed = 20190601;
    unsigned threads = 0;
    std::string out_path;
};

int verify(const VerifyArgs& args, std::ostream& out) {
    const AppendixReport report = verify_appendix(args.samples, args.seed, args.threads);
    std::ostringstream table;
    table << "regime,input,output,verdict,min_freq,max_freq,condition_mismatches,trend,trend_monotone,pass\n";
    for (const auto& c : report.cells) {
        table << to_string(c.regime) << ',' << to_string(c.input) << ',' << to_string(c.output) << ",\""
              << c.verdict.describe() << "\"," << format_double(c.min_frequency) << ','
              << format_double(c.max_frequency) << ',' << c.condition_mismatches << ',' << to_string(c.verdict.trend)
              << ',' << (c.trend_monotone ? "yes" : "no") << ',' << (c.passed() ? "PASS" : "FAIL") << '\n';
    }
    out << "# sampling: |dr| uniform on (0,1] per component, a = (1,1), " << args.samples
        << " samples per b point, seed " << args.seed << '\n';
    out << table.str();
    out << (report.passed() ? "verify-appendix: PASS" : "verify-appendix: FAIL") << " (" << report.failures()
        << " of " << report.cells.size() << " cells failed)\n";
    if (!args.out_path.empty()) {
        write_atomically(args.out_path, [&](std::ostream& o) { o << table.str(); });
        json meta{{"sampling", "uniform magnitudes on (0,1] per component"},
                  {"a", {1.0, 1.0}},
                  {"samples_per_point", args.samples},
                  {"seed", args.seed},
                  {"passed", report.passed()}};
        write_json(args.out_path + ".meta.json", meta);
    }
    return report.passed() ? kExitSuccess : kExitVerifyFailed;
}

// ---------------------------------------------------------------------------
// ar1

struct Ar1Args {
    ModelFlags model;
    std::vector<std::string> inputs;
    std::string out_path;
    unsigned threads = 0;
};

int ar1_verb(const Ar1Args& args, std::ostream& out) {
    std::array<std::vector<std::vector<double>>, kStocks> series;
    if (!args.inputs.empty()) {
        for (const auto& path : args.inputs) {
            const CsvTable t = read_csv_file(path);
            for (std::size_t j = 0; j < kStocks; ++j) series[j].push_back(t.numbers("r" + std::to_string(j + 1)));
        }
    } else {
        const ModelConfig config = args.model.resolve();
        echo_overrides(out, args.model);
        const BatchResult batch = run_many(config, args.threads);
        for (const auto& r : batch.runs) {
            for (std::size_t j = 0; j < kStocks; ++j) {
                const auto w = r.market.window_returns(j);
                series[j].emplace_back(w.begin(), w.end());
            }
        }
    }
    std::ostringstream table;
    table << "stock,phi,n\n";
    for (std::size_t j = 0; j < kStocks; ++j) {
        const Ar1Report rep = ar1_pooled(series[j]);
        table << (j + 1) << ',' << format_double(rep.phi) << ',' << rep.n << '\n';
    }
    out << table.str();
    if (!args.out_path.empty()) write_atomically(args.out_path, [&](std::ostream& o) { o << table.str(); });
    return kExitSuccess;
}

}  // namespace

CommandOutcome dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Two-asset coupled-expectation minority game", "cmg"};
    app.require_subcommand(1);

    SimulateArgs sim_args;
    auto* sim = app.add_subcommand("simulate", "Run n_runs simulations of one configuration");
    sim_args.model.attach(*sim);
    sim->add_option("--out", sim_args.out_path, "Trajectory CSV of one run");
    sim->add_option("--trajectory-run", sim_args.trajectory_run, "Run index written to --out");
    sim->add_option("--summary", sim_args.summary_path, "Run summary JSON");
    sim->add_option("--scatter-out", sim_args.scatter_path, "Regression samples CSV");
    sim->add_option("--threads", sim_args.threads, "Worker threads (0 = hardware)");

    SweepArgs sweep_args;
    auto* swp = app.add_subcommand("sweep", "Grid of mean correlations");
    sweep_args.model.attach(*swp);
    swp->add_option("--experiment", sweep_args.experiment, "homogeneous|centers|ranges|events|holding")
        ->check(CLI::IsMember({"homogeneous", "centers", "ranges", "events", "holding"}));
    for (const char* name : {"b1", "b2", "c1", "c2", "delta1", "delta2"}) sweep_args.axes[name].attach(*swp, name);
    swp->add_flag("--diagonal", sweep_args.diagonal, "Pair axis values instead of taking the product");
    swp->add_option("--k", sweep_args.k_values, "Event strengths for the events experiment")->delimiter(',');
    swp->add_option("--out", sweep_args.out_path, "Grid CSV");
    swp->add_option("--scatter-out", sweep_args.scatter_path, "Pooled regression samples CSV");
    swp->add_option("--threads", sweep_args.threads, "Worker threads (0 = hardware)");

    RegressArgs regress_args;
    auto* reg = app.add_subcommand("regress", "OLS of return on mean expected return");
    reg->add_option("--input", regress_args.inputs, "Trajectory or scatter CSVs")->required();
    reg->add_option("--out", regress_args.out_path, "Report CSV");
    reg->add_flag("--by-cell", regress_args.by_cell, "One regression per sweep cell");

    VerifyArgs verify_args;
    auto* ver = app.add_subcommand("verify-appendix", "Check the sign-case table against brute-force sampling");
    ver->add_option("--samples", verify_args.samples, "Samples per b point");
    ver->add_option("--seed", verify_args.seed, "Sampler seed");
    ver->add_option("--threads", verify_args.threads, "Worker threads (0 = hardware)");
    ver->add_option("--out", verify_args.out_path, "Table CSV");

    Ar1Args ar1_args;
    auto* ar = app.add_subcommand("ar1", "Pooled AR(1) coefficient of returns");
    ar1_args.model.attach(*ar);
    ar->add_option("--input", ar1_args.inputs, "Trajectory CSVs (simulate when absent)");
    ar->add_option("--out", ar1_args.out_path, "Report CSV");
    ar->add_option("--threads", ar1_args.threads, "Worker threads (0 = hardware)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return {code == 0 ? kExitSuccess : kExitUsage, e.what()};
    }

    auto fail = [&](int code, const std::string& where, const std::string& what) {
        err << "error [" << where << "]: " << what << '\n';
        return CommandOutcome{code, where + ": " + what};
    };

    try {
        int code = kExitSuccess;
        if (sim->parsed()) code = simulate(sim_args, out);
        else if (swp->parsed()) code = sweep(sweep_args, out);
        else if (reg->parsed()) code = regress(regress_args, out);
        else if (ver->parsed()) code = verify(verify_args, out);
        else if (ar->parsed()) code = ar1_verb(ar1_args, out);
        return {code, code == kExitSuccess ? "ok" : "verification failed"};
    } catch (const UsageError& e) {
        err << app.help();
        return fail(kExitUsage, "cli.usage", e.what());
    } catch (const ConfigError& e) {
        return fail(kExitUsage, e.module() + "." + e.operation(), e.what());
    } catch (const Error& e) {
        return fail(kExitRuntime, e.module() + "." + e.operation(), e.what());
    } catch (const std::exception& e) {
        return fail(kExitRuntime, "unknown", e.what());
    }
}

}  // namespace cmg
