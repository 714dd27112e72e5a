#include "recnet/cli.hpp"

#include "recnet/analysis.hpp"
#include "recnet/csv.hpp"
#include "recnet/empirical.hpp"
#include "recnet/error.hpp"
#include "recnet/geojson.hpp"
#include "recnet/multipliers.hpp"
#include "recnet/parallel.hpp"
#include "recnet/synthetic.hpp"
#include "recnet/threshold_fit.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <iomanip>
#include <ostream>
#include <sstream>

#ifndef RECNET_VERSION
#define RECNET_VERSION "0.1.0"
#endif

namespace recnet {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

std::vector<std::size_t> default_multiplier_sizes(std::size_t n) {
    std::vector<std::size_t> sizes;
    for (const double pct : {0.01, 0.03, 0.05, 0.10}) {
        const auto size = std::max<long long>(1, std::llround(pct * static_cast<double>(n)));
        const auto value = static_cast<std::size_t>(std::min<long long>(size, static_cast<long long>(n)));
        if (std::find(sizes.begin(), sizes.end(), value) == sizes.end()) sizes.push_back(value);
    }
    return sizes;
}

namespace {

struct GraphOptions {
    std::string edges;
    std::string nodes;
    std::string geometry;
    std::string rule = "queen";
    double snap_tolerance = 0.0;
};

struct ScheduleOptions {
    int horizon = 14;
    int first_update_week = 3;
    double seed_cutoff = 3.0;

    DiffusionSchedule schedule() const { return {horizon, first_update_week}; }
};

struct GaOptions {
    std::size_t population = 10;
    std::size_t max_iterations = 10000;
    double crossover_prob = 0.9;
    double mutation_prob = -1.0;  // negative: per-gene default
    std::size_t tournament_size = 2;
    std::size_t elitism = 1;

    GaConfig config(std::uint64_t seed, unsigned threads) const {
        GaConfig c;
        c.population_size = population;
        c.max_iterations = max_iterations;
        c.crossover_prob = crossover_prob;
        if (mutation_prob >= 0.0) c.mutation_prob = mutation_prob;
        c.tournament_size = tournament_size;
        c.elitism_count = elitism;
        c.rng_seed = seed;
        c.threads = threads;
        c.validate();
        return c;
    }
};

struct CommonOptions {
    std::string out = ".";
    std::uint64_t seed = 1;
    unsigned threads = 0;
};

struct Options {
    CommonOptions common;
    GraphOptions graph;
    ScheduleOptions schedule;
    GaOptions ga;
    GaOptions stage2_ga = [] {
        GaOptions g;
        g.max_iterations = 2000;
        return g;
    }();
    // durations
    std::string visits;
    std::string baseline_start;
    std::string baseline_end;
    std::string recovery_start;
    double ratio = 0.9;
    int persistence_days = 3;
    int ma_halfwidth = 3;
    int max_weeks = 14;
    // fit / baseline
    std::string durations;
    std::size_t baseline_runs = 0;
    std::size_t runs = 1000;
    // multipliers
    std::string thresholds;
    std::vector<std::size_t> sizes;
    std::string pool = "all";
    bool brute_force = false;
    std::uint64_t enumeration_cap = 1'000'000;
    // analyze
    std::string attributes;
    std::vector<std::string> multiplier_files;
    bool include_seeds = false;
    // synth
    SynthSpec synth;
    std::string graph_kind = "grid";
};

/// Tracks outputs and timing for the run manifest.
class RunContext {
public:
    RunContext(std::string command, const CommonOptions& common, std::string config_text)
        : command_(std::move(command)), common_(common), config_text_(std::move(config_text)),
          started_wall_(std::chrono::system_clock::now()), started_(std::chrono::steady_clock::now()),
          threads_(resolve_threads(common.threads)) {}

    unsigned threads() const { return threads_; }
    fs::path path(const std::string& name) const { return fs::path(common_.out) / name; }

    void write(const std::string& name, std::string_view contents) {
        csv::write_atomic(path(name), contents);
        outputs_.push_back(name);
    }

    /// Notes a file written by someone else.
    void record(const std::string& name) { outputs_.push_back(name); }

    ordered_json& timing() { return timing_; }

    void finish() {
        ordered_json m;
        m["command"] = command_;
        m["versions"] = {{"recnet", RECNET_VERSION},
                         {"compiler", __VERSION__},
                         {"cli11", CLI11_VERSION},
                         {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                               std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                               std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
        m["seed"] = common_.seed;
        m["threads"] = threads_;
        m["config"] = config_text_;
        const std::time_t t = std::chrono::system_clock::to_time_t(started_wall_);
        std::tm tm{};
        gmtime_r(&t, &tm);
        std::ostringstream stamp;
        stamp << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
        m["started_at"] = stamp.str();
        m["elapsed_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - started_).count();
        m["outputs"] = outputs_;
        if (!timing_.empty()) m["timing"] = timing_;
        csv::write_atomic(path("run_manifest.json"), m.dump(2) + "\n");
    }

private:
    std::string command_;
    CommonOptions common_;
    std::string config_text_;
    std::chrono::system_clock::time_point started_wall_;
    std::chrono::steady_clock::time_point started_;
    unsigned threads_;
    std::vector<std::string> outputs_;
    ordered_json timing_;
};

void add_common(CLI::App* sub, CommonOptions& c) {
    sub->add_option("--out,-o", c.out, "Output directory")->capture_default_str();
    sub->add_option("--seed", c.seed, "Random seed")->capture_default_str();
    sub->add_option("--threads", c.threads, "Worker threads (0 = RECNET_THREADS or all cores)")->capture_default_str();
}

void add_graph(CLI::App* sub, GraphOptions& g, bool nodes_flag) {
    sub->add_option("--edges", g.edges, "Edge list CSV (src,dst)");
    if (nodes_flag) sub->add_option("--nodes", g.nodes, "Node list CSV (id); defaults to edge-list endpoints");
    sub->add_option("--geometry", g.geometry, "Polygon feature collection (GeoJSON) with an 'id' property");
    sub->add_option("--rule", g.rule, "Contiguity rule: queen, rook or bishop")->capture_default_str();
    sub->add_option("--snap-tolerance", g.snap_tolerance, "Vertex snapping grid size")->capture_default_str();
}

void add_schedule(CLI::App* sub, ScheduleOptions& s, bool cutoff) {
    sub->add_option("--horizon", s.horizon, "Weeks simulated")->capture_default_str();
    sub->add_option("--first-update-week", s.first_update_week, "First week with diffusion updates")->capture_default_str();
    if (cutoff) sub->add_option("--seed-cutoff", s.seed_cutoff, "Durations below this (weeks) become seeds")->capture_default_str();
}

void add_ga(CLI::App* sub, GaOptions& g) {
    sub->add_option("--population", g.population, "GA population size")->capture_default_str();
    sub->add_option("--max-iterations", g.max_iterations, "GA generations, including the initial one")->capture_default_str();
    sub->add_option("--crossover-prob", g.crossover_prob, "Crossover probability")->capture_default_str();
    sub->add_option("--mutation-prob", g.mutation_prob, "Per-gene mutation probability (default 1/length)");
    sub->add_option("--tournament-size", g.tournament_size, "Tournament size")->capture_default_str();
    sub->add_option("--elitism", g.elitism, "Elite chromosomes kept per generation")->capture_default_str();
}

/// Loads the graph from geometry or an edge list. `node_order`, when given,
/// fixes the node set (e.g. the ids of a durations table).
SpatialGraph load_graph(const GraphOptions& g, const std::optional<std::vector<std::string>>& node_order) {
    if (!g.geometry.empty() && !g.edges.empty()) throw ConfigError("give either --geometry or --edges, not both");
    if (!g.geometry.empty()) {
        const auto units = geojson::read_feature_collection(g.geometry);
        auto built = build_contiguity_graph(units, {parse_contiguity_kind(g.rule), g.snap_tolerance});
        if (!node_order) return built;
        std::vector<std::pair<std::string, std::string>> edges;
        for (const auto& [a, b] : built.edges()) edges.emplace_back(built.id(a), built.id(b));
        return load_edge_list(*node_order, edges);
    }
    if (g.edges.empty()) throw ConfigError("an input graph is required (--edges or --geometry)");
    std::optional<std::vector<std::string>> order = node_order;
    if (!order && !g.nodes.empty()) order = read_node_list_csv(g.nodes);
    return read_edge_list_csv(g.edges, order);
}

std::string fixed(double value, int digits) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(digits) << value;
    return os.str();
}

ordered_json summary_json(const DistributionSummary& s) {
    if (s.count == 0) return {{"count", 0}};
    return {{"count", s.count}, {"min", s.min},       {"q1", s.q1},    {"median", s.median},
            {"q3", s.q3},       {"max", s.max},       {"mean", s.mean}};
}

// --- subcommands ----------------------------------------------------------

void run_build_graph(const Options& o, RunContext& ctx, std::ostream& out) {
    const auto g = load_graph(o.graph, std::nullopt);
    const auto metrics = graph_metrics(g);
    ctx.write("edges.csv", format_edge_list_csv(g));
    ctx.write("graph_metrics.json", format_metrics_json(metrics) + "\n");
    out << "n=" << metrics.n << " m=" << metrics.m << " k=" << fixed(metrics.avg_degree, 3)
        << " d=" << fixed(metrics.density, 5) << "\n";
}

void run_durations(const Options& o, RunContext& ctx, std::ostream& out) {
    if (o.visits.empty()) throw ConfigError("--visits is required");
    if (o.baseline_start.empty() || o.baseline_end.empty() || o.recovery_start.empty()) {
        throw ConfigError("--baseline-start, --baseline-end and --recovery-start are required");
    }
    const auto table = read_visits_csv(o.visits);
    const long long b0 = parse_day(o.baseline_start);
    const long long b1 = parse_day(o.baseline_end);
    const long long r0 = parse_day(o.recovery_start);
    const RecoveryCriterion criterion{o.ratio, o.persistence_days, o.ma_halfwidth, o.max_weeks};
    RecoveryDurationTable durations;
    for (std::size_t i = 0; i < table.ids.size(); ++i) {
        try {
            const auto series = make_visit_series(table.daily[i], b0, b1, r0, o.max_weeks);
            durations.ids.push_back(table.ids[i]);
            durations.weeks.push_back(compute_recovery_duration(series, criterion));
        } catch (const DataError& e) {
            throw DataError("unit '" + table.ids[i] + "': " + e.what());
        }
    }
    ctx.write("durations.csv", format_durations_csv(durations));
    out << "durations: " << durations.ids.size() << " units\n";
}

FitProblem load_fit_problem(const Options& o, std::ostream& err) {
    if (o.durations.empty()) throw ConfigError("--durations is required");
    const auto durations = read_durations_csv(o.durations);
    auto graph = load_graph(o.graph, o.graph.geometry.empty() && o.graph.nodes.empty()
                                         ? std::optional<std::vector<std::string>>(durations.ids)
                                         : std::nullopt);
    auto problem = build_fit_problem(std::move(graph), durations, o.schedule.seed_cutoff, o.schedule.schedule());
    for (const auto& w : problem.warnings) err << "warning: " << w << "\n";
    return problem;
}

ordered_json baseline_json(const BaselineStats& stats) {
    return {{"runs", stats.losses.size()}, {"mean", stats.mean}, {"stddev", stats.stddev}};
}

void run_fit(const Options& o, RunContext& ctx, std::ostream& out, std::ostream& err) {
    const auto problem = load_fit_problem(o, err);
    const auto config = o.ga.config(o.common.seed, ctx.threads());
    const auto result = fit_thresholds(problem, config);
    const auto simulated = run_diffusion(problem.graph, result.thresholds, StateVector(problem.num_nodes(), 0),
                                         problem.schedule);

    ctx.write("thresholds.csv", format_thresholds_csv(problem.graph, result.thresholds));
    ctx.write("fit_generations.csv", format_generations_csv(result.ga.history));
    ctx.write("timing/fit_generations.csv", format_generation_times_csv(result.ga.history));
    ctx.write("recovery_curves.csv", format_recovery_curves_csv(problem.empirical, simulated));
    ctx.write("simulated_trajectory.csv", format_trajectory_csv(problem.graph, simulated));
    ctx.write("empirical_trajectory.csv", format_trajectory_csv(problem.graph, problem.empirical));

    ordered_json report;
    report["n"] = problem.num_nodes();
    report["seeds"] = problem.num_seeds();
    report["free_nodes"] = problem.free_nodes.size();
    report["population_size"] = config.population_size;
    report["max_iterations"] = config.max_iterations;
    report["initial_best_loss"] = result.ga.history.front().best_fitness;
    report["final_loss"] = result.final_loss;
    report["max_loss"] = static_cast<long long>(problem.num_nodes()) * problem.schedule.horizon;
    report["recovered_at_horizon"] = recovered_counts(simulated).back();
    if (problem.num_seeds() < problem.num_nodes()) {
        const auto s = threshold_summary(result.thresholds, false);
        report["threshold_summary"] = {{"count", s.count}, {"mean", s.mean}, {"variance", s.variance},
                                       {"variance_kind", "population"}};
    }
    report["warnings"] = problem.warnings;
    report["generations_table"] = "fit_generations.csv";
    if (o.baseline_runs > 0) {
        report["baseline"] = baseline_json(random_baseline(problem, o.baseline_runs, o.common.seed, ctx.threads()));
    }
    ctx.write("fit_report.json", report.dump(2) + "\n");

    double total_seconds = 0.0;
    for (const auto& r : result.ga.history) total_seconds += r.seconds;
    ctx.timing()["fit_seconds"] = total_seconds;
    if (total_seconds > 0.0) {
        const auto perf = performance_index(result.ga.history.front().best_fitness, static_cast<double>(result.final_loss),
                                            result.ga.history.size(), total_seconds);
        ctx.timing()["performance_index"] = {{"loss_descent_per_generation", perf.loss_descent_per_generation},
                                             {"seconds_per_generation", perf.seconds_per_generation},
                                             {"index", perf.index}};
    }
    out << "fit: final loss " << result.final_loss << " (initial best " << result.ga.history.front().best_fitness
        << ", " << problem.free_nodes.size() << " free nodes)\n";
}

void run_baseline(const Options& o, RunContext& ctx, std::ostream& out, std::ostream& err) {
    const auto problem = load_fit_problem(o, err);
    const auto stats = random_baseline(problem, o.runs, o.common.seed, ctx.threads());
    std::string losses = "run,loss\n";
    for (std::size_t r = 0; r < stats.losses.size(); ++r) losses += std::to_string(r) + "," + std::to_string(stats.losses[r]) + "\n";
    ctx.write("baseline_losses.csv", losses);
    ctx.write("baseline.json", baseline_json(stats).dump(2) + "\n");
    out << "baseline: mean " << stats.mean << " stddev " << stats.stddev << " over " << o.runs << " runs\n";
}

void run_multipliers(const Options& o, RunContext& ctx, std::ostream& out) {
    if (o.thresholds.empty()) throw ConfigError("--thresholds is required");
    const auto ids = read_threshold_ids(o.thresholds);
    // With both --edges and --geometry, edges define the graph and the
    // geometry is only annotated for the map export.
    GraphOptions graph_source = o.graph;
    if (!graph_source.edges.empty()) graph_source.geometry.clear();
    auto graph = load_graph(graph_source, ids);
    auto thresholds = read_thresholds_csv(o.thresholds, graph);
    const auto schedule = o.schedule.schedule();

    std::optional<std::vector<NodeIndex>> pool;
    if (o.pool == "unrecovered") {
        const auto natural = run_diffusion(graph, thresholds, StateVector(graph.num_nodes(), 0), schedule);
        pool.emplace();
        for (NodeIndex i = 0; i < graph.num_nodes(); ++i) {
            if (!natural.recovered(schedule.horizon, i)) pool->push_back(i);
        }
    } else if (o.pool != "all") {
        throw ConfigError("--pool must be 'all' or 'unrecovered'");
    }
    const auto sizes = o.sizes.empty() ? default_multiplier_sizes(graph.num_nodes()) : o.sizes;
    std::string geometry_text;
    if (!o.graph.geometry.empty()) geometry_text = csv::read_text(o.graph.geometry);

    std::vector<MultiplierSummaryRow> summary;
    for (const std::size_t size : sizes) {
        const auto problem = make_multiplier_problem(graph, thresholds, size, schedule, pool);
        MultiplierResult result;
        if (o.brute_force) {
            result = to_multiplier_result(problem, brute_force_multipliers(problem, o.enumeration_cap, ctx.threads()));
        } else {
            result = search_multipliers(problem, o.stage2_ga.config(o.common.seed, ctx.threads()));
            const std::string trace = "multipliers_N" + std::to_string(size) + "_generations.csv";
            ctx.write(trace, format_generations_csv(result.history));
            ctx.write("timing/" + trace, format_generation_times_csv(result.history));
        }
        const std::string stem = "multipliers_N" + std::to_string(size);
        ctx.write(stem + ".csv", format_selection_csv(graph, result.members));
        if (!geometry_text.empty()) {
            std::vector<std::string> chosen;
            for (const NodeIndex m : result.members) chosen.push_back(graph.id(m));
            ctx.write(stem + ".geojson", geojson::annotate_features(geometry_text, chosen));
        }
        summary.push_back({size, result.recovered_with, result.recovered_without, result.increment_rate});
        out << "N=" << size << ": recovered " << result.recovered_with << " (without " << result.recovered_without
            << ", increment " << (result.increment_rate ? fixed(*result.increment_rate, 2) + "%" : std::string("n/a"))
            << ")\n";
    }
    ctx.write("multipliers_summary.csv", format_multiplier_summary_csv(summary));
}

void run_analyze(const Options& o, RunContext& ctx, std::ostream& out) {
    if (o.thresholds.empty() || o.attributes.empty()) throw ConfigError("--thresholds and --attributes are required");
    const auto ids = read_threshold_ids(o.thresholds);
    const auto graph = load_edge_list(ids, {});
    const auto thresholds = read_thresholds_csv(o.thresholds, graph);
    const auto attributes = read_attributes_csv(o.attributes);

    ordered_json report;
    const auto summary = threshold_summary(thresholds, o.include_seeds);
    report["threshold_summary"] = {{"count", summary.count},
                                   {"mean", summary.mean},
                                   {"variance", summary.variance},
                                   {"variance_kind", "population"},
                                   {"lower_tertile_boundary", summary.lower_tertile_boundary},
                                   {"upper_tertile_boundary", summary.upper_tertile_boundary},
                                   {"include_seeds", summary.include_seeds}};

    const auto tertiles = tertile_attribute_report(graph, thresholds, attributes, o.include_seeds);
    ctx.write("threshold_tertiles.csv", format_tertile_csv(tertiles));
    ordered_json groups = ordered_json::array();
    for (std::size_t t = 0; t < 3; ++t) groups.push_back(tertiles.groups[t].size());
    report["tertile_sizes"] = groups;
    ordered_json tertile_rows = ordered_json::array();
    for (const auto& row : tertiles.rows) {
        tertile_rows.push_back({{"tertile", row.tertile}, {"attribute", to_string(row.attribute)},
                                {"summary", summary_json(row.summary)}});
    }
    report["tertiles"] = tertile_rows;

    std::unordered_map<std::string, std::size_t> row_of;
    for (std::size_t r = 0; r < attributes.size(); ++r) row_of.emplace(attributes.ids[r], r);
    ordered_json correlations = ordered_json::object();
    for (const Attribute a : all_attributes) {
        std::vector<double> x;
        std::vector<double> y;
        for (NodeIndex i = 0; i < graph.num_nodes(); ++i) {
            if (!o.include_seeds && thresholds.is_seed(i)) continue;
            const auto it = row_of.find(graph.id(i));
            if (it == row_of.end()) continue;
            if (const auto v = attributes.value(a, it->second)) {
                x.push_back(thresholds[i]);
                y.push_back(*v);
            }
        }
        try {
            const auto c = correlate(x, y);
            correlations[to_string(a)] = {{"n", c.n}, {"r", c.r}, {"p_value", c.p_value}};
        } catch (const DataError& e) {
            correlations[to_string(a)] = {{"n", x.size()}, {"error", e.what()}};
        }
    }
    report["threshold_correlations"] = correlations;

    if (!o.multiplier_files.empty()) {
        std::vector<std::pair<std::size_t, std::vector<NodeIndex>>> selections;
        for (const auto& path : o.multiplier_files) {
            std::vector<NodeIndex> members;
            for (const auto& id : read_selection_csv(path)) members.push_back(graph.index_of(id));
            std::sort(members.begin(), members.end());
            selections.emplace_back(members.size(), std::move(members));
        }
        const auto comparison = multiplier_attribute_comparison(graph, selections, attributes);
        ctx.write("multiplier_attributes.csv", format_multiplier_comparison_csv(comparison));
        report["empty_non_multiplier_sizes"] = comparison.empty_non_multiplier;
        ordered_json rows = ordered_json::array();
        for (const auto& row : comparison.rows) {
            rows.push_back({{"N", row.size},
                            {"group", row.multiplier ? "multiplier" : "non_multiplier"},
                            {"attribute", to_string(row.attribute)},
                            {"summary", summary_json(row.summary)}});
        }
        report["multiplier_attributes"] = rows;
    }
    ctx.write("analysis_report.json", report.dump(2) + "\n");
    out << "analyze: threshold mean " << summary.mean << " variance " << summary.variance << " over " << summary.count
        << " nodes\n";
}

void run_synth(Options& o, RunContext& ctx, std::ostream& out) {
    o.synth.graph_kind = parse_graph_kind(o.graph_kind);
    o.synth.rng_seed = o.common.seed;
    o.synth.schedule = o.schedule.schedule();
    const auto instance = generate_instance(o.synth);
    write_instance(instance, o.synth, o.common.out);
    for (const char* name : {"nodes.csv", "edges.csv", "geometry.geojson", "durations.csv", "attributes.csv",
                             "planted_thresholds.csv", "instance.json"}) {
        ctx.record(name);
    }
    out << "synth: " << instance.graph.num_nodes() << " nodes, " << instance.graph.num_edges() << " edges, "
        << instance.planted.seed_count() << " seeds, " << recovered_counts(instance.forward).back()
        << " recovered at horizon\n";
}

}  // namespace

int cli_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Threshold-diffusion recovery modelling: graph building, threshold fitting, multiplier search"};
    app.name("recnet");
    app.require_subcommand(1);
    app.set_config("--config", "", "TOML/INI config file; command-line flags override it");
    app.set_version_flag("--version", RECNET_VERSION);

    Options o;
    auto* build = app.add_subcommand("build-graph", "Build a contiguity graph and report its metrics");
    add_graph(build, o.graph, true);
    add_common(build, o.common);

    auto* dur = app.add_subcommand("durations", "Compute recovery durations from daily visit counts");
    dur->add_option("--visits", o.visits, "Visit CSV (id,day,visits)");
    dur->add_option("--baseline-start", o.baseline_start, "First baseline day (ISO date or integer)");
    dur->add_option("--baseline-end", o.baseline_end, "Last baseline day (inclusive)");
    dur->add_option("--recovery-start", o.recovery_start, "Day 0 of the recovery clock");
    dur->add_option("--ratio", o.ratio, "Recovered level as a fraction of baseline")->capture_default_str();
    dur->add_option("--persistence-days", o.persistence_days, "Consecutive days required")->capture_default_str();
    dur->add_option("--ma-halfwidth", o.ma_halfwidth, "Moving-average half-width (days)")->capture_default_str();
    dur->add_option("--max-weeks", o.max_weeks, "Duration cap (weeks)")->capture_default_str();
    add_common(dur, o.common);

    auto* fit = app.add_subcommand("fit", "Fit node thresholds to recovery durations with the GA");
    add_graph(fit, o.graph, true);
    fit->add_option("--durations", o.durations, "Durations CSV (id,duration_weeks)");
    fit->add_option("--baseline-runs", o.baseline_runs, "Also run a random baseline with this many draws")->capture_default_str();
    add_schedule(fit, o.schedule, true);
    add_ga(fit, o.ga);
    add_common(fit, o.common);

    auto* base = app.add_subcommand("baseline", "Loss of uniformly random thresholds");
    add_graph(base, o.graph, true);
    base->add_option("--durations", o.durations, "Durations CSV (id,duration_weeks)");
    base->add_option("--runs", o.runs, "Random draws")->capture_default_str();
    add_schedule(base, o.schedule, true);
    add_common(base, o.common);

    auto* mult = app.add_subcommand("multipliers", "Search recovery multiplier sets for each size N");
    add_graph(mult, o.graph, false);
    mult->add_option("--thresholds", o.thresholds, "Thresholds CSV (id,threshold,is_seed)");
    mult->add_option("--N", o.sizes, "Multiplier sizes (default 1%, 3%, 5%, 10% of n)")->delimiter(',');
    mult->add_option("--pool", o.pool, "Candidate pool: all or unrecovered")->capture_default_str();
    mult->add_flag("--brute-force", o.brute_force, "Enumerate every subset instead of running the GA");
    mult->add_option("--enumeration-cap", o.enumeration_cap, "Largest subset count brute force will enumerate")
        ->capture_default_str();
    add_schedule(mult, o.schedule, false);
    add_ga(mult, o.stage2_ga);
    add_common(mult, o.common);

    auto* analyze = app.add_subcommand("analyze", "Threshold statistics, tertiles and multiplier attributes");
    analyze->add_option("--thresholds", o.thresholds, "Thresholds CSV (id,threshold,is_seed)");
    analyze->add_option("--attributes", o.attributes, "Attribute CSV");
    analyze->add_option("--multipliers", o.multiplier_files, "Selection CSVs (id,selected)");
    analyze->add_flag("--include-seeds", o.include_seeds, "Include seed nodes in threshold statistics");
    add_common(analyze, o.common);

    auto* synth = app.add_subcommand("synth", "Generate a synthetic instance with planted thresholds");
    synth->add_option("--n", o.synth.n, "Node count")->capture_default_str();
    synth->add_option("--graph-kind", o.graph_kind, "grid or perturbed_grid")->capture_default_str();
    synth->add_option("--deletion-fraction", o.synth.deletion_fraction, "Edges removed in a perturbed grid")->capture_default_str();
    synth->add_option("--seed-fraction", o.synth.seed_fraction, "Share of nodes planted at threshold 0")->capture_default_str();
    synth->add_option("--tau-lo", o.synth.tau_lo, "Lower planted threshold bound")->capture_default_str();
    synth->add_option("--tau-hi", o.synth.tau_hi, "Upper planted threshold bound")->capture_default_str();
    synth->add_option("--coupling", o.synth.attribute_coupling, "Threshold-income latent correlation")->capture_default_str();
    synth->add_flag("--allow-unrecovered", o.synth.allow_unrecovered, "Keep instances with nodes unrecovered at the horizon");
    add_schedule(synth, o.schedule, false);
    add_common(synth, o.common);

    for (auto* sub : {build, dur, fit, base, mult, analyze, synth}) sub->configurable();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return static_cast<int>(ExitCode::success);
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return static_cast<int>(ExitCode::success);
    } catch (const CLI::CallForVersion&) {
        out << RECNET_VERSION << "\n";
        return static_cast<int>(ExitCode::success);
    } catch (const CLI::ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return static_cast<int>(ExitCode::config);
    } catch (const CLI::FileError& e) {
        err << "config error: " << e.what() << "\n";
        return static_cast<int>(ExitCode::config);
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n" << "run 'recnet --help' for usage\n";
        return static_cast<int>(ExitCode::usage);
    }

    CLI::App* chosen = app.get_subcommands().front();
    try {
        RunContext ctx(chosen->get_name(), o.common, chosen->config_to_str(true, false));
        if (chosen == build) run_build_graph(o, ctx, out);
        else if (chosen == dur) run_durations(o, ctx, out);
        else if (chosen == fit) run_fit(o, ctx, out, err);
        else if (chosen == base) run_baseline(o, ctx, out, err);
        else if (chosen == mult) run_multipliers(o, ctx, out);
        else if (chosen == analyze) run_analyze(o, ctx, out);
        else if (chosen == synth) run_synth(o, ctx, out);
        ctx.finish();
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return static_cast<int>(ExitCode::config);
    } catch (const DataError& e) {
        err << "data error: " << e.what() << "\n";
        return static_cast<int>(ExitCode::data);
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return static_cast<int>(ExitCode::internal);
    }
    return static_cast<int>(ExitCode::success);
}

int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv;
    argv.push_back("recnet");
    for (const auto& a : args) argv.push_back(a.c_str());
    return cli_dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace recnet
