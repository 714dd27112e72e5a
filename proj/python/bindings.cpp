#include "recnet/analysis.hpp"
#include "recnet/cli.hpp"
#include "recnet/diffusion.hpp"
#include "recnet/empirical.hpp"
#include "recnet/error.hpp"
#include "recnet/multipliers.hpp"
#include "recnet/spatial_graph.hpp"
#include "recnet/synthetic.hpp"
#include "recnet/threshold_fit.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace recnet;

namespace {

GaConfig make_config(std::size_t max_iterations, std::size_t population, std::uint64_t seed, unsigned threads) {
    GaConfig c;
    c.max_iterations = max_iterations;
    c.population_size = population;
    c.rng_seed = seed;
    c.threads = threads;
    return c;
}

std::vector<std::vector<int>> weeks_of(const Trajectory& t) {
    std::vector<std::vector<int>> out;
    for (int w = 0; w <= t.horizon(); ++w) out.emplace_back(t.state(w).begin(), t.state(w).end());
    return out;
}

Trajectory trajectory_from(const std::vector<std::vector<int>>& weeks) {
    std::vector<StateVector> states;
    for (const auto& w : weeks) states.emplace_back(w.begin(), w.end());
    return Trajectory(std::move(states));
}

ThresholdVector thresholds_from(const std::vector<double>& values, std::vector<bool> seeds) {
    if (seeds.empty()) seeds.assign(values.size(), false);
    return ThresholdVector(values, std::move(seeds));
}

std::vector<std::string> ids_of(const SpatialGraph& g, const std::vector<NodeIndex>& members) {
    std::vector<std::string> out;
    for (auto i : members) out.push_back(g.id(i));
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Threshold diffusion of post-disaster recovery on spatial networks";

    auto base = py::register_exception<Error>(m, "RecnetError", PyExc_RuntimeError);
    py::register_exception<DataError>(m, "DataError", base.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());

    py::class_<SpatialGraph>(m, "SpatialGraph")
        .def_static(
            "from_edges",
            [](std::vector<std::string> ids, const std::vector<std::pair<std::string, std::string>>& edges) {
                return load_edge_list(std::move(ids), edges);
            },
            py::arg("ids"), py::arg("edges"))
        .def_static(
            "read_csv",
            [](const std::string& path, std::optional<std::vector<std::string>> ids) {
                return read_edge_list_csv(path, ids);
            },
            py::arg("path"), py::arg("ids") = py::none())
        .def_property_readonly("num_nodes", &SpatialGraph::num_nodes)
        .def_property_readonly("num_edges", &SpatialGraph::num_edges)
        .def_property_readonly("ids", &SpatialGraph::ids)
        .def("neighbors",
             [](const SpatialGraph& g, const std::string& id) {
                 std::vector<std::string> out;
                 for (auto j : g.neighbors(g.index_of(id))) out.push_back(g.id(j));
                 return out;
             })
        .def("edges", &SpatialGraph::edge_id_pairs)
        .def("__len__", &SpatialGraph::num_nodes);

    m.def(
        "graph_metrics",
        [](const SpatialGraph& g) {
            const auto r = graph_metrics(g);
            return py::dict(py::arg("n") = r.n, py::arg("m") = r.m, py::arg("avg_degree") = r.avg_degree,
                            py::arg("density") = r.density, py::arg("degree_histogram") = r.degree_histogram);
        },
        py::arg("graph"));

    m.def(
        "run_diffusion",
        [](const SpatialGraph& g, const std::vector<double>& thresholds, std::vector<int> initial, int horizon,
           int first_update_week) {
            if (initial.empty()) initial.assign(g.num_nodes(), 0);
            const StateVector init(initial.begin(), initial.end());
            return weeks_of(run_diffusion(g, std::span<const double>(thresholds), init, {horizon, first_update_week}));
        },
        py::arg("graph"), py::arg("thresholds"), py::arg("initial") = std::vector<int>{}, py::arg("horizon") = 14,
        py::arg("first_update_week") = 3);

    m.def(
        "durations_to_trajectory",
        [](const std::vector<double>& d, int horizon) { return weeks_of(durations_to_trajectory(d, horizon)); },
        py::arg("durations"), py::arg("horizon") = 14);

    m.def(
        "zero_one_loss",
        [](const std::vector<std::vector<int>>& a, const std::vector<std::vector<int>>& b) {
            return zero_one_loss(trajectory_from(a), trajectory_from(b));
        },
        py::arg("empirical"), py::arg("simulated"));

    m.def(
        "weekly_difference",
        [](const std::vector<std::vector<int>>& a, const std::vector<std::vector<int>>& b) {
            const auto d = weekly_difference(trajectory_from(a), trajectory_from(b));
            return py::make_tuple(d.difference, d.cumulative);
        },
        py::arg("empirical"), py::arg("simulated"));

    m.def(
        "recovery_duration",
        [](const std::vector<double>& visits, int baseline_start, int baseline_end, int recovery_start,
           int ma_halfwidth) {
            VisitSeries s;
            s.visits = visits;
            s.baseline_first = baseline_start;
            s.baseline_last = baseline_end;
            s.recovery_start = recovery_start;
            RecoveryCriterion c;
            c.ma_halfwidth = ma_halfwidth;
            return compute_recovery_duration(s, c);
        },
        py::arg("visits"), py::arg("baseline_start"), py::arg("baseline_end"), py::arg("recovery_start"),
        py::arg("ma_halfwidth") = 3);

    m.def(
        "fit_thresholds",
        [](const SpatialGraph& g, const std::vector<double>& durations, std::size_t max_iterations,
           std::size_t population, std::uint64_t seed, unsigned threads) {
            const auto problem = build_fit_problem(g, std::span<const double>(durations));
            FitResult fit;
            {
                py::gil_scoped_release release;
                fit = fit_thresholds(problem, make_config(max_iterations, population, seed, threads));
            }
            const auto values = fit.thresholds.values();
            return py::dict(py::arg("thresholds") = std::vector<double>(values.begin(), values.end()),
                            py::arg("seeds") = fit.thresholds.seed_mask(), py::arg("loss") = fit.final_loss,
                            py::arg("warnings") = problem.warnings);
        },
        py::arg("graph"), py::arg("durations"), py::arg("max_iterations") = 100, py::arg("population") = 10,
        py::arg("seed") = 0, py::arg("threads") = 1);

    m.def(
        "search_multipliers",
        [](const SpatialGraph& g, const std::vector<double>& thresholds, std::vector<bool> seeds, std::size_t size,
           bool brute_force, std::size_t max_iterations, std::uint64_t seed, unsigned threads) {
            const auto problem = make_multiplier_problem(g, thresholds_from(thresholds, std::move(seeds)), size);
            MultiplierResult r;
            {
                py::gil_scoped_release release;
                r = brute_force ? to_multiplier_result(problem, brute_force_multipliers(problem, 1'000'000, threads))
                                : search_multipliers(problem, make_config(max_iterations, 10, seed, threads));
            }
            return py::dict(py::arg("members") = ids_of(g, r.members), py::arg("recovered_with") = r.recovered_with,
                            py::arg("recovered_without") = r.recovered_without,
                            py::arg("increment_rate") = r.increment_rate);
        },
        py::arg("graph"), py::arg("thresholds"), py::arg("seeds") = std::vector<bool>{}, py::arg("size") = 1,
        py::arg("brute_force") = false, py::arg("max_iterations") = 100, py::arg("seed") = 0, py::arg("threads") = 1);

    m.def("increment_rate", &increment_rate, py::arg("recovered_with"), py::arg("recovered_without"));

    m.def(
        "correlate",
        [](const std::vector<double>& x, const std::vector<double>& y) {
            const auto c = correlate(x, y);
            return py::make_tuple(c.r, c.p_value);
        },
        py::arg("x"), py::arg("y"));

    m.def(
        "synthesize",
        [](std::size_t n, const std::string& graph_kind, double seed_fraction, double tau_lo, double tau_hi,
           bool allow_unrecovered, std::uint64_t seed) {
            SynthSpec spec;
            spec.n = n;
            spec.graph_kind = parse_graph_kind(graph_kind);
            spec.seed_fraction = seed_fraction;
            spec.tau_lo = tau_lo;
            spec.tau_hi = tau_hi;
            spec.allow_unrecovered = allow_unrecovered;
            spec.rng_seed = seed;
            auto inst = generate_instance(spec);
            const auto planted = inst.planted.values();
            return py::dict(py::arg("graph") = inst.graph, py::arg("durations") = inst.durations.weeks,
                            py::arg("thresholds") = std::vector<double>(planted.begin(), planted.end()),
                            py::arg("seeds") = inst.planted.seed_mask());
        },
        py::arg("n") = 50, py::arg("graph_kind") = "grid", py::arg("seed_fraction") = 0.2, py::arg("tau_lo") = 0.1,
        py::arg("tau_hi") = 0.6, py::arg("allow_unrecovered") = false, py::arg("seed") = 1);

    m.def(
        "cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            int code;
            {
                py::gil_scoped_release release;
                code = cli_dispatch(args, out, err);
            }
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"));
}
