#include "recnet/synthetic.hpp"

#include "recnet/csv.hpp"
#include "recnet/error.hpp"
#include "recnet/ga.hpp"
#include "recnet/geojson.hpp"
#include "recnet/threshold_fit.hpp"

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <iterator>
#include <numeric>
#include <queue>

namespace recnet {

const char* to_string(GraphKind kind) {
    return kind == GraphKind::grid ? "grid" : "perturbed_grid";
}

GraphKind parse_graph_kind(const std::string& text) {
    if (text == "grid") return GraphKind::grid;
    if (text == "perturbed_grid") return GraphKind::perturbed_grid;
    throw ConfigError("unknown graph kind '" + text + "' (expected grid or perturbed_grid)");
}

void SynthSpec::validate() const {
    schedule.validate();
    if (n < 1) throw ConfigError("synthetic instance needs at least one node");
    if (!(deletion_fraction >= 0.0 && deletion_fraction < 1.0)) throw ConfigError("deletion fraction must lie in [0, 1)");
    if (!(seed_fraction >= 0.0 && seed_fraction <= 1.0)) throw ConfigError("seed fraction must lie in [0, 1]");
    if (!(tau_lo > 0.0 && tau_lo <= tau_hi && tau_hi <= 1.0)) throw ConfigError("threshold range must satisfy 0 < lo <= hi <= 1");
    if (!(attribute_coupling >= -1.0 && attribute_coupling <= 1.0)) throw ConfigError("attribute coupling must lie in [-1, 1]");
    if (std::llround(seed_fraction * static_cast<double>(n)) < 1) {
        throw ConfigError("seed fraction yields no seed node; nothing would ever recover");
    }
    if (max_retries < 1) throw ConfigError("retry cap must be at least 1");
}

namespace {

bool connected(const SpatialGraph& g) {
    if (g.num_nodes() == 0) return true;
    std::vector<bool> seen(g.num_nodes(), false);
    std::queue<NodeIndex> frontier;
    frontier.push(0);
    seen[0] = true;
    std::size_t reached = 1;
    while (!frontier.empty()) {
        const NodeIndex v = frontier.front();
        frontier.pop();
        for (const NodeIndex w : g.neighbors(v)) {
            if (!seen[w]) {
                seen[w] = true;
                ++reached;
                frontier.push(w);
            }
        }
    }
    return reached == g.num_nodes();
}

double normal_cdf(double z) {
    return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

}  // namespace

SyntheticInstance generate_instance(const SynthSpec& spec) {
    spec.validate();
    Rng rng(spec.rng_seed);
    SyntheticInstance inst;

    inst.rows = 1;
    for (std::size_t r = 1; r * r <= spec.n; ++r) {
        if (spec.n % r == 0) inst.rows = r;
    }
    inst.cols = spec.n / inst.rows;
    const std::size_t width = std::to_string(spec.n - 1).size();
    for (std::size_t r = 0; r < inst.rows; ++r) {
        for (std::size_t c = 0; c < inst.cols; ++c) {
            std::string id = std::to_string(r * inst.cols + c);
            id.insert(0, width - id.size(), '0');
            const double x = static_cast<double>(c);
            const double y = static_cast<double>(r);
            Polygon square{{{{x, y}, {x + 1, y}, {x + 1, y + 1}, {x, y + 1}, {x, y}}}};
            inst.units.push_back({"u" + id, std::move(square)});
        }
    }
    inst.graph = build_contiguity_graph(inst.units, ContiguityRule{ContiguityKind::queen, 0.0});

    if (spec.graph_kind == GraphKind::perturbed_grid) {
        const auto& edges = inst.graph.edges();
        const auto remove = static_cast<std::size_t>(std::floor(spec.deletion_fraction * static_cast<double>(edges.size())));
        bool done = false;
        for (std::size_t attempt = 0; attempt < spec.max_retries && !done; ++attempt) {
            std::vector<std::size_t> order(edges.size());
            std::iota(order.begin(), order.end(), std::size_t{0});
            std::vector<std::size_t> dropped;
            std::sample(order.begin(), order.end(), std::back_inserter(dropped), static_cast<std::ptrdiff_t>(remove), rng);
            std::vector<std::pair<NodeIndex, NodeIndex>> kept;
            std::size_t d = 0;
            for (std::size_t e = 0; e < edges.size(); ++e) {
                if (d < dropped.size() && dropped[d] == e) {
                    ++d;
                    continue;
                }
                kept.push_back(edges[e]);
            }
            auto candidate = graph_from_indices(inst.graph.ids(), std::move(kept));
            if (connected(candidate)) {
                inst.graph = std::move(candidate);
                done = true;
            }
        }
        if (!done) throw DataError("could not draw a connected perturbed grid within the retry cap");
    }

    const std::size_t n = spec.n;
    const auto seed_count = static_cast<std::size_t>(std::llround(spec.seed_fraction * static_cast<double>(n)));
    std::vector<NodeIndex> all(n);
    std::iota(all.begin(), all.end(), NodeIndex{0});
    std::vector<NodeIndex> seeds;
    std::sample(all.begin(), all.end(), std::back_inserter(seeds), static_cast<std::ptrdiff_t>(seed_count), rng);
    std::vector<bool> seed_mask(n, false);
    for (const NodeIndex s : seeds) seed_mask[s] = true;

    std::uniform_real_distribution<double> tau_dist(spec.tau_lo, spec.tau_hi);
    const StateVector all_affected(n, 0);
    bool accepted = false;
    for (std::size_t attempt = 0; attempt < spec.max_retries && !accepted; ++attempt) {
        std::vector<double> tau(n, 0.0);
        for (NodeIndex i = 0; i < n; ++i) {
            if (!seed_mask[i]) tau[i] = tau_dist(rng);
        }
        inst.planted = ThresholdVector(std::move(tau), seed_mask);
        inst.forward = run_diffusion(inst.graph, inst.planted, all_affected, spec.schedule);
        accepted = spec.allow_unrecovered || recovered_counts(inst.forward).back() == n;
    }
    if (!accepted) {
        throw ConfigError("planted thresholds never recovered every node by the horizon; raise the seed fraction, "
                          "lower the threshold range, or allow unrecovered nodes");
    }

    const double horizon = static_cast<double>(spec.schedule.horizon);
    inst.durations.ids = inst.graph.ids();
    for (NodeIndex i = 0; i < n; ++i) {
        if (seed_mask[i]) {
            inst.durations.weeks.push_back(static_cast<double>(spec.schedule.first_update_week) - 0.5);
        } else if (const auto week = inst.forward.recovery_week(i)) {
            inst.durations.weeks.push_back(static_cast<double>(*week));
        } else {
            inst.durations.weeks.push_back(horizon);
        }
    }

    // Attributes: a latent score mixing standardised thresholds with noise.
    const auto tau = inst.planted.values();
    const double mean = std::accumulate(tau.begin(), tau.end(), 0.0) / static_cast<double>(n);
    double ss = 0.0;
    for (const double t : tau) ss += (t - mean) * (t - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n));
    const double c = spec.attribute_coupling;
    const double noise_weight = std::sqrt(std::max(0.0, 1.0 - c * c));
    std::normal_distribution<double> noise(0.0, 1.0);
    std::uniform_real_distribution<double> flood(0.0, 1.0);
    inst.attributes.ids = inst.graph.ids();
    for (NodeIndex i = 0; i < n; ++i) {
        const double u = sd > 0.0 ? (tau[i] - mean) / sd : 0.0;
        const double z = c * u + noise_weight * noise(rng);
        inst.attributes.per_capita_income.push_back(15000.0 + 45000.0 * normal_cdf(z));
        inst.attributes.median_household_income.push_back(35000.0 + 90000.0 * normal_cdf(z));
        inst.attributes.minority_pct.push_back(100.0 * normal_cdf(-z));
        inst.attributes.flood_extent.emplace_back(flood(rng));
    }
    return inst;
}

void write_instance(const SyntheticInstance& instance, const SynthSpec& spec, const std::string& dir) {
    namespace fs = std::filesystem;
    const fs::path root(dir);
    std::string nodes = "id\n";
    for (const auto& id : instance.graph.ids()) nodes += csv::escape(id) + "\n";
    csv::write_atomic(root / "nodes.csv", nodes);
    csv::write_atomic(root / "edges.csv", format_edge_list_csv(instance.graph));
    csv::write_atomic(root / "geometry.geojson", geojson::format_feature_collection(instance.units));
    csv::write_atomic(root / "durations.csv", format_durations_csv(instance.durations));
    csv::write_atomic(root / "attributes.csv", format_attributes_csv(instance.attributes));
    csv::write_atomic(root / "planted_thresholds.csv", format_thresholds_csv(instance.graph, instance.planted));

    nlohmann::ordered_json manifest;
    manifest["spec"] = {{"n", spec.n},
                        {"graph_kind", to_string(spec.graph_kind)},
                        {"deletion_fraction", spec.deletion_fraction},
                        {"seed_fraction", spec.seed_fraction},
                        {"tau_lo", spec.tau_lo},
                        {"tau_hi", spec.tau_hi},
                        {"attribute_coupling", spec.attribute_coupling},
                        {"rng_seed", spec.rng_seed},
                        {"allow_unrecovered", spec.allow_unrecovered},
                        {"horizon", spec.schedule.horizon},
                        {"first_update_week", spec.schedule.first_update_week}};
    manifest["grid"] = {{"rows", instance.rows}, {"cols", instance.cols}};
    manifest["n"] = instance.graph.num_nodes();
    manifest["m"] = instance.graph.num_edges();
    manifest["seeds"] = instance.planted.seed_count();
    manifest["recovered_at_horizon"] = recovered_counts(instance.forward).back();
    nlohmann::ordered_json planted = nlohmann::ordered_json::object();
    for (NodeIndex i = 0; i < instance.graph.num_nodes(); ++i) planted[instance.graph.id(i)] = instance.planted[i];
    manifest["planted_thresholds"] = std::move(planted);
    csv::write_atomic(root / "instance.json", manifest.dump(2) + "\n");
}

}  // namespace recnet
