#include "recnet/threshold_fit.hpp"

#include "recnet/csv.hpp"
#include "recnet/error.hpp"
#include "recnet/parallel.hpp"

#include <cmath>
#include <numeric>

namespace recnet {

FitProblem build_fit_problem(SpatialGraph graph, std::span<const double> durations, double seed_cutoff_weeks,
                             const DiffusionSchedule& schedule) {
    schedule.validate();
    if (durations.size() != graph.num_nodes()) {
        throw DataError("durations cover " + std::to_string(durations.size()) + " of " +
                        std::to_string(graph.num_nodes()) + " nodes");
    }
    FitProblem p;
    p.schedule = schedule;
    p.empirical = durations_to_trajectory(durations, schedule.horizon);
    p.seed_mask.assign(graph.num_nodes(), false);
    std::size_t off_schedule = 0;
    for (NodeIndex i = 0; i < graph.num_nodes(); ++i) {
        if (durations[i] < seed_cutoff_weeks) {
            p.seed_mask[i] = true;
            if (std::ceil(durations[i]) != schedule.first_update_week) ++off_schedule;
        } else {
            p.free_nodes.push_back(i);
        }
    }
    if (p.free_nodes.size() == graph.num_nodes()) {
        p.warnings.push_back("no node recovers before the seed cutoff; the simulation can never recover anything");
    }
    if (off_schedule > 0) {
        p.warnings.push_back(std::to_string(off_schedule) +
                             " seed node(s) recover empirically in a week other than the first update week");
    }
    p.graph = std::move(graph);
    return p;
}

FitProblem build_fit_problem(SpatialGraph graph, const RecoveryDurationTable& durations, double seed_cutoff_weeks,
                             const DiffusionSchedule& schedule) {
    durations.validate(static_cast<double>(schedule.horizon));
    const auto aligned = durations.aligned_to(graph);
    auto p = build_fit_problem(std::move(graph), aligned, seed_cutoff_weeks, schedule);
    if (durations.ids.size() > p.num_nodes()) {
        p.warnings.push_back(std::to_string(durations.ids.size() - p.num_nodes()) +
                             " duration row(s) name nodes outside the graph and were ignored");
    }
    return p;
}

ThresholdVector assemble_thresholds(const FitProblem& problem, std::span<const double> chromosome) {
    if (chromosome.size() != problem.free_nodes.size()) {
        throw DataError("chromosome length " + std::to_string(chromosome.size()) + " does not match " +
                        std::to_string(problem.free_nodes.size()) + " free nodes");
    }
    std::vector<double> values(problem.num_nodes(), 0.0);
    for (std::size_t k = 0; k < chromosome.size(); ++k) values[problem.free_nodes[k]] = chromosome[k];
    return ThresholdVector(std::move(values), problem.seed_mask);
}

long long fit_fitness(std::span<const double> chromosome, const FitProblem& problem) {
    const ThresholdVector thresholds = assemble_thresholds(problem, chromosome);
    const SpatialGraph& g = problem.graph;
    const std::size_t n = g.num_nodes();

    // Recovered-neighbour counts are updated incrementally; flips within a
    // week are decided on the previous week's counts.
    StateVector state(n, 0);
    std::vector<std::size_t> recovered_nbrs(n, 0);
    std::vector<NodeIndex> flips;
    long long loss = 0;
    for (int t = 1; t <= problem.schedule.horizon; ++t) {
        if (t >= problem.schedule.first_update_week) {
            flips.clear();
            for (NodeIndex i = 0; i < n; ++i) {
                if (state[i]) continue;
                const std::size_t deg = g.degree(i);
                const double fraction =
                    deg == 0 ? 0.0 : static_cast<double>(recovered_nbrs[i]) / static_cast<double>(deg);
                if (fraction >= thresholds[i]) flips.push_back(i);
            }
            for (const NodeIndex i : flips) {
                state[i] = 1;
                for (const NodeIndex j : g.neighbors(i)) ++recovered_nbrs[j];
            }
        }
        const auto& observed = problem.empirical.state(t);
        for (NodeIndex i = 0; i < n; ++i) loss += (observed[i] != state[i]);
    }
    return loss;
}

long long fit_loss_by_resimulation(const ThresholdVector& thresholds, const FitProblem& problem) {
    const StateVector initial(problem.num_nodes(), 0);
    return zero_one_loss(problem.empirical, run_diffusion(problem.graph, thresholds, initial, problem.schedule));
}

FitResult fit_thresholds(const FitProblem& problem, const GaConfig& config) {
    config.validate();
    FitResult result;
    if (problem.free_nodes.empty()) {
        result.thresholds = assemble_thresholds(problem, {});
        result.final_loss = fit_loss_by_resimulation(result.thresholds, problem);
        result.ga.best_fitness = static_cast<double>(result.final_loss);
        result.ga.history.push_back({0, result.ga.best_fitness, 0.0});
        result.ga.initial_fitness.assign(config.population_size, result.ga.best_fitness);
        return result;
    }
    const RealVectorEncoding encoding(problem.free_nodes.size());
    auto fitness = [&problem](const std::vector<double>& chromosome) { return fit_fitness(chromosome, problem); };
    result.ga = run_ga(fitness, Direction::minimize, encoding, config);
    result.thresholds = assemble_thresholds(problem, result.ga.best);
    result.final_loss = fit_loss_by_resimulation(result.thresholds, problem);
    if (static_cast<double>(result.final_loss) != result.ga.best_fitness) {
        throw Error("internal: re-simulated loss disagrees with GA fitness");
    }
    return result;
}

BaselineStats random_baseline(const FitProblem& problem, std::size_t runs, std::uint64_t rng_seed, unsigned threads) {
    if (runs < 1) throw ConfigError("baseline needs at least one run");
    BaselineStats stats;
    stats.losses.assign(runs, 0);
    const std::size_t k = problem.free_nodes.size();
    parallel_for(runs, resolve_threads(threads), [&](std::size_t r) {
        std::seed_seq seq{static_cast<std::uint32_t>(rng_seed), static_cast<std::uint32_t>(rng_seed >> 32),
                          static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(r >> 32)};
        Rng rng(seq);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        std::vector<double> chromosome(k);
        for (auto& x : chromosome) x = unit(rng);
        stats.losses[r] = fit_fitness(chromosome, problem);
    });
    const double n = static_cast<double>(runs);
    double sum = 0.0;
    for (const auto loss : stats.losses) sum += static_cast<double>(loss);
    stats.mean = sum / n;
    if (runs > 1) {
        double ss = 0.0;
        for (const auto loss : stats.losses) ss += (static_cast<double>(loss) - stats.mean) * (static_cast<double>(loss) - stats.mean);
        stats.stddev = std::sqrt(ss / (n - 1.0));
    }
    return stats;
}

std::string format_thresholds_csv(const SpatialGraph& g, const ThresholdVector& thresholds) {
    if (thresholds.size() != g.num_nodes()) throw DataError("threshold vector does not match graph");
    std::string out = "id,threshold,is_seed\n";
    for (NodeIndex i = 0; i < g.num_nodes(); ++i) {
        out += csv::escape(g.id(i)) + "," + csv::format_double(thresholds[i]) + "," +
               (thresholds.is_seed(i) ? "1" : "0") + "\n";
    }
    return out;
}

ThresholdVector read_thresholds_csv(const std::string& path, const SpatialGraph& g) {
    const auto table = csv::read_file(path);
    const std::size_t id_col = table.column("id");
    const std::size_t tau_col = table.column("threshold");
    const std::size_t seed_col = table.column("is_seed");
    std::vector<double> values(g.num_nodes(), 0.0);
    std::vector<bool> seeds(g.num_nodes(), false);
    std::vector<bool> seen(g.num_nodes(), false);
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const std::string where = path + ":" + std::to_string(table.lines[r]);
        const auto idx = g.find(row[id_col]);
        if (!idx) throw DataError(where + ": unknown node '" + row[id_col] + "'");
        if (seen[*idx]) throw DataError(where + ": repeated node '" + row[id_col] + "'");
        seen[*idx] = true;
        values[*idx] = csv::to_double(row[tau_col], where);
        const auto& flag = row[seed_col];
        if (flag != "0" && flag != "1") throw DataError(where + ": is_seed must be 0 or 1");
        seeds[*idx] = flag == "1";
    }
    for (NodeIndex i = 0; i < g.num_nodes(); ++i) {
        if (!seen[i]) throw DataError(path + ": no threshold for node '" + g.id(i) + "'");
    }
    return ThresholdVector(std::move(values), std::move(seeds));
}

std::vector<std::string> read_threshold_ids(const std::string& path) {
    const auto table = csv::read_file(path);
    const std::size_t id_col = table.column("id");
    std::vector<std::string> ids;
    for (const auto& row : table.rows) ids.push_back(row[id_col]);
    return ids;
}

}  // namespace recnet
