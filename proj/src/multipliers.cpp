#include "recnet/multipliers.hpp"

#include "recnet/csv.hpp"
#include "recnet/error.hpp"
#include "recnet/parallel.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace recnet {

void MultiplierProblem::validate() const {
    schedule.validate();
    if (thresholds.size() != graph.num_nodes()) throw DataError("thresholds do not match the graph");
    if (!std::is_sorted(candidate_pool.begin(), candidate_pool.end()) ||
        std::adjacent_find(candidate_pool.begin(), candidate_pool.end()) != candidate_pool.end()) {
        throw ConfigError("candidate pool must be sorted and free of repeats");
    }
    if (!candidate_pool.empty() && candidate_pool.back() >= graph.num_nodes()) {
        throw ConfigError("candidate pool references a node outside the graph");
    }
    if (size < 1 || size > candidate_pool.size()) {
        throw ConfigError("multiplier count " + std::to_string(size) + " must lie in [1, " +
                          std::to_string(candidate_pool.size()) + "]");
    }
}

MultiplierProblem make_multiplier_problem(SpatialGraph graph, ThresholdVector thresholds, std::size_t size,
                                          const DiffusionSchedule& schedule,
                                          std::optional<std::vector<NodeIndex>> pool) {
    MultiplierProblem p;
    if (pool) {
        p.candidate_pool = std::move(*pool);
        std::sort(p.candidate_pool.begin(), p.candidate_pool.end());
    } else {
        p.candidate_pool.resize(graph.num_nodes());
        std::iota(p.candidate_pool.begin(), p.candidate_pool.end(), NodeIndex{0});
    }
    p.graph = std::move(graph);
    p.thresholds = std::move(thresholds);
    p.schedule = schedule;
    p.size = size;
    p.validate();
    return p;
}

namespace {

std::size_t recovered_at_horizon(const MultiplierProblem& problem, const StateVector& initial) {
    const auto trajectory = run_diffusion(problem.graph, problem.thresholds, initial, problem.schedule);
    return recovered_counts(trajectory).back();
}

}  // namespace

std::size_t multiplier_objective(std::span<const NodeIndex> members, const MultiplierProblem& problem) {
    if (members.size() != problem.size) {
        throw DataError("multiplier set has " + std::to_string(members.size()) + " members, expected " +
                        std::to_string(problem.size));
    }
    StateVector initial(problem.graph.num_nodes(), 0);
    for (const NodeIndex m : members) {
        if (!std::binary_search(problem.candidate_pool.begin(), problem.candidate_pool.end(), m)) {
            throw DataError("node " + std::to_string(m) + " is not in the candidate pool");
        }
        if (initial[m]) throw DataError("multiplier set repeats '" + problem.graph.id(m) + "'");
        initial[m] = 1;
    }
    return recovered_at_horizon(problem, initial);
}

std::size_t natural_recovered(const MultiplierProblem& problem) {
    return recovered_at_horizon(problem, StateVector(problem.graph.num_nodes(), 0));
}

double increment_rate(std::size_t recovered_with, std::size_t recovered_without) {
    if (recovered_without == 0) throw DataError("increment rate undefined: nothing recovers without multipliers");
    return 100.0 * (static_cast<double>(recovered_with) - static_cast<double>(recovered_without)) /
           static_cast<double>(recovered_without);
}

namespace {

void fill_baseline(const MultiplierProblem& problem, MultiplierResult& result) {
    result.recovered_without = natural_recovered(problem);
    if (result.recovered_without > 0) result.increment_rate = increment_rate(result.recovered_with, result.recovered_without);
}

}  // namespace

MultiplierResult search_multipliers(const MultiplierProblem& problem, const GaConfig& config) {
    problem.validate();
    const SubsetEncoding encoding(problem.candidate_pool, problem.size);
    auto fitness = [&problem](const std::vector<NodeIndex>& members) {
        return static_cast<double>(multiplier_objective(members, problem));
    };
    auto ga = run_ga(fitness, Direction::maximize, encoding, config);
    MultiplierResult result;
    result.members = std::move(ga.best);
    result.recovered_with = multiplier_objective(result.members, problem);
    result.history = std::move(ga.history);
    fill_baseline(problem, result);
    return result;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t value = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        // value * (n - k + i) / i is exact at every step.
        const std::uint64_t factor = n - k + i;
        const std::uint64_t g = std::gcd(value, i);
        const std::uint64_t reduced_value = value / g;
        const std::uint64_t reduced_i = i / g;
        const std::uint64_t reduced_factor = factor / reduced_i;
        if (reduced_factor != 0 && reduced_value > std::numeric_limits<std::uint64_t>::max() / reduced_factor) {
            return std::numeric_limits<std::uint64_t>::max();
        }
        value = reduced_value * reduced_factor;
    }
    return value;
}

BruteForceResult brute_force_multipliers(const MultiplierProblem& problem, std::uint64_t enumeration_cap,
                                         unsigned threads) {
    problem.validate();
    const std::size_t pool_size = problem.candidate_pool.size();
    const std::size_t k = problem.size;
    const std::uint64_t total = binomial(pool_size, k);
    if (total > enumeration_cap) {
        throw ConfigError("brute force would enumerate " + std::to_string(total) + " subsets (cap " +
                          std::to_string(enumeration_cap) + ")");
    }
    const unsigned workers = resolve_threads(threads);

    BruteForceResult best;
    bool have_best = false;
    std::vector<std::size_t> positions(k);
    std::iota(positions.begin(), positions.end(), std::size_t{0});
    bool exhausted = false;
    constexpr std::size_t batch_size = 4096;
    std::vector<std::vector<NodeIndex>> batch;
    std::vector<std::size_t> scores;
    while (!exhausted) {
        batch.clear();
        while (batch.size() < batch_size && !exhausted) {
            std::vector<NodeIndex> members(k);
            for (std::size_t j = 0; j < k; ++j) members[j] = problem.candidate_pool[positions[j]];
            batch.push_back(std::move(members));
            // Next combination in lexicographic order.
            std::size_t j = k;
            while (j > 0 && positions[j - 1] == pool_size - k + (j - 1)) --j;
            if (j == 0) {
                exhausted = true;
            } else {
                ++positions[j - 1];
                for (std::size_t q = j; q < k; ++q) positions[q] = positions[q - 1] + 1;
            }
        }
        scores.assign(batch.size(), 0);
        parallel_for(batch.size(), workers, [&](std::size_t b) { scores[b] = multiplier_objective(batch[b], problem); });
        for (std::size_t b = 0; b < batch.size(); ++b) {
            if (!have_best || scores[b] > best.objective) {
                best.objective = scores[b];
                best.members = batch[b];
                have_best = true;
            }
        }
        best.evaluated += batch.size();
    }
    return best;
}

MultiplierResult to_multiplier_result(const MultiplierProblem& problem, const BruteForceResult& optimum) {
    MultiplierResult result;
    result.members = optimum.members;
    result.recovered_with = optimum.objective;
    fill_baseline(problem, result);
    return result;
}

std::string format_selection_csv(const SpatialGraph& g, std::span<const NodeIndex> members) {
    std::vector<bool> chosen(g.num_nodes(), false);
    for (const NodeIndex m : members) chosen.at(m) = true;
    std::string out = "id,selected\n";
    for (NodeIndex i = 0; i < g.num_nodes(); ++i) {
        out += csv::escape(g.id(i)) + (chosen[i] ? ",1\n" : ",0\n");
    }
    return out;
}

std::string format_multiplier_summary_csv(const std::vector<MultiplierSummaryRow>& rows) {
    std::string out = "N,recovered_with,recovered_without,increment_rate\n";
    for (const auto& r : rows) {
        out += std::to_string(r.size) + "," + std::to_string(r.recovered_with) + "," +
               std::to_string(r.recovered_without) + "," +
               (r.increment_rate ? csv::format_double(*r.increment_rate) : std::string()) + "\n";
    }
    return out;
}

std::vector<std::string> read_selection_csv(const std::string& path) {
    const auto table = csv::read_file(path);
    const std::size_t id_col = table.column("id");
    const std::size_t sel_col = table.column("selected");
    std::vector<std::string> out;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& flag = table.rows[r][sel_col];
        if (flag != "0" && flag != "1") {
            throw DataError(path + ":" + std::to_string(table.lines[r]) + ": selected must be 0 or 1");
        }
        if (flag == "1") out.push_back(table.rows[r][id_col]);
    }
    return out;
}

}  // namespace recnet
