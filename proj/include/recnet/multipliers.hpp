#pragma once

#include "recnet/diffusion.hpp"
#include "recnet/ga.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace recnet {

/// Stage-2 problem: choose `size` nodes from the candidate pool to start
/// recovered at week 0 so that the most nodes are recovered at the horizon.
struct MultiplierProblem {
    SpatialGraph graph;
    ThresholdVector thresholds;
    DiffusionSchedule schedule;
    std::size_t size = 1;
    /// Sorted node indices; all nodes unless restricted.
    std::vector<NodeIndex> candidate_pool;

    void validate() const;
};

/// Builds a problem with the pool defaulting to every node.
MultiplierProblem make_multiplier_problem(SpatialGraph graph, ThresholdVector thresholds, std::size_t size,
                                          const DiffusionSchedule& schedule = {},
                                          std::optional<std::vector<NodeIndex>> pool = std::nullopt);

/// Recovered count at the horizon when exactly `members` start recovered.
/// Throws DataError for a wrong-size set, repeats or members outside the pool.
std::size_t multiplier_objective(std::span<const NodeIndex> members, const MultiplierProblem& problem);

/// Recovered count at the horizon with no forced nodes.
std::size_t natural_recovered(const MultiplierProblem& problem);

/// 100 * (with - without) / without. Throws DataError when without is 0.
double increment_rate(std::size_t recovered_with, std::size_t recovered_without);

struct MultiplierResult {
    std::vector<NodeIndex> members;
    std::size_t recovered_with = 0;
    std::size_t recovered_without = 0;
    /// Absent when nothing recovers without multipliers.
    std::optional<double> increment_rate;
    std::vector<GenerationRecord> history;
};

/// Maximises multiplier_objective with the subset GA.
MultiplierResult search_multipliers(const MultiplierProblem& problem, const GaConfig& config);

struct BruteForceResult {
    std::vector<NodeIndex> members;
    std::size_t objective = 0;
    std::uint64_t evaluated = 0;
};

/// C(n, k), saturating at UINT64_MAX.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

/// Exhaustive maximiser over all size-N subsets of the pool, enumerated in
/// lexicographic order of node index; the first maximiser wins ties. Throws
/// ConfigError if the number of subsets exceeds `enumeration_cap`.
BruteForceResult brute_force_multipliers(const MultiplierProblem& problem, std::uint64_t enumeration_cap = 1'000'000,
                                         unsigned threads = 1);

/// Packages a brute-force optimum like a search result.
MultiplierResult to_multiplier_result(const MultiplierProblem& problem, const BruteForceResult& optimum);

/// "id,selected" table in graph order.
std::string format_selection_csv(const SpatialGraph& g, std::span<const NodeIndex> members);

struct MultiplierSummaryRow {
    std::size_t size = 0;
    std::size_t recovered_with = 0;
    std::size_t recovered_without = 0;
    std::optional<double> increment_rate;
};

/// "N,recovered_with,recovered_without,increment_rate" table.
std::string format_multiplier_summary_csv(const std::vector<MultiplierSummaryRow>& rows);

/// Reads an "id,selected" table, returning selected ids in file order.
std::vector<std::string> read_selection_csv(const std::string& path);

}  // namespace recnet
