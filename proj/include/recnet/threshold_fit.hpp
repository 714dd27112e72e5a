#pragma once

#include "recnet/diffusion.hpp"
#include "recnet/empirical.hpp"
#include "recnet/ga.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace recnet {

/// Stage-1 problem: estimate thresholds of the free nodes so the simulated
/// trajectory reproduces the empirical one. Seeds are nodes whose recovery
/// duration is below the cutoff; they are pinned at threshold 0 and kept out
/// of the chromosome.
struct FitProblem {
    SpatialGraph graph;
    Trajectory empirical;
    std::vector<bool> seed_mask;
    std::vector<NodeIndex> free_nodes;
    DiffusionSchedule schedule;
    /// Non-fatal findings (empty seed set, seeds recovering off-schedule).
    std::vector<std::string> warnings;

    std::size_t num_nodes() const { return graph.num_nodes(); }
    std::size_t num_seeds() const { return num_nodes() - free_nodes.size(); }
};

/// `durations` is in graph node order.
FitProblem build_fit_problem(SpatialGraph graph, std::span<const double> durations, double seed_cutoff_weeks = 3.0,
                             const DiffusionSchedule& schedule = {});

FitProblem build_fit_problem(SpatialGraph graph, const RecoveryDurationTable& durations,
                             double seed_cutoff_weeks = 3.0, const DiffusionSchedule& schedule = {});

/// Full threshold vector: seeds at 0, free nodes from the chromosome.
ThresholdVector assemble_thresholds(const FitProblem& problem, std::span<const double> chromosome);

/// 0-1 loss of the simulation (all nodes affected at week 0) against the
/// empirical trajectory. Streams the simulation without materialising it.
long long fit_fitness(std::span<const double> chromosome, const FitProblem& problem);

/// Same value as fit_fitness, computed through run_diffusion and zero_one_loss.
long long fit_loss_by_resimulation(const ThresholdVector& thresholds, const FitProblem& problem);

struct FitResult {
    ThresholdVector thresholds;
    long long final_loss = 0;
    GaResult<std::vector<double>> ga;
};

/// Minimises fit_fitness with the real-vector GA.
FitResult fit_thresholds(const FitProblem& problem, const GaConfig& config);

struct BaselineStats {
    double mean = 0.0;
    /// Sample standard deviation (0 for a single run).
    double stddev = 0.0;
    std::vector<long long> losses;
};

/// Loss of `runs` chromosomes drawn uniformly from [0, 1]. Run r uses its own
/// generator seeded from (rng_seed, r), so results do not depend on `threads`.
BaselineStats random_baseline(const FitProblem& problem, std::size_t runs, std::uint64_t rng_seed,
                              unsigned threads = 1);

/// "id,threshold,is_seed" table in graph order.
std::string format_thresholds_csv(const SpatialGraph& g, const ThresholdVector& thresholds);

/// Reads "id,threshold,is_seed" aligned to `g`.
ThresholdVector read_thresholds_csv(const std::string& path, const SpatialGraph& g);

/// Ids in file order from a thresholds table.
std::vector<std::string> read_threshold_ids(const std::string& path);

}  // namespace recnet
