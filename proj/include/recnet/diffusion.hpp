#pragma once

#include "recnet/spatial_graph.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace recnet {

/// Per-node state: 0 = affected, 1 = recovered.
using StateVector = std::vector<std::uint8_t>;

/// Per-node thresholds in [0, 1]; seed nodes are pinned at 0.
class ThresholdVector {
public:
    ThresholdVector() = default;
    /// Throws DataError if any value is outside [0, 1], a seed is nonzero,
    /// or the two vectors differ in length. An empty seed mask means no seeds.
    explicit ThresholdVector(std::vector<double> values, std::vector<bool> seeds = {});

    std::size_t size() const { return values_.size(); }
    double operator[](NodeIndex i) const { return values_[i]; }
    std::span<const double> values() const { return values_; }
    bool is_seed(NodeIndex i) const { return seeds_[i]; }
    const std::vector<bool>& seed_mask() const { return seeds_; }
    std::size_t seed_count() const;

private:
    std::vector<double> values_;
    std::vector<bool> seeds_;
};

struct DiffusionSchedule {
    int horizon = 14;
    /// Weeks 1 .. first_update_week-1 copy the initial state; updates start here.
    int first_update_week = 3;

    /// Throws ConfigError unless 1 <= first_update_week <= horizon.
    void validate() const;
};

/// Recovery states for weeks 0..horizon. Each node's state never reverts.
class Trajectory {
public:
    Trajectory() = default;
    /// Throws DataError on ragged, non-binary or non-monotone input.
    explicit Trajectory(std::vector<StateVector> weeks);

    int horizon() const { return static_cast<int>(weeks_.size()) - 1; }
    std::size_t num_nodes() const { return weeks_.empty() ? 0 : weeks_.front().size(); }
    const StateVector& state(int week) const { return weeks_.at(static_cast<std::size_t>(week)); }
    bool recovered(int week, NodeIndex i) const { return state(week)[i] != 0; }
    /// First week the node is recovered, if ever.
    std::optional<int> recovery_week(NodeIndex i) const;

    friend bool operator==(const Trajectory&, const Trajectory&) = default;

private:
    std::vector<StateVector> weeks_;
};

/// One synchronous update. Node i is recovered afterwards iff it was already
/// recovered or its recovered-neighbor fraction in `prev` is >= tau[i]. The
/// fraction of a node without neighbors is 0.
StateVector diffusion_step(const SpatialGraph& g, const StateVector& prev, std::span<const double> thresholds);
StateVector diffusion_step(const SpatialGraph& g, const StateVector& prev, const ThresholdVector& thresholds);

/// Runs the weekly schedule from `initial` (the week-0 state).
Trajectory run_diffusion(const SpatialGraph& g, std::span<const double> thresholds, const StateVector& initial,
                         const DiffusionSchedule& schedule);
Trajectory run_diffusion(const SpatialGraph& g, const ThresholdVector& thresholds, const StateVector& initial,
                         const DiffusionSchedule& schedule);

/// Number of recovered nodes in each week 0..horizon.
std::vector<std::size_t> recovered_counts(const Trajectory& trajectory);

/// Long-form "id,week,state" table, node-major.
std::string format_trajectory_csv(const SpatialGraph& g, const Trajectory& trajectory);

}  // namespace recnet
