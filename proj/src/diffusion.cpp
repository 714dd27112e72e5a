#include "recnet/diffusion.hpp"

#include "recnet/csv.hpp"
#include "recnet/error.hpp"

#include <algorithm>
#include <string>

namespace recnet {

ThresholdVector::ThresholdVector(std::vector<double> values, std::vector<bool> seeds)
    : values_(std::move(values)), seeds_(std::move(seeds)) {
    if (seeds_.empty()) seeds_.assign(values_.size(), false);
    if (seeds_.size() != values_.size()) throw DataError("threshold and seed mask lengths differ");
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!(values_[i] >= 0.0 && values_[i] <= 1.0)) {
            throw DataError("threshold " + std::to_string(i) + " outside [0, 1]: " + std::to_string(values_[i]));
        }
        if (seeds_[i] && values_[i] != 0.0) throw DataError("seed node " + std::to_string(i) + " has nonzero threshold");
    }
}

std::size_t ThresholdVector::seed_count() const {
    return static_cast<std::size_t>(std::count(seeds_.begin(), seeds_.end(), true));
}

void DiffusionSchedule::validate() const {
    if (horizon < 1) throw ConfigError("horizon must be at least 1 week");
    if (first_update_week < 1 || first_update_week > horizon) {
        throw ConfigError("first update week must lie in [1, horizon]");
    }
}

Trajectory::Trajectory(std::vector<StateVector> weeks) : weeks_(std::move(weeks)) {
    if (weeks_.empty()) return;
    const std::size_t n = weeks_.front().size();
    for (std::size_t t = 0; t < weeks_.size(); ++t) {
        if (weeks_[t].size() != n) throw DataError("trajectory week " + std::to_string(t) + " has wrong node count");
        for (std::size_t i = 0; i < n; ++i) {
            if (weeks_[t][i] > 1) throw DataError("trajectory state is not binary");
            if (t > 0 && weeks_[t][i] < weeks_[t - 1][i]) {
                throw DataError("trajectory node " + std::to_string(i) + " reverts at week " + std::to_string(t));
            }
        }
    }
}

std::optional<int> Trajectory::recovery_week(NodeIndex i) const {
    for (std::size_t t = 0; t < weeks_.size(); ++t) {
        if (weeks_[t][i]) return static_cast<int>(t);
    }
    return std::nullopt;
}

StateVector diffusion_step(const SpatialGraph& g, const StateVector& prev, std::span<const double> thresholds) {
    const std::size_t n = g.num_nodes();
    if (prev.size() != n || thresholds.size() != n) {
        throw DataError("diffusion_step: dimension mismatch (graph " + std::to_string(n) + ", state " +
                        std::to_string(prev.size()) + ", thresholds " + std::to_string(thresholds.size()) + ")");
    }
    StateVector next(prev);
    for (NodeIndex i = 0; i < n; ++i) {
        if (prev[i]) continue;
        const auto nbrs = g.neighbors(i);
        double fraction = 0.0;
        if (!nbrs.empty()) {
            std::size_t recovered = 0;
            for (const NodeIndex j : nbrs) recovered += prev[j];
            fraction = static_cast<double>(recovered) / static_cast<double>(nbrs.size());
        }
        if (fraction >= thresholds[i]) next[i] = 1;
    }
    return next;
}

StateVector diffusion_step(const SpatialGraph& g, const StateVector& prev, const ThresholdVector& thresholds) {
    return diffusion_step(g, prev, thresholds.values());
}

Trajectory run_diffusion(const SpatialGraph& g, std::span<const double> thresholds, const StateVector& initial,
                         const DiffusionSchedule& schedule) {
    schedule.validate();
    const std::size_t n = g.num_nodes();
    if (initial.size() != n || thresholds.size() != n) throw DataError("run_diffusion: dimension mismatch");
    for (const auto s : initial) {
        if (s > 1) throw DataError("run_diffusion: initial state is not binary");
    }
    std::vector<StateVector> weeks;
    weeks.reserve(static_cast<std::size_t>(schedule.horizon) + 1);
    weeks.push_back(initial);
    for (int t = 1; t <= schedule.horizon; ++t) {
        if (t < schedule.first_update_week) {
            weeks.push_back(weeks.back());
        } else {
            weeks.push_back(diffusion_step(g, weeks.back(), thresholds));
        }
    }
    return Trajectory(std::move(weeks));
}

Trajectory run_diffusion(const SpatialGraph& g, const ThresholdVector& thresholds, const StateVector& initial,
                         const DiffusionSchedule& schedule) {
    return run_diffusion(g, thresholds.values(), initial, schedule);
}

std::vector<std::size_t> recovered_counts(const Trajectory& trajectory) {
    std::vector<std::size_t> counts;
    for (int t = 0; t <= trajectory.horizon(); ++t) {
        const auto& s = trajectory.state(t);
        counts.push_back(static_cast<std::size_t>(std::count(s.begin(), s.end(), std::uint8_t{1})));
    }
    return counts;
}

std::string format_trajectory_csv(const SpatialGraph& g, const Trajectory& trajectory) {
    if (trajectory.num_nodes() != g.num_nodes()) throw DataError("trajectory does not match graph");
    std::string out = "id,week,state\n";
    for (NodeIndex i = 0; i < g.num_nodes(); ++i) {
        const std::string id = csv::escape(g.id(i));
        for (int t = 0; t <= trajectory.horizon(); ++t) {
            out += id;
            out += ',';
            out += std::to_string(t);
            out += ',';
            out += trajectory.recovered(t, i) ? '1' : '0';
            out += '\n';
        }
    }
    return out;
}

}  // namespace recnet
