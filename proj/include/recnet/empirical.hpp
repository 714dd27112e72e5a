#pragma once

#include "recnet/diffusion.hpp"

#include <map>
#include <span>
#include <string>
#include <vector>

namespace recnet {

/// Daily visit counts for one unit. Day indices are positions in `visits`.
struct VisitSeries {
    std::vector<double> visits;
    int baseline_first = 0;  ///< inclusive
    int baseline_last = 0;   ///< inclusive
    /// Day 0 of the recovery clock; recovery is searched from day 1 onward.
    int recovery_start = 0;
};

struct RecoveryCriterion {
    double ratio = 0.9;
    int persistence_days = 3;
    /// Days on each side of the target day in the centered moving average.
    int ma_halfwidth = 3;
    /// Search window and cap, in weeks.
    int max_weeks = 14;
};

/// Weeks until the smoothed visit level first stays at or above
/// ratio * baseline for `persistence_days` consecutive days. The run's first
/// day d (counted from recovery_start, d >= 1) gives d / 7 weeks; if no run
/// starts within max_weeks * 7 days the result is max_weeks. The moving
/// average shrinks at the series edges instead of padding.
double compute_recovery_duration(const VisitSeries& series, const RecoveryCriterion& criterion = {});

/// Centered moving average with a shrinking window at the edges.
std::vector<double> centered_moving_average(std::span<const double> values, int halfwidth);

/// Per-unit recovery durations in weeks, each in (0, cap].
struct RecoveryDurationTable {
    std::vector<std::string> ids;
    std::vector<double> weeks;

    /// Throws DataError on duplicate ids or a duration outside (0, cap].
    void validate(double cap = 14.0) const;
    /// Durations in graph node order; throws DataError naming the first node
    /// without a row.
    std::vector<double> aligned_to(const SpatialGraph& g) const;
};

RecoveryDurationTable read_durations_csv(const std::string& path);
std::string format_durations_csv(const RecoveryDurationTable& table);

/// Empirical states: node i is recovered in week t iff duration_i <= t.
Trajectory durations_to_trajectory(std::span<const double> durations, int horizon = 14);

/// Number of (node, week) cells that disagree over weeks 1..horizon.
long long zero_one_loss(const Trajectory& empirical, const Trajectory& simulated);

struct WeeklyDifference {
    /// empirical count minus simulated count, weeks 0..horizon.
    std::vector<long long> difference;
    std::vector<long long> cumulative;
};

WeeklyDifference weekly_difference(const Trajectory& empirical, const Trajectory& simulated);

// --- visit series input ---------------------------------------------------

/// Parses an integer day index or an ISO yyyy-mm-dd date (as days since 1970-01-01).
long long parse_day(const std::string& text);

struct VisitTable {
    std::vector<std::string> ids;  ///< first-appearance order
    std::vector<std::map<long long, double>> daily;
};

/// Reads "id,day,visits". Repeated (id, day) rows are rejected.
VisitTable read_visits_csv(const std::string& path);

/// Builds a dense series whose day 0 is `baseline_first`. Days with no row
/// count as zero visits. Throws DataError if the data end before the
/// recovery search window does.
VisitSeries make_visit_series(const std::map<long long, double>& daily, long long baseline_first,
                              long long baseline_last, long long recovery_start, int max_weeks = 14);

}  // namespace recnet
