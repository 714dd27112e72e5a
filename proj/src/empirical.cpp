#include "recnet/empirical.hpp"

#include "recnet/csv.hpp"
#include "recnet/error.hpp"

#include <chrono>
#include <cmath>
#include <unordered_set>

namespace recnet {

std::vector<double> centered_moving_average(std::span<const double> values, int halfwidth) {
    if (halfwidth < 0) throw ConfigError("moving-average half-width must be nonnegative");
    const auto n = static_cast<long long>(values.size());
    std::vector<double> out(values.size());
    for (long long d = 0; d < n; ++d) {
        const long long lo = std::max<long long>(0, d - halfwidth);
        const long long hi = std::min<long long>(n - 1, d + halfwidth);
        double sum = 0.0;
        for (long long k = lo; k <= hi; ++k) sum += values[static_cast<std::size_t>(k)];
        out[static_cast<std::size_t>(d)] = sum / static_cast<double>(hi - lo + 1);
    }
    return out;
}

double compute_recovery_duration(const VisitSeries& series, const RecoveryCriterion& criterion) {
    if (!(criterion.ratio > 0.0 && criterion.ratio <= 1.0)) throw ConfigError("recovery ratio must lie in (0, 1]");
    if (criterion.persistence_days < 1) throw ConfigError("persistence must be at least one day");
    if (criterion.max_weeks < 1) throw ConfigError("maximum weeks must be at least 1");
    if (series.baseline_first < 0 || series.baseline_last < series.baseline_first) {
        throw DataError("empty baseline window");
    }
    if (series.baseline_last >= series.recovery_start) {
        throw DataError("baseline window must precede the recovery start day");
    }
    const int window_days = 7 * criterion.max_weeks;
    const auto size = static_cast<long long>(series.visits.size());
    if (size <= static_cast<long long>(series.recovery_start) + window_days) {
        throw DataError("visit series too short: need " + std::to_string(window_days) + " days after recovery start");
    }
    for (const double v : series.visits) {
        if (!(v >= 0.0) || !std::isfinite(v)) throw DataError("visit counts must be finite and nonnegative");
    }

    double baseline = 0.0;
    for (int d = series.baseline_first; d <= series.baseline_last; ++d) baseline += series.visits[static_cast<std::size_t>(d)];
    baseline /= static_cast<double>(series.baseline_last - series.baseline_first + 1);
    const double level = criterion.ratio * baseline;

    const auto smoothed = centered_moving_average(series.visits, criterion.ma_halfwidth);
    for (int d = 1; d <= window_days; ++d) {
        const long long first = static_cast<long long>(series.recovery_start) + d;
        const long long last = first + criterion.persistence_days - 1;
        if (last >= size) break;
        bool holds = true;
        for (long long k = first; k <= last && holds; ++k) holds = smoothed[static_cast<std::size_t>(k)] >= level;
        if (holds) return static_cast<double>(d) / 7.0;
    }
    return static_cast<double>(criterion.max_weeks);
}

void RecoveryDurationTable::validate(double cap) const {
    if (ids.size() != weeks.size()) throw DataError("duration table has mismatched columns");
    std::unordered_set<std::string> seen;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (!seen.insert(ids[i]).second) throw DataError("duplicate duration for '" + ids[i] + "'");
        if (!(weeks[i] > 0.0 && weeks[i] <= cap)) {
            throw DataError("duration for '" + ids[i] + "' outside (0, " + csv::format_double(cap) +
                            "]: " + csv::format_double(weeks[i]));
        }
    }
}

std::vector<double> RecoveryDurationTable::aligned_to(const SpatialGraph& g) const {
    std::unordered_map<std::string, double> by_id;
    for (std::size_t i = 0; i < ids.size(); ++i) by_id.emplace(ids[i], weeks[i]);
    std::vector<double> out;
    out.reserve(g.num_nodes());
    for (const auto& id : g.ids()) {
        const auto it = by_id.find(id);
        if (it == by_id.end()) throw DataError("no recovery duration for node '" + id + "'");
        out.push_back(it->second);
    }
    return out;
}

RecoveryDurationTable read_durations_csv(const std::string& path) {
    const auto table = csv::read_file(path);
    const std::size_t id = table.column("id");
    const std::size_t dur = table.column("duration_weeks");
    RecoveryDurationTable out;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        out.ids.push_back(table.rows[r][id]);
        out.weeks.push_back(csv::to_double(table.rows[r][dur], path + ":" + std::to_string(table.lines[r])));
    }
    return out;
}

std::string format_durations_csv(const RecoveryDurationTable& table) {
    std::string out = "id,duration_weeks\n";
    for (std::size_t i = 0; i < table.ids.size(); ++i) {
        out += csv::escape(table.ids[i]) + "," + csv::format_double(table.weeks[i]) + "\n";
    }
    return out;
}

Trajectory durations_to_trajectory(std::span<const double> durations, int horizon) {
    if (horizon < 1) throw ConfigError("horizon must be at least 1 week");
    for (std::size_t i = 0; i < durations.size(); ++i) {
        if (!(durations[i] > 0.0)) throw DataError("duration " + std::to_string(i) + " must be positive");
        if (durations[i] > horizon) {
            throw DataError("duration " + std::to_string(i) + " exceeds the horizon; cap it first");
        }
    }
    std::vector<StateVector> weeks(static_cast<std::size_t>(horizon) + 1, StateVector(durations.size(), 0));
    for (int t = 0; t <= horizon; ++t) {
        for (std::size_t i = 0; i < durations.size(); ++i) {
            weeks[static_cast<std::size_t>(t)][i] = durations[i] <= t ? 1 : 0;
        }
    }
    return Trajectory(std::move(weeks));
}

namespace {

void require_same_shape(const Trajectory& a, const Trajectory& b) {
    if (a.horizon() != b.horizon() || a.num_nodes() != b.num_nodes()) {
        throw DataError("trajectory shapes differ (" + std::to_string(a.num_nodes()) + "x" +
                        std::to_string(a.horizon() + 1) + " vs " + std::to_string(b.num_nodes()) + "x" +
                        std::to_string(b.horizon() + 1) + ")");
    }
}

}  // namespace

long long zero_one_loss(const Trajectory& empirical, const Trajectory& simulated) {
    require_same_shape(empirical, simulated);
    long long loss = 0;
    for (int t = 1; t <= empirical.horizon(); ++t) {
        const auto& s = empirical.state(t);
        const auto& h = simulated.state(t);
        for (std::size_t i = 0; i < s.size(); ++i) loss += (s[i] != h[i]);
    }
    return loss;
}

WeeklyDifference weekly_difference(const Trajectory& empirical, const Trajectory& simulated) {
    require_same_shape(empirical, simulated);
    const auto a = recovered_counts(empirical);
    const auto b = recovered_counts(simulated);
    WeeklyDifference out;
    long long running = 0;
    for (std::size_t t = 0; t < a.size(); ++t) {
        const long long diff = static_cast<long long>(a[t]) - static_cast<long long>(b[t]);
        running += diff;
        out.difference.push_back(diff);
        out.cumulative.push_back(running);
    }
    return out;
}

long long parse_day(const std::string& text) {
    if (text.size() == 10 && text[4] == '-' && text[7] == '-') {
        const auto y = csv::to_integer(text.substr(0, 4), "year");
        const auto m = csv::to_integer(text.substr(5, 2), "month");
        const auto d = csv::to_integer(text.substr(8, 2), "day");
        const std::chrono::year_month_day ymd{std::chrono::year{static_cast<int>(y)},
                                              std::chrono::month{static_cast<unsigned>(m)},
                                              std::chrono::day{static_cast<unsigned>(d)}};
        if (!ymd.ok()) throw DataError("invalid date '" + text + "'");
        return std::chrono::sys_days{ymd}.time_since_epoch().count();
    }
    return csv::to_integer(text, "day");
}

VisitTable read_visits_csv(const std::string& path) {
    const auto table = csv::read_file(path);
    const std::size_t id_col = table.column("id");
    const std::size_t day_col = table.column("day");
    const std::size_t visits_col = table.column("visits");
    VisitTable out;
    std::unordered_map<std::string, std::size_t> slot;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const std::string where = path + ":" + std::to_string(table.lines[r]);
        auto [it, inserted] = slot.emplace(row[id_col], out.ids.size());
        if (inserted) {
            out.ids.push_back(row[id_col]);
            out.daily.emplace_back();
        }
        long long day = 0;
        try {
            day = parse_day(row[day_col]);
        } catch (const DataError& e) {
            throw DataError(where + ": " + e.what());
        }
        const double visits = csv::to_double(row[visits_col], where);
        if (!out.daily[it->second].emplace(day, visits).second) {
            throw DataError(where + ": repeated day for '" + row[id_col] + "'");
        }
    }
    return out;
}

VisitSeries make_visit_series(const std::map<long long, double>& daily, long long baseline_first,
                              long long baseline_last, long long recovery_start, int max_weeks) {
    if (baseline_last < baseline_first) throw DataError("empty baseline window");
    if (baseline_last >= recovery_start) throw DataError("baseline window must precede the recovery start day");
    const long long last_needed = recovery_start + 7LL * max_weeks;
    if (daily.empty() || daily.rbegin()->first < last_needed) {
        throw DataError("visit series too short: data must reach day " + std::to_string(last_needed));
    }
    VisitSeries series;
    const long long last = daily.rbegin()->first;
    series.visits.assign(static_cast<std::size_t>(last - baseline_first + 1), 0.0);
    for (const auto& [day, v] : daily) {
        if (day >= baseline_first) series.visits[static_cast<std::size_t>(day - baseline_first)] = v;
    }
    series.baseline_first = 0;
    series.baseline_last = static_cast<int>(baseline_last - baseline_first);
    series.recovery_start = static_cast<int>(recovery_start - baseline_first);
    return series;
}

}  // namespace recnet
