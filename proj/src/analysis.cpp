#include "recnet/analysis.hpp"

#include "recnet/csv.hpp"
#include "recnet/empirical.hpp"
#include "recnet/error.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

namespace recnet {

const char* to_string(Attribute attribute) {
    switch (attribute) {
        case Attribute::per_capita_income: return "per_capita_income";
        case Attribute::median_household_income: return "median_household_income";
        case Attribute::minority_pct: return "minority_pct";
        case Attribute::flood_extent: return "flood_extent";
    }
    return "?";
}

void AttributeTable::validate() const {
    const std::size_t n = ids.size();
    if (per_capita_income.size() != n || median_household_income.size() != n || minority_pct.size() != n ||
        flood_extent.size() != n) {
        throw DataError("attribute table has ragged columns");
    }
    std::unordered_set<std::string> seen;
    for (std::size_t i = 0; i < n; ++i) {
        if (!seen.insert(ids[i]).second) throw DataError("duplicate attribute row for '" + ids[i] + "'");
        if (!(minority_pct[i] >= 0.0 && minority_pct[i] <= 100.0)) {
            throw DataError("minority_pct for '" + ids[i] + "' outside [0, 100]");
        }
        if (flood_extent[i] && !(*flood_extent[i] >= 0.0)) {
            throw DataError("flood_extent for '" + ids[i] + "' is negative");
        }
    }
}

std::optional<double> AttributeTable::value(Attribute attribute, std::size_t row) const {
    switch (attribute) {
        case Attribute::per_capita_income: return per_capita_income[row];
        case Attribute::median_household_income: return median_household_income[row];
        case Attribute::minority_pct: return minority_pct[row];
        case Attribute::flood_extent: return flood_extent[row];
    }
    return std::nullopt;
}

AttributeTable read_attributes_csv(const std::string& path) {
    const auto table = csv::read_file(path);
    const std::size_t id = table.column("id");
    const std::size_t pci = table.column("per_capita_income");
    const std::size_t mhi = table.column("median_household_income");
    const std::size_t min = table.column("minority_pct");
    const bool has_flood = table.has_column("flood_extent");
    const std::size_t flood = has_flood ? table.column("flood_extent") : 0;
    AttributeTable out;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const std::string where = path + ":" + std::to_string(table.lines[r]);
        out.ids.push_back(row[id]);
        out.per_capita_income.push_back(csv::to_double(row[pci], where));
        out.median_household_income.push_back(csv::to_double(row[mhi], where));
        out.minority_pct.push_back(csv::to_double(row[min], where));
        if (has_flood && !row[flood].empty()) {
            out.flood_extent.emplace_back(csv::to_double(row[flood], where));
        } else {
            out.flood_extent.emplace_back(std::nullopt);
        }
    }
    try {
        out.validate();
    } catch (const DataError& e) {
        throw DataError(path + ": " + e.what());
    }
    return out;
}

std::string format_attributes_csv(const AttributeTable& table) {
    std::string out = "id,per_capita_income,median_household_income,minority_pct,flood_extent\n";
    for (std::size_t i = 0; i < table.size(); ++i) {
        out += csv::escape(table.ids[i]) + "," + csv::format_double(table.per_capita_income[i]) + "," +
               csv::format_double(table.median_household_income[i]) + "," + csv::format_double(table.minority_pct[i]) +
               "," + (table.flood_extent[i] ? csv::format_double(*table.flood_extent[i]) : std::string()) + "\n";
    }
    return out;
}

double quantile_sorted(std::span<const double> sorted, double p) {
    if (sorted.empty()) throw DataError("quantile of an empty sample");
    const double pos = p * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

DistributionSummary summarize(std::span<const double> values) {
    DistributionSummary s;
    s.count = values.size();
    if (values.empty()) return s;
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    s.min = sorted.front();
    s.max = sorted.back();
    s.q1 = quantile_sorted(sorted, 0.25);
    s.median = quantile_sorted(sorted, 0.5);
    s.q3 = quantile_sorted(sorted, 0.75);
    s.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(sorted.size());
    return s;
}

ThresholdSummary threshold_summary(const ThresholdVector& thresholds, bool include_seeds) {
    std::vector<double> included;
    for (NodeIndex i = 0; i < thresholds.size(); ++i) {
        if (include_seeds || !thresholds.is_seed(i)) included.push_back(thresholds[i]);
    }
    if (included.empty()) throw DataError("threshold summary of an empty set");
    ThresholdSummary s;
    s.include_seeds = include_seeds;
    s.count = included.size();
    const double n = static_cast<double>(included.size());
    s.mean = std::accumulate(included.begin(), included.end(), 0.0) / n;
    double ss = 0.0;
    for (const double x : included) ss += (x - s.mean) * (x - s.mean);
    s.variance = ss / n;
    std::sort(included.begin(), included.end());
    s.lower_tertile_boundary = quantile_sorted(included, 1.0 / 3.0);
    s.upper_tertile_boundary = quantile_sorted(included, 2.0 / 3.0);
    return s;
}

namespace {

/// Graph node -> attribute row; throws listing every node without a row.
std::vector<std::size_t> attribute_rows(const SpatialGraph& g, const AttributeTable& attributes,
                                        std::span<const NodeIndex> nodes) {
    std::unordered_map<std::string, std::size_t> row_of;
    for (std::size_t r = 0; r < attributes.size(); ++r) row_of.emplace(attributes.ids[r], r);
    std::vector<std::size_t> rows(g.num_nodes(), 0);
    std::string missing;
    std::size_t missing_count = 0;
    for (const NodeIndex i : nodes) {
        const auto it = row_of.find(g.id(i));
        if (it == row_of.end()) {
            if (missing_count < 20) missing += (missing.empty() ? "" : ", ") + g.id(i);
            ++missing_count;
        } else {
            rows[i] = it->second;
        }
    }
    if (missing_count > 0) {
        throw DataError(std::to_string(missing_count) + " node(s) have no attribute row: " + missing +
                        (missing_count > 20 ? ", ..." : ""));
    }
    return rows;
}

DistributionSummary summarize_attribute(const AttributeTable& attributes, Attribute attribute,
                                        std::span<const NodeIndex> nodes, const std::vector<std::size_t>& rows) {
    std::vector<double> values;
    for (const NodeIndex i : nodes) {
        if (const auto v = attributes.value(attribute, rows[i])) values.push_back(*v);
    }
    return summarize(values);
}

std::string summary_cells(const DistributionSummary& s) {
    if (s.count == 0) return "0,,,,,,";
    return std::to_string(s.count) + "," + csv::format_double(s.min) + "," + csv::format_double(s.q1) + "," +
           csv::format_double(s.median) + "," + csv::format_double(s.q3) + "," + csv::format_double(s.max) + "," +
           csv::format_double(s.mean);
}

}  // namespace

TertileReport tertile_attribute_report(const SpatialGraph& g, const ThresholdVector& thresholds,
                                       const AttributeTable& attributes, bool include_seeds) {
    if (thresholds.size() != g.num_nodes()) throw DataError("thresholds do not match the graph");
    std::vector<NodeIndex> nodes;
    for (NodeIndex i = 0; i < g.num_nodes(); ++i) {
        if (include_seeds || !thresholds.is_seed(i)) nodes.push_back(i);
    }
    if (nodes.empty()) throw DataError("tertile report of an empty set");
    const auto rows = attribute_rows(g, attributes, nodes);
    std::sort(nodes.begin(), nodes.end(), [&](NodeIndex a, NodeIndex b) {
        if (thresholds[a] != thresholds[b]) return thresholds[a] < thresholds[b];
        return g.id(a) < g.id(b);
    });

    TertileReport report;
    const std::size_t base = nodes.size() / 3;
    const std::size_t extra = nodes.size() % 3;
    std::size_t cursor = 0;
    for (std::size_t t = 0; t < 3; ++t) {
        const std::size_t take = base + (t < extra ? 1 : 0);
        report.groups[t].assign(nodes.begin() + static_cast<std::ptrdiff_t>(cursor),
                                nodes.begin() + static_cast<std::ptrdiff_t>(cursor + take));
        cursor += take;
    }
    for (std::size_t t = 0; t < 3; ++t) {
        for (const Attribute a : all_attributes) {
            report.rows.push_back({static_cast<int>(t + 1), a, summarize_attribute(attributes, a, report.groups[t], rows)});
        }
    }
    return report;
}

Correlation correlate(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw DataError("correlation inputs differ in length");
    if (x.size() < 3) throw DataError("correlation needs at least 3 pairs");
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0;
    double syy = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (!(sxx > 0.0) || !(syy > 0.0)) throw DataError("correlation undefined: zero variance");
    Correlation c;
    c.n = x.size();
    c.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
    const double df = n - 2.0;
    if (std::abs(c.r) >= 1.0) {
        c.p_value = 0.0;
    } else {
        const double t = c.r * std::sqrt(df / (1.0 - c.r * c.r));
        const boost::math::students_t dist(df);
        c.p_value = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
    }
    return c;
}

MultiplierComparison multiplier_attribute_comparison(
    const SpatialGraph& g, const std::vector<std::pair<std::size_t, std::vector<NodeIndex>>>& selections,
    const AttributeTable& attributes) {
    std::vector<NodeIndex> all(g.num_nodes());
    std::iota(all.begin(), all.end(), NodeIndex{0});
    const auto rows = attribute_rows(g, attributes, all);
    MultiplierComparison out;
    for (const auto& [size, members] : selections) {
        std::vector<bool> chosen(g.num_nodes(), false);
        for (const NodeIndex m : members) chosen.at(m) = true;
        std::vector<NodeIndex> in;
        std::vector<NodeIndex> out_nodes;
        for (NodeIndex i = 0; i < g.num_nodes(); ++i) (chosen[i] ? in : out_nodes).push_back(i);
        if (out_nodes.empty()) out.empty_non_multiplier.push_back(size);
        for (const Attribute a : all_attributes) {
            out.rows.push_back({size, true, a, summarize_attribute(attributes, a, in, rows)});
            out.rows.push_back({size, false, a, summarize_attribute(attributes, a, out_nodes, rows)});
        }
    }
    return out;
}

std::string format_recovery_curves_csv(const Trajectory& empirical, const Trajectory& simulated) {
    const auto diff = weekly_difference(empirical, simulated);
    const auto a = recovered_counts(empirical);
    const auto b = recovered_counts(simulated);
    std::string out = "week,empirical_recovered,simulated_recovered,difference,cumulative_difference\n";
    for (std::size_t t = 0; t < a.size(); ++t) {
        out += std::to_string(t) + "," + std::to_string(a[t]) + "," + std::to_string(b[t]) + "," +
               std::to_string(diff.difference[t]) + "," + std::to_string(diff.cumulative[t]) + "\n";
    }
    return out;
}

std::string format_tertile_csv(const TertileReport& report) {
    std::string out = "tertile,attribute,count,min,q1,median,q3,max,mean\n";
    for (const auto& row : report.rows) {
        out += std::to_string(row.tertile) + "," + to_string(row.attribute) + "," + summary_cells(row.summary) + "\n";
    }
    return out;
}

std::string format_multiplier_comparison_csv(const MultiplierComparison& comparison) {
    std::string out = "N,group,attribute,count,min,q1,median,q3,max,mean\n";
    for (const auto& row : comparison.rows) {
        out += std::to_string(row.size) + "," + (row.multiplier ? "multiplier" : "non_multiplier") + "," +
               to_string(row.attribute) + "," + summary_cells(row.summary) + "\n";
    }
    return out;
}

}  // namespace recnet
