#pragma once

#include "recnet/diffusion.hpp"

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace recnet {

enum class Attribute { per_capita_income, median_household_income, minority_pct, flood_extent };

inline constexpr std::array<Attribute, 4> all_attributes = {Attribute::per_capita_income,
                                                             Attribute::median_household_income,
                                                             Attribute::minority_pct, Attribute::flood_extent};

const char* to_string(Attribute attribute);

/// Socio-demographic attributes per spatial unit.
struct AttributeTable {
    std::vector<std::string> ids;
    std::vector<double> per_capita_income;
    std::vector<double> median_household_income;
    std::vector<double> minority_pct;
    std::vector<std::optional<double>> flood_extent;

    std::size_t size() const { return ids.size(); }
    /// Throws DataError on ragged columns, duplicate ids, minority_pct outside
    /// [0, 100] or negative flood extent.
    void validate() const;
    std::optional<double> value(Attribute attribute, std::size_t row) const;
};

AttributeTable read_attributes_csv(const std::string& path);
std::string format_attributes_csv(const AttributeTable& table);

/// Five-number summary plus mean. Quantiles interpolate linearly between
/// order statistics (position (n-1)p).
struct DistributionSummary {
    std::size_t count = 0;
    double min = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double max = 0.0;
    double mean = 0.0;
};

DistributionSummary summarize(std::span<const double> values);

/// Linear-interpolation quantile of already sorted values.
double quantile_sorted(std::span<const double> sorted, double p);

struct ThresholdSummary {
    std::size_t count = 0;
    double mean = 0.0;
    /// Population variance (divides by count).
    double variance = 0.0;
    double lower_tertile_boundary = 0.0;
    double upper_tertile_boundary = 0.0;
    bool include_seeds = false;
};

/// Summary over non-seed thresholds, or all of them with include_seeds.
ThresholdSummary threshold_summary(const ThresholdVector& thresholds, bool include_seeds = false);

struct TertileRow {
    int tertile = 0;  ///< 1 = low threshold, 2 = middle, 3 = high
    Attribute attribute = Attribute::per_capita_income;
    DistributionSummary summary;
};

struct TertileReport {
    /// Node indices per tertile, ordered by (threshold, id).
    std::array<std::vector<NodeIndex>, 3> groups;
    std::vector<TertileRow> rows;
};

/// Splits the included nodes into three rank groups whose sizes differ by at
/// most one (earlier groups take the remainder), ordered by threshold with
/// ties broken by id, and summarises every attribute per group.
TertileReport tertile_attribute_report(const SpatialGraph& g, const ThresholdVector& thresholds,
                                       const AttributeTable& attributes, bool include_seeds = false);

struct Correlation {
    std::size_t n = 0;
    double r = 0.0;
    /// Two-sided p-value of the t statistic with n - 2 degrees of freedom.
    double p_value = 1.0;
};

Correlation correlate(std::span<const double> x, std::span<const double> y);

struct MultiplierGroupRow {
    std::size_t size = 0;
    bool multiplier = false;
    Attribute attribute = Attribute::per_capita_income;
    DistributionSummary summary;
};

struct MultiplierComparison {
    std::vector<MultiplierGroupRow> rows;
    /// Sizes whose non-multiplier group is empty.
    std::vector<std::size_t> empty_non_multiplier;
};

/// For each selection, summarises every attribute for selected vs unselected nodes.
MultiplierComparison multiplier_attribute_comparison(
    const SpatialGraph& g, const std::vector<std::pair<std::size_t, std::vector<NodeIndex>>>& selections,
    const AttributeTable& attributes);

/// Plot-ready "week,empirical_recovered,simulated_recovered,difference,cumulative_difference".
std::string format_recovery_curves_csv(const Trajectory& empirical, const Trajectory& simulated);
std::string format_tertile_csv(const TertileReport& report);
std::string format_multiplier_comparison_csv(const MultiplierComparison& comparison);

}  // namespace recnet
