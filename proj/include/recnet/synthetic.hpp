#pragma once

#include "recnet/analysis.hpp"
#include "recnet/diffusion.hpp"
#include "recnet/empirical.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace recnet {

enum class GraphKind { grid, perturbed_grid };

const char* to_string(GraphKind kind);
GraphKind parse_graph_kind(const std::string& text);

struct SynthSpec {
    std::size_t n = 50;
    GraphKind graph_kind = GraphKind::grid;
    /// Share of queen edges removed in a perturbed grid (connectivity kept).
    double deletion_fraction = 0.2;
    double seed_fraction = 0.2;
    double tau_lo = 0.1;
    double tau_hi = 0.6;
    /// Latent correlation between thresholds and income; -1 or 1 gives an
    /// exactly monotone relation.
    double attribute_coupling = -0.7;
    std::uint64_t rng_seed = 1;
    /// When false, planted thresholds are redrawn until every node recovers by
    /// the horizon, so the planted chromosome has zero loss.
    bool allow_unrecovered = false;
    std::size_t max_retries = 1000;
    DiffusionSchedule schedule;

    void validate() const;
};

struct SyntheticInstance {
    std::vector<SpatialUnit> units;
    SpatialGraph graph;
    ThresholdVector planted;
    Trajectory forward;
    RecoveryDurationTable durations;
    AttributeTable attributes;
    std::size_t rows = 0;
    std::size_t cols = 0;
};

/// Grid of unit squares (rows x cols, rows the largest divisor of n not above
/// sqrt(n)) joined by queen contiguity, planted thresholds, durations read off
/// a forward simulation (seeds get first_update_week - 0.5, unrecovered nodes
/// the horizon), and attributes coupled to the thresholds.
SyntheticInstance generate_instance(const SynthSpec& spec);

/// Writes nodes.csv, edges.csv, geometry.geojson, durations.csv,
/// attributes.csv, planted_thresholds.csv and instance.json into `dir`.
void write_instance(const SyntheticInstance& instance, const SynthSpec& spec, const std::string& dir);

}  // namespace recnet
