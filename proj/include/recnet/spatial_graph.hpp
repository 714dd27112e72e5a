#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace recnet {

using NodeIndex = std::size_t;

struct Point {
    double x = 0.0;
    double y = 0.0;
    friend bool operator==(const Point&, const Point&) = default;
};

/// A closed ring: first coordinate equals the last, at least four entries.
using Ring = std::vector<Point>;

/// One or more rings. Holes and multi-part pieces are treated alike: every
/// ring contributes boundary vertices and segments.
struct Polygon {
    std::vector<Ring> rings;
};

struct SpatialUnit {
    std::string id;
    std::optional<Polygon> geometry;
};

enum class ContiguityKind { queen, rook, bishop };

const char* to_string(ContiguityKind kind);
ContiguityKind parse_contiguity_kind(const std::string& text);

struct ContiguityRule {
    ContiguityKind kind = ContiguityKind::queen;
    /// Coordinates are snapped to a grid of this cell size before matching;
    /// 0 means exact comparison.
    double snap_tolerance = 0.0;
};

/// Undirected simple graph over named spatial units.
///
/// Nodes keep the order they were supplied in. Edges are stored once as
/// (lo, hi) index pairs, sorted; neighbor lists are sorted ascending.
class SpatialGraph {
public:
    SpatialGraph() = default;

    std::size_t num_nodes() const { return ids_.size(); }
    std::size_t num_edges() const { return edges_.size(); }

    const std::vector<std::string>& ids() const { return ids_; }
    const std::string& id(NodeIndex i) const { return ids_.at(i); }
    std::optional<NodeIndex> find(const std::string& id) const;
    /// Throws DataError naming `id` if it is not a node.
    NodeIndex index_of(const std::string& id) const;

    std::span<const NodeIndex> neighbors(NodeIndex i) const { return adjacency_.at(i); }
    std::size_t degree(NodeIndex i) const { return adjacency_.at(i).size(); }
    bool has_edge(NodeIndex a, NodeIndex b) const;

    const std::vector<std::pair<NodeIndex, NodeIndex>>& edges() const { return edges_; }

    /// Edges as sorted (smaller id, larger id) string pairs; independent of node order.
    std::vector<std::pair<std::string, std::string>> edge_id_pairs() const;

    friend SpatialGraph load_edge_list(std::vector<std::string> node_ids,
                                       const std::vector<std::pair<std::string, std::string>>& edges);
    friend SpatialGraph graph_from_indices(std::vector<std::string> node_ids,
                                           std::vector<std::pair<NodeIndex, NodeIndex>> edges);

private:
    std::vector<std::string> ids_;
    std::unordered_map<std::string, NodeIndex> index_;
    std::vector<std::pair<NodeIndex, NodeIndex>> edges_;
    std::vector<std::vector<NodeIndex>> adjacency_;
};

/// Builds a graph from explicit ids and id pairs. Unknown endpoints,
/// self-loops, duplicate edges and duplicate node ids are rejected with a
/// DataError naming the offender.
SpatialGraph load_edge_list(std::vector<std::string> node_ids,
                            const std::vector<std::pair<std::string, std::string>>& edges);

/// Same checks as load_edge_list, for callers that already hold indices.
SpatialGraph graph_from_indices(std::vector<std::string> node_ids,
                                std::vector<std::pair<NodeIndex, NodeIndex>> edges);

/// Contiguity graph from polygon boundaries.
///
/// Two units are queen neighbors when they share at least one boundary
/// coordinate (after snapping), rook neighbors when they share a boundary
/// segment (two consecutive snapped vertices present in both rings), and
/// bishop neighbors when queen but not rook.
SpatialGraph build_contiguity_graph(std::span<const SpatialUnit> units, const ContiguityRule& rule);

struct GraphMetrics {
    std::size_t n = 0;
    std::size_t m = 0;
    double avg_degree = 0.0;
    double density = 0.0;
    /// degree_histogram[k] = number of nodes of degree k.
    std::vector<std::size_t> degree_histogram;
};

/// k = 2m/n and d = 2m/(n(n-1)); d is 0 for a single node.
GraphMetrics graph_metrics(const SpatialGraph& g);

/// Metrics from counts alone (no histogram).
GraphMetrics graph_metrics(std::size_t n, std::size_t m);

// --- text formats ---------------------------------------------------------

/// Reads a "src,dst" edge list. Node order is `node_ids` when given, otherwise
/// the order of first appearance in the file.
SpatialGraph read_edge_list_csv(const std::string& path, const std::optional<std::vector<std::string>>& node_ids);

/// Reads a single-column "id" node list.
std::vector<std::string> read_node_list_csv(const std::string& path);

std::string format_edge_list_csv(const SpatialGraph& g);

/// One-line JSON object with n, m, avg_degree, density and degree_histogram.
std::string format_metrics_json(const GraphMetrics& metrics);

}  // namespace recnet
