#include "recnet/spatial_graph.hpp"

#include "recnet/csv.hpp"
#include "recnet/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <unordered_set>

namespace recnet {

const char* to_string(ContiguityKind kind) {
    switch (kind) {
        case ContiguityKind::queen: return "queen";
        case ContiguityKind::rook: return "rook";
        case ContiguityKind::bishop: return "bishop";
    }
    return "?";
}

ContiguityKind parse_contiguity_kind(const std::string& text) {
    if (text == "queen") return ContiguityKind::queen;
    if (text == "rook") return ContiguityKind::rook;
    if (text == "bishop") return ContiguityKind::bishop;
    throw ConfigError("unknown contiguity rule '" + text + "' (expected queen, rook or bishop)");
}

std::optional<NodeIndex> SpatialGraph::find(const std::string& id) const {
    const auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

NodeIndex SpatialGraph::index_of(const std::string& id) const {
    const auto it = index_.find(id);
    if (it == index_.end()) throw DataError("unknown node id '" + id + "'");
    return it->second;
}

bool SpatialGraph::has_edge(NodeIndex a, NodeIndex b) const {
    const auto& adj = adjacency_.at(a);
    return std::binary_search(adj.begin(), adj.end(), b);
}

std::vector<std::pair<std::string, std::string>> SpatialGraph::edge_id_pairs() const {
    std::vector<std::pair<std::string, std::string>> out;
    out.reserve(edges_.size());
    for (const auto& [a, b] : edges_) {
        const auto& ia = ids_[a];
        const auto& ib = ids_[b];
        out.emplace_back(std::min(ia, ib), std::max(ia, ib));
    }
    std::sort(out.begin(), out.end());
    return out;
}

SpatialGraph graph_from_indices(std::vector<std::string> node_ids,
                                std::vector<std::pair<NodeIndex, NodeIndex>> edges) {
    SpatialGraph g;
    g.ids_ = std::move(node_ids);
    g.index_.reserve(g.ids_.size());
    for (NodeIndex i = 0; i < g.ids_.size(); ++i) {
        if (!g.index_.emplace(g.ids_[i], i).second) {
            throw DataError("duplicate node id '" + g.ids_[i] + "'");
        }
    }
    const std::size_t n = g.ids_.size();
    for (auto& [a, b] : edges) {
        if (a >= n || b >= n) throw DataError("edge endpoint index out of range");
        if (a == b) throw DataError("self-loop on node '" + g.ids_[a] + "'");
        if (a > b) std::swap(a, b);
    }
    std::sort(edges.begin(), edges.end());
    for (std::size_t e = 1; e < edges.size(); ++e) {
        if (edges[e] == edges[e - 1]) {
            throw DataError("duplicate edge ('" + g.ids_[edges[e].first] + "', '" + g.ids_[edges[e].second] + "')");
        }
    }
    g.adjacency_.assign(n, {});
    for (const auto& [a, b] : edges) {
        g.adjacency_[a].push_back(b);
        g.adjacency_[b].push_back(a);
    }
    for (auto& adj : g.adjacency_) std::sort(adj.begin(), adj.end());
    g.edges_ = std::move(edges);
    return g;
}

SpatialGraph load_edge_list(std::vector<std::string> node_ids,
                            const std::vector<std::pair<std::string, std::string>>& edges) {
    std::unordered_map<std::string, NodeIndex> index;
    for (NodeIndex i = 0; i < node_ids.size(); ++i) {
        if (!index.emplace(node_ids[i], i).second) throw DataError("duplicate node id '" + node_ids[i] + "'");
    }
    std::vector<std::pair<NodeIndex, NodeIndex>> indexed;
    indexed.reserve(edges.size());
    for (const auto& [src, dst] : edges) {
        const auto a = index.find(src);
        if (a == index.end()) throw DataError("edge references unknown node '" + src + "'");
        const auto b = index.find(dst);
        if (b == index.end()) throw DataError("edge references unknown node '" + dst + "'");
        if (a->second == b->second) throw DataError("self-loop on node '" + src + "'");
        indexed.emplace_back(a->second, b->second);
    }
    return graph_from_indices(std::move(node_ids), std::move(indexed));
}

namespace {

using Key = std::pair<double, double>;

Key snap(const Point& p, double tol) {
    if (tol > 0.0) return {std::round(p.x / tol) + 0.0, std::round(p.y / tol) + 0.0};
    return {p.x + 0.0, p.y + 0.0};
}

void validate_ring(const Ring& ring, const std::string& id) {
    if (ring.size() < 4) {
        throw DataError("unit '" + id + "': ring has " + std::to_string(ring.size()) + " coordinates (need at least 4)");
    }
    if (!(ring.front() == ring.back())) throw DataError("unit '" + id + "': ring is not closed");
}

}  // namespace

SpatialGraph build_contiguity_graph(std::span<const SpatialUnit> units, const ContiguityRule& rule) {
    if (!(rule.snap_tolerance >= 0.0)) throw ConfigError("snap tolerance must be nonnegative");

    std::vector<std::string> ids;
    ids.reserve(units.size());
    std::unordered_set<std::string> seen;
    for (const auto& u : units) {
        if (!seen.insert(u.id).second) throw DataError("duplicate unit id '" + u.id + "'");
        if (!u.geometry) throw DataError("unit '" + u.id + "' has no geometry");
        if (u.geometry->rings.empty()) throw DataError("unit '" + u.id + "' has an empty polygon");
        for (const auto& ring : u.geometry->rings) validate_ring(ring, u.id);
        ids.push_back(u.id);
    }

    // Boundary vertex -> units touching it, boundary segment -> units owning it.
    std::map<Key, std::vector<NodeIndex>> vertex_owners;
    std::map<std::pair<Key, Key>, std::vector<NodeIndex>> segment_owners;
    for (NodeIndex i = 0; i < units.size(); ++i) {
        std::set<Key> vertices;
        std::set<std::pair<Key, Key>> segments;
        for (const auto& ring : units[i].geometry->rings) {
            for (std::size_t p = 0; p + 1 < ring.size(); ++p) {
                const Key a = snap(ring[p], rule.snap_tolerance);
                const Key b = snap(ring[p + 1], rule.snap_tolerance);
                vertices.insert(a);
                if (a == b) continue;
                segments.insert(a < b ? std::pair{a, b} : std::pair{b, a});
            }
        }
        for (const auto& v : vertices) vertex_owners[v].push_back(i);
        for (const auto& s : segments) segment_owners[s].push_back(i);
    }

    auto collect_pairs = [](const auto& owners) {
        std::set<std::pair<NodeIndex, NodeIndex>> pairs;
        for (const auto& [key, list] : owners) {
            for (std::size_t a = 0; a < list.size(); ++a) {
                for (std::size_t b = a + 1; b < list.size(); ++b) pairs.emplace(list[a], list[b]);
            }
        }
        return pairs;
    };
    const auto queen = collect_pairs(vertex_owners);
    const auto rook = collect_pairs(segment_owners);

    std::vector<std::pair<NodeIndex, NodeIndex>> edges;
    switch (rule.kind) {
        case ContiguityKind::queen:
            edges.assign(queen.begin(), queen.end());
            break;
        case ContiguityKind::rook:
            edges.assign(rook.begin(), rook.end());
            break;
        case ContiguityKind::bishop:
            std::set_difference(queen.begin(), queen.end(), rook.begin(), rook.end(), std::back_inserter(edges));
            break;
    }
    return graph_from_indices(std::move(ids), std::move(edges));
}

GraphMetrics graph_metrics(std::size_t n, std::size_t m) {
    if (n == 0) throw DataError("graph metrics need at least one node");
    GraphMetrics out;
    out.n = n;
    out.m = m;
    const double two_m = 2.0 * static_cast<double>(m);
    out.avg_degree = two_m / static_cast<double>(n);
    out.density = n == 1 ? 0.0 : two_m / (static_cast<double>(n) * static_cast<double>(n - 1));
    return out;
}

GraphMetrics graph_metrics(const SpatialGraph& g) {
    GraphMetrics out = graph_metrics(g.num_nodes(), g.num_edges());
    for (NodeIndex i = 0; i < g.num_nodes(); ++i) {
        const std::size_t k = g.degree(i);
        if (out.degree_histogram.size() <= k) out.degree_histogram.resize(k + 1, 0);
        ++out.degree_histogram[k];
    }
    return out;
}

SpatialGraph read_edge_list_csv(const std::string& path, const std::optional<std::vector<std::string>>& node_ids) {
    const auto table = csv::read_file(path);
    const std::size_t src = table.column("src");
    const std::size_t dst = table.column("dst");
    std::vector<std::pair<std::string, std::string>> edges;
    edges.reserve(table.rows.size());
    std::vector<std::string> order;
    std::unordered_set<std::string> seen;
    for (const auto& row : table.rows) {
        edges.emplace_back(row[src], row[dst]);
        if (!node_ids) {
            for (const auto* id : {&row[src], &row[dst]}) {
                if (seen.insert(*id).second) order.push_back(*id);
            }
        }
    }
    try {
        return load_edge_list(node_ids ? *node_ids : std::move(order), edges);
    } catch (const DataError& e) {
        throw DataError(path + ": " + e.what());
    }
}

std::vector<std::string> read_node_list_csv(const std::string& path) {
    const auto table = csv::read_file(path);
    const std::size_t col = table.column("id");
    std::vector<std::string> ids;
    ids.reserve(table.rows.size());
    for (const auto& row : table.rows) ids.push_back(row[col]);
    return ids;
}

std::string format_edge_list_csv(const SpatialGraph& g) {
    std::string out = "src,dst\n";
    for (const auto& [a, b] : g.edges()) {
        out += csv::escape(g.id(a));
        out += ',';
        out += csv::escape(g.id(b));
        out += '\n';
    }
    return out;
}

std::string format_metrics_json(const GraphMetrics& metrics) {
    std::ostringstream os;
    os << "{\"n\":" << metrics.n << ",\"m\":" << metrics.m << ",\"avg_degree\":" << csv::format_double(metrics.avg_degree)
       << ",\"density\":" << csv::format_double(metrics.density) << ",\"degree_histogram\":[";
    for (std::size_t k = 0; k < metrics.degree_histogram.size(); ++k) {
        if (k) os << ',';
        os << metrics.degree_histogram[k];
    }
    os << "]}";
    return os.str();
}

}  // namespace recnet
