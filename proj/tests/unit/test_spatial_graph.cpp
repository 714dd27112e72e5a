#include "doctest.h"
#include "support.hpp"

#include "recnet/error.hpp"
#include "recnet/spatial_graph.hpp"

#include <algorithm>
#include <random>
#include <set>

using namespace recnet;
using testsupport::Rect;

namespace {

using IdPairs = std::set<std::pair<std::string, std::string>>;

IdPairs as_set(const SpatialGraph& g) {
    const auto pairs = g.edge_id_pairs();
    return {pairs.begin(), pairs.end()};
}

// Oracle edges from the rectangle overlap test.
IdPairs oracle_edges(const std::vector<Rect>& rects, ContiguityKind kind, const std::string& prefix = "r") {
    IdPairs out;
    for (std::size_t i = 0; i < rects.size(); ++i) {
        for (std::size_t j = i + 1; j < rects.size(); ++j) {
            const int t = testsupport::touch_kind(rects[i], rects[j]);
            REQUIRE(t != 3);
            const bool keep = (kind == ContiguityKind::queen && t > 0) || (kind == ContiguityKind::rook && t == 2) ||
                              (kind == ContiguityKind::bishop && t == 1);
            if (!keep) continue;
            auto a = prefix + std::to_string(i);
            auto b = prefix + std::to_string(j);
            if (b < a) std::swap(a, b);
            out.insert({a, b});
        }
    }
    return out;
}

std::vector<Rect> bricks() {
    std::vector<Rect> out;
    for (int row = 0; row < 4; ++row) {
        const int shift = row % 2 ? -1 : 0;
        const int count = row % 2 ? 4 : 3;
        for (int j = 0; j < count; ++j) out.push_back({shift + 2 * j, row, shift + 2 * j + 2, row + 1});
    }
    return out;
}

}  // namespace

TEST_CASE("3x3 grid edge counts match the overlap oracle") {
    const auto rects = testsupport::unit_grid(3, 3);
    const auto units = testsupport::units_from(rects);
    const auto queen = build_contiguity_graph(units, {ContiguityKind::queen, 0.0});
    const auto rook = build_contiguity_graph(units, {ContiguityKind::rook, 0.0});
    const auto bishop = build_contiguity_graph(units, {ContiguityKind::bishop, 0.0});

    CHECK(queen.num_edges() == 20);
    CHECK(rook.num_edges() == 12);
    CHECK(bishop.num_edges() == 8);
    CHECK(as_set(queen) == oracle_edges(rects, ContiguityKind::queen));
    CHECK(as_set(rook) == oracle_edges(rects, ContiguityKind::rook));
    CHECK(as_set(bishop) == oracle_edges(rects, ContiguityKind::bishop));

    // center is r4
    CHECK(queen.degree(4) == 8);
    CHECK(rook.degree(4) == 4);
    CHECK(bishop.degree(4) == 4);
    CHECK(bishop.degree(0) == 1);
    CHECK(queen.degree(0) == 3);

    IdPairs merged = as_set(rook);
    const auto b = as_set(bishop);
    merged.insert(b.begin(), b.end());
    CHECK(merged == as_set(queen));
    for (const auto& e : b) CHECK(as_set(rook).count(e) == 0);
}

TEST_CASE("brick tiling with T-junction vertices") {
    const auto rects = bricks();
    const auto units = testsupport::units_from(rects);
    for (auto kind : {ContiguityKind::queen, ContiguityKind::rook, ContiguityKind::bishop}) {
        CAPTURE(to_string(kind));
        CHECK(as_set(build_contiguity_graph(units, {kind, 0.0})) == oracle_edges(rects, kind));
    }
}

TEST_CASE("contiguity graph is invariant under unit order") {
    const auto rects = bricks();
    auto units = testsupport::units_from(rects);
    const auto reference = as_set(build_contiguity_graph(units, {}));
    std::mt19937 rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        std::shuffle(units.begin(), units.end(), rng);
        const auto g = build_contiguity_graph(units, {});
        CHECK(as_set(g) == reference);
        for (NodeIndex i = 0; i < g.num_nodes(); ++i) CHECK(g.id(i) == units[i].id);
    }
}

TEST_CASE("neighbor lists are sorted and symmetric") {
    const auto g = build_contiguity_graph(testsupport::units_from(testsupport::unit_grid(4, 5)), {});
    for (NodeIndex i = 0; i < g.num_nodes(); ++i) {
        const auto nb = g.neighbors(i);
        CHECK(std::is_sorted(nb.begin(), nb.end()));
        for (NodeIndex j : nb) {
            CHECK(j != i);
            CHECK(g.has_edge(j, i));
        }
    }
    for (const auto& [a, b] : g.edges()) CHECK(a < b);
}

TEST_CASE("snapping absorbs tiny coordinate noise") {
    auto units = testsupport::units_from(testsupport::unit_grid(3, 3));
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> noise(-1e-9, 1e-9);
    for (auto& u : units) {
        auto& ring = u.geometry->rings[0];
        for (std::size_t k = 0; k + 1 < ring.size(); ++k) {
            ring[k].x += noise(rng);
            ring[k].y += noise(rng);
        }
        ring.back() = ring.front();
    }
    CHECK(build_contiguity_graph(units, {ContiguityKind::queen, 1e-6}).num_edges() == 20);
    CHECK(build_contiguity_graph(units, {ContiguityKind::rook, 1e-6}).num_edges() == 12);
    CHECK(build_contiguity_graph(units, {ContiguityKind::queen, 0.0}).num_edges() < 20);
}

TEST_CASE("multi-ring units contribute every ring") {
    // unit a has two parts: one touching b, one touching c
    std::vector<SpatialUnit> units;
    units.push_back({"a", Polygon{{testsupport::lattice_ring({0, 0, 1, 1}), testsupport::lattice_ring({5, 0, 6, 1})}}});
    units.push_back({"b", Polygon{{testsupport::lattice_ring({1, 0, 2, 1})}}});
    units.push_back({"c", Polygon{{testsupport::lattice_ring({6, 1, 7, 2})}}});
    const auto g = build_contiguity_graph(units, {ContiguityKind::queen, 0.0});
    CHECK(as_set(g) == IdPairs{{"a", "b"}, {"a", "c"}});
    const auto rook = build_contiguity_graph(units, {ContiguityKind::rook, 0.0});
    CHECK(as_set(rook) == IdPairs{{"a", "b"}});
}

TEST_CASE("invalid geometry and ids are rejected") {
    auto units = testsupport::units_from(testsupport::unit_grid(1, 2));
    SUBCASE("duplicate id") {
        units[1].id = units[0].id;
        CHECK_THROWS_AS(build_contiguity_graph(units, {}), DataError);
    }
    SUBCASE("open ring") {
        units[0].geometry->rings[0].pop_back();
        CHECK_THROWS_AS(build_contiguity_graph(units, {}), DataError);
    }
    SUBCASE("short ring") {
        units[0].geometry->rings[0] = {{0, 0}, {1, 0}, {0, 0}};
        CHECK_THROWS_AS(build_contiguity_graph(units, {}), DataError);
    }
    SUBCASE("missing geometry") {
        units[0].geometry.reset();
        CHECK_THROWS_AS(build_contiguity_graph(units, {}), DataError);
    }
    SUBCASE("negative tolerance") {
        CHECK_THROWS_AS(build_contiguity_graph(units, {ContiguityKind::queen, -1.0}), ConfigError);
    }
    CHECK_THROWS_AS(parse_contiguity_kind("hexagonal"), ConfigError);
    CHECK(parse_contiguity_kind("rook") == ContiguityKind::rook);
}

TEST_CASE("edge list loading checks endpoints") {
    const std::vector<std::string> ids{"a", "b", "c"};
    CHECK(load_edge_list(ids, {{"a", "b"}, {"c", "b"}}).num_edges() == 2);
    CHECK_THROWS_WITH_AS(load_edge_list(ids, {{"a", "a"}}), doctest::Contains("self-loop on node 'a'"), DataError);
    CHECK_THROWS_WITH_AS(load_edge_list(ids, {{"a", "zz"}}), doctest::Contains("zz"), DataError);
    CHECK_THROWS_AS(load_edge_list(ids, {{"a", "b"}, {"b", "a"}}), DataError);
    CHECK_THROWS_AS(load_edge_list({"a", "a"}, {}), DataError);
    CHECK_THROWS_AS(graph_from_indices(ids, {{0, 3}}), DataError);

    const auto g = load_edge_list(ids, {{"c", "a"}});
    CHECK(g.edges().front() == std::pair<NodeIndex, NodeIndex>{0, 2});
    CHECK(g.edge_id_pairs().front() == std::pair<std::string, std::string>{"a", "c"});
    CHECK(g.index_of("b") == 1);
    CHECK_THROWS_AS(g.index_of("q"), DataError);
    CHECK(g.degree(1) == 0);
}

TEST_CASE("graph metrics") {
    const auto big = graph_metrics(2010, 6079);
    CHECK(std::abs(big.avg_degree - 6.049) <= 0.001);
    CHECK(std::abs(big.density - 0.00301) <= 0.00001);

    const auto tri = graph_metrics(load_edge_list({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}, {"a", "c"}}));
    CHECK(tri.avg_degree == 2.0);
    CHECK(tri.density == 1.0);
    CHECK(tri.degree_histogram == std::vector<std::size_t>{0, 0, 3});

    const auto grid = graph_metrics(build_contiguity_graph(testsupport::units_from(testsupport::unit_grid(3, 3)), {}));
    CHECK(grid.avg_degree == doctest::Approx(40.0 / 9.0));
    CHECK(grid.density == doctest::Approx(20.0 / 36.0));
    CHECK(grid.degree_histogram == std::vector<std::size_t>{0, 0, 0, 4, 0, 4, 0, 0, 1});

    CHECK(graph_metrics(1, 0).density == 0.0);
    CHECK_THROWS_AS(graph_metrics(0, 0), DataError);
}
