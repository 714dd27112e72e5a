#pragma once
// Shared fixtures for the test binaries.

#include "recnet/spatial_graph.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

namespace testsupport {

struct Rect {
    int x0, y0, x1, y1;
};

// Rectangle ring listing every lattice point on the boundary, counter-clockwise,
// so neighbouring rectangles of different widths still share vertices at T-junctions.
inline recnet::Ring lattice_ring(const Rect& r) {
    recnet::Ring ring;
    for (int x = r.x0; x < r.x1; ++x) ring.push_back({double(x), double(r.y0)});
    for (int y = r.y0; y < r.y1; ++y) ring.push_back({double(r.x1), double(y)});
    for (int x = r.x1; x > r.x0; --x) ring.push_back({double(x), double(r.y1)});
    for (int y = r.y1; y > r.y0; --y) ring.push_back({double(r.x0), double(y)});
    ring.push_back(ring.front());
    return ring;
}

inline std::vector<recnet::SpatialUnit> units_from(const std::vector<Rect>& rects, const std::string& prefix = "r") {
    std::vector<recnet::SpatialUnit> out;
    for (std::size_t i = 0; i < rects.size(); ++i) {
        out.push_back({prefix + std::to_string(i), recnet::Polygon{{lattice_ring(rects[i])}}});
    }
    return out;
}

inline std::vector<Rect> unit_grid(int rows, int cols) {
    std::vector<Rect> out;
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) out.push_back({c, r, c + 1, r + 1});
    return out;
}

// Brute-force geometric oracle for closed axis-aligned rectangles:
// 0 = disjoint, 1 = touch at a point, 2 = share a boundary segment.
inline int touch_kind(const Rect& a, const Rect& b) {
    const int ox = std::min(a.x1, b.x1) - std::max(a.x0, b.x0);
    const int oy = std::min(a.y1, b.y1) - std::max(a.y0, b.y0);
    if (ox < 0 || oy < 0) return 0;
    if (ox > 0 && oy > 0) return 3;  // overlapping interiors, not expected in a tiling
    if (ox == 0 && oy == 0) return 1;
    return 2;
}

inline std::filesystem::path scratch_dir(const std::string& name) {
    const char* base = std::getenv("RECNET_TEST_TMP");
    std::filesystem::path dir = base ? std::filesystem::path(base) : std::filesystem::temp_directory_path() / "recnet_tests";
    dir /= name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

// Path graph p0 - p1 - ... - p{n-1}.
inline recnet::SpatialGraph path_graph(std::size_t n) {
    std::vector<std::string> ids;
    std::vector<std::pair<recnet::NodeIndex, recnet::NodeIndex>> edges;
    for (std::size_t i = 0; i < n; ++i) ids.push_back("p" + std::to_string(i));
    for (std::size_t i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
    return recnet::graph_from_indices(ids, edges);
}

}  // namespace testsupport
