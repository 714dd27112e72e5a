#pragma once

#include "recnet/spatial_graph.hpp"

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace recnet::geojson {

/// Reads Polygon and MultiPolygon features from a FeatureCollection. Each
/// feature needs an "id" property (string, or integer converted to text).
/// Features with null geometry yield units without geometry.
std::vector<SpatialUnit> parse_feature_collection(std::string_view text);

std::vector<SpatialUnit> read_feature_collection(const std::string& path);

/// Serialises units as a FeatureCollection of Polygon features.
std::string format_feature_collection(std::span<const SpatialUnit> units);

/// Returns `text` with a boolean property `property` added to every feature,
/// true when the feature's id is in `selected`.
std::string annotate_features(std::string_view text, const std::vector<std::string>& selected,
                              const std::string& property = "multiplier");

}  // namespace recnet::geojson
