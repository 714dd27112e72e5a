#include "recnet/geojson.hpp"

#include "recnet/csv.hpp"
#include "recnet/error.hpp"

#include <json.hpp>

#include <set>

namespace recnet::geojson {

using nlohmann::json;

namespace {

Ring parse_ring(const json& coords, const std::string& id) {
    if (!coords.is_array()) throw DataError("feature '" + id + "': ring is not an array");
    Ring ring;
    ring.reserve(coords.size());
    for (const auto& c : coords) {
        if (!c.is_array() || c.size() < 2 || !c[0].is_number() || !c[1].is_number()) {
            throw DataError("feature '" + id + "': malformed coordinate");
        }
        ring.push_back({c[0].get<double>(), c[1].get<double>()});
    }
    return ring;
}

void append_polygon(const json& rings, const std::string& id, Polygon& out) {
    if (!rings.is_array()) throw DataError("feature '" + id + "': polygon coordinates are not an array");
    for (const auto& r : rings) out.rings.push_back(parse_ring(r, id));
}

std::string feature_id(const json& feature, std::size_t position) {
    const auto props = feature.find("properties");
    if (props == feature.end() || !props->is_object()) {
        throw DataError("feature #" + std::to_string(position) + " has no properties");
    }
    const auto id = props->find("id");
    if (id == props->end()) throw DataError("feature #" + std::to_string(position) + " has no 'id' property");
    if (id->is_string()) return id->get<std::string>();
    if (id->is_number_integer()) return std::to_string(id->get<long long>());
    throw DataError("feature #" + std::to_string(position) + ": 'id' must be a string");
}

}  // namespace

std::vector<SpatialUnit> parse_feature_collection(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw DataError(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object() || doc.value("type", "") != "FeatureCollection") {
        throw DataError("expected a FeatureCollection");
    }
    const auto features = doc.find("features");
    if (features == doc.end() || !features->is_array()) throw DataError("FeatureCollection has no features array");

    std::vector<SpatialUnit> units;
    units.reserve(features->size());
    std::size_t position = 0;
    for (const auto& f : *features) {
        SpatialUnit unit;
        unit.id = feature_id(f, position);
        const auto geom = f.find("geometry");
        if (geom != f.end() && !geom->is_null()) {
            const std::string type = geom->value("type", "");
            const auto coords = geom->find("coordinates");
            if (coords == geom->end()) throw DataError("feature '" + unit.id + "': geometry has no coordinates");
            Polygon poly;
            if (type == "Polygon") {
                append_polygon(*coords, unit.id, poly);
            } else if (type == "MultiPolygon") {
                for (const auto& part : *coords) append_polygon(part, unit.id, poly);
            } else {
                throw DataError("feature '" + unit.id + "': unsupported geometry type '" + type + "'");
            }
            unit.geometry = std::move(poly);
        }
        units.push_back(std::move(unit));
        ++position;
    }
    return units;
}

std::vector<SpatialUnit> read_feature_collection(const std::string& path) {
    try {
        return parse_feature_collection(csv::read_text(path));
    } catch (const IoError&) {
        throw;
    } catch (const DataError& e) {
        throw DataError(path + ": " + e.what());
    }
}

std::string format_feature_collection(std::span<const SpatialUnit> units) {
    json features = json::array();
    for (const auto& u : units) {
        json feature = {{"type", "Feature"}, {"properties", {{"id", u.id}}}};
        if (u.geometry) {
            json rings = json::array();
            for (const auto& ring : u.geometry->rings) {
                json coords = json::array();
                for (const auto& p : ring) coords.push_back({p.x, p.y});
                rings.push_back(std::move(coords));
            }
            feature["geometry"] = {{"type", "Polygon"}, {"coordinates", std::move(rings)}};
        } else {
            feature["geometry"] = nullptr;
        }
        features.push_back(std::move(feature));
    }
    json doc = {{"type", "FeatureCollection"}, {"features", std::move(features)}};
    return doc.dump() + "\n";
}

std::string annotate_features(std::string_view text, const std::vector<std::string>& selected,
                              const std::string& property) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw DataError(std::string("invalid JSON: ") + e.what());
    }
    const std::set<std::string> chosen(selected.begin(), selected.end());
    std::size_t position = 0;
    for (auto& f : doc.at("features")) {
        const std::string id = feature_id(f, position++);
        f["properties"][property] = chosen.contains(id);
    }
    return doc.dump() + "\n";
}

}  // namespace recnet::geojson
