#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "trailroute/error.hpp"
#include "trailroute/harness.hpp"

namespace trailroute {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const json& require(const json& obj, const char* key, const std::string& where) {
    if (!obj.is_object() || !obj.contains(key)) throw InvalidConfig("manifest " + where + ": missing \"" + key + "\"");
    return obj.at(key);
}

std::string require_string(const json& obj, const char* key, const std::string& where) {
    const json& v = require(obj, key, where);
    if (!v.is_string()) throw InvalidConfig("manifest " + where + ": \"" + key + "\" must be a string");
    return v.get<std::string>();
}

GeoPoint require_geo(const json& obj, const char* key, const std::string& where) {
    const json& v = require(obj, key, where);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
        throw InvalidConfig("manifest " + where + ": \"" + key + "\" must be [lat, lon]");
    }
    GeoPoint g{v[0].get<double>(), v[1].get<double>()};
    if (g.lat < -90 || g.lat > 90 || g.lon < -180 || g.lon > 180) {
        throw InvalidConfig("manifest " + where + ": \"" + key + "\" is out of range");
    }
    return g;
}

Rgb require_color(const json& obj, const std::string& where) {
    const json& v = require(obj, "color", where);
    if (!v.is_array() || v.size() != 3) throw InvalidConfig("manifest " + where + ": \"color\" must be [r, g, b]");
    Rgb c{};
    for (int i = 0; i < 3; ++i) {
        if (!v[i].is_number_integer() || v[i].get<int>() < 0 || v[i].get<int>() > 255) {
            throw InvalidConfig("manifest " + where + ": color channels must be integers in 0..255");
        }
        c[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(v[i].get<int>());
    }
    return c;
}

fs::path resolve(const fs::path& base, const std::string& p, bool check) {
    fs::path out = fs::path(p).is_absolute() ? fs::path(p) : base / p;
    out = out.lexically_normal();
    if (check && !fs::exists(out)) throw IoError("manifest references missing file " + out.string());
    return out;
}

std::string relative_to(const fs::path& p, const fs::path& base) {
    const fs::path abs = fs::absolute(p).lexically_normal();
    const fs::path rel = abs.lexically_relative(base);
    return rel.empty() ? abs.generic_string() : rel.generic_string();
}

}  // namespace

DatasetManifest parse_manifest(const std::string& json_text, const fs::path& base, bool check_files) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("manifest is not valid JSON: ") + e.what());
    }
    const json& maps = require(doc, "maps", "root");
    if (!maps.is_array()) throw InvalidConfig("manifest root: \"maps\" must be an array");

    DatasetManifest out;
    std::set<std::string> map_ids;
    for (const json& m : maps) {
        MapEntry entry;
        entry.id = require_string(m, "id", "map");
        const std::string where = "map " + entry.id;
        if (!map_ids.insert(entry.id).second) throw InvalidConfig("manifest: duplicate map id " + entry.id);
        entry.image = resolve(base, require_string(m, "image", where), check_files);
        entry.gcps = resolve(base, require_string(m, "gcps", where), check_files);
        if (m.contains("osm")) entry.osm = resolve(base, require_string(m, "osm", where), check_files);

        std::set<Rgb> colors;
        std::set<std::string> trail_ids;
        const json& trails = require(m, "trails", where);
        if (!trails.is_array()) throw InvalidConfig("manifest " + where + ": \"trails\" must be an array");
        for (const json& t : trails) {
            TrailEntry trail;
            trail.id = require_string(t, "id", where + " trail");
            const std::string twhere = where + " trail " + trail.id;
            if (!trail_ids.insert(trail.id).second) throw InvalidConfig("manifest: duplicate trail id in " + twhere);
            trail.color = require_color(t, twhere);
            if (!colors.insert(trail.color).second) {
                throw InvalidConfig("manifest " + twhere + ": trail colors must be distinct within a map");
            }
            trail.start = require_geo(t, "start", twhere);
            trail.goal = require_geo(t, "goal", twhere);
            trail.mask = resolve(base, require_string(t, "mask", twhere), check_files);
            entry.trails.push_back(std::move(trail));
        }
        out.maps.push_back(std::move(entry));
    }
    return out;
}

DatasetManifest load_manifest(const fs::path& path, bool check_files) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open manifest " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_manifest(ss.str(), fs::absolute(path).parent_path(), check_files);
}

std::string manifest_to_json(const DatasetManifest& manifest, const fs::path& base) {
    json maps = json::array();
    for (const MapEntry& m : manifest.maps) {
        json jm{{"id", m.id}, {"image", relative_to(m.image, base)}, {"gcps", relative_to(m.gcps, base)}};
        if (m.osm) jm["osm"] = relative_to(*m.osm, base);
        json trails = json::array();
        for (const TrailEntry& t : m.trails) {
            trails.push_back({{"id", t.id},
                              {"color", {t.color[0], t.color[1], t.color[2]}},
                              {"start", {t.start.lat, t.start.lon}},
                              {"goal", {t.goal.lat, t.goal.lon}},
                              {"mask", relative_to(t.mask, base)}});
        }
        jm["trails"] = std::move(trails);
        maps.push_back(std::move(jm));
    }
    return json{{"maps", maps}}.dump(2) + "\n";
}

void save_manifest(const DatasetManifest& manifest, const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write manifest " + path.string());
    out << manifest_to_json(manifest, fs::absolute(path).parent_path().lexically_normal());
}

}  // namespace trailroute
