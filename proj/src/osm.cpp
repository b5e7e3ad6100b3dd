#include "trailroute/osm.hpp"

#include <expat.h>

#include <charconv>
#include <cstring>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>

#include "trailroute/error.hpp"

namespace trailroute {

namespace {

struct PendingWay {
    NodeId id = 0;
    long line = 0;
    std::vector<NodeId> refs;
    std::map<std::string, std::string> tags;
};

struct OsmState {
    XML_Parser parser = nullptr;
    std::map<NodeId, GeoPoint> nodes;
    std::vector<PendingWay> ways;
    bool in_way = false;
    PendingWay current;
    std::string error;
};

const char* attribute(const XML_Char** attrs, const char* name) {
    for (int i = 0; attrs[i]; i += 2) {
        if (std::strcmp(attrs[i], name) == 0) return attrs[i + 1];
    }
    return nullptr;
}

template <typename T>
bool parse_number(const char* text, T& out) {
    if (!text) return false;
    const char* end = text + std::strlen(text);
    const auto [ptr, ec] = std::from_chars(text, end, out);
    return ec == std::errc{} && ptr == end;
}

void fail(OsmState& s, const std::string& what) {
    if (s.error.empty()) {
        s.error = "line " + std::to_string(XML_GetCurrentLineNumber(s.parser)) + ": " + what;
    }
    XML_StopParser(s.parser, XML_FALSE);
}

void XMLCALL on_start(void* data, const XML_Char* name, const XML_Char** attrs) {
    auto& s = *static_cast<OsmState*>(data);
    if (std::strcmp(name, "node") == 0) {
        NodeId id = 0;
        double lat = 0.0, lon = 0.0;
        if (!parse_number(attribute(attrs, "id"), id) || !parse_number(attribute(attrs, "lat"), lat) ||
            !parse_number(attribute(attrs, "lon"), lon)) {
            fail(s, "<node> needs numeric id, lat and lon");
            return;
        }
        s.nodes[id] = {lat, lon};
    } else if (std::strcmp(name, "way") == 0) {
        s.in_way = true;
        s.current = {};
        s.current.line = static_cast<long>(XML_GetCurrentLineNumber(s.parser));
        if (!parse_number(attribute(attrs, "id"), s.current.id)) fail(s, "<way> needs a numeric id");
    } else if (std::strcmp(name, "nd") == 0 && s.in_way) {
        NodeId ref = 0;
        if (!parse_number(attribute(attrs, "ref"), ref)) {
            fail(s, "<nd> needs a numeric ref");
            return;
        }
        s.current.refs.push_back(ref);
    } else if (std::strcmp(name, "tag") == 0 && s.in_way) {
        const char* k = attribute(attrs, "k");
        const char* v = attribute(attrs, "v");
        if (k && v) s.current.tags[k] = v;
    }
}

void XMLCALL on_end(void* data, const XML_Char* name) {
    auto& s = *static_cast<OsmState*>(data);
    if (std::strcmp(name, "way") == 0 && s.in_way) {
        s.in_way = false;
        if (s.current.tags.contains("highway")) s.ways.push_back(std::move(s.current));
    }
}

bool is_walkable(const std::map<std::string, std::string>& tags) {
    const std::string& highway = tags.at("highway");
    if (highway == "motorway" || highway == "motorway_link" || highway == "trunk") return false;
    if (const auto it = tags.find("foot"); it != tags.end() && it->second == "no") return false;
    return true;
}

std::string shortest(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

}  // namespace

RoadNetwork parse_osm(const std::string& xml) {
    OsmState state;
    std::unique_ptr<std::remove_pointer_t<XML_Parser>, decltype(&XML_ParserFree)> parser(XML_ParserCreate(nullptr),
                                                                                          &XML_ParserFree);
    state.parser = parser.get();
    XML_SetUserData(parser.get(), &state);
    XML_SetElementHandler(parser.get(), on_start, on_end);
    if (XML_Parse(parser.get(), xml.data(), static_cast<int>(xml.size()), XML_TRUE) == XML_STATUS_ERROR) {
        if (state.error.empty()) {
            state.error = "line " + std::to_string(XML_GetCurrentLineNumber(parser.get())) + ": " +
                          XML_ErrorString(XML_GetErrorCode(parser.get()));
        }
    }
    if (!state.error.empty()) throw ParseError("OSM " + state.error);

    RoadNetwork network;
    for (const PendingWay& way : state.ways) {
        for (NodeId ref : way.refs) {
            const auto it = state.nodes.find(ref);
            if (it == state.nodes.end()) {
                throw ParseError("OSM line " + std::to_string(way.line) + ": way " + std::to_string(way.id) +
                                 " references missing node " + std::to_string(ref));
            }
            network.add_node(ref, it->second);
        }
        const bool walkable = is_walkable(way.tags);
        for (std::size_t i = 0; i + 1 < way.refs.size(); ++i) network.add_edge(way.refs[i], way.refs[i + 1], walkable);
    }
    if (network.edge_count() == 0) throw EmptyNetwork("OSM data contains no highway edges");
    return network;
}

RoadNetwork load_osm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open OSM file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_osm(ss.str());
}

std::string write_osm(const RoadNetwork& network) {
    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<osm version=\"0.6\" generator=\"trailroute\">\n";
    for (NodeId id : network.node_ids()) {
        const GeoPoint p = network.position(id);
        os << "  <node id=\"" << id << "\" lat=\"" << shortest(p.lat) << "\" lon=\"" << shortest(p.lon) << "\"/>\n";
    }
    NodeId way_id = 1;
    for (const RoadEdge& e : network.edges()) {
        os << "  <way id=\"" << way_id++ << "\">\n"
           << "    <nd ref=\"" << e.from << "\"/>\n    <nd ref=\"" << e.to << "\"/>\n"
           << "    <tag k=\"highway\" v=\"" << (e.walkable ? "footway" : "motorway") << "\"/>\n  </way>\n";
    }
    os << "</osm>\n";
    return os.str();
}

void save_osm(const RoadNetwork& network, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write OSM file " + path.string());
    out << write_osm(network);
}

}  // namespace trailroute
