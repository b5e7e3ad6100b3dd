#include "trailroute/gpx.hpp"

#include <expat.h>

#include <charconv>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>

#include "trailroute/error.hpp"

namespace trailroute {

namespace {

std::string shortest(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

// Local name of a possibly namespace-qualified element ("uri|trkpt" with
// namespace processing on).
const char* local_name(const char* name) {
    const char* bar = std::strrchr(name, '|');
    return bar ? bar + 1 : name;
}

struct GpxState {
    XML_Parser parser = nullptr;
    bool saw_root = false;
    int trk_depth = 0;
    std::vector<GeoPoint> points;
    std::string error;
};

bool parse_double(const char* text, double& out) {
    if (!text) return false;
    const char* end = text + std::strlen(text);
    const auto [ptr, ec] = std::from_chars(text, end, out);
    return ec == std::errc{} && ptr == end;
}

void XMLCALL on_start(void* data, const XML_Char* name, const XML_Char** attrs) {
    auto& s = *static_cast<GpxState*>(data);
    const char* local = local_name(name);
    if (!s.saw_root) {
        s.saw_root = true;
        if (std::strcmp(local, "gpx") != 0) {
            s.error = "root element is <" + std::string(local) + ">, expected <gpx>";
            XML_StopParser(s.parser, XML_FALSE);
        }
        return;
    }
    if (std::strcmp(local, "trk") == 0) ++s.trk_depth;
    if (std::strcmp(local, "trkpt") != 0 || s.trk_depth == 0) return;
    const char* lat = nullptr;
    const char* lon = nullptr;
    for (int i = 0; attrs[i]; i += 2) {
        if (std::strcmp(attrs[i], "lat") == 0) lat = attrs[i + 1];
        if (std::strcmp(attrs[i], "lon") == 0) lon = attrs[i + 1];
    }
    GeoPoint p;
    if (!parse_double(lat, p.lat) || !parse_double(lon, p.lon) || p.lat < -90 || p.lat > 90 || p.lon < -180 ||
        p.lon > 180) {
        s.error = "line " + std::to_string(XML_GetCurrentLineNumber(s.parser)) + ": trkpt has invalid lat/lon";
        XML_StopParser(s.parser, XML_FALSE);
        return;
    }
    s.points.push_back(p);
}

void XMLCALL on_end(void* data, const XML_Char* name) {
    auto& s = *static_cast<GpxState*>(data);
    if (std::strcmp(local_name(name), "trk") == 0 && s.trk_depth > 0) --s.trk_depth;
}

}  // namespace

std::string encode_gpx(const RoutePolyline& route, const std::string& name) {
    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<gpx version=\"1.1\" creator=\"trailroute\" xmlns=\"http://www.topografix.com/GPX/1/1\">\n"
       << "  <trk>\n    <name>" << escape(name) << "</name>\n    <trkseg>\n";
    for (const GeoPoint& p : route.points()) {
        os << "      <trkpt lat=\"" << shortest(p.lat) << "\" lon=\"" << shortest(p.lon) << "\"/>\n";
    }
    os << "    </trkseg>\n  </trk>\n</gpx>\n";
    return os.str();
}

RoutePolyline decode_gpx(const std::string& text) {
    GpxState state;
    std::unique_ptr<std::remove_pointer_t<XML_Parser>, decltype(&XML_ParserFree)> parser(
        XML_ParserCreateNS(nullptr, '|'), &XML_ParserFree);
    state.parser = parser.get();
    XML_SetUserData(parser.get(), &state);
    XML_SetElementHandler(parser.get(), on_start, on_end);
    if (XML_Parse(parser.get(), text.data(), static_cast<int>(text.size()), XML_TRUE) == XML_STATUS_ERROR &&
        state.error.empty()) {
        state.error = "line " + std::to_string(XML_GetCurrentLineNumber(parser.get())) + ": " +
                      XML_ErrorString(XML_GetErrorCode(parser.get()));
    }
    if (!state.error.empty()) throw MalformedGpx("GPX " + state.error);
    if (state.points.empty()) throw MalformedGpx("GPX contains no track points");
    return RoutePolyline(std::move(state.points));
}

void save_gpx(const RoutePolyline& route, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write GPX file " + path.string());
    out << encode_gpx(route);
}

RoutePolyline load_gpx(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open GPX file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return decode_gpx(ss.str());
}

}  // namespace trailroute
