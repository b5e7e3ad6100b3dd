#include <httplib.h>

#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "trailroute/error.hpp"
#include "trailroute/routing.hpp"

namespace trailroute {

namespace {

std::string format_coordinate(double v) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(7) << v;
    return os.str();
}

}  // namespace

HttpRouter::HttpRouter(std::string base_url, HttpRouterOptions options)
    : base_url_(std::move(base_url)), options_(options) {
    const auto scheme_end = base_url_.find("://");
    if (scheme_end == std::string::npos) throw InvalidConfig("router URL must start with http://: " + base_url_);
    const auto path_start = base_url_.find('/', scheme_end + 3);
    scheme_host_ = base_url_.substr(0, path_start);
    path_prefix_ = path_start == std::string::npos ? "" : base_url_.substr(path_start);
    while (!path_prefix_.empty() && path_prefix_.back() == '/') path_prefix_.pop_back();
    if (path_prefix_.size() < 6 || path_prefix_.compare(path_prefix_.size() - 6, 6, "/route") != 0) {
        path_prefix_ += "/route";
    }
}

std::string HttpRouter::request_target(const RoutingRequest& request) const {
    std::string target = path_prefix_ + "?";
    for (const GeoPoint& p : request.waypoints) {
        target += "point=" + format_coordinate(p.lat) + "," + format_coordinate(p.lon) + "&";
    }
    target += "profile=foot&points_encoded=false&instructions=false&calc_points=true";
    return target;
}

RoutePolyline parse_route_response(const std::string& body) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error& e) {
        throw MalformedResponse(std::string("router response is not JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("paths") || !doc["paths"].is_array() || doc["paths"].empty()) {
        if (doc.is_object() && doc.contains("message")) {
            throw NoRouteFound("router: " + doc["message"].get<std::string>());
        }
        throw MalformedResponse("router response has no paths");
    }
    const auto& points = doc["paths"][0]["points"];
    if (!points.is_object() || !points.contains("coordinates") || !points["coordinates"].is_array()) {
        throw MalformedResponse("router response points must be unencoded GeoJSON coordinates");
    }
    std::vector<GeoPoint> out;
    for (const auto& c : points["coordinates"]) {
        if (!c.is_array() || c.size() < 2 || !c[0].is_number() || !c[1].is_number()) {
            throw MalformedResponse("router coordinate is not [lon, lat(, ele)]");
        }
        out.push_back({c[1].get<double>(), c[0].get<double>()});
    }
    if (out.empty()) throw MalformedResponse("router returned an empty path");
    return RoutePolyline(std::move(out));
}

RoutePolyline HttpRouter::route(const RoutingRequest& request) const {
    if (request.waypoints.size() < 2) throw InvalidConfig("routing request needs at least two waypoints");
    const std::string target = request_target(request);

    httplib::Client client(scheme_host_);
    const auto timeout = std::chrono::duration_cast<std::chrono::seconds>(options_.timeout);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);

    std::string transport_error;
    for (int attempt = 0; attempt <= options_.retries; ++attempt) {
        auto res = client.Get(target);
        if (!res) {
            transport_error = httplib::to_string(res.error());
            continue;
        }
        if (res->status == 200) return parse_route_response(res->body);
        std::string message = "HTTP " + std::to_string(res->status);
        try {
            const auto doc = nlohmann::json::parse(res->body);
            if (doc.contains("message")) message += ": " + doc["message"].get<std::string>();
        } catch (const std::exception&) {
        }
        if (res->status >= 400 && res->status < 500) throw NoRouteFound("router: " + message);
        throw BackendUnreachable("router: " + message);
    }
    throw BackendUnreachable("router " + base_url_ + " unreachable: " + transport_error);
}

}  // namespace trailroute
