#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "trailroute/geometry.hpp"

namespace trailroute {

/// Ordered geographic route. Consecutive duplicate points are removed on
/// construction; a route that collapses to one point keeps it twice so the
/// polyline always has at least two vertices.
class RoutePolyline {
public:
    RoutePolyline() = default;
    explicit RoutePolyline(std::vector<GeoPoint> points);

    const std::vector<GeoPoint>& points() const noexcept { return points_; }
    std::size_t size() const noexcept { return points_.size(); }
    bool empty() const noexcept { return points_.empty(); }

    std::vector<MetricPoint> metric_points() const;
    /// Length along the polyline in the projected plane, meters.
    double metric_length() const;

    bool operator==(const RoutePolyline&) const = default;

private:
    std::vector<GeoPoint> points_;
};

enum class Profile { Foot };

struct RoutingRequest {
    std::vector<GeoPoint> waypoints;
    Profile profile = Profile::Foot;
};

/// Anything that turns ordered waypoints into a route. Implementations must
/// be safe to call concurrently.
class Router {
public:
    virtual ~Router() = default;
    virtual RoutePolyline route(const RoutingRequest& request) const = 0;
    virtual std::string describe() const = 0;
};

using NodeId = std::int64_t;

struct RoadEdge {
    NodeId from = 0;
    NodeId to = 0;
    double length = 0.0;  // meters, ellipsoidal
    bool walkable = true;
};

/// Undirected road graph with geographic node positions.
class RoadNetwork {
public:
    NodeId add_node(NodeId id, GeoPoint position);
    /// Edge length is computed from the endpoint positions. Zero-length edges are ignored.
    void add_edge(NodeId from, NodeId to, bool walkable = true);

    std::size_t node_count() const noexcept { return ids_.size(); }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    std::size_t walkable_edge_count() const noexcept;

    bool has_node(NodeId id) const { return index_.contains(id); }
    GeoPoint position(NodeId id) const;
    const std::vector<NodeId>& node_ids() const noexcept { return ids_; }
    const std::vector<RoadEdge>& edges() const noexcept { return edges_; }

    /// Internal dense index helpers used by the router.
    std::size_t index_of(NodeId id) const { return index_.at(id); }
    GeoPoint position_at(std::size_t index) const { return positions_[index]; }
    MetricPoint metric_at(std::size_t index) const { return metric_[index]; }
    /// (neighbour index, edge index) pairs over walkable edges.
    const std::vector<std::pair<std::size_t, std::size_t>>& walkable_neighbours(std::size_t index) const {
        return adjacency_[index];
    }

private:
    std::vector<NodeId> ids_;
    std::vector<GeoPoint> positions_;
    std::vector<MetricPoint> metric_;
    std::unordered_map<NodeId, std::size_t> index_;
    std::vector<RoadEdge> edges_;
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adjacency_;
};

inline constexpr double kDefaultSnapDistance = 200.0;

struct PathResult {
    std::vector<NodeId> nodes;
    double cost = 0.0;
};

/// Exact pedestrian router over an in-memory road network. Waypoints snap to
/// the nearest node with a walkable edge; legs are uniform-cost shortest paths.
class LocalRouter final : public Router {
public:
    explicit LocalRouter(std::shared_ptr<const RoadNetwork> network, double max_snap = kDefaultSnapDistance);

    RoutePolyline route(const RoutingRequest& request) const override;
    std::string describe() const override { return "local"; }

    /// Nearest walkable node within the snap distance, else NoRouteFound.
    NodeId snap(GeoPoint p) const;
    /// Shortest walkable path; NoRouteFound when disconnected.
    PathResult shortest_path(NodeId from, NodeId to) const;

    const RoadNetwork& network() const noexcept { return *network_; }

private:
    std::shared_ptr<const RoadNetwork> network_;
    double max_snap_;
    std::vector<std::size_t> snappable_;
};

struct HttpRouterOptions {
    std::chrono::seconds timeout{30};
    int retries = 1;
};

/// Client for a GraphHopper-compatible /route endpoint.
class HttpRouter final : public Router {
public:
    explicit HttpRouter(std::string base_url, HttpRouterOptions options = {});

    RoutePolyline route(const RoutingRequest& request) const override;
    std::string describe() const override { return "http " + base_url_; }

    /// Query string for a request, e.g. "/route?point=35.1,139.2&...".
    std::string request_target(const RoutingRequest& request) const;

private:
    std::string base_url_;
    std::string scheme_host_;
    std::string path_prefix_;
    HttpRouterOptions options_;
};

/// Parses the JSON body of a GraphHopper route response (unencoded points).
RoutePolyline parse_route_response(const std::string& body);

/// Wraps a router and counts requests; used by the harness and tests.
class CountingRouter final : public Router {
public:
    explicit CountingRouter(const Router& inner) : inner_(inner) {}
    RoutePolyline route(const RoutingRequest& request) const override {
        ++count_;
        return inner_.route(request);
    }
    std::string describe() const override { return inner_.describe(); }
    std::size_t count() const noexcept { return count_.load(); }

private:
    const Router& inner_;
    mutable std::atomic<std::size_t> count_{0};
};

}  // namespace trailroute
