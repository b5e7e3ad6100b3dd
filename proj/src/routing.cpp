#include "trailroute/routing.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <queue>

#include "trailroute/error.hpp"
#include "trailroute/projection.hpp"

namespace trailroute {

RoutePolyline::RoutePolyline(std::vector<GeoPoint> points) {
    for (const GeoPoint& p : points) {
        if (points_.empty() || !(points_.back() == p)) points_.push_back(p);
    }
    if (points_.size() == 1) points_.push_back(points_.front());
}

std::vector<MetricPoint> RoutePolyline::metric_points() const {
    std::vector<MetricPoint> out;
    out.reserve(points_.size());
    for (const GeoPoint& p : points_) out.push_back(to_metric(p));
    return out;
}

double RoutePolyline::metric_length() const {
    const auto m = metric_points();
    double len = 0.0;
    for (std::size_t i = 0; i + 1 < m.size(); ++i) len += distance(m[i], m[i + 1]);
    return len;
}

NodeId RoadNetwork::add_node(NodeId id, GeoPoint position) {
    if (const auto it = index_.find(id); it != index_.end()) {
        positions_[it->second] = position;
        metric_[it->second] = to_metric(position);
        return id;
    }
    index_.emplace(id, ids_.size());
    ids_.push_back(id);
    positions_.push_back(position);
    metric_.push_back(to_metric(position));
    adjacency_.emplace_back();
    return id;
}

void RoadNetwork::add_edge(NodeId from, NodeId to, bool walkable) {
    const std::size_t a = index_of(from);
    const std::size_t b = index_of(to);
    const double len = geodesic_distance(positions_[a], positions_[b]);
    if (a == b || !(len > 0.0)) return;
    const std::size_t e = edges_.size();
    edges_.push_back({from, to, len, walkable});
    if (walkable) {
        adjacency_[a].emplace_back(b, e);
        adjacency_[b].emplace_back(a, e);
    }
}

std::size_t RoadNetwork::walkable_edge_count() const noexcept {
    return static_cast<std::size_t>(std::count_if(edges_.begin(), edges_.end(), [](const RoadEdge& e) { return e.walkable; }));
}

GeoPoint RoadNetwork::position(NodeId id) const {
    const auto it = index_.find(id);
    if (it == index_.end()) throw NoRouteFound("unknown road node " + std::to_string(id));
    return positions_[it->second];
}

LocalRouter::LocalRouter(std::shared_ptr<const RoadNetwork> network, double max_snap)
    : network_(std::move(network)), max_snap_(max_snap) {
    for (std::size_t i = 0; i < network_->node_count(); ++i) {
        if (!network_->walkable_neighbours(i).empty()) snappable_.push_back(i);
    }
}

NodeId LocalRouter::snap(GeoPoint p) const {
    const MetricPoint m = to_metric(p);
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_index = 0;
    for (std::size_t i : snappable_) {
        const double d = squared_distance(m, network_->metric_at(i));
        if (d < best) {
            best = d;
            best_index = i;
        }
    }
    if (snappable_.empty() || std::sqrt(best) > max_snap_) {
        throw NoRouteFound("no walkable road within " + std::to_string(max_snap_) + " m of (" + std::to_string(p.lat) +
                           ", " + std::to_string(p.lon) + ")");
    }
    return network_->node_ids()[best_index];
}

PathResult LocalRouter::shortest_path(NodeId from, NodeId to) const {
    const std::size_t src = network_->index_of(from);
    const std::size_t dst = network_->index_of(to);
    const std::size_t n = network_->node_count();
    std::vector<double> dist(n, std::numeric_limits<double>::infinity());
    std::vector<std::size_t> prev(n, n);
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    dist[src] = 0.0;
    queue.push({0.0, src});
    while (!queue.empty()) {
        const auto [d, u] = queue.top();
        queue.pop();
        if (u == dst) break;
        if (d > dist[u]) continue;
        for (const auto& [v, e] : network_->walkable_neighbours(u)) {
            const double nd = d + network_->edges()[e].length;
            if (nd < dist[v]) {
                dist[v] = nd;
                prev[v] = u;
                queue.push({nd, v});
            }
        }
    }
    if (dist[dst] == std::numeric_limits<double>::infinity()) {
        throw NoRouteFound("road nodes " + std::to_string(from) + " and " + std::to_string(to) + " are not connected");
    }
    PathResult out;
    out.cost = dist[dst];
    for (std::size_t v = dst; v != n; v = prev[v]) out.nodes.push_back(network_->node_ids()[v]);
    std::reverse(out.nodes.begin(), out.nodes.end());
    return out;
}

RoutePolyline LocalRouter::route(const RoutingRequest& request) const {
    if (request.waypoints.size() < 2) throw InvalidConfig("routing request needs at least two waypoints");
    std::vector<NodeId> snapped;
    snapped.reserve(request.waypoints.size());
    for (const GeoPoint& w : request.waypoints) snapped.push_back(snap(w));

    std::vector<GeoPoint> points{network_->position(snapped.front())};
    for (std::size_t i = 0; i + 1 < snapped.size(); ++i) {
        if (snapped[i] == snapped[i + 1]) continue;
        const PathResult leg = shortest_path(snapped[i], snapped[i + 1]);
        for (std::size_t k = 1; k < leg.nodes.size(); ++k) points.push_back(network_->position(leg.nodes[k]));
    }
    return RoutePolyline(std::move(points));
}

}  // namespace trailroute
