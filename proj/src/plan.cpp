#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>

#include "trailroute/error.hpp"
#include "trailroute/trailgraph.hpp"

namespace trailroute {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Step {
    int edge;
    bool forward;  // traversed a -> b
};

// Snap `target` onto the graph, inserting a terminal node when the closest
// skeleton pixel lies inside an edge chain. Returns the node id.
int snap(SimplifiedGraph& g, const DenseGraph& dense, Pixel target, double radius, const char* what) {
    double best = kInf;
    int best_node = -1;
    int best_edge = -1;
    std::size_t best_index = 0;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        const double d = distance(g.nodes[i].pixel, target);
        if (d < best) {
            best = d;
            best_node = static_cast<int>(i);
        }
    }
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        const GraphEdge& edge = g.edges[e];
        if (edge.synthetic) continue;
        for (std::size_t k = 1; k + 1 < edge.chain.size(); ++k) {
            const double d = distance(edge.chain[k], target);
            if (d < best && dense.node_at(edge.chain[k]) >= 0) {
                best = d;
                best_node = -1;
                best_edge = static_cast<int>(e);
                best_index = k;
            }
        }
    }
    if (best > radius) {
        throw SnapFailure(std::string(what) + " is " + (std::isinf(best) ? std::string("not near") : std::to_string(best) + " px from") +
                          " the trail graph (snap radius " + std::to_string(radius) + " px)");
    }
    if (best_node >= 0) return best_node;

    GraphEdge& edge = g.edges[static_cast<std::size_t>(best_edge)];
    const int node = static_cast<int>(g.nodes.size());
    g.nodes.push_back({edge.chain[best_index], false, false, true});
    GraphEdge tail{node, edge.b, {edge.chain.begin() + static_cast<std::ptrdiff_t>(best_index), edge.chain.end()}, false};
    edge.chain.resize(best_index + 1);
    edge.b = node;
    g.edges.push_back(std::move(tail));
    return node;
}

std::vector<std::vector<int>> incidence(const SimplifiedGraph& g) {
    std::vector<std::vector<int>> inc(g.nodes.size());
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        inc[static_cast<std::size_t>(g.edges[e].a)].push_back(static_cast<int>(e));
        if (g.edges[e].b != g.edges[e].a) inc[static_cast<std::size_t>(g.edges[e].b)].push_back(static_cast<int>(e));
    }
    return inc;
}

// Dijkstra over the simplified graph; `cost` gives the weight of each edge.
struct ShortestPaths {
    std::vector<double> dist;
    std::vector<int> via_edge;
};

ShortestPaths dijkstra(const SimplifiedGraph& g, const std::vector<std::vector<int>>& inc, int source,
                       const std::function<double(int)>& cost) {
    ShortestPaths sp{std::vector<double>(g.nodes.size(), kInf), std::vector<int>(g.nodes.size(), -1)};
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    sp.dist[static_cast<std::size_t>(source)] = 0.0;
    queue.push({0.0, source});
    while (!queue.empty()) {
        const auto [d, u] = queue.top();
        queue.pop();
        if (d > sp.dist[static_cast<std::size_t>(u)]) continue;
        for (int e : inc[static_cast<std::size_t>(u)]) {
            const GraphEdge& edge = g.edges[static_cast<std::size_t>(e)];
            const int v = edge.a == u ? edge.b : edge.a;
            const double nd = d + cost(e);
            if (nd < sp.dist[static_cast<std::size_t>(v)]) {
                sp.dist[static_cast<std::size_t>(v)] = nd;
                sp.via_edge[static_cast<std::size_t>(v)] = e;
                queue.push({nd, v});
            }
        }
    }
    return sp;
}

std::vector<Step> unwind(const SimplifiedGraph& g, const ShortestPaths& sp, int source, int target) {
    std::vector<Step> steps;
    int cur = target;
    while (cur != source) {
        const int e = sp.via_edge[static_cast<std::size_t>(cur)];
        const GraphEdge& edge = g.edges[static_cast<std::size_t>(e)];
        const bool forward = edge.b == cur;
        steps.push_back({e, forward});
        cur = forward ? edge.a : edge.b;
    }
    std::reverse(steps.begin(), steps.end());
    return steps;
}

// Shortest dense-graph path between the endpoints of one simplified edge,
// restricted to skeleton pixels near that edge's chain.
std::vector<Pixel> dense_leg(const DenseGraph& dense, const GraphEdge& edge, bool forward, double corridor) {
    std::vector<Pixel> chain = edge.chain;
    if (!forward) std::reverse(chain.begin(), chain.end());
    if (edge.synthetic) return chain;

    const int src = dense.node_at(chain.front());
    const int dst = dense.node_at(chain.back());
    if (src < 0 || dst < 0) return chain;

    std::vector<char> allowed(dense.node_count(), 0);
    const int reach = static_cast<int>(std::ceil(corridor));
    for (const Pixel& p : chain) {
        for (int dr = -reach; dr <= reach; ++dr) {
            for (int dc = -reach; dc <= reach; ++dc) {
                if (dr * dr + dc * dc > corridor * corridor) continue;
                const int n = dense.node_at({p.row + dr, p.col + dc});
                if (n >= 0) allowed[static_cast<std::size_t>(n)] = 1;
            }
        }
    }

    std::vector<double> dist(dense.node_count(), kInf);
    std::vector<int> prev(dense.node_count(), -1);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    dist[static_cast<std::size_t>(src)] = 0.0;
    queue.push({0.0, src});
    while (!queue.empty()) {
        const auto [d, u] = queue.top();
        queue.pop();
        if (u == dst) break;
        if (d > dist[static_cast<std::size_t>(u)]) continue;
        for (int v : dense.neighbours(u)) {
            if (!allowed[static_cast<std::size_t>(v)]) continue;
            const double nd = d + distance(dense.nodes()[static_cast<std::size_t>(u)], dense.nodes()[static_cast<std::size_t>(v)]);
            if (nd < dist[static_cast<std::size_t>(v)]) {
                dist[static_cast<std::size_t>(v)] = nd;
                prev[static_cast<std::size_t>(v)] = u;
                queue.push({nd, v});
            }
        }
    }
    if (std::isinf(dist[static_cast<std::size_t>(dst)])) return chain;
    std::vector<Pixel> path;
    for (int v = dst; v != -1; v = prev[static_cast<std::size_t>(v)]) path.push_back(dense.nodes()[static_cast<std::size_t>(v)]);
    std::reverse(path.begin(), path.end());
    return path;
}

}  // namespace

double WaypointPlan::dense_length() const {
    double len = 0.0;
    for (std::size_t i = 0; i + 1 < dense_path.size(); ++i) len += distance(dense_path[i], dense_path[i + 1]);
    return len;
}

std::vector<std::size_t> sample_path(const std::vector<Pixel>& path, double spacing,
                                     const std::vector<std::size_t>& forced) {
    std::vector<std::size_t> out;
    if (path.empty()) return out;
    std::vector<double> arc(path.size(), 0.0);
    for (std::size_t i = 1; i < path.size(); ++i) arc[i] = arc[i - 1] + distance(path[i - 1], path[i]);
    std::vector<char> must(path.size(), 0);
    for (std::size_t f : forced) {
        if (f < path.size()) must[f] = 1;
    }

    std::size_t last = 0;
    out.push_back(0);
    while (last + 1 < path.size()) {
        std::size_t next = last + 1;
        while (next + 1 < path.size() && !must[next] && arc[next + 1] - arc[last] <= spacing) ++next;
        out.push_back(next);
        last = next;
    }
    return out;
}

WaypointPlan plan_visit(const SimplifiedGraph& graph, const DenseGraph& dense, Pixel start, Pixel goal,
                        const PlanOptions& options) {
    WaypointPlan plan;
    plan.graph = graph;
    SimplifiedGraph& g = plan.graph;
    if (g.component_count() > 1) throw DisconnectedGraph("simplified graph has more than one component");

    const int s = snap(g, dense, start, options.snap_radius, "start");
    const int t = snap(g, dense, goal, options.snap_radius, "goal");
    const auto inc = incidence(g);
    const auto length_of = [&](int e) { return g.edges[static_cast<std::size_t>(e)].length(); };

    // Greedy nearest-neighbour order over every key node, ending at the goal.
    std::vector<char> visited(g.nodes.size(), 0);
    visited[static_cast<std::size_t>(s)] = 1;
    visited[static_cast<std::size_t>(t)] = 1;
    std::size_t remaining = static_cast<std::size_t>(std::count(visited.begin(), visited.end(), 0));
    plan.visit_order.push_back(s);
    int cur = s;
    while (remaining > 0) {
        const ShortestPaths sp = dijkstra(g, inc, cur, length_of);
        int pick = -1;
        for (std::size_t v = 0; v < g.nodes.size(); ++v) {
            if (visited[v]) continue;
            if (std::isinf(sp.dist[v])) throw DisconnectedGraph("key node unreachable from " + std::to_string(cur));
            if (pick < 0 || sp.dist[v] < sp.dist[static_cast<std::size_t>(pick)]) pick = static_cast<int>(v);
        }
        visited[static_cast<std::size_t>(pick)] = 1;
        --remaining;
        plan.visit_order.push_back(pick);
        cur = pick;
    }
    plan.visit_order.push_back(t);

    // Expand legs through the graph, preferring edges not walked yet, and
    // recover the dense pixel path edge by edge.
    const auto roles = g.roles();
    std::vector<char> used(g.edges.size(), 0);
    std::vector<std::size_t> forced;
    plan.dense_path.push_back(g.nodes[static_cast<std::size_t>(s)].pixel);
    for (std::size_t k = 0; k + 1 < plan.visit_order.size(); ++k) {
        const int from = plan.visit_order[k];
        const int to = plan.visit_order[k + 1];
        if (from == to) continue;
        const ShortestPaths sp = dijkstra(g, inc, from, [&](int e) {
            return length_of(e) * (used[static_cast<std::size_t>(e)] ? options.reuse_penalty : 1.0);
        });
        if (std::isinf(sp.dist[static_cast<std::size_t>(to)])) throw DisconnectedGraph("no path between key nodes");
        for (const Step& step : unwind(g, sp, from, to)) {
            used[static_cast<std::size_t>(step.edge)] = 1;
            const GraphEdge& edge = g.edges[static_cast<std::size_t>(step.edge)];
            const auto leg = dense_leg(dense, edge, step.forward, options.corridor);
            for (std::size_t i = 1; i < leg.size(); ++i) plan.dense_path.push_back(leg[i]);
            const int reached = step.forward ? edge.b : edge.a;
            if (roles[static_cast<std::size_t>(reached)] == NodeRole::Leaf) forced.push_back(plan.dense_path.size() - 1);
        }
    }
    for (int v : plan.visit_order) plan.visit_pixels.push_back(g.nodes[static_cast<std::size_t>(v)].pixel);

    for (std::size_t i : sample_path(plan.dense_path, options.waypoint_spacing, forced)) {
        plan.waypoints.push_back(plan.dense_path[i]);
    }
    return plan;
}

}  // namespace trailroute
