#include <doctest.h>

#include <numeric>

#include "support.hpp"
#include "trailroute/error.hpp"
#include "trailroute/trailgraph.hpp"

using namespace trailroute;
using trailroute::testing::Rng;

namespace {

BinaryRaster draw(int h, int w, const std::vector<std::pair<Pixel, Pixel>>& segments) {
    BinaryRaster m(h, w);
    for (const auto& [a, b] : segments) {
        for (Pixel p : bresenham(a, b)) m.set(p.row, p.col, true);
    }
    return m;
}

int chebyshev(Pixel a, Pixel b) { return std::max(std::abs(a.row - b.row), std::abs(a.col - b.col)); }

// Y: stem from (40,30) up to (20,30), arms to (5,10) and (5,50).
BinaryRaster y_shape() {
    return draw(50, 60, {{{40, 30}, {20, 30}}, {{20, 30}, {5, 10}}, {{20, 30}, {5, 50}}});
}

}  // namespace

TEST_CASE("dense graph edges equal brute-force Chebyshev enumeration") {
    Rng rng(8);
    for (int k = 0; k < 60; ++k) {
        const Skeleton s = testing::random_skeleton(rng, 32);
        if (s.empty()) {
            CHECK_THROWS_AS(build_dense_graph(s), EmptySkeleton);
            continue;
        }
        const DenseGraph g = build_dense_graph(s);
        CHECK(g.node_count() == s.count());
        CHECK(testing::dense_edges(g) == testing::brute_force_edges(s));
        CHECK(g.component_count() == count_components(s));
    }
}

TEST_CASE("dense graph lookups") {
    BinaryRaster m(3, 3);
    m.set(0, 0, true);
    m.set(1, 1, true);
    m.set(2, 1, true);
    const DenseGraph g = build_dense_graph(m);
    CHECK(g.node_at({0, 0}) == 0);
    CHECK(g.node_at({0, 1}) == -1);
    CHECK(g.has_edge({0, 0}, {1, 1}));
    CHECK(g.has_edge({2, 1}, {1, 1}));
    CHECK_FALSE(g.has_edge({0, 0}, {2, 1}));
    CHECK(g.edge_count() == 2);
}

TEST_CASE("bresenham lines are 8-connected and include both ends") {
    Rng rng(1);
    for (int k = 0; k < 200; ++k) {
        const Pixel a{rng.integer(-20, 20), rng.integer(-20, 20)}, b{rng.integer(-20, 20), rng.integer(-20, 20)};
        const auto line = bresenham(a, b);
        REQUIRE(!line.empty());
        CHECK(line.front() == a);
        CHECK(line.back() == b);
        CHECK(static_cast<int>(line.size()) == chebyshev(a, b) + 1);
        for (std::size_t i = 0; i + 1 < line.size(); ++i) CHECK(chebyshev(line[i], line[i + 1]) == 1);
    }
}

TEST_CASE("Y-shaped trail simplifies to one junction and three leaves") {
    const DenseGraph dense = build_dense_graph(skeletonize(y_shape()));
    const SimplifiedGraph g = simplify(dense);
    CHECK(g.count_role(NodeRole::Junction) == 1);
    CHECK(g.count_role(NodeRole::Leaf) == 3);
    CHECK(g.edges.size() == 3);
    CHECK(g.component_count() == 1);
    CHECK(g.synthetic_edge_count() == 0);
}

TEST_CASE("a closed ring keeps a representable loop") {
    const Skeleton ring =
        skeletonize(draw(40, 40, {{{5, 5}, {5, 30}}, {{5, 30}, {30, 30}}, {{30, 30}, {30, 5}}, {{30, 5}, {5, 5}}}));
    const DenseGraph dense = build_dense_graph(ring);
    const TrailGraph g = contract_linear_paths(TrailGraph::from_dense(dense));
    CHECK(g.nodes.size() == 2);
    CHECK(g.edges.size() == 2);
    for (const GraphEdge& e : g.edges) CHECK(e.a != e.b);
    CHECK(g.total_steps() == dense.edge_count());
}

TEST_CASE("two separate strokes are joined by one synthetic edge") {
    const BinaryRaster m = draw(30, 80, {{{10, 5}, {10, 30}}, {{12, 45}, {12, 75}}});
    const SimplifiedGraph g = simplify(build_dense_graph(m));
    CHECK(g.component_count() == 1);
    CHECK(g.synthetic_edge_count() == 1);
    // The bridged leaves became connectors.
    CHECK(g.count_role(NodeRole::Connector) == 2);
    CHECK(g.count_role(NodeRole::Leaf) == 2);
}

TEST_CASE("collapse merges nodes within tau") {
    // Two T-junctions 14 px apart along one line.
    const Skeleton m = skeletonize(draw(60, 60, {{{30, 1}, {30, 58}}, {{30, 20}, {5, 20}}, {{30, 34}, {55, 34}}}));
    const TrailGraph base = contract_linear_paths(TrailGraph::from_dense(build_dense_graph(m)));
    CHECK(base.count_role(NodeRole::Junction) >= 2);
    const TrailGraph kept = contract_linear_paths(collapse_nodes(base, kDefaultCollapseTau));
    CHECK(kept.count_role(NodeRole::Junction) == 2);
    CHECK(kept.count_role(NodeRole::Leaf) == 4);
    const TrailGraph merged = contract_linear_paths(collapse_nodes(base, 16.0));
    CHECK(merged.count_role(NodeRole::Junction) == 1);
    CHECK(merged.count_role(NodeRole::Leaf) == 4);
    CHECK(collapse_nodes(base, 0.0).nodes.size() == base.nodes.size());
}

TEST_CASE("property: simplification invariants on random skeletons") {
    Rng rng(77);
    int checked = 0;
    for (int k = 0; k < 80; ++k) {
        const Skeleton s = testing::random_skeleton(rng, 40);
        if (s.empty()) continue;
        ++checked;
        CAPTURE(k);
        const DenseGraph dense = build_dense_graph(s);
        const TrailGraph g0 = TrailGraph::from_dense(dense);
        const TrailGraph g1 = contract_linear_paths(g0);
        CHECK(g1.total_steps() == g0.total_steps());
        CHECK(g1.total_steps() == dense.edge_count());
        const auto deg = g1.degrees();
        for (std::size_t i = 0; i < g1.nodes.size(); ++i) {
            if (deg[i] == 2) CHECK(g1.nodes[i].pinned());
        }
        CHECK(g1.component_count() == dense.component_count());

        const TrailGraph g3 = contract_linear_paths(collapse_nodes(g1, kDefaultCollapseTau));
        const TrailGraph g4 = connect_components(g3);
        CHECK(g4.component_count() == 1);
        CHECK(static_cast<int>(g4.synthetic_edge_count()) == g3.component_count() - 1);
        CHECK(simplify(dense).component_count() == 1);
    }
    CHECK(checked > 40);
}

TEST_CASE("waypoint sampling respects spacing and forced indices") {
    std::vector<Pixel> path;
    for (int c = 0; c <= 200; ++c) path.push_back({0, c});
    const auto idx = sample_path(path, 64, {100});
    CHECK(idx.front() == 0);
    CHECK(idx.back() == 200);
    CHECK(std::find(idx.begin(), idx.end(), 100) != idx.end());
    CHECK(std::is_sorted(idx.begin(), idx.end()));
    for (std::size_t i = 0; i + 1 < idx.size(); ++i) CHECK(idx[i + 1] - idx[i] <= 64);
    CHECK(sample_path({{3, 3}}, 64).size() == 1);
}

TEST_CASE("planning a Y visits every leaf") {
    const DenseGraph dense = build_dense_graph(skeletonize(y_shape()));
    const SimplifiedGraph g = simplify(dense);
    const WaypointPlan plan = plan_visit(g, dense, {5, 10}, {40, 30});
    REQUIRE(plan.dense_path.size() > 2);
    for (std::size_t i = 0; i + 1 < plan.dense_path.size(); ++i) {
        CHECK(chebyshev(plan.dense_path[i], plan.dense_path[i + 1]) <= 1);
    }
    // The third leaf near (5, 50) is reached and used as a waypoint.
    auto near = [](const std::vector<Pixel>& px, Pixel q) {
        return std::any_of(px.begin(), px.end(), [&](Pixel p) { return chebyshev(p, q) <= 3; });
    };
    CHECK(near(plan.dense_path, {5, 50}));
    CHECK(near(plan.waypoints, {5, 50}));
    CHECK(chebyshev(plan.waypoints.front(), {5, 10}) <= 3);
    CHECK(chebyshev(plan.waypoints.back(), {40, 30}) <= 3);
    // Leaf visit forces one backtrack along an arm: path is at most the
    // optimal walk (stem + 2 arms + arm) and never shorter than all edges.
    double edges = 0;
    for (const GraphEdge& e : g.edges) edges += e.length();
    CHECK(plan.dense_length() >= edges - 3);
    CHECK(plan.dense_length() <= 1.5 * (edges + 30));
}

TEST_CASE("planning a loop with start equal to goal covers the ring") {
    const Skeleton ring =
        skeletonize(draw(40, 40, {{{5, 5}, {5, 30}}, {{5, 30}, {30, 30}}, {{30, 30}, {30, 5}}, {{30, 5}, {5, 5}}}));
    const DenseGraph dense = build_dense_graph(ring);
    const WaypointPlan plan = plan_visit(simplify(dense), dense, {5, 17}, {5, 17});
    for (Pixel p : dense.nodes()) {
        CHECK(std::any_of(plan.dense_path.begin(), plan.dense_path.end(),
                          [&](Pixel q) { return chebyshev(p, q) <= 1; }));
    }
    CHECK(plan.waypoints.size() >= 3);
}

TEST_CASE("snapping too far from the trail fails") {
    const DenseGraph dense = build_dense_graph(skeletonize(y_shape()));
    const SimplifiedGraph g = simplify(dense);
    PlanOptions opt;
    opt.snap_radius = 5;
    CHECK_THROWS_AS(plan_visit(g, dense, {45, 55}, {40, 30}, opt), SnapFailure);
}
