#include "trailroute/pipeline.hpp"

#include <sstream>

#include "trailroute/error.hpp"

namespace trailroute {

namespace {

void emit(const StageLog& log, const std::string& stage, const std::string& detail) {
    if (log) log(stage, detail);
}

}  // namespace

Pixel geo_to_pixel(const AffineTransform& transform, GeoPoint geo) {
    return nearest_pixel(transform.inverse().to_image(geo));
}

GeoPoint pixel_to_geo(const AffineTransform& transform, Pixel p) { return transform.to_geo(to_image_point(p)); }

GraphPlan plan_from_mask(const TrailMask& mask, const AffineTransform& transform, GeoPoint start, GeoPoint goal,
                         const PipelineOptions& options, const StageLog& log) {
    GraphPlan out;
    out.skeleton = skeletonize(mask);
    emit(log, "skeleton", std::to_string(out.skeleton.count()) + " px");

    out.dense = build_dense_graph(out.skeleton);
    out.graph = simplify(out.dense, options.tau);
    {
        std::ostringstream os;
        os << out.dense.node_count() << " dense nodes, " << out.graph.nodes.size() << " nodes, "
           << out.graph.edges.size() << " edges (" << out.graph.synthetic_edge_count() << " synthetic), "
           << out.graph.count_role(NodeRole::Leaf) << " leaves, " << out.graph.count_role(NodeRole::Junction)
           << " junctions";
        emit(log, "graph", os.str());
    }

    out.plan = plan_visit(out.graph, out.dense, geo_to_pixel(transform, start), geo_to_pixel(transform, goal),
                          options.plan);
    out.waypoints.reserve(out.plan.waypoints.size());
    for (Pixel p : out.plan.waypoints) out.waypoints.push_back(pixel_to_geo(transform, p));
    emit(log, "waypoints",
         std::to_string(out.waypoints.size()) + " waypoints over " + std::to_string(out.plan.dense_path.size()) +
             " path px");
    return out;
}

PipelineResult run_pipeline(const PipelineInputs& inputs, const Router& router, const PipelineOptions& options,
                            const StageLog& log, std::ostream* refine_log) {
    PipelineResult out;
    if (inputs.mask) {
        out.mask = *inputs.mask;
        emit(log, "mask", "loaded " + std::to_string(out.mask.count()) + " px");
    } else {
        if (!inputs.image) throw InvalidConfig("pipeline needs an image or a mask");
        out.mask = segment_by_color(*inputs.image, inputs.color, options.segment);
        emit(log, "segment", std::to_string(out.mask.count()) + " px");
    }
    if (out.mask.empty()) throw EmptySkeleton("trail mask is empty");

    StrategyInputs strategy_inputs{inputs.start, inputs.goal, {}};
    if (options.strategy.strategy != Strategy::EndToEnd) {
        out.graph = plan_from_mask(out.mask, inputs.transform, inputs.start, inputs.goal, options, log);
        strategy_inputs.graph_waypoints = out.graph->waypoints;
    }

    const TrailPointSet trail(out.mask, inputs.transform, kMaxTrailPoints, options.seed);
    out.outcome = run_strategy(options.strategy, strategy_inputs, trail, router, options.refine, refine_log);
    {
        std::ostringstream os;
        os << options.strategy.name() << ", " << out.outcome.state.route.size() << " points, "
           << out.outcome.state.iteration << " refinement iterations, Chamfer " << out.outcome.state.best_chamfer
           << " m";
        emit(log, "route", os.str());
    }
    return out;
}

MapImage draw_route(const MapImage& background, const RoutePolyline& route, const AffineTransform& transform) {
    MapImage img = background;
    const AffineTransform inv = transform.inverse();
    const auto& pts = route.points();
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const Pixel a = nearest_pixel(inv.to_image(pts[i]));
        const Pixel b = nearest_pixel(inv.to_image(pts[i + 1]));
        for (const Pixel& p : bresenham(a, b)) {
            for (int dr = -1; dr <= 1; ++dr) {
                for (int dc = -1; dc <= 1; ++dc) {
                    if (img.contains(p.row + dr, p.col + dc)) img.set(p.row + dr, p.col + dc, {220, 0, 0});
                }
            }
        }
    }
    return img;
}

}  // namespace trailroute
