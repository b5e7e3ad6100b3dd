#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "trailroute/georef.hpp"
#include "trailroute/raster.hpp"
#include "trailroute/refine.hpp"
#include "trailroute/routing.hpp"
#include "trailroute/trailgraph.hpp"

namespace trailroute {

/// Receives one call per completed stage: (stage name, detail).
using StageLog = std::function<void(const std::string&, const std::string&)>;

struct PipelineOptions {
    SegmentOptions segment;
    double tau = kDefaultCollapseTau;
    PlanOptions plan;
    RefineOptions refine;
    StrategyChoice strategy;
    std::uint64_t seed = kDefaultSubsampleSeed;
};

struct PipelineInputs {
    /// Used for segmentation when no mask is given.
    const MapImage* image = nullptr;
    Rgb color{0, 0, 0};
    std::optional<TrailMask> mask;
    AffineTransform transform;
    GeoPoint start;
    GeoPoint goal;
};

/// Skeleton, graphs and waypoint plan derived from one trail mask.
struct GraphPlan {
    Skeleton skeleton;
    DenseGraph dense;
    SimplifiedGraph graph;
    WaypointPlan plan;
    std::vector<GeoPoint> waypoints;
};

/// Image position (0-based pixel) of a geographic point.
Pixel geo_to_pixel(const AffineTransform& transform, GeoPoint geo);
GeoPoint pixel_to_geo(const AffineTransform& transform, Pixel p);

/// Skeletonize, build and simplify the graph, and plan the visit order.
/// Logs the "skeleton", "graph" and "waypoints" stages.
GraphPlan plan_from_mask(const TrailMask& mask, const AffineTransform& transform, GeoPoint start, GeoPoint goal,
                         const PipelineOptions& options, const StageLog& log = {});

struct PipelineResult {
    TrailMask mask;
    std::optional<GraphPlan> graph;
    StrategyResult outcome;
};

/// Mask (segmented or given), graph stages when the strategy needs them,
/// then routing and refinement. Errors propagate.
PipelineResult run_pipeline(const PipelineInputs& inputs, const Router& router, const PipelineOptions& options,
                            const StageLog& log = {}, std::ostream* refine_log = nullptr);

/// Background with the route drawn in red (mapped to pixels via T^-1).
MapImage draw_route(const MapImage& background, const RoutePolyline& route, const AffineTransform& transform);

}  // namespace trailroute
