#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "trailroute/georef.hpp"
#include "trailroute/raster.hpp"
#include "trailroute/routing.hpp"

namespace trailroute {

/// Exact nearest-neighbour queries over a fixed metric point set, backed by
/// a uniform grid. Results equal a linear scan (ties go to the lower index).
class NearestIndex {
public:
    NearestIndex() = default;
    explicit NearestIndex(std::vector<MetricPoint> points);

    bool empty() const noexcept { return points_.empty(); }
    std::size_t size() const noexcept { return points_.size(); }
    const std::vector<MetricPoint>& points() const noexcept { return points_; }

    /// Index and distance of the nearest point. Requires a nonempty index.
    std::pair<std::size_t, double> nearest(MetricPoint q) const;

private:
    std::vector<MetricPoint> points_;
    double min_e_ = 0.0, min_n_ = 0.0, cell_ = 1.0;
    int cols_ = 0, rows_ = 0;
    std::vector<std::uint32_t> cell_start_;
    std::vector<std::uint32_t> order_;
};

/// Symmetric point-to-point Chamfer distance (mean of both directions). Throws EmptySet.
double chamfer(const std::vector<MetricPoint>& route, const std::vector<MetricPoint>& trail);
double chamfer(const std::vector<MetricPoint>& route, const NearestIndex& trail);

inline constexpr std::size_t kMaxTrailPoints = 20000;
inline constexpr std::uint64_t kDefaultSubsampleSeed = 0x7261696c;

/// Foreground pixels of a trail mask with their geographic and metric
/// positions. Masks above `max_points` pixels are subsampled uniformly
/// with a fixed seed.
class TrailPointSet {
public:
    TrailPointSet() = default;
    TrailPointSet(const BinaryRaster& mask, const AffineTransform& t, std::size_t max_points = kMaxTrailPoints,
                  std::uint64_t seed = kDefaultSubsampleSeed);
    /// Directly from metric points; geo positions are recovered by inverse projection.
    explicit TrailPointSet(std::vector<MetricPoint> metric);

    std::size_t size() const noexcept { return metric_.size(); }
    bool empty() const noexcept { return metric_.empty(); }
    const std::vector<Pixel>& pixels() const noexcept { return pixels_; }
    const std::vector<GeoPoint>& geo() const noexcept { return geo_; }
    const std::vector<MetricPoint>& metric() const noexcept { return metric_; }
    const NearestIndex& index() const noexcept { return index_; }

private:
    std::vector<Pixel> pixels_;
    std::vector<GeoPoint> geo_;
    std::vector<MetricPoint> metric_;
    NearestIndex index_;
};

inline constexpr double kDefaultDensifySpacing = 10.0;

/// Resample a polyline so consecutive points are at most `spacing` apart.
/// Original vertices are kept. spacing <= 0 returns the input.
std::vector<MetricPoint> densify(const std::vector<MetricPoint>& line, double spacing);

/// Route side of the refinement Chamfer: the metric route, densified unless spacing <= 0.
std::vector<MetricPoint> route_points(const RoutePolyline& route, double spacing = kDefaultDensifySpacing);

double route_chamfer(const RoutePolyline& route, const TrailPointSet& trail,
                     double spacing = kDefaultDensifySpacing);

struct RouteErrorPoint {
    MetricPoint point;
    std::size_t nearest_trail = 0;
    double distance = 0.0;
};

struct TrailErrorPoint {
    std::size_t trail_index = 0;
    double distance = 0.0;
};

struct HighError {
    std::optional<RouteErrorPoint> route;
    std::optional<TrailErrorPoint> trail;
};

inline constexpr double kDefaultEpsRoute = 25.0;
inline constexpr double kDefaultEpsTrail = 25.0;
inline constexpr int kDefaultMaxIters = 10;

/// Worst route point (by nearest trail point) and worst trail point (by
/// distance to the route polyline), each reported only above its threshold.
HighError detect_high_error(const RoutePolyline& route, const TrailPointSet& trail, double eps_route,
                            double eps_trail, double spacing = kDefaultDensifySpacing);

/// Insert between the consecutive pair whose segment is metrically nearest;
/// ties go to the earliest segment.
std::vector<GeoPoint> insert_waypoint(std::vector<GeoPoint> waypoints, GeoPoint point);

struct RefineOptions {
    int max_iters = kDefaultMaxIters;
    double eps_route = kDefaultEpsRoute;
    double eps_trail = kDefaultEpsTrail;
    double densify_spacing = kDefaultDensifySpacing;
};

struct RefinementState {
    RoutePolyline route;
    std::vector<GeoPoint> waypoints;
    double best_chamfer = 0.0;
    int iteration = 0;
    /// Chamfer of the initial route followed by each adopted candidate.
    std::vector<double> history;
    int requests = 0;
};

/// Iterative refinement starting from an already routed seed.
RefinementState refine_from(std::vector<GeoPoint> waypoints, RoutePolyline route, const TrailPointSet& trail,
                            const Router& router, const RefineOptions& options = {}, std::ostream* log = nullptr);

/// Routes `waypoints` (errors propagate) and refines the result.
RefinementState refine_route(std::vector<GeoPoint> waypoints, const TrailPointSet& trail, const Router& router,
                             const RefineOptions& options = {}, std::ostream* log = nullptr);

enum class Strategy { EndToEnd, GraphBased, Hybrid };

struct StrategyChoice {
    Strategy strategy = Strategy::GraphBased;
    bool refine = true;

    /// "E2E+IR", "GP", "Hybrid+IR", ...
    std::string name() const;
    bool operator==(const StrategyChoice&) const = default;
};

/// The four ablation rows in order: E2E+IR, GP+IR, Hybrid+IR, Hybrid.
std::vector<StrategyChoice> ablation_strategies();
StrategyChoice parse_strategy(const std::string& text);

struct StrategyInputs {
    GeoPoint start;
    GeoPoint goal;
    /// Sampled graph waypoints in geographic coordinates; required for
    /// GraphBased and Hybrid.
    std::vector<GeoPoint> graph_waypoints;
};

struct StrategyResult {
    RefinementState state;
    /// Seed the refinement started from (Hybrid picks one).
    Strategy seed = Strategy::EndToEnd;
    double seed_chamfer = 0.0;
};

StrategyResult run_strategy(const StrategyChoice& choice, const StrategyInputs& inputs, const TrailPointSet& trail,
                            const Router& router, const RefineOptions& options = {}, std::ostream* log = nullptr);

}  // namespace trailroute
