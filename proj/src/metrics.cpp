#include <algorithm>
#include <cmath>
#include <numeric>

#include "trailroute/error.hpp"
#include "trailroute/harness.hpp"

namespace trailroute {

double iou(const BinaryRaster& a, const BinaryRaster& b) {
    if (a.height() != b.height() || a.width() != b.width()) {
        throw DimensionMismatch("IoU of " + std::to_string(a.height()) + "x" + std::to_string(a.width()) + " and " +
                                std::to_string(b.height()) + "x" + std::to_string(b.width()) + " masks");
    }
    std::size_t inter = 0, uni = 0;
    for (int r = 0; r < a.height(); ++r) {
        for (int c = 0; c < a.width(); ++c) {
            const bool x = a.at(r, c), y = b.at(r, c);
            inter += x && y;
            uni += x || y;
        }
    }
    return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

DirectionalDistances directional_distances(const RoutePolyline& route, const TrailPointSet& trail, double spacing) {
    if (route.empty() || trail.empty()) throw EmptySet("directional distances need a route and a trail");
    const std::vector<MetricPoint> pts = route_points(route, spacing);
    const std::vector<MetricPoint> line = route.metric_points();
    DirectionalDistances out;
    for (const MetricPoint& p : pts) out.gpx_to_trail += trail.index().nearest(p).second;
    out.gpx_to_trail /= static_cast<double>(pts.size());
    for (const MetricPoint& t : trail.metric()) out.trail_to_gpx += point_polyline_distance(t, line);
    out.trail_to_gpx /= static_cast<double>(trail.size());
    return out;
}

double quantile(std::vector<double> values, double q) {
    if (values.empty()) throw EmptySet("quantile of an empty set");
    std::sort(values.begin(), values.end());
    const double pos = std::clamp(q, 0.0, 1.0) * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

Summary summarize(const std::vector<double>& values) {
    if (values.empty()) throw EmptySet("summary of an empty set");
    Summary s;
    s.count = values.size();
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(s.count);
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(s.count));
    s.median = quantile(values, 0.5);
    s.q1 = quantile(values, 0.25);
    s.q3 = quantile(values, 0.75);
    const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
    s.min = *mn;
    s.max = *mx;
    return s;
}

}  // namespace trailroute
