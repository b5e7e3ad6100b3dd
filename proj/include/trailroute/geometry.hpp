#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <vector>

namespace trailroute {

/// Integer raster position, 0-based array indices (row, col).
struct Pixel {
    int row = 0;
    int col = 0;

    auto operator<=>(const Pixel&) const = default;
};

/// Continuous image coordinates used by the georeferencing transform.
/// The centre of the top-left pixel is (1, 1); rows grow downward.
struct ImagePoint {
    double row = 0.0;
    double col = 0.0;

    bool operator==(const ImagePoint&) const = default;
};

/// WGS84 latitude/longitude in degrees, latitude first.
struct GeoPoint {
    double lat = 0.0;
    double lon = 0.0;

    bool operator==(const GeoPoint&) const = default;
};

/// Planar UTM coordinates in meters.
struct MetricPoint {
    double easting = 0.0;
    double northing = 0.0;

    bool operator==(const MetricPoint&) const = default;
};

inline ImagePoint to_image_point(Pixel p) {
    return {static_cast<double>(p.row) + 1.0, static_cast<double>(p.col) + 1.0};
}

inline Pixel nearest_pixel(ImagePoint p) {
    return {static_cast<int>(std::lround(p.row - 1.0)), static_cast<int>(std::lround(p.col - 1.0))};
}

inline double distance(MetricPoint a, MetricPoint b) {
    return std::hypot(a.easting - b.easting, a.northing - b.northing);
}

inline double distance(Pixel a, Pixel b) {
    return std::hypot(static_cast<double>(a.row - b.row), static_cast<double>(a.col - b.col));
}

inline double squared_distance(MetricPoint a, MetricPoint b) {
    const double de = a.easting - b.easting;
    const double dn = a.northing - b.northing;
    return de * de + dn * dn;
}

/// Euclidean distance from `p` to the closed segment [a, b].
inline double point_segment_distance(MetricPoint p, MetricPoint a, MetricPoint b) {
    const double ve = b.easting - a.easting;
    const double vn = b.northing - a.northing;
    const double len2 = ve * ve + vn * vn;
    double t = 0.0;
    if (len2 > 0.0) {
        t = ((p.easting - a.easting) * ve + (p.northing - a.northing) * vn) / len2;
        t = std::clamp(t, 0.0, 1.0);
    }
    return distance(p, MetricPoint{a.easting + t * ve, a.northing + t * vn});
}

/// Distance from `p` to the nearest segment of an open polyline. A single
/// vertex polyline degenerates to point distance.
inline double point_polyline_distance(MetricPoint p, const std::vector<MetricPoint>& line) {
    if (line.size() == 1) return distance(p, line.front());
    double best = INFINITY;
    for (std::size_t i = 0; i + 1 < line.size(); ++i) {
        best = std::min(best, point_segment_distance(p, line[i], line[i + 1]));
    }
    return best;
}

}  // namespace trailroute
