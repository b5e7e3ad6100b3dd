#pragma once

#include "trailroute/geometry.hpp"

namespace trailroute {

// Transverse Mercator on the WGS84 ellipsoid with the parameters of
// UTM zone 54N (EPSG:32654). All distance metrics are evaluated here.
inline constexpr double kUtm54CentralMeridian = 141.0;
inline constexpr double kUtmScale = 0.9996;
inline constexpr double kUtmFalseEasting = 500000.0;
inline constexpr double kUtmMinLatitude = -80.0;
inline constexpr double kUtmMaxLatitude = 84.0;

/// Forward projection (6th-order Krueger series). Throws OutOfBand outside
/// the [-80, 84] latitude band.
MetricPoint to_metric(GeoPoint geo);

/// Inverse projection, mainly used to place synthetic scenes.
GeoPoint from_metric(MetricPoint m);

/// Ellipsoidal distance in meters (Vincenty inverse on WGS84).
double geodesic_distance(GeoPoint a, GeoPoint b);

}  // namespace trailroute
