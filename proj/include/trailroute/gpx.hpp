#pragma once

#include <filesystem>
#include <string>

#include "trailroute/routing.hpp"

namespace trailroute {

/// GPX 1.1 document with one trk holding one trkseg. Elevation is not written.
std::string encode_gpx(const RoutePolyline& route, const std::string& name = "trailroute");

/// Accepts tracks only; a document without trkpt elements (for example one
/// carrying only a rte) raises MalformedGpx. Multiple segments are joined.
RoutePolyline decode_gpx(const std::string& text);

void save_gpx(const RoutePolyline& route, const std::filesystem::path& path);
RoutePolyline load_gpx(const std::filesystem::path& path);

}  // namespace trailroute
