#pragma once

#include <filesystem>
#include <string>

#include "trailroute/routing.hpp"

namespace trailroute {

/// Reads the OSM XML subset (node, way, nd, tag). Ways tagged highway=*
/// become edge chains; motorway, motorway_link, trunk and foot=no are not
/// walkable. Only nodes referenced by highway ways are kept.
RoadNetwork parse_osm(const std::string& xml);
RoadNetwork load_osm(const std::filesystem::path& path);

/// Writes every edge as its own two-node way.
std::string write_osm(const RoadNetwork& network);
void save_osm(const RoadNetwork& network, const std::filesystem::path& path);

}  // namespace trailroute
