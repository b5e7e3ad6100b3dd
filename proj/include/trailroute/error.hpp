#pragma once

#include <stdexcept>
#include <string>

namespace trailroute {

/// Base for every error raised by the library. `stage()` names the pipeline
/// stage that failed so callers can print a one-line diagnostic.
class Error : public std::runtime_error {
public:
    Error(std::string stage, const std::string& what)
        : std::runtime_error(what), stage_(std::move(stage)) {}

    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

#define TRAILROUTE_DEFINE_ERROR(Name, Stage)                                   \
    class Name : public Error {                                                \
    public:                                                                    \
        explicit Name(const std::string& what) : Error(Stage, what) {}         \
    };

// georef
TRAILROUTE_DEFINE_ERROR(DegenerateGcps, "georef")
TRAILROUTE_DEFINE_ERROR(SingularTransform, "georef")
TRAILROUTE_DEFINE_ERROR(OutOfBand, "georef")

// raster
TRAILROUTE_DEFINE_ERROR(IoError, "io")
TRAILROUTE_DEFINE_ERROR(MalformedImage, "raster")
TRAILROUTE_DEFINE_ERROR(DimensionMismatch, "raster")

// trailgraph
TRAILROUTE_DEFINE_ERROR(EmptySkeleton, "graph")
TRAILROUTE_DEFINE_ERROR(SnapFailure, "graph")
TRAILROUTE_DEFINE_ERROR(DisconnectedGraph, "graph")

// routing
TRAILROUTE_DEFINE_ERROR(BackendUnreachable, "routing")
TRAILROUTE_DEFINE_ERROR(NoRouteFound, "routing")
TRAILROUTE_DEFINE_ERROR(MalformedResponse, "routing")
TRAILROUTE_DEFINE_ERROR(ParseError, "parse")
TRAILROUTE_DEFINE_ERROR(EmptyNetwork, "osm")
TRAILROUTE_DEFINE_ERROR(MalformedGpx, "gpx")

// refine / harness
TRAILROUTE_DEFINE_ERROR(EmptySet, "metrics")
TRAILROUTE_DEFINE_ERROR(InvalidConfig, "config")

#undef TRAILROUTE_DEFINE_ERROR

}  // namespace trailroute
