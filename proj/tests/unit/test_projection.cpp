#include <doctest.h>

#include "oracle_values.hpp"
#include "support.hpp"
#include "trailroute/error.hpp"
#include "trailroute/projection.hpp"

using namespace trailroute;

TEST_CASE("zone 54N forward projection matches the pyproj reference") {
    for (const auto& ref : testing::kUtm54Reference) {
        CAPTURE(ref.lat);
        CAPTURE(ref.lon);
        const MetricPoint m = to_metric({ref.lat, ref.lon});
        CHECK(std::abs(m.easting - ref.easting) < 1e-3);
        CHECK(std::abs(m.northing - ref.northing) < 1e-3);
    }
}

TEST_CASE("central meridian on the equator maps to the false origin") {
    const MetricPoint m = to_metric({0.0, kUtm54CentralMeridian});
    CHECK(m.easting == doctest::Approx(kUtmFalseEasting).epsilon(1e-15));
    CHECK(std::abs(m.northing) < 1e-9);
}

TEST_CASE("inverse projection round trip") {
    testing::Rng rng(3);
    for (int k = 0; k < 500; ++k) {
        const GeoPoint g{rng.uniform(-79, 83), rng.uniform(135, 147)};
        const GeoPoint back = from_metric(to_metric(g));
        CHECK(std::abs(back.lat - g.lat) < 1e-9);
        CHECK(std::abs(back.lon - g.lon) < 1e-9);
    }
}

TEST_CASE("latitudes outside the UTM band are rejected") {
    CHECK_THROWS_AS(to_metric({84.5, 141.0}), OutOfBand);
    CHECK_THROWS_AS(to_metric({-80.5, 141.0}), OutOfBand);
    CHECK_NOTHROW(to_metric({84.0, 141.0}));
}

TEST_CASE("geodesic distance matches the WGS84 reference") {
    for (const auto& ref : testing::kGeodesicReference) {
        const double d = geodesic_distance({ref.lat1, ref.lon1}, {ref.lat2, ref.lon2});
        CHECK(std::abs(d - ref.meters) < 1e-4);
        CHECK(geodesic_distance({ref.lat2, ref.lon2}, {ref.lat1, ref.lon1}) == doctest::Approx(d).epsilon(1e-12));
    }
    CHECK(geodesic_distance({35, 139}, {35, 139}) == 0.0);
}

TEST_CASE("projected and geodesic distances agree locally") {
    // Scale error near 139.7E in zone 54 is about 1.2e-4 (k0 plus the
    // offset from the central meridian), so 1 km agrees to well under 1 m.
    const GeoPoint a{35.0, 139.7}, b{35.006, 139.706};
    const double planar = distance(to_metric(a), to_metric(b));
    CHECK(std::abs(planar - geodesic_distance(a, b)) < 0.5);
}
