#include <doctest.h>

#include "support.hpp"
#include "trailroute/error.hpp"
#include "trailroute/gpx.hpp"
#include "trailroute/osm.hpp"

using namespace trailroute;
using trailroute::testing::Rng;

namespace {

const char* kOsm = R"(<?xml version="1.0" encoding="UTF-8"?>
<osm version="0.6">
  <node id="1" lat="35.0000" lon="139.7000"/>
  <node id="2" lat="35.0010" lon="139.7000"/>
  <node id="3" lat="35.0020" lon="139.7000"/>
  <node id="4" lat="35.0020" lon="139.7010"/>
  <node id="5" lat="35.0030" lon="139.7010"/>
  <node id="9" lat="35.0500" lon="139.7500"/>
  <way id="10"><nd ref="1"/><nd ref="2"/><nd ref="3"/><tag k="highway" v="footway"/></way>
  <way id="11"><nd ref="3"/><nd ref="4"/><tag k="highway" v="motorway"/></way>
  <way id="12"><nd ref="4"/><nd ref="5"/><tag k="highway" v="path"/><tag k="foot" v="no"/></way>
  <way id="13"><nd ref="1"/><nd ref="9"/><tag k="building" v="yes"/></way>
</osm>
)";

}  // namespace

TEST_CASE("osm highways become edges with walkability") {
    const RoadNetwork net = parse_osm(kOsm);
    CHECK(net.node_count() == 5);
    CHECK_FALSE(net.has_node(9));
    CHECK(net.edge_count() == 4);
    CHECK(net.walkable_edge_count() == 2);
    CHECK(net.edges()[0].length == doctest::Approx(110.9).epsilon(0.01));
}

TEST_CASE("osm way with a missing node names the node and line") {
    const std::string xml = R"(<osm>
<node id="1" lat="35" lon="139"/>
<way id="7"><nd ref="1"/><nd ref="42"/><tag k="highway" v="path"/></way>
</osm>)";
    try {
        parse_osm(xml);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        const std::string what = e.what();
        CHECK(what.find("42") != std::string::npos);
        CHECK(what.find("line 3") != std::string::npos);
        CHECK(e.stage() == "parse");
    }
}

TEST_CASE("osm errors") {
    CHECK_THROWS_AS(parse_osm("<osm><node id='1' lat='35' lon='139'/></osm>"), EmptyNetwork);
    CHECK_THROWS_AS(parse_osm("<osm><node id='1' lat='x' lon='139'/></osm>"), ParseError);
    CHECK_THROWS_AS(parse_osm("<osm><node"), ParseError);
    CHECK_THROWS_AS(load_osm("/nonexistent/roads.osm"), IoError);
}

TEST_CASE("osm write/parse round trip preserves the network") {
    const RoadNetwork net = parse_osm(kOsm);
    const RoadNetwork back = parse_osm(write_osm(net));
    CHECK(back.node_count() == net.node_count());
    REQUIRE(back.edge_count() == net.edge_count());
    for (std::size_t i = 0; i < net.edge_count(); ++i) {
        CHECK(back.edges()[i].from == net.edges()[i].from);
        CHECK(back.edges()[i].to == net.edges()[i].to);
        CHECK(back.edges()[i].walkable == net.edges()[i].walkable);
        CHECK(back.edges()[i].length == net.edges()[i].length);
    }
    for (NodeId id : net.node_ids()) CHECK(back.position(id) == net.position(id));
}

TEST_CASE("property: gpx round trip within 1e-7 degrees") {
    Rng rng(3);
    for (int k = 0; k < 100; ++k) {
        std::vector<GeoPoint> pts;
        const int n = rng.integer(2, 50);
        for (int i = 0; i < n; ++i) pts.push_back({rng.uniform(-89, 89), rng.uniform(-179, 179)});
        const RoutePolyline route(pts);
        const RoutePolyline back = decode_gpx(encode_gpx(route));
        REQUIRE(back.size() == route.size());
        for (std::size_t i = 0; i < route.size(); ++i) {
            CHECK(std::abs(back.points()[i].lat - route.points()[i].lat) <= 1e-7);
            CHECK(std::abs(back.points()[i].lon - route.points()[i].lon) <= 1e-7);
        }
    }
}

TEST_CASE("gpx output is a GPX 1.1 track") {
    const std::string doc = encode_gpx(RoutePolyline({{35, 139}, {35.5, 139.5}}), "walk");
    CHECK(doc.find("<gpx ") != std::string::npos);
    CHECK(doc.find("version=\"1.1\"") != std::string::npos);
    CHECK(doc.find("xmlns=\"http://www.topografix.com/GPX/1/1\"") != std::string::npos);
    CHECK(doc.find("<name>walk</name>") != std::string::npos);
    CHECK(doc.find("<trkseg>") != std::string::npos);
    CHECK(doc.find("<rte") == std::string::npos);
}

TEST_CASE("gpx decoding") {
    const std::string two_segments = R"(<?xml version="1.0"?>
<gpx version="1.1" creator="x" xmlns="http://www.topografix.com/GPX/1/1">
 <wpt lat="1" lon="1"/>
 <trk><trkseg><trkpt lat="35" lon="139"/><trkpt lat="35.1" lon="139"/></trkseg>
      <trkseg><trkpt lat="35.2" lon="139"><ele>5</ele></trkpt></trkseg></trk>
</gpx>)";
    const RoutePolyline r = decode_gpx(two_segments);
    CHECK(r.size() == 3);
    CHECK(r.points()[2].lat == 35.2);

    const std::string rte_only = R"(<gpx version="1.1" xmlns="http://www.topografix.com/GPX/1/1">
<rte><rtept lat="35" lon="139"/><rtept lat="35.1" lon="139"/></rte></gpx>)";
    CHECK_THROWS_AS(decode_gpx(rte_only), MalformedGpx);
    CHECK_THROWS_AS(decode_gpx("<gpx><trk><trkseg><trkpt lat='95' lon='0'/></trkseg></trk></gpx>"), MalformedGpx);
    CHECK_THROWS_AS(decode_gpx("<gpx><trk>"), MalformedGpx);
    CHECK_THROWS_AS(decode_gpx("<kml/>"), MalformedGpx);
}

TEST_CASE("gpx files") {
    const auto dir = testing::temp_dir("formats");
    const RoutePolyline route({{35, 139}, {35.001, 139.002}});
    save_gpx(route, dir / "r.gpx");
    CHECK(load_gpx(dir / "r.gpx") == route);
    CHECK_THROWS_AS(load_gpx(dir / "missing.gpx"), IoError);
}
