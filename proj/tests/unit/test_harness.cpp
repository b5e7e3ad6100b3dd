#include <doctest.h>

#include <fstream>
#include <set>

#include "support.hpp"
#include "trailroute/error.hpp"
#include "trailroute/harness.hpp"
#include "trailroute/projection.hpp"

using namespace trailroute;

namespace {

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST_CASE("iou examples") {
    BinaryRaster full(4, 4), left(4, 4), empty(4, 4);
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            full.set(r, c, true);
            if (c < 2) left.set(r, c, true);
        }
    }
    CHECK(iou(left, full) == 0.5);
    CHECK(iou(full, full) == 1.0);
    CHECK(iou(empty, empty) == 1.0);
    CHECK(iou(empty, full) == 0.0);
    CHECK_THROWS_AS(iou(full, BinaryRaster(3, 4)), DimensionMismatch);
}

TEST_CASE("directional distances of a parallel offset") {
    const MetricPoint base{380000, 3875000};
    std::vector<MetricPoint> trail;
    for (int i = 0; i <= 100; ++i) trail.push_back({base.easting + i, base.northing + 10});
    const RoutePolyline route({from_metric(base), from_metric({base.easting + 100, base.northing})});
    const DirectionalDistances d = directional_distances(route, TrailPointSet(trail));
    CHECK(d.gpx_to_trail == doctest::Approx(10).epsilon(1e-6));
    CHECK(d.trail_to_gpx == doctest::Approx(10).epsilon(1e-6));
    CHECK(d.chamfer() == doctest::Approx(10).epsilon(1e-6));
    CHECK_THROWS_AS(directional_distances(route, TrailPointSet()), EmptySet);
}

TEST_CASE("summary statistics") {
    const Summary s = summarize({4, 1, 3, 2});
    CHECK(s.count == 4);
    CHECK(s.mean == 2.5);
    CHECK(s.median == 2.5);
    CHECK(s.q1 == 1.75);
    CHECK(s.q3 == 3.25);
    CHECK(s.iqr() == 1.5);
    CHECK(s.std == doctest::Approx(std::sqrt(1.25)));
    CHECK(s.min == 1);
    CHECK(s.max == 4);
    CHECK(summarize({7}).std == 0.0);
    CHECK(quantile({0, 10}, 0.3) == doctest::Approx(3));
    CHECK_THROWS_AS(summarize({}), EmptySet);
}

TEST_CASE("manifest round trip") {
    const auto dir = testing::temp_dir("manifest");
    for (const char* f : {"a.png", "a.json", "a.osm", "m1.png", "m2.png"}) write_file(dir / f, "x");
    DatasetManifest m;
    MapEntry e{"map-a", dir / "a.png", dir / "a.json", dir / "a.osm", {}};
    e.trails.push_back({"t1", {255, 0, 0}, {35.1, 139.1}, {35.2, 139.2}, dir / "m1.png"});
    e.trails.push_back({"t2", {0, 0, 255}, {35.15, 139.15}, {35.15, 139.15}, dir / "m2.png"});
    m.maps.push_back(e);
    save_manifest(m, dir / "manifest.json");
    const std::string text = read_file(dir / "manifest.json");
    CHECK(text.find("\"a.png\"") != std::string::npos);
    CHECK(load_manifest(dir / "manifest.json") == m);
}

TEST_CASE("manifest validation") {
    const auto dir = testing::temp_dir("manifest-bad");
    auto parse = [&](const std::string& s) { return parse_manifest(s, dir, false); };
    CHECK_THROWS_AS(parse("{"), ParseError);
    CHECK_THROWS_AS(parse("{}"), InvalidConfig);
    CHECK_THROWS_AS(parse(R"({"maps":[{"id":"a","gcps":"g"}]})"), InvalidConfig);
    const std::string trail = R"({"id":"t","color":[1,2,3],"start":[35,139],"goal":[35,139],"mask":"m.png"})";
    const std::string ok = R"({"maps":[{"id":"a","image":"i.png","gcps":"g.json","trails":[)" + trail + "]}]}";
    CHECK(parse(ok).maps.at(0).trails.at(0).mask == dir / "m.png");
    CHECK_THROWS_AS(parse(R"({"maps":[{"id":"a","image":"i.png","gcps":"g.json","trails":[)" + trail + "," + trail +
                          "]}]}"),
                    InvalidConfig);
    CHECK_THROWS_AS(parse(R"({"maps":[{"id":"a","image":"i.png","gcps":"g.json","trails":[{"id":"t","color":[300,0,0],"start":[35,139],"goal":[35,139],"mask":"m"}]}]})"),
                    InvalidConfig);
    CHECK_THROWS_AS(parse(R"({"maps":[{"id":"a","image":"i.png","gcps":"g.json","trails":[{"id":"t","color":[3,0,0],"start":[135,139],"goal":[35,139],"mask":"m"}]}]})"),
                    InvalidConfig);
    CHECK_THROWS_AS(parse_manifest(ok, dir, true), IoError);
    CHECK_THROWS_AS(load_manifest(dir / "missing.json"), IoError);
}

TEST_CASE("scenes are deterministic per seed") {
    const SyntheticScene a = generate_scene(3, default_scene_config(3));
    const SyntheticScene b = generate_scene(3, default_scene_config(3));
    const SyntheticScene c = generate_scene(4, default_scene_config(4));
    CHECK(a.image == b.image);
    CHECK(a.noisy_image == b.noisy_image);
    CHECK(a.mask == b.mask);
    CHECK(a.trail_nodes == b.trail_nodes);
    CHECK_FALSE(a.mask == c.mask);
    CHECK(fit_residual(a.transform, a.gcps) < 1e-12);
    CHECK(default_scene_config(3).shape == TrailShape::Loop);
    CHECK(default_scene_config(4).shape == TrailShape::Open);
}

TEST_CASE("rendered trail area matches stroke width times length") {
    for (std::uint64_t seed : {2u, 5u, 8u}) {
        SceneConfig cfg = default_scene_config(seed);
        cfg.spur = false;
        cfg.shape = TrailShape::Open;
        const SyntheticScene s = generate_scene(seed, cfg);
        const AffineTransform inv = s.transform.inverse();
        double length = 0;
        for (std::size_t i = 0; i + 1 < s.trail_nodes.size(); ++i) {
            const ImagePoint p = inv.to_image(s.network->position(s.trail_nodes[i]));
            const ImagePoint q = inv.to_image(s.network->position(s.trail_nodes[i + 1]));
            length += std::hypot(p.row - q.row, p.col - q.col);
        }
        const double expected = cfg.stroke_width * length;
        CAPTURE(seed);
        CHECK(std::abs(static_cast<double>(s.mask.count()) - expected) <= 0.1 * expected);
    }
}

TEST_CASE("a spur yields a junction and three leaves") {
    const SyntheticScene s = generate_scene(6, default_scene_config(6));
    const DenseGraph dense = build_dense_graph(skeletonize(s.mask));
    const SimplifiedGraph g = simplify(dense);
    CHECK(g.count_role(NodeRole::Junction) >= 1);
    CHECK(g.count_role(NodeRole::Leaf) >= 3);
}

TEST_CASE("trail nodes form a walkable road path") {
    const SyntheticScene s = generate_scene(11, default_scene_config(11));
    const LocalRouter router(s.network);
    for (std::size_t i = 0; i + 1 < s.trail_nodes.size(); ++i) {
        const PathResult p = router.shortest_path(s.trail_nodes[i], s.trail_nodes[i + 1]);
        CHECK(p.nodes.size() == 2);
    }
    CHECK(s.start == s.goal);
}

TEST_CASE("write_scene produces a loadable manifest") {
    const auto dir = testing::temp_dir("scene");
    const SyntheticScene s = generate_scene(2);
    const auto path = write_scene(s, dir, "syn-2");
    const DatasetManifest m = load_manifest(path);
    REQUIRE(m.maps.size() == 1);
    CHECK(m.maps[0].id == "syn-2");
    CHECK(load_mask(m.maps[0].trails.at(0).mask) == static_cast<const BinaryRaster&>(s.mask));
    CHECK(load_gcps(m.maps[0].gcps).size() == s.gcps.size());
}

TEST_CASE("ablation report over one scene") {
    const std::vector<SyntheticScene> scenes{generate_scene(2)};
    const auto trials = scene_trials(scenes, true);
    REQUIRE(trials.size() == 2);
    CHECK(trials[0].input == "GT");
    CHECK(trials[1].input == "Pred");

    const EvalReport report = run_ablation(trials, ablation_strategies());
    REQUIRE(report.rows.size() == 8);
    CHECK(report.rows[0].strategy == "E2E+IR");
    CHECK(report.rows[4].input == "Pred");
    for (const EvalRow& row : report.rows) {
        CAPTURE(row.strategy);
        CHECK(row.ok());
        CHECK(row.monotone);
        CHECK(row.chamfer >= 0);
    }
    CHECK(report.rows[1].chamfer < 30.0);
    CHECK_FALSE(report.rows[1].iou);
    REQUIRE(report.rows[5].iou);
    CHECK(*report.rows[5].iou > 0.5);
    CHECK(*report.rows[5].iou < 1.0);

    const auto agg = report.aggregate();
    REQUIRE(agg.size() == 8);
    CHECK(agg[0].chamfer.count == 1);

    const std::string csv = report.to_csv();
    CHECK(csv.rfind("map_id,trail_id,input,strategy,iou,chamfer_m,", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 9);
    const std::string table = report.to_table();
    CHECK(table.find("Hybrid+IR") != std::string::npos);
    CHECK(table.find("±") != std::string::npos);

    CHECK(run_ablation(trials, {}).rows.empty());
}
