#include <doctest.h>

#include <fstream>
#include <sstream>

#include "support.hpp"
#include "trailroute/cli.hpp"
#include "trailroute/gpx.hpp"
#include "trailroute/harness.hpp"

using namespace trailroute;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string latlon(GeoPoint g) {
    std::ostringstream os;
    os.precision(12);
    os << g.lat << "," << g.lon;
    return os.str();
}

/// A written scene plus the extract arguments that use its mask.
struct Fixture {
    fs::path dir;
    SyntheticScene scene;
    std::vector<std::string> base_args() const {
        return {"extract",  "--gcps",  (dir / "gcps.json").string(), "--start", latlon(scene.start),
                "--goal",   latlon(scene.goal), "--osm", (dir / "roads.osm").string()};
    }
};

Fixture fixture(const std::string& name) {
    Fixture f{testing::temp_dir(name), generate_scene(4)};
    write_scene(f.scene, f.dir, "scene");
    return f;
}

}  // namespace

TEST_CASE("help exits zero") {
    const Run r = cli({"--help"});
    CHECK(r.code == kExitOk);
    CHECK(r.out.find("extract") != std::string::npos);
    CHECK(cli({}).code == kExitConfig);
}

TEST_CASE("extract with a mask writes a GPX and logs stages in order") {
    const Fixture f = fixture("cli-extract");
    auto args = f.base_args();
    const fs::path gpx = f.dir / "out.gpx";
    for (const std::string& a : {std::string("--mask"), (f.dir / "trail_mask.png").string(), std::string("--out"),
                                 gpx.string(), std::string("--truth-mask"), (f.dir / "trail_mask.png").string()}) {
        args.push_back(a);
    }
    const Run r = cli(args);
    INFO(r.err);
    REQUIRE(r.code == kExitOk);
    CHECK(fs::exists(gpx));
    CHECK(decode_gpx(read_file(gpx)).size() >= 2);
    CHECK(r.out.find("chamfer_m") != std::string::npos);

    std::vector<std::size_t> pos;
    for (const char* stage : {"[georef]", "[mask]", "[skeleton]", "[graph]", "[waypoints]", "[route]", "[output]"}) {
        pos.push_back(r.err.find(stage));
        CHECK_MESSAGE(pos.back() != std::string::npos, stage);
    }
    CHECK(std::is_sorted(pos.begin(), pos.end()));
    CHECK(r.err.find("[segment]") == std::string::npos);

    // Same inputs, byte-identical output.
    const std::string first = read_file(gpx);
    REQUIRE(cli(args).code == kExitOk);
    CHECK(read_file(gpx) == first);
}

TEST_CASE("extract segments the image when given a colour") {
    const Fixture f = fixture("cli-segment");
    auto args = f.base_args();
    for (const std::string& a : {std::string("--image"), (f.dir / "map.png").string(), std::string("--color"),
                                 std::string("170,79,55"), std::string("--out"), (f.dir / "seg.gpx").string(),
                                 std::string("--debug-mask"), (f.dir / "dbg.png").string()}) {
        args.push_back(a);
    }
    const Run r = cli(args);
    INFO(r.err);
    CHECK(r.code == kExitOk);
    CHECK(r.err.find("[segment]") != std::string::npos);
    CHECK(fs::exists(f.dir / "dbg.png"));
}

TEST_CASE("missing inputs exit 2 and name the path") {
    const Fixture f = fixture("cli-missing");
    auto args = f.base_args();
    args[2] = (f.dir / "nope.json").string();
    for (const std::string& a : {std::string("--mask"), (f.dir / "trail_mask.png").string(), std::string("--out"),
                                 (f.dir / "x.gpx").string()}) {
        args.push_back(a);
    }
    const Run r = cli(args);
    CHECK(r.code == kExitConfig);
    CHECK(r.err.find("nope.json") != std::string::npos);
    CHECK(r.err.find("error [") != std::string::npos);
    CHECK_FALSE(fs::exists(f.dir / "x.gpx"));
}

TEST_CASE("argument validation") {
    const Fixture f = fixture("cli-args");
    auto args = f.base_args();
    args.insert(args.end(), {"--mask", (f.dir / "trail_mask.png").string(), "--out", (f.dir / "x.gpx").string()});

    auto bad_strategy = args;
    bad_strategy.insert(bad_strategy.end(), {"--strategy", "Fancy"});
    CHECK(cli(bad_strategy).code == kExitConfig);

    auto both = args;
    both.insert(both.end(), {"--color", "1,2,3", "--image", (f.dir / "map.png").string()});
    CHECK(cli(both).code == kExitConfig);

    auto bad_point = args;
    bad_point[4] = "35.0";
    CHECK(cli(bad_point).code == kExitConfig);

    // Start far outside the road network: a pipeline failure.
    auto far = args;
    far[4] = "36.5,139.7";
    const Run r = cli(far);
    CHECK(r.code == kExitPipeline);
}

TEST_CASE("config file supplies missing flags") {
    const Fixture f = fixture("cli-config");
    {
        std::ofstream cfg(f.dir / "cfg.json");
        cfg << "{\"mask\": \"" << (f.dir / "trail_mask.png").generic_string() << "\", \"strategy\": \"GP\", \"out\": \""
            << (f.dir / "cfg.gpx").generic_string() << "\"}";
    }
    auto args = f.base_args();
    args.insert(args.end(), {"--config", (f.dir / "cfg.json").string()});
    const Run r = cli(args);
    INFO(r.err);
    CHECK(r.code == kExitOk);
    CHECK(fs::exists(f.dir / "cfg.gpx"));
}

TEST_CASE("synth and ablate subcommands") {
    const auto dir = testing::temp_dir("cli-synth");
    const Run s = cli({"synth", "--seed", "2", "--count", "2", "--out", dir.string()});
    INFO(s.err);
    REQUIRE(s.code == kExitOk);
    CHECK(fs::exists(dir / "manifest.json"));
    CHECK(load_manifest(dir / "manifest.json").maps.size() == 2);

    const Run e = cli({"evaluate", "--manifest", (dir / "manifest.json").string(), "--strategies", "GP+IR", "--csv",
                       (dir / "r.csv").string()});
    // evaluate takes no --strategies flag
    CHECK(e.code == kExitConfig);

    const Run a = cli({"ablate", "--manifest", (dir / "manifest.json").string(), "--strategies", "GP+IR,E2E", "--csv",
                       (dir / "r.csv").string()});
    INFO(a.err);
    CHECK(a.code == kExitOk);
    CHECK(a.out.find("GP+IR") != std::string::npos);
    const std::string csv = read_file(dir / "r.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
}
