#include "trailroute/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <json.hpp>

#include "trailroute/error.hpp"
#include "trailroute/gpx.hpp"
#include "trailroute/harness.hpp"
#include "trailroute/osm.hpp"
#include "trailroute/pipeline.hpp"

namespace trailroute {

namespace {

namespace fs = std::filesystem;

std::vector<double> parse_numbers(const std::string& text, std::size_t count, const std::string& what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw InvalidConfig(what + " must be " + std::to_string(count) + " comma-separated numbers, got '" + text + "'");
        }
    }
    if (out.size() != count) {
        throw InvalidConfig(what + " must be " + std::to_string(count) + " comma-separated numbers, got '" + text + "'");
    }
    return out;
}

Rgb parse_color(const std::string& text) {
    const auto v = parse_numbers(text, 3, "--color");
    Rgb c{};
    for (std::size_t i = 0; i < 3; ++i) {
        if (v[i] < 0 || v[i] > 255 || v[i] != std::floor(v[i])) throw InvalidConfig("--color channels must be 0..255");
        c[i] = static_cast<std::uint8_t>(v[i]);
    }
    return c;
}

GeoPoint parse_geo(const std::string& text, const std::string& what) {
    const auto v = parse_numbers(text, 2, what);
    if (v[0] < -90 || v[0] > 90 || v[1] < -180 || v[1] > 180) throw InvalidConfig(what + " is out of range");
    return {v[0], v[1]};
}

/// Appends `--key value` pairs from a JSON object for flags not given on the command line.
std::vector<std::string> expand_config(std::vector<std::string> args) {
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
    }
    if (path.empty()) return args;
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("config file " + path + ": " + e.what());
    }
    if (!doc.is_object()) throw InvalidConfig("config file " + path + " must hold a JSON object");
    auto given = [&](const std::string& flag) {
        return std::any_of(args.begin(), args.end(),
                           [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
    };
    for (const auto& [key, value] : doc.items()) {
        const std::string flag = "--" + key;
        if (key == "config" || given(flag)) continue;
        if (value.is_boolean()) {
            if (value.get<bool>()) args.push_back(flag);
        } else if (value.is_array()) {
            std::string joined;
            for (const auto& v : value) joined += (joined.empty() ? "" : ",") + (v.is_string() ? v.get<std::string>() : v.dump());
            args.push_back(flag);
            args.push_back(joined);
        } else {
            args.push_back(flag);
            args.push_back(value.is_string() ? value.get<std::string>() : value.dump());
        }
    }
    return args;
}

struct Tuning {
    PipelineOptions pipeline;
    std::string strategy = "GP+IR";
};

void add_tuning(CLI::App* app, Tuning& t, bool with_strategy) {
    auto& p = t.pipeline;
    if (with_strategy) {
        app->add_option("--strategy", t.strategy, "E2E, GP or Hybrid, optionally suffixed +IR")->capture_default_str();
    }
    app->add_option("--color-threshold", p.segment.threshold, "RGB distance threshold for colour segmentation")
        ->capture_default_str();
    app->add_option("--min-component", p.segment.min_component, "Drop mask components smaller than this (px)")
        ->capture_default_str();
    app->add_option("--tau", p.tau, "Node collapse distance (px)")->capture_default_str();
    app->add_option("--snap-radius", p.plan.snap_radius, "Start/goal snap radius onto the trail graph (px)")
        ->capture_default_str();
    app->add_option("--waypoint-spacing", p.plan.waypoint_spacing, "Waypoint sampling spacing along the path (px)")
        ->capture_default_str();
    app->add_option("--max-iters", p.refine.max_iters, "Maximum refinement iterations")->capture_default_str();
    app->add_option("--eps-route", p.refine.eps_route, "Route-error threshold (m)")->capture_default_str();
    app->add_option("--eps-trail", p.refine.eps_trail, "Trail-error threshold (m)")->capture_default_str();
    app->add_option("--densify", p.refine.densify_spacing, "Route resampling for Chamfer (m); 0 uses raw points")
        ->capture_default_str();
    app->add_option("--seed", p.seed, "Seed for every stochastic choice")->capture_default_str();
}

class StageLogger {
public:
    explicit StageLogger(std::ostream& err) : err_(err) {}
    void operator()(const std::string& stage, const std::string& detail) {
        err_ << "[" << stage << "] " << detail << "\n";
    }

private:
    std::ostream& err_;
};

std::shared_ptr<const Router> make_router(const std::string& url, const std::string& osm) {
    if (!osm.empty()) return std::make_shared<LocalRouter>(std::make_shared<RoadNetwork>(load_osm(osm)));
    return std::make_shared<HttpRouter>(url);
}

int run_extract(const std::string& image_path, const std::string& gcp_path, const std::string& color_text,
                const std::string& mask_path, const std::string& start_text, const std::string& goal_text,
                const std::string& router_url, const std::string& osm_path, const std::string& out_path,
                const std::string& debug_mask, const std::string& debug_graph, const std::string& debug_route,
                const std::string& log_path, const std::string& truth_mask, Tuning tuning, std::ostream& out,
                std::ostream& err) {
    if (color_text.empty() == mask_path.empty()) throw InvalidConfig("give exactly one of --color and --mask");
    if (router_url.empty() == osm_path.empty()) throw InvalidConfig("give exactly one of --router and --osm");
    if (!color_text.empty() && image_path.empty()) throw InvalidConfig("--color needs --image");
    for (const std::string& p : {image_path, gcp_path, mask_path, osm_path, truth_mask}) {
        if (!p.empty() && !fs::exists(p)) throw IoError("input file not found: " + p);
    }
    tuning.pipeline.strategy = parse_strategy(tuning.strategy);

    PipelineInputs inputs;
    inputs.start = parse_geo(start_text, "--start");
    inputs.goal = parse_geo(goal_text, "--goal");
    if (!color_text.empty()) inputs.color = parse_color(color_text);

    std::unique_ptr<std::ofstream> log_file;
    std::ostream* refine_log = &err;
    if (!log_path.empty()) {
        log_file = std::make_unique<std::ofstream>(log_path);
        if (!*log_file) throw IoError("cannot write log file " + log_path);
        refine_log = log_file.get();
    }

    StageLogger logger(err);
    const auto gcps = load_gcps(gcp_path);
    inputs.transform = fit_affine(gcps);
    {
        std::ostringstream os;
        os << gcps.size() << " GCPs, residual " << fit_residual(inputs.transform, gcps) << " deg^2";
        logger("georef", os.str());
    }
    const auto router = make_router(router_url, osm_path);

    std::optional<MapImage> image;
    if (!image_path.empty()) image = load_image(image_path);
    inputs.image = image ? &*image : nullptr;
    if (!mask_path.empty()) inputs.mask = load_mask(mask_path);

    const PipelineResult result =
        run_pipeline(inputs, *router, tuning.pipeline, std::ref(logger), refine_log);

    save_gpx(result.outcome.state.route, out_path);
    logger("output", out_path);

    const MapImage background = image ? *image : MapImage(result.mask.height(), result.mask.width());
    if (!debug_mask.empty()) save_mask(result.mask, debug_mask);
    if (!debug_graph.empty() && result.graph) render_graph(result.graph->graph, background, debug_graph);
    if (!debug_route.empty()) save_image(draw_route(background, result.outcome.state.route, inputs.transform), debug_route);

    if (!truth_mask.empty()) {
        const TrailPointSet truth(load_mask(truth_mask), inputs.transform, kMaxTrailPoints, tuning.pipeline.seed);
        const auto d = directional_distances(result.outcome.state.route, truth, tuning.pipeline.refine.densify_spacing);
        out << "chamfer_m " << d.chamfer() << "\ngpx_to_trail_m " << d.gpx_to_trail << "\ntrail_to_gpx_m "
            << d.trail_to_gpx << "\n";
    }
    return kExitOk;
}

int report(const EvalReport& r, const std::string& csv_path, std::ostream& out) {
    if (!csv_path.empty()) {
        std::ofstream csv(csv_path);
        if (!csv) throw IoError("cannot write " + csv_path);
        csv << r.to_csv();
    }
    out << r.to_table();
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Turn a trail drawn on a scanned map into a routable GPX track", "trailroute"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_help_all_flag("--help-all", "Show help for every subcommand");
    std::string config_path;
    app.add_option("--config", config_path, "JSON object of flag values (keys are long flag names)");

    // extract
    auto* extract = app.add_subcommand("extract", "Run the full pipeline and write a GPX track");
    std::string image, gcps, color, mask, start, goal, router_url, osm, gpx_out, debug_mask, debug_graph, debug_route,
        log_path, truth_mask;
    Tuning extract_tuning;
    extract->add_option("--image", image, "Scanned map (PNG)");
    extract->add_option("--gcps", gcps, "Ground control points (JSON)")->required();
    extract->add_option("--color", color, "Trail colour R,G,B");
    extract->add_option("--mask", mask, "Trail mask PNG; skips segmentation");
    extract->add_option("--start", start, "Trail start lat,lon")->required();
    extract->add_option("--goal", goal, "Trail goal lat,lon")->required();
    extract->add_option("--router", router_url, "GraphHopper-compatible routing URL");
    extract->add_option("--osm", osm, "OSM XML road network for the local router");
    extract->add_option("--out", gpx_out, "Output GPX path")->required();
    extract->add_option("--debug-mask", debug_mask, "Write the trail mask PNG");
    extract->add_option("--debug-graph", debug_graph, "Write the simplified graph over the map (PNG)");
    extract->add_option("--debug-route", debug_route, "Write the final route over the map (PNG)");
    extract->add_option("--log", log_path, "Refinement iteration log (default: standard error)");
    extract->add_option("--truth-mask", truth_mask, "Ground-truth mask; prints final distances");
    add_tuning(extract, extract_tuning, true);

    // segment
    auto* segment = app.add_subcommand("segment", "Colour-threshold a map into a trail mask PNG");
    std::string seg_image, seg_color, seg_out;
    Tuning seg_tuning;
    segment->add_option("--image", seg_image, "Scanned map (PNG)")->required();
    segment->add_option("--color", seg_color, "Trail colour R,G,B")->required();
    segment->add_option("--out", seg_out, "Output mask PNG")->required();
    segment->add_option("--color-threshold", seg_tuning.pipeline.segment.threshold, "RGB distance threshold")
        ->capture_default_str();
    segment->add_option("--min-component", seg_tuning.pipeline.segment.min_component, "Minimum component size (px)")
        ->capture_default_str();

    // synth
    auto* synth = app.add_subcommand("synth", "Generate synthetic scenes with known ground truth");
    std::uint64_t synth_seed = 1;
    int synth_count = 1;
    std::string synth_out, synth_shape = "auto";
    synth->add_option("--seed", synth_seed, "First scene seed")->capture_default_str();
    synth->add_option("--count", synth_count, "Number of scenes")->capture_default_str()->check(CLI::PositiveNumber);
    synth->add_option("--shape", synth_shape, "auto, open or loop")
        ->capture_default_str()
        ->check(CLI::IsMember({"auto", "open", "loop"}));
    synth->add_option("--out", synth_out, "Output directory")->required();

    // evaluate / ablate
    auto* evaluate = app.add_subcommand("evaluate", "Evaluate one strategy on a dataset manifest");
    auto* ablate = app.add_subcommand("ablate", "Run the strategy ablation on a manifest or synthetic scenes");
    std::string manifest_path, eval_router, csv_path;
    bool with_pred = false;
    int synthetic = 0, parallel = 1;
    std::vector<std::string> strategy_names;
    Tuning eval_tuning;
    for (auto* sub : {evaluate, ablate}) {
        sub->add_option("--manifest", manifest_path, "Dataset manifest JSON");
        sub->add_option("--router", eval_router, "Routing URL for maps without an OSM file");
        sub->add_option("--csv", csv_path, "Write per-trail rows as CSV");
        sub->add_flag("--pred", with_pred, "Also evaluate colour-segmented masks");
        sub->add_option("--parallel", parallel, "Trials evaluated concurrently")->capture_default_str();
        add_tuning(sub, eval_tuning, sub == evaluate);
    }
    ablate->add_option("--synthetic", synthetic, "Generate this many scenes instead of reading a manifest");
    ablate->add_option("--strategies", strategy_names, "Strategies (default: E2E+IR GP+IR Hybrid+IR Hybrid)")
        ->delimiter(',');

    try {
        std::vector<std::string> args = expand_config(raw_args);
        std::reverse(args.begin(), args.end());
        try {
            app.parse(args);
        } catch (const CLI::CallForHelp&) {
            out << app.help();
            return kExitOk;
        } catch (const CLI::CallForAllHelp&) {
            out << app.help("", CLI::AppFormatMode::All);
            return kExitOk;
        } catch (const CLI::ParseError& e) {
            err << "error [config]: " << e.what() << "\n";
            return kExitConfig;
        }

        if (extract->parsed()) {
            return run_extract(image, gcps, color, mask, start, goal, router_url, osm, gpx_out, debug_mask, debug_graph,
                               debug_route, log_path, truth_mask, extract_tuning, out, err);
        }
        if (segment->parsed()) {
            const MapImage img = load_image(seg_image);
            const TrailMask m = segment_by_color(img, parse_color(seg_color), seg_tuning.pipeline.segment);
            save_mask(m, seg_out);
            err << "[segment] " << m.count() << " px\n";
            return kExitOk;
        }
        if (synth->parsed()) {
            DatasetManifest all;
            for (int k = 0; k < synth_count; ++k) {
                const std::uint64_t seed = synth_seed + static_cast<std::uint64_t>(k);
                SceneConfig cfg = default_scene_config(seed);
                if (synth_shape == "open") cfg.shape = TrailShape::Open;
                if (synth_shape == "loop") cfg.shape = TrailShape::Loop;
                const std::string id = "scene-" + std::to_string(seed);
                const fs::path one = write_scene(generate_scene(seed, cfg), fs::path(synth_out) / id, id);
                const DatasetManifest m = load_manifest(one);
                all.maps.insert(all.maps.end(), m.maps.begin(), m.maps.end());
            }
            const fs::path path = fs::path(synth_out) / "manifest.json";
            save_manifest(all, path);
            out << path.string() << "\n";
            return kExitOk;
        }

        AblationOptions options;
        options.pipeline = eval_tuning.pipeline;
        options.parallelism = parallel;
        std::vector<StrategyChoice> strategies;
        if (evaluate->parsed()) {
            strategies.push_back(parse_strategy(eval_tuning.strategy));
        } else if (strategy_names.empty()) {
            strategies = ablation_strategies();
        } else {
            for (const auto& s : strategy_names) strategies.push_back(parse_strategy(s));
        }

        std::vector<Trial> trials;
        if (ablate->parsed() && synthetic > 0) {
            if (!manifest_path.empty()) throw InvalidConfig("give either --manifest or --synthetic");
            std::vector<SyntheticScene> scenes;
            for (int k = 0; k < synthetic; ++k) {
                const std::uint64_t seed = eval_tuning.pipeline.seed + static_cast<std::uint64_t>(k);
                scenes.push_back(generate_scene(seed, default_scene_config(seed)));
            }
            trials = scene_trials(scenes, with_pred, options.pipeline.segment);
        } else {
            if (manifest_path.empty()) throw InvalidConfig("--manifest is required");
            std::shared_ptr<const Router> fallback;
            if (!eval_router.empty()) fallback = std::make_shared<HttpRouter>(eval_router);
            trials = manifest_trials(load_manifest(manifest_path), fallback, with_pred, options.pipeline.segment);
        }
        return report(run_ablation(trials, strategies, options), csv_path, out);
    } catch (const Error& e) {
        err << "error [" << e.stage() << "]: " << e.what() << "\n";
        const std::string& s = e.stage();
        return (s == "config" || s == "io" || s == "parse") ? kExitConfig : kExitPipeline;
    } catch (const std::exception& e) {
        err << "error [internal]: " << e.what() << "\n";
        return kExitPipeline;
    }
}

}  // namespace trailroute
