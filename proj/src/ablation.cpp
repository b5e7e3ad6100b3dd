#include <cstdio>
#include <future>
#include <iomanip>
#include <sstream>

#include "trailroute/error.hpp"
#include "trailroute/harness.hpp"
#include "trailroute/osm.hpp"

namespace trailroute {

namespace {

std::vector<EvalRow> evaluate_trial(const Trial& trial, const std::vector<StrategyChoice>& strategies,
                                    const PipelineOptions& options) {
    std::vector<EvalRow> rows;
    for (const StrategyChoice& s : strategies) {
        EvalRow row;
        row.map_id = trial.map_id;
        row.trail_id = trial.trail_id;
        row.input = trial.input;
        row.strategy = s.name();
        rows.push_back(std::move(row));
    }
    if (strategies.empty()) return rows;
    auto fail_all = [&](const std::string& message) {
        for (EvalRow& r : rows) {
            if (r.error.empty()) r.error = message;
        }
    };

    try {
        if (!trial.router) throw InvalidConfig("trial has no router");
        std::optional<double> mask_iou;
        if (trial.input != "GT") mask_iou = iou(trial.input_mask, trial.truth_mask);
        const TrailPointSet input_trail(trial.input_mask, trial.transform, kMaxTrailPoints, options.seed);
        const TrailPointSet truth_trail(trial.truth_mask, trial.transform, kMaxTrailPoints, options.seed);

        std::optional<GraphPlan> plan;
        std::string plan_error;
        const bool needs_plan = std::any_of(strategies.begin(), strategies.end(),
                                            [](const StrategyChoice& s) { return s.strategy != Strategy::EndToEnd; });
        if (needs_plan) {
            try {
                plan = plan_from_mask(trial.input_mask, trial.transform, trial.start, trial.goal, options);
            } catch (const Error& e) {
                plan_error = std::string(e.stage()) + ": " + e.what();
            }
        }

        for (std::size_t k = 0; k < strategies.size(); ++k) {
            EvalRow& row = rows[k];
            row.iou = mask_iou;
            const StrategyChoice& choice = strategies[k];
            if (choice.strategy != Strategy::EndToEnd && !plan) {
                row.error = plan_error;
                continue;
            }
            try {
                StrategyInputs inputs{trial.start, trial.goal, plan ? plan->waypoints : std::vector<GeoPoint>{}};
                const StrategyResult result =
                    run_strategy(choice, inputs, input_trail, *trial.router, options.refine, nullptr);
                const DirectionalDistances d =
                    directional_distances(result.state.route, truth_trail, options.refine.densify_spacing);
                row.chamfer = d.chamfer();
                row.gpx_to_trail = d.gpx_to_trail;
                row.trail_to_gpx = d.trail_to_gpx;
                row.refine_chamfer = result.state.best_chamfer;
                row.seed_chamfer = result.seed_chamfer;
                row.iterations = result.state.iteration;
                row.requests = result.state.requests;
                const auto& h = result.state.history;
                row.monotone = std::is_sorted(h.rbegin(), h.rend()) && result.state.iteration <= options.refine.max_iters;
            } catch (const Error& e) {
                row.error = std::string(e.stage()) + ": " + e.what();
            }
        }
    } catch (const Error& e) {
        fail_all(std::string(e.stage()) + ": " + e.what());
    }
    return rows;
}

std::string fixed(double v, int digits = 2) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(digits) << v;
    return os.str();
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

EvalReport run_ablation(const std::vector<Trial>& trials, const std::vector<StrategyChoice>& strategies,
                        const AblationOptions& options) {
    EvalReport report;
    if (strategies.empty()) return report;
    std::vector<std::vector<EvalRow>> per_trial(trials.size());
    const std::size_t batch = static_cast<std::size_t>(std::max(1, options.parallelism));
    for (std::size_t begin = 0; begin < trials.size(); begin += batch) {
        const std::size_t end = std::min(trials.size(), begin + batch);
        std::vector<std::future<std::vector<EvalRow>>> running;
        for (std::size_t i = begin; i < end; ++i) {
            running.push_back(std::async(batch == 1 ? std::launch::deferred : std::launch::async,
                                         [&, i] { return evaluate_trial(trials[i], strategies, options.pipeline); }));
        }
        for (std::size_t i = begin; i < end; ++i) per_trial[i] = running[i - begin].get();
    }
    for (auto& rows : per_trial) {
        for (auto& r : rows) report.rows.push_back(std::move(r));
    }
    return report;
}

std::vector<AggregateRow> EvalReport::aggregate() const {
    std::vector<AggregateRow> out;
    std::vector<std::vector<double>> values;
    for (const EvalRow& r : rows) {
        auto it = std::find_if(out.begin(), out.end(),
                               [&](const AggregateRow& a) { return a.input == r.input && a.strategy == r.strategy; });
        if (it == out.end()) {
            out.push_back({r.input, r.strategy, {}, 0});
            values.emplace_back();
            it = out.end() - 1;
        }
        const auto k = static_cast<std::size_t>(it - out.begin());
        if (r.ok()) values[k].push_back(r.chamfer);
        else ++out[k].failures;
    }
    for (std::size_t k = 0; k < out.size(); ++k) {
        if (!values[k].empty()) out[k].chamfer = summarize(values[k]);
    }
    return out;
}

std::string EvalReport::to_csv() const {
    std::ostringstream os;
    os << "map_id,trail_id,input,strategy,iou,chamfer_m,gpx_to_trail_m,trail_to_gpx_m,refine_chamfer_m,"
          "seed_chamfer_m,iterations,requests,error\n";
    os << std::setprecision(10);
    for (const EvalRow& r : rows) {
        os << csv_field(r.map_id) << ',' << csv_field(r.trail_id) << ',' << r.input << ',' << r.strategy << ',';
        if (r.iou) os << *r.iou;
        os << ',';
        if (r.ok()) {
            os << r.chamfer << ',' << r.gpx_to_trail << ',' << r.trail_to_gpx << ',' << r.refine_chamfer << ','
               << r.seed_chamfer << ',' << r.iterations << ',' << r.requests << ',';
        } else {
            os << ",,,,,,,";
        }
        os << csv_field(r.error) << '\n';
    }
    return os.str();
}

std::string EvalReport::to_table() const {
    std::ostringstream os;
    os << std::left << std::setw(7) << "Input" << std::setw(12) << "Strategy" << std::right << std::setw(5) << "n"
       << std::setw(22) << "Chamfer mean ± std" << std::setw(10) << "median" << std::setw(9) << "IQR"
       << std::setw(10) << "failures" << '\n';
    for (const AggregateRow& a : aggregate()) {
        os << std::left << std::setw(7) << a.input << std::setw(12) << a.strategy << std::right << std::setw(5)
           << a.chamfer.count;
        if (a.chamfer.count > 0) {
            // setw counts bytes; the ± sign is two.
            os << std::setw(21) << (fixed(a.chamfer.mean) + " ± " + fixed(a.chamfer.std)) << std::setw(10)
               << fixed(a.chamfer.median) << std::setw(9) << fixed(a.chamfer.iqr());
        } else {
            os << std::setw(21) << "-" << std::setw(10) << "-" << std::setw(9) << "-";
        }
        os << std::setw(10) << a.failures << '\n';
    }
    return os.str();
}

std::vector<Trial> scene_trials(const std::vector<SyntheticScene>& scenes, bool with_predicted,
                                const SegmentOptions& segment) {
    std::vector<Trial> out;
    for (const SyntheticScene& scene : scenes) {
        Trial t;
        t.map_id = "scene-" + std::to_string(scene.seed);
        t.trail_id = "trail";
        t.input_mask = scene.mask;
        t.truth_mask = scene.mask;
        t.transform = fit_affine(scene.gcps);
        t.start = scene.start;
        t.goal = scene.goal;
        t.router = std::make_shared<LocalRouter>(scene.network);
        out.push_back(t);
        if (with_predicted) {
            t.input = "Pred";
            t.input_mask = segment_by_color(scene.noisy_image, scene.color, segment);
            out.push_back(std::move(t));
        }
    }
    return out;
}

std::vector<Trial> manifest_trials(const DatasetManifest& manifest, std::shared_ptr<const Router> fallback,
                                   bool with_predicted, const SegmentOptions& segment) {
    std::vector<Trial> out;
    for (const MapEntry& map : manifest.maps) {
        const std::vector<GroundControlPoint> gcps = load_gcps(map.gcps);
        const AffineTransform transform = fit_affine(gcps);
        std::shared_ptr<const Router> router = fallback;
        if (map.osm) router = std::make_shared<LocalRouter>(std::make_shared<RoadNetwork>(load_osm(*map.osm)));
        if (!router) throw InvalidConfig("map " + map.id + " has no OSM file and no router URL was given");
        std::optional<MapImage> image;
        if (with_predicted) image = load_image(map.image);
        for (const TrailEntry& trail : map.trails) {
            Trial t;
            t.map_id = map.id;
            t.trail_id = trail.id;
            t.truth_mask = load_mask(trail.mask);
            t.input_mask = t.truth_mask;
            t.transform = transform;
            t.start = trail.start;
            t.goal = trail.goal;
            t.router = router;
            out.push_back(t);
            if (with_predicted) {
                t.input = "Pred";
                t.input_mask = segment_by_color(*image, trail.color, segment);
                out.push_back(std::move(t));
            }
        }
    }
    return out;
}

}  // namespace trailroute
