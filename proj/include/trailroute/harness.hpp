#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "trailroute/georef.hpp"
#include "trailroute/pipeline.hpp"
#include "trailroute/raster.hpp"
#include "trailroute/refine.hpp"
#include "trailroute/routing.hpp"

namespace trailroute {

// ---------------------------------------------------------------- manifest

struct TrailEntry {
    std::string id;
    Rgb color{0, 0, 0};
    GeoPoint start;
    GeoPoint goal;
    std::filesystem::path mask;
    bool operator==(const TrailEntry&) const = default;
};

struct MapEntry {
    std::string id;
    std::filesystem::path image;
    std::filesystem::path gcps;
    /// Local road network for this map; optional when an HTTP router is used.
    std::optional<std::filesystem::path> osm;
    std::vector<TrailEntry> trails;
    bool operator==(const MapEntry&) const = default;
};

/// Paths inside are absolute after loading; saving writes them relative to
/// the manifest's directory where possible.
struct DatasetManifest {
    std::vector<MapEntry> maps;
    bool operator==(const DatasetManifest&) const = default;
};

/// Resolves paths against `base`. With `check_files`, referenced files must exist.
DatasetManifest parse_manifest(const std::string& json_text, const std::filesystem::path& base,
                               bool check_files = true);
DatasetManifest load_manifest(const std::filesystem::path& path, bool check_files = true);
std::string manifest_to_json(const DatasetManifest& manifest, const std::filesystem::path& base);
void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);

// ----------------------------------------------------------------- metrics

/// |a and b| / |a or b|; 1.0 when both are empty. Throws DimensionMismatch.
double iou(const BinaryRaster& a, const BinaryRaster& b);

struct DirectionalDistances {
    double gpx_to_trail = 0.0;
    double trail_to_gpx = 0.0;
    double chamfer() const noexcept { return 0.5 * (gpx_to_trail + trail_to_gpx); }
};

/// Mean nearest-trail distance of the (densified) route points, and mean
/// distance of trail points to the route polyline. Throws EmptySet.
DirectionalDistances directional_distances(const RoutePolyline& route, const TrailPointSet& trail,
                                           double spacing = kDefaultDensifySpacing);

struct Summary {
    std::size_t count = 0;
    double mean = 0.0;
    /// Population standard deviation.
    double std = 0.0;
    double median = 0.0;
    double q1 = 0.0;
    double q3 = 0.0;
    double min = 0.0;
    double max = 0.0;
    double iqr() const noexcept { return q3 - q1; }
};

/// Quantile by linear interpolation between order statistics.
double quantile(std::vector<double> values, double q);
/// Throws EmptySet on an empty input.
Summary summarize(const std::vector<double>& values);

// ------------------------------------------------------------- synthetic

inline constexpr Rgb kSceneTrailColor{170, 79, 55};

enum class TrailShape { Open, Loop };

struct SceneConfig {
    int grid_rows = 6;
    int grid_cols = 6;
    double grid_spacing_px = 90.0;
    double jitter_px = 12.0;
    int margin_px = 40;
    /// Road vertices are inserted along every edge at this spacing.
    double road_vertex_spacing_px = 10.0;
    double meters_per_px = 1.0;
    double max_rotation_deg = 8.0;
    int stroke_width = 5;
    int road_width = 3;
    /// Grid edges in the main trail walk (open shape).
    int trail_edges = 8;
    TrailShape shape = TrailShape::Open;
    bool spur = true;
    /// Fraction of grid edges tagged as non-walkable roads.
    double motorway_fraction = 0.08;
    /// Degradations of the "predicted" rendering: pixel noise, isolated
    /// speckles, trail-coloured blobs on other roads and erased trail gaps.
    double noise_sigma = 8.0;
    double speckle_rate = 0.0004;
    int distractor_blobs = 2;
    int distractor_radius_px = 5;
    int trail_gaps = 2;
    int gap_radius_px = 4;
    GeoPoint anchor{35.0, 139.7};
};

struct SyntheticScene {
    std::uint64_t seed = 0;
    SceneConfig config;
    std::shared_ptr<RoadNetwork> network;
    /// Road node ids along the drawn trail (spurs appear as out-and-back).
    std::vector<NodeId> trail_nodes;
    MapImage image;
    /// Same scene with pixel noise and colour speckles.
    MapImage noisy_image;
    AffineTransform transform;
    std::vector<GroundControlPoint> gcps;
    TrailMask mask;
    GeoPoint start;
    GeoPoint goal;
    Rgb color = kSceneTrailColor;
};

/// Deterministic for a fixed seed. Throws InvalidConfig.
SyntheticScene generate_scene(std::uint64_t seed, const SceneConfig& config = {});
/// Open trails on even seeds, loops on odd seeds, each with a spur.
SceneConfig default_scene_config(std::uint64_t seed);

/// Writes image, noisy image, GCPs, OSM and mask files plus a one-map
/// manifest named "manifest.json" into `dir`. Returns the manifest path.
std::filesystem::path write_scene(const SyntheticScene& scene, const std::filesystem::path& dir,
                                  const std::string& map_id);

// --------------------------------------------------------------- ablation

/// One trail to evaluate with every strategy.
struct Trial {
    std::string map_id;
    std::string trail_id;
    /// "GT" when the pipeline sees the true mask, "Pred" for segmentation output.
    std::string input = "GT";
    TrailMask input_mask;
    TrailMask truth_mask;
    AffineTransform transform;
    GeoPoint start;
    GeoPoint goal;
    std::shared_ptr<const Router> router;
};

struct EvalRow {
    std::string map_id;
    std::string trail_id;
    std::string input;
    std::string strategy;
    std::optional<double> iou;
    double chamfer = 0.0;
    double gpx_to_trail = 0.0;
    double trail_to_gpx = 0.0;
    /// Point-based Chamfer minimized during refinement, against the input mask.
    double refine_chamfer = 0.0;
    double seed_chamfer = 0.0;
    int iterations = 0;
    int requests = 0;
    /// Adopted Chamfer sequence is non-increasing.
    bool monotone = true;
    std::string error;
    bool ok() const noexcept { return error.empty(); }
};

struct AggregateRow {
    std::string input;
    std::string strategy;
    Summary chamfer;
    std::size_t failures = 0;
};

struct EvalReport {
    std::vector<EvalRow> rows;

    /// Per (input, strategy) in first-appearance order, successful rows only.
    std::vector<AggregateRow> aggregate() const;
    std::string to_csv() const;
    std::string to_table() const;
};

struct AblationOptions {
    PipelineOptions pipeline;
    /// Trials evaluated concurrently.
    int parallelism = 1;
};

/// Every trial under every strategy. Per-trial failures are recorded in the
/// report. Rows are ordered by trial order, then strategy order.
EvalReport run_ablation(const std::vector<Trial>& trials, const std::vector<StrategyChoice>& strategies,
                        const AblationOptions& options = {});

/// Trials for synthetic scenes: always GT, plus Pred from the noisy image.
std::vector<Trial> scene_trials(const std::vector<SyntheticScene>& scenes, bool with_predicted,
                                const SegmentOptions& segment = {});

/// Trials for a manifest. Maps without an OSM file use `fallback` (may be null).
/// With `with_predicted`, a Pred trial is added from segment_by_color.
std::vector<Trial> manifest_trials(const DatasetManifest& manifest, std::shared_ptr<const Router> fallback,
                                   bool with_predicted, const SegmentOptions& segment = {});

}  // namespace trailroute
