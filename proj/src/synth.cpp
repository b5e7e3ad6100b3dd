#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <queue>
#include <random>
#include <set>

#include "trailroute/error.hpp"
#include "trailroute/harness.hpp"
#include "trailroute/osm.hpp"

namespace trailroute {

namespace {

namespace fs = std::filesystem;

constexpr Rgb kBackground{243, 239, 224};
constexpr Rgb kPark{206, 226, 190};
constexpr Rgb kRoad{158, 158, 158};
constexpr Rgb kMotorway{232, 176, 96};

struct GridEdge {
    int a = 0;
    int b = 0;
    bool walkable = true;
};

// Meters per degree of latitude and longitude at `lat`.
std::pair<double, double> meters_per_degree(double lat) {
    const double phi = lat * std::numbers::pi / 180.0;
    const double m_lat = 111132.92 - 559.82 * std::cos(2 * phi) + 1.175 * std::cos(4 * phi);
    const double m_lon = 111412.84 * std::cos(phi) - 93.5 * std::cos(3 * phi);
    return {m_lat, m_lon};
}

/// Marks pixels whose centre lies within `radius` of segment [a, b].
template <typename Fn>
void stroke_segment(int height, int width, ImagePoint a, ImagePoint b, double radius, Fn&& mark) {
    const int r0 = std::max(0, static_cast<int>(std::floor(std::min(a.row, b.row) - radius)) - 2);
    const int r1 = std::min(height - 1, static_cast<int>(std::ceil(std::max(a.row, b.row) + radius)));
    const int c0 = std::max(0, static_cast<int>(std::floor(std::min(a.col, b.col) - radius)) - 2);
    const int c1 = std::min(width - 1, static_cast<int>(std::ceil(std::max(a.col, b.col) + radius)));
    const MetricPoint pa{a.col, a.row}, pb{b.col, b.row};
    for (int r = r0; r <= r1; ++r) {
        for (int c = c0; c <= c1; ++c) {
            const MetricPoint p{c + 1.0, r + 1.0};
            if (point_segment_distance(p, pa, pb) <= radius) mark(r, c);
        }
    }
}

template <typename Fn>
void stroke_polyline(int height, int width, const std::vector<ImagePoint>& line, double radius, Fn&& mark) {
    for (std::size_t i = 0; i + 1 < line.size(); ++i) stroke_segment(height, width, line[i], line[i + 1], radius, mark);
    if (line.size() == 1) stroke_segment(height, width, line[0], line[0], radius, mark);
}

class SceneBuilder {
public:
    SceneBuilder(std::uint64_t seed, const SceneConfig& cfg) : cfg_(cfg), rng_(seed) {}

    SyntheticScene build(std::uint64_t seed);

private:
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

    int node(int i, int j) const { return i * cfg_.grid_cols + j; }
    std::vector<int> grid_neighbours(int n) const;
    int edge_between(int a, int b) const;
    std::vector<int> open_walk();
    std::vector<int> loop_walk();
    void add_spur(std::vector<int>& walk, bool loop);
    bool connected_without(const std::set<int>& blocked) const;

    SceneConfig cfg_;
    std::mt19937_64 rng_;
    std::vector<ImagePoint> grid_;
    std::vector<GridEdge> edges_;
    std::map<std::pair<int, int>, int> edge_index_;
};

std::vector<int> SceneBuilder::grid_neighbours(int n) const {
    const int i = n / cfg_.grid_cols, j = n % cfg_.grid_cols;
    std::vector<int> out;
    if (i > 0) out.push_back(node(i - 1, j));
    if (j > 0) out.push_back(node(i, j - 1));
    if (j + 1 < cfg_.grid_cols) out.push_back(node(i, j + 1));
    if (i + 1 < cfg_.grid_rows) out.push_back(node(i + 1, j));
    return out;
}

int SceneBuilder::edge_between(int a, int b) const { return edge_index_.at({std::min(a, b), std::max(a, b)}); }

std::vector<int> SceneBuilder::open_walk() {
    const int n = cfg_.grid_rows * cfg_.grid_cols;
    for (int attempt = 0; attempt < 200; ++attempt) {
        std::vector<int> walk{uniform_int(0, n - 1)};
        std::set<int> seen{walk.front()};
        while (static_cast<int>(walk.size()) <= cfg_.trail_edges) {
            std::vector<int> options;
            for (int m : grid_neighbours(walk.back())) {
                if (!seen.contains(m)) options.push_back(m);
            }
            if (options.empty()) break;
            const int next = options[static_cast<std::size_t>(uniform_int(0, static_cast<int>(options.size()) - 1))];
            walk.push_back(next);
            seen.insert(next);
        }
        if (static_cast<int>(walk.size()) == cfg_.trail_edges + 1) return walk;
    }
    throw InvalidConfig("grid too small for a self-avoiding trail of " + std::to_string(cfg_.trail_edges) + " edges");
}

std::vector<int> SceneBuilder::loop_walk() {
    const int h = uniform_int(1, std::min(2, cfg_.grid_rows - 1));
    const int w = uniform_int(1, std::min(2, cfg_.grid_cols - 1));
    const int top = uniform_int(0, cfg_.grid_rows - 1 - h);
    const int left = uniform_int(0, cfg_.grid_cols - 1 - w);
    std::vector<int> ring;
    for (int j = left; j < left + w; ++j) ring.push_back(node(top, j));
    for (int i = top; i < top + h; ++i) ring.push_back(node(i, left + w));
    for (int j = left + w; j > left; --j) ring.push_back(node(top + h, j));
    for (int i = top + h; i > top; --i) ring.push_back(node(i, left));
    const int offset = uniform_int(0, static_cast<int>(ring.size()) - 1);
    std::rotate(ring.begin(), ring.begin() + offset, ring.end());
    if (uniform_int(0, 1) == 1) std::reverse(ring.begin() + 1, ring.end());
    ring.push_back(ring.front());
    return ring;
}

void SceneBuilder::add_spur(std::vector<int>& walk, bool loop) {
    std::set<int> on_path(walk.begin(), walk.end());
    std::vector<std::pair<std::size_t, int>> options;
    const std::size_t lo = loop ? 1 : 2;
    const std::size_t hi = walk.size() >= 3 ? walk.size() - 2 : 0;
    for (std::size_t k = lo; k <= hi && k < walk.size(); ++k) {
        for (int m : grid_neighbours(walk[k])) {
            if (!on_path.contains(m)) options.emplace_back(k, m);
        }
    }
    if (options.empty()) return;
    const auto [k, tip] = options[static_cast<std::size_t>(uniform_int(0, static_cast<int>(options.size()) - 1))];
    walk.insert(walk.begin() + static_cast<std::ptrdiff_t>(k) + 1, {tip, walk[k]});
}

bool SceneBuilder::connected_without(const std::set<int>& blocked) const {
    const int n = cfg_.grid_rows * cfg_.grid_cols;
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::queue<int> queue;
    queue.push(0);
    seen[0] = 1;
    int count = 1;
    while (!queue.empty()) {
        const int u = queue.front();
        queue.pop();
        for (int v : grid_neighbours(u)) {
            if (seen[static_cast<std::size_t>(v)] || blocked.contains(edge_between(u, v))) continue;
            seen[static_cast<std::size_t>(v)] = 1;
            ++count;
            queue.push(v);
        }
    }
    return count == n;
}

SyntheticScene SceneBuilder::build(std::uint64_t seed) {
    if (cfg_.grid_rows < 2 || cfg_.grid_cols < 2 || cfg_.grid_spacing_px <= 0 || cfg_.stroke_width < 1 ||
        cfg_.trail_edges < 1 || cfg_.meters_per_px <= 0 || cfg_.road_vertex_spacing_px <= 0 ||
        cfg_.jitter_px < 0 || cfg_.jitter_px * 2 >= cfg_.grid_spacing_px) {
        throw InvalidConfig("invalid synthetic scene configuration");
    }
    SyntheticScene scene;
    scene.seed = seed;
    scene.config = cfg_;

    const int height = static_cast<int>(std::ceil(2 * cfg_.margin_px + (cfg_.grid_rows - 1) * cfg_.grid_spacing_px)) + 1;
    const int width = static_cast<int>(std::ceil(2 * cfg_.margin_px + (cfg_.grid_cols - 1) * cfg_.grid_spacing_px)) + 1;

    // Georeference: rotation and scale around a jittered anchor.
    const double theta = uniform(-cfg_.max_rotation_deg, cfg_.max_rotation_deg) * std::numbers::pi / 180.0;
    const GeoPoint anchor{cfg_.anchor.lat + uniform(-0.05, 0.05), cfg_.anchor.lon + uniform(-0.05, 0.05)};
    const auto [m_lat, m_lon] = meters_per_degree(anchor.lat);
    const double s = cfg_.meters_per_px;
    // east = s (col cos + row sin), north = s (col sin - row cos)
    const AffineTransform::Matrix a{{{-s * std::cos(theta) / m_lat, s * std::sin(theta) / m_lat},
                                     {s * std::sin(theta) / m_lon, s * std::cos(theta) / m_lon}}};
    scene.transform = AffineTransform(a, {anchor.lat, anchor.lon});
    const std::array<ImagePoint, 5> gcp_pixels{ImagePoint{1.0 + cfg_.margin_px / 2.0, 1.0 + cfg_.margin_px / 2.0},
                                               ImagePoint{1.0 + cfg_.margin_px / 2.0, width - cfg_.margin_px / 2.0},
                                               ImagePoint{height - cfg_.margin_px / 2.0, 1.0 + cfg_.margin_px / 2.0},
                                               ImagePoint{height - cfg_.margin_px / 2.0, width - cfg_.margin_px / 2.0},
                                               ImagePoint{(height + 1) / 2.0, (width + 1) / 2.0}};
    for (const ImagePoint& p : gcp_pixels) scene.gcps.push_back({p, scene.transform.to_geo(p)});

    // Jittered grid.
    for (int i = 0; i < cfg_.grid_rows; ++i) {
        for (int j = 0; j < cfg_.grid_cols; ++j) {
            grid_.push_back({1.0 + cfg_.margin_px + i * cfg_.grid_spacing_px + uniform(-cfg_.jitter_px, cfg_.jitter_px),
                             1.0 + cfg_.margin_px + j * cfg_.grid_spacing_px + uniform(-cfg_.jitter_px, cfg_.jitter_px)});
        }
    }
    for (int u = 0; u < static_cast<int>(grid_.size()); ++u) {
        for (int v : grid_neighbours(u)) {
            if (u < v) {
                edge_index_[{u, v}] = static_cast<int>(edges_.size());
                edges_.push_back({u, v, true});
            }
        }
    }

    const bool loop = cfg_.shape == TrailShape::Loop;
    std::vector<int> walk = loop ? loop_walk() : open_walk();
    if (cfg_.spur) add_spur(walk, loop);

    std::set<int> trail_edges;
    for (std::size_t k = 0; k + 1 < walk.size(); ++k) trail_edges.insert(edge_between(walk[k], walk[k + 1]));
    std::set<int> blocked;
    for (int e = 0; e < static_cast<int>(edges_.size()); ++e) {
        if (trail_edges.contains(e) || uniform(0.0, 1.0) >= cfg_.motorway_fraction) continue;
        blocked.insert(e);
        if (!connected_without(blocked)) blocked.erase(e);
    }
    for (int e : blocked) edges_[static_cast<std::size_t>(e)].walkable = false;

    // Road network with intermediate vertices along every grid edge.
    auto network = std::make_shared<RoadNetwork>();
    auto geo_of = [&](ImagePoint p) { return scene.transform.to_geo(p); };
    for (int u = 0; u < static_cast<int>(grid_.size()); ++u) network->add_node(u + 1, geo_of(grid_[static_cast<std::size_t>(u)]));
    NodeId next_id = 100000;
    std::vector<std::vector<NodeId>> edge_nodes(edges_.size());
    std::vector<std::vector<ImagePoint>> edge_pixels(edges_.size());
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        const ImagePoint pa = grid_[static_cast<std::size_t>(edges_[e].a)];
        const ImagePoint pb = grid_[static_cast<std::size_t>(edges_[e].b)];
        const double len = std::hypot(pb.row - pa.row, pb.col - pa.col);
        const int pieces = std::max(1, static_cast<int>(std::round(len / cfg_.road_vertex_spacing_px)));
        edge_nodes[e].push_back(edges_[e].a + 1);
        edge_pixels[e].push_back(pa);
        for (int k = 1; k < pieces; ++k) {
            const double f = static_cast<double>(k) / pieces;
            const ImagePoint p{pa.row + f * (pb.row - pa.row), pa.col + f * (pb.col - pa.col)};
            network->add_node(next_id, geo_of(p));
            edge_nodes[e].push_back(next_id++);
            edge_pixels[e].push_back(p);
        }
        edge_nodes[e].push_back(edges_[e].b + 1);
        edge_pixels[e].push_back(pb);
        for (std::size_t k = 0; k + 1 < edge_nodes[e].size(); ++k) {
            network->add_edge(edge_nodes[e][k], edge_nodes[e][k + 1], edges_[e].walkable);
        }
    }
    scene.network = network;

    // Trail as road-node and pixel sequences.
    std::vector<ImagePoint> trail_line{grid_[static_cast<std::size_t>(walk.front())]};
    scene.trail_nodes.push_back(walk.front() + 1);
    for (std::size_t k = 0; k + 1 < walk.size(); ++k) {
        const int e = edge_between(walk[k], walk[k + 1]);
        std::vector<NodeId> ids = edge_nodes[static_cast<std::size_t>(e)];
        std::vector<ImagePoint> px = edge_pixels[static_cast<std::size_t>(e)];
        if (edges_[static_cast<std::size_t>(e)].a != walk[k]) {
            std::reverse(ids.begin(), ids.end());
            std::reverse(px.begin(), px.end());
        }
        scene.trail_nodes.insert(scene.trail_nodes.end(), ids.begin() + 1, ids.end());
        trail_line.insert(trail_line.end(), px.begin() + 1, px.end());
    }
    scene.start = network->position(scene.trail_nodes.front());
    scene.goal = network->position(scene.trail_nodes.back());

    // Rendering.
    scene.image = MapImage(height, width, kBackground);
    for (int park = 0; park < 3; ++park) {
        const int r0 = uniform_int(0, height - 40), c0 = uniform_int(0, width - 40);
        const int h = uniform_int(20, 60), w = uniform_int(20, 60);
        for (int r = r0; r < std::min(height, r0 + h); ++r) {
            for (int c = c0; c < std::min(width, c0 + w); ++c) scene.image.set(r, c, kPark);
        }
    }
    const double road_radius = cfg_.road_width / 2.0;
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        const Rgb color = edges_[e].walkable ? kRoad : kMotorway;
        stroke_polyline(height, width, edge_pixels[e], road_radius + (edges_[e].walkable ? 0.0 : 1.0),
                        [&](int r, int c) { scene.image.set(r, c, color); });
    }
    scene.mask = TrailMask(height, width);
    stroke_polyline(height, width, trail_line, cfg_.stroke_width / 2.0, [&](int r, int c) {
        scene.image.set(r, c, scene.color);
        scene.mask.set(r, c, true);
    });

    // Degraded copy standing in for an imperfect segmentation input.
    scene.noisy_image = scene.image;
    auto paint_disk = [&](ImagePoint centre, int radius, Rgb color, bool only_trail) {
        stroke_segment(height, width, centre, centre, radius, [&](int r, int c) {
            if (!only_trail || scene.mask.at(r, c)) scene.noisy_image.set(r, c, color);
        });
    };
    std::vector<int> other_edges;
    for (int e = 0; e < static_cast<int>(edges_.size()); ++e) {
        if (!trail_edges.contains(e)) other_edges.push_back(e);
    }
    for (int k = 0; k < cfg_.distractor_blobs && !other_edges.empty(); ++k) {
        const auto& px = edge_pixels[static_cast<std::size_t>(
            other_edges[static_cast<std::size_t>(uniform_int(0, static_cast<int>(other_edges.size()) - 1))])];
        paint_disk(px[px.size() / 2], cfg_.distractor_radius_px, scene.color, false);
    }
    for (int k = 0; k < cfg_.trail_gaps && trail_line.size() > 2; ++k) {
        const auto i = static_cast<std::size_t>(uniform_int(1, static_cast<int>(trail_line.size()) - 2));
        paint_disk(trail_line[i], cfg_.gap_radius_px, kRoad, true);
    }
    std::normal_distribution<double> noise(0.0, cfg_.noise_sigma);
    for (int r = 0; r < height; ++r) {
        for (int c = 0; c < width; ++c) {
            Rgb px = scene.noisy_image.at(r, c);
            if (uniform(0.0, 1.0) < cfg_.speckle_rate) {
                px = scene.color;
            } else {
                for (auto& ch : px) ch = static_cast<std::uint8_t>(std::clamp(std::lround(ch + noise(rng_)), 0L, 255L));
            }
            scene.noisy_image.set(r, c, px);
        }
    }
    return scene;
}

}  // namespace

SyntheticScene generate_scene(std::uint64_t seed, const SceneConfig& config) {
    return SceneBuilder(seed, config).build(seed);
}

SceneConfig default_scene_config(std::uint64_t seed) {
    SceneConfig cfg;
    cfg.shape = seed % 2 == 1 ? TrailShape::Loop : TrailShape::Open;
    cfg.spur = true;
    return cfg;
}

fs::path write_scene(const SyntheticScene& scene, const fs::path& dir, const std::string& map_id) {
    fs::create_directories(dir);
    save_image(scene.image, dir / "map.png");
    save_image(scene.noisy_image, dir / "map_noisy.png");
    save_mask(scene.mask, dir / "trail_mask.png");
    save_gcps(dir / "gcps.json", scene.gcps);
    save_osm(*scene.network, dir / "roads.osm");

    DatasetManifest manifest;
    MapEntry map{map_id, dir / "map.png", dir / "gcps.json", dir / "roads.osm", {}};
    map.trails.push_back({"trail", scene.color, scene.start, scene.goal, dir / "trail_mask.png"});
    manifest.maps.push_back(std::move(map));
    const fs::path path = dir / "manifest.json";
    save_manifest(manifest, path);
    return path;
}

}  // namespace trailroute
