#pragma once

#include <filesystem>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "trailroute/raster.hpp"
#include "trailroute/trailgraph.hpp"

namespace trailroute::testing {

inline std::filesystem::path temp_dir(const std::string& name) {
#ifdef TRAILROUTE_TEST_TMP
    const std::filesystem::path root = TRAILROUTE_TEST_TMP;
#else
    const std::filesystem::path root = std::filesystem::temp_directory_path() / "trailroute-tests";
#endif
    const auto dir = root / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
    bool chance(double p) { return uniform(0.0, 1.0) < p; }
    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

/// Random blobby mask: a few thick random strokes plus scattered dots.
inline BinaryRaster random_mask(Rng& rng, int max_side) {
    const int h = rng.integer(3, max_side), w = rng.integer(3, max_side);
    BinaryRaster m(h, w);
    const int strokes = rng.integer(0, 5);
    for (int s = 0; s < strokes; ++s) {
        int r = rng.integer(0, h - 1), c = rng.integer(0, w - 1);
        const int steps = rng.integer(1, 3 * std::max(h, w));
        const int radius = rng.integer(0, 3);
        for (int k = 0; k < steps; ++k) {
            for (int dr = -radius; dr <= radius; ++dr) {
                for (int dc = -radius; dc <= radius; ++dc) {
                    if (r + dr >= 0 && r + dr < h && c + dc >= 0 && c + dc < w) m.set(r + dr, c + dc, true);
                }
            }
            r = std::clamp(r + rng.integer(-1, 1), 0, h - 1);
            c = std::clamp(c + rng.integer(-1, 1), 0, w - 1);
        }
    }
    const double density = rng.uniform(0.0, 0.15);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            if (rng.chance(density)) m.set(r, c, true);
        }
    }
    return m;
}

inline bool has_2x2_block(const BinaryRaster& m) {
    for (int r = 0; r + 1 < m.height(); ++r) {
        for (int c = 0; c + 1 < m.width(); ++c) {
            if (m.at(r, c) && m.at(r + 1, c) && m.at(r, c + 1) && m.at(r + 1, c + 1)) return true;
        }
    }
    return false;
}

/// O(n^2) Chebyshev-1 pair enumeration in (row, col) order of node ids.
inline std::set<std::pair<Pixel, Pixel>> brute_force_edges(const BinaryRaster& m) {
    std::vector<Pixel> px = m.foreground();
    std::set<std::pair<Pixel, Pixel>> out;
    for (std::size_t i = 0; i < px.size(); ++i) {
        for (std::size_t j = i + 1; j < px.size(); ++j) {
            if (std::max(std::abs(px[i].row - px[j].row), std::abs(px[i].col - px[j].col)) == 1) {
                out.insert(std::minmax(px[i], px[j]));
            }
        }
    }
    return out;
}

inline std::set<std::pair<Pixel, Pixel>> dense_edges(const DenseGraph& g) {
    std::set<std::pair<Pixel, Pixel>> out;
    for (const auto& [a, b] : g.edges()) {
        out.insert(std::minmax(g.nodes()[static_cast<std::size_t>(a)], g.nodes()[static_cast<std::size_t>(b)]));
    }
    return out;
}

/// Random thin skeleton: the thinned version of a random mask.
inline Skeleton random_skeleton(Rng& rng, int max_side) { return skeletonize(random_mask(rng, max_side)); }

}  // namespace trailroute::testing
