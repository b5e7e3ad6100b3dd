#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "trailroute/geometry.hpp"

namespace trailroute {

using Rgb = std::array<std::uint8_t, 3>;

/// H x W x 3 8-bit image, row-major.
class MapImage {
public:
    MapImage() = default;
    MapImage(int height, int width, Rgb fill = {255, 255, 255});

    int height() const noexcept { return height_; }
    int width() const noexcept { return width_; }

    Rgb at(int row, int col) const noexcept {
        const auto i = index(row, col);
        return {data_[i], data_[i + 1], data_[i + 2]};
    }
    void set(int row, int col, Rgb c) noexcept {
        const auto i = index(row, col);
        data_[i] = c[0];
        data_[i + 1] = c[1];
        data_[i + 2] = c[2];
    }
    bool contains(int row, int col) const noexcept {
        return row >= 0 && col >= 0 && row < height_ && col < width_;
    }

    const std::vector<std::uint8_t>& data() const noexcept { return data_; }
    std::vector<std::uint8_t>& data() noexcept { return data_; }

    bool operator==(const MapImage&) const = default;

private:
    std::size_t index(int row, int col) const noexcept {
        return (static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(col)) * 3;
    }

    int height_ = 0;
    int width_ = 0;
    std::vector<std::uint8_t> data_;
};

/// H x W array of {0, 1}.
class BinaryRaster {
public:
    BinaryRaster() = default;
    BinaryRaster(int height, int width) : height_(height), width_(width), bits_(static_cast<std::size_t>(height) * width, 0) {}

    int height() const noexcept { return height_; }
    int width() const noexcept { return width_; }

    bool contains(int row, int col) const noexcept {
        return row >= 0 && col >= 0 && row < height_ && col < width_;
    }
    bool at(int row, int col) const noexcept { return bits_[index(row, col)] != 0; }
    bool at(Pixel p) const noexcept { return at(p.row, p.col); }
    /// Out-of-range positions read as background.
    bool get(int row, int col) const noexcept { return contains(row, col) && at(row, col); }
    void set(int row, int col, bool v) noexcept { bits_[index(row, col)] = v ? 1 : 0; }
    void set(Pixel p, bool v) noexcept { set(p.row, p.col, v); }

    std::size_t count() const noexcept;
    bool empty() const noexcept { return count() == 0; }
    std::vector<Pixel> foreground() const;

    const std::vector<std::uint8_t>& bits() const noexcept { return bits_; }

    bool operator==(const BinaryRaster&) const = default;

private:
    std::size_t index(int row, int col) const noexcept {
        return static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(col);
    }

    int height_ = 0;
    int width_ = 0;
    std::vector<std::uint8_t> bits_;
};

struct TrailMask : BinaryRaster {
    using BinaryRaster::BinaryRaster;
    TrailMask() = default;
    explicit TrailMask(const BinaryRaster& r) : BinaryRaster(r) {}
};

/// One-pixel-wide centreline; never contains a 2x2 foreground block.
struct Skeleton : BinaryRaster {
    using BinaryRaster::BinaryRaster;
    Skeleton() = default;
    explicit Skeleton(const BinaryRaster& r) : BinaryRaster(r) {}
};

inline constexpr double kDefaultColorThreshold = 30.0;
inline constexpr int kMinComponentPixels = 50;

struct SegmentOptions {
    double threshold = kDefaultColorThreshold;
    int min_component = kMinComponentPixels;
    bool close_gaps = true;
};

/// Raw threshold step only: pixel is set iff its RGB distance to `color`
/// is <= threshold.
TrailMask threshold_by_color(const MapImage& image, Rgb color, double threshold);

/// Threshold, drop 8-connected components smaller than `min_component`
/// pixels, then one 3x3 morphological closing.
TrailMask segment_by_color(const MapImage& image, Rgb color, const SegmentOptions& options = {});

TrailMask remove_small_components(const TrailMask& mask, int min_pixels);
BinaryRaster dilate3x3(const BinaryRaster& in);
/// Pixels outside the raster count as foreground, so erosion never eats the border.
BinaryRaster erode3x3(const BinaryRaster& in);
BinaryRaster close3x3(const BinaryRaster& in);

/// 8-connected component labels (0 = background, 1..n); returns n.
int label_components(const BinaryRaster& raster, std::vector<int>& labels);
int count_components(const BinaryRaster& raster);

Skeleton skeletonize(const BinaryRaster& mask);

// PNG I/O. Masks are 8-bit grayscale, 255 = trail; on load any pixel with
// luminance > 127 is foreground. RGB and RGBA inputs are accepted.
MapImage load_image(const std::filesystem::path& path);
void save_image(const MapImage& image, const std::filesystem::path& path);
TrailMask load_mask(const std::filesystem::path& path);
void save_mask(const BinaryRaster& mask, const std::filesystem::path& path);

}  // namespace trailroute
