#include "trailroute/raster.hpp"

#include <algorithm>
#include <numeric>

namespace trailroute {

MapImage::MapImage(int height, int width, Rgb fill) : height_(height), width_(width) {
    data_.resize(static_cast<std::size_t>(height) * width * 3);
    for (std::size_t i = 0; i < data_.size(); i += 3) {
        data_[i] = fill[0];
        data_[i + 1] = fill[1];
        data_[i + 2] = fill[2];
    }
}

std::size_t BinaryRaster::count() const noexcept {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

std::vector<Pixel> BinaryRaster::foreground() const {
    std::vector<Pixel> out;
    for (int r = 0; r < height_; ++r) {
        for (int c = 0; c < width_; ++c) {
            if (at(r, c)) out.push_back({r, c});
        }
    }
    return out;
}

TrailMask threshold_by_color(const MapImage& image, Rgb color, double threshold) {
    TrailMask mask(image.height(), image.width());
    const double t2 = threshold * threshold;
    for (int r = 0; r < image.height(); ++r) {
        for (int c = 0; c < image.width(); ++c) {
            const Rgb px = image.at(r, c);
            double d2 = 0.0;
            for (int k = 0; k < 3; ++k) {
                const double d = static_cast<double>(px[k]) - static_cast<double>(color[k]);
                d2 += d * d;
            }
            mask.set(r, c, d2 <= t2);
        }
    }
    return mask;
}

int label_components(const BinaryRaster& raster, std::vector<int>& labels) {
    const int h = raster.height();
    const int w = raster.width();
    labels.assign(static_cast<std::size_t>(h) * w, 0);
    int next = 0;
    std::vector<Pixel> stack;
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            if (!raster.at(r, c) || labels[static_cast<std::size_t>(r) * w + c] != 0) continue;
            ++next;
            labels[static_cast<std::size_t>(r) * w + c] = next;
            stack.push_back({r, c});
            while (!stack.empty()) {
                const Pixel p = stack.back();
                stack.pop_back();
                for (int dr = -1; dr <= 1; ++dr) {
                    for (int dc = -1; dc <= 1; ++dc) {
                        const int rr = p.row + dr, cc = p.col + dc;
                        if (!raster.get(rr, cc)) continue;
                        auto& l = labels[static_cast<std::size_t>(rr) * w + cc];
                        if (l == 0) {
                            l = next;
                            stack.push_back({rr, cc});
                        }
                    }
                }
            }
        }
    }
    return next;
}

int count_components(const BinaryRaster& raster) {
    std::vector<int> labels;
    return label_components(raster, labels);
}

TrailMask remove_small_components(const TrailMask& mask, int min_pixels) {
    std::vector<int> labels;
    const int n = label_components(mask, labels);
    std::vector<int> sizes(static_cast<std::size_t>(n) + 1, 0);
    for (int l : labels) ++sizes[static_cast<std::size_t>(l)];
    TrailMask out(mask.height(), mask.width());
    for (int r = 0; r < mask.height(); ++r) {
        for (int c = 0; c < mask.width(); ++c) {
            const int l = labels[static_cast<std::size_t>(r) * mask.width() + c];
            if (l != 0 && sizes[static_cast<std::size_t>(l)] >= min_pixels) out.set(r, c, true);
        }
    }
    return out;
}

BinaryRaster dilate3x3(const BinaryRaster& in) {
    BinaryRaster out(in.height(), in.width());
    for (int r = 0; r < in.height(); ++r) {
        for (int c = 0; c < in.width(); ++c) {
            bool any = false;
            for (int dr = -1; dr <= 1 && !any; ++dr) {
                for (int dc = -1; dc <= 1 && !any; ++dc) any = in.get(r + dr, c + dc);
            }
            out.set(r, c, any);
        }
    }
    return out;
}

BinaryRaster erode3x3(const BinaryRaster& in) {
    BinaryRaster out(in.height(), in.width());
    for (int r = 0; r < in.height(); ++r) {
        for (int c = 0; c < in.width(); ++c) {
            bool all = true;
            for (int dr = -1; dr <= 1 && all; ++dr) {
                for (int dc = -1; dc <= 1 && all; ++dc) {
                    const int rr = r + dr, cc = c + dc;
                    if (in.contains(rr, cc)) all = in.at(rr, cc);
                }
            }
            out.set(r, c, all);
        }
    }
    return out;
}

BinaryRaster close3x3(const BinaryRaster& in) { return erode3x3(dilate3x3(in)); }

TrailMask segment_by_color(const MapImage& image, Rgb color, const SegmentOptions& options) {
    TrailMask mask = threshold_by_color(image, color, options.threshold);
    if (options.min_component > 1) mask = remove_small_components(mask, options.min_component);
    if (options.close_gaps) mask = TrailMask(close3x3(mask));
    return mask;
}

}  // namespace trailroute
