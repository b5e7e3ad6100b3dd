#pragma once

#include <array>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "trailroute/geometry.hpp"

namespace trailroute {

/// A manually placed correspondence between an image position and a
/// geographic coordinate. Pixel order is (row, col), geo order is (lat, lon).
struct GroundControlPoint {
    ImagePoint pixel;
    GeoPoint geo;
};

/// Affine map image -> geographic: geo = A * (row, col) + t.
class AffineTransform {
public:
    using Matrix = std::array<std::array<double, 2>, 2>;
    using Vector = std::array<double, 2>;

    AffineTransform() = default;
    AffineTransform(const Matrix& a, const Vector& t) : a_(a), t_(t) {}

    static AffineTransform identity() { return {}; }

    const Matrix& linear() const noexcept { return a_; }
    const Vector& translation() const noexcept { return t_; }
    double determinant() const noexcept { return a_[0][0] * a_[1][1] - a_[0][1] * a_[1][0]; }

    /// Raw 2-vector form, used both for image->geo and (after invert) geo->image.
    Vector apply(const Vector& x) const noexcept {
        return {a_[0][0] * x[0] + a_[0][1] * x[1] + t_[0],
                a_[1][0] * x[0] + a_[1][1] * x[1] + t_[1]};
    }

    GeoPoint to_geo(ImagePoint p) const noexcept {
        const auto y = apply({p.row, p.col});
        return {y[0], y[1]};
    }

    /// Only meaningful on a transform produced by invert().
    ImagePoint to_image(GeoPoint g) const noexcept {
        const auto x = apply({g.lat, g.lon});
        return {x[0], x[1]};
    }

    /// Throws SingularTransform when |det A| < 1e-12.
    AffineTransform inverse() const;

private:
    Matrix a_{{{1.0, 0.0}, {0.0, 1.0}}};
    Vector t_{0.0, 0.0};
};

/// Least-squares affine fit over all GCPs. Requires at least three points
/// whose pixel positions are not collinear; otherwise DegenerateGcps.
AffineTransform fit_affine(std::span<const GroundControlPoint> gcps);

/// Sum of squared geo residuals of `t` over `gcps`.
double fit_residual(const AffineTransform& t, std::span<const GroundControlPoint> gcps);

inline AffineTransform invert(const AffineTransform& t) { return t.inverse(); }

/// GCP file: JSON array of {"pixel": [row, col], "geo": [lat, lon]}.
std::vector<GroundControlPoint> load_gcps(const std::filesystem::path& path);
std::vector<GroundControlPoint> parse_gcps(const std::string& json_text);
void save_gcps(const std::filesystem::path& path, std::span<const GroundControlPoint> gcps);

}  // namespace trailroute
