#include "trailroute/georef.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "trailroute/error.hpp"

namespace trailroute {

namespace {

using Mat3 = std::array<std::array<double, 3>, 3>;
using Vec3 = std::array<double, 3>;

// Gaussian elimination with partial pivoting.
Vec3 solve3(Mat3 m, Vec3 b) {
    for (int col = 0; col < 3; ++col) {
        int pivot = col;
        for (int r = col + 1; r < 3; ++r) {
            if (std::abs(m[r][col]) > std::abs(m[pivot][col])) pivot = r;
        }
        if (m[pivot][col] == 0.0) throw DegenerateGcps("singular normal equations");
        std::swap(m[col], m[pivot]);
        std::swap(b[col], b[pivot]);
        for (int r = col + 1; r < 3; ++r) {
            const double f = m[r][col] / m[col][col];
            for (int c = col; c < 3; ++c) m[r][c] -= f * m[col][c];
            b[r] -= f * b[col];
        }
    }
    Vec3 x{};
    for (int r = 2; r >= 0; --r) {
        double s = b[r];
        for (int c = r + 1; c < 3; ++c) s -= m[r][c] * x[c];
        x[r] = s / m[r][r];
    }
    return x;
}

}  // namespace

AffineTransform AffineTransform::inverse() const {
    const double det = determinant();
    if (std::abs(det) < 1e-12) {
        throw SingularTransform("affine transform is singular (|det A| < 1e-12)");
    }
    const Matrix inv{{{a_[1][1] / det, -a_[0][1] / det}, {-a_[1][0] / det, a_[0][0] / det}}};
    const Vector tinv{-(inv[0][0] * t_[0] + inv[0][1] * t_[1]),
                      -(inv[1][0] * t_[0] + inv[1][1] * t_[1])};
    return {inv, tinv};
}

AffineTransform fit_affine(std::span<const GroundControlPoint> gcps) {
    const std::size_t n = gcps.size();
    if (n < 3) throw DegenerateGcps("need at least 3 GCPs, got " + std::to_string(n));

    // Centre pixel coordinates so the normal equations stay well conditioned
    // for pixel positions in the thousands.
    double mr = 0.0, mc = 0.0;
    for (const auto& g : gcps) {
        mr += g.pixel.row;
        mc += g.pixel.col;
    }
    mr /= static_cast<double>(n);
    mc /= static_cast<double>(n);

    Mat3 normal{};
    Vec3 rhs_lat{}, rhs_lon{};
    for (const auto& g : gcps) {
        const Vec3 row{g.pixel.row - mr, g.pixel.col - mc, 1.0};
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) normal[i][j] += row[i] * row[j];
            rhs_lat[i] += row[i] * g.geo.lat;
            rhs_lon[i] += row[i] * g.geo.lon;
        }
    }

    // Collinearity: singular values of the centred N x 2 pixel matrix are the
    // square roots of the eigenvalues of its 2 x 2 Gram matrix.
    const double sxx = normal[0][0], sxy = normal[0][1], syy = normal[1][1];
    const double half_trace = 0.5 * (sxx + syy);
    const double disc = std::sqrt(std::max(0.0, 0.25 * (sxx - syy) * (sxx - syy) + sxy * sxy));
    const double s_max = std::sqrt(std::max(0.0, half_trace + disc));
    const double s_min = std::sqrt(std::max(0.0, half_trace - disc));
    if (s_max == 0.0 || s_min < 1e-6 * s_max) {
        throw DegenerateGcps("GCP pixel positions are collinear");
    }

    const Vec3 lat = solve3(normal, rhs_lat);
    const Vec3 lon = solve3(normal, rhs_lon);
    const AffineTransform::Matrix a{{{lat[0], lat[1]}, {lon[0], lon[1]}}};
    const AffineTransform::Vector t{lat[2] - lat[0] * mr - lat[1] * mc,
                                    lon[2] - lon[0] * mr - lon[1] * mc};
    return {a, t};
}

double fit_residual(const AffineTransform& t, std::span<const GroundControlPoint> gcps) {
    double sum = 0.0;
    for (const auto& g : gcps) {
        const GeoPoint p = t.to_geo(g.pixel);
        sum += (p.lat - g.geo.lat) * (p.lat - g.geo.lat) + (p.lon - g.geo.lon) * (p.lon - g.geo.lon);
    }
    return sum;
}

std::vector<GroundControlPoint> parse_gcps(const std::string& json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("GCP file is not valid JSON: ") + e.what());
    }
    if (!doc.is_array()) throw ParseError("GCP file must be a JSON array");

    auto pair = [](const nlohmann::json& v, const char* key, std::size_t index) {
        if (!v.contains(key) || !v[key].is_array() || v[key].size() != 2 || !v[key][0].is_number() ||
            !v[key][1].is_number()) {
            throw ParseError("GCP #" + std::to_string(index) + ": \"" + key + "\" must be [number, number]");
        }
        return std::array<double, 2>{v[key][0].get<double>(), v[key][1].get<double>()};
    };

    std::vector<GroundControlPoint> out;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const auto px = pair(doc[i], "pixel", i);
        const auto geo = pair(doc[i], "geo", i);
        if (geo[0] < -90.0 || geo[0] > 90.0 || geo[1] < -180.0 || geo[1] > 180.0) {
            throw ParseError("GCP #" + std::to_string(i) + ": geo coordinate out of range");
        }
        out.push_back({{px[0], px[1]}, {geo[0], geo[1]}});
    }
    return out;
}

std::vector<GroundControlPoint> load_gcps(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open GCP file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_gcps(ss.str());
}

void save_gcps(const std::filesystem::path& path, std::span<const GroundControlPoint> gcps) {
    nlohmann::json doc = nlohmann::json::array();
    for (const auto& g : gcps) {
        doc.push_back({{"pixel", {g.pixel.row, g.pixel.col}}, {"geo", {g.geo.lat, g.geo.lon}}});
    }
    std::ofstream out(path);
    if (!out) throw IoError("cannot write GCP file " + path.string());
    out << doc.dump(2) << '\n';
}

}  // namespace trailroute
