#include "trailroute/projection.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "trailroute/error.hpp"

namespace trailroute {

namespace {

constexpr double kSemiMajor = 6378137.0;
constexpr double kFlattening = 1.0 / 298.257223563;
constexpr double kDeg = std::numbers::pi / 180.0;

struct KruegerSeries {
    double e;       // first eccentricity
    double radius;  // rectifying radius A
    std::array<double, 6> alpha;
    std::array<double, 6> beta;
};

KruegerSeries make_series() {
    const double f = kFlattening;
    const double n = f / (2.0 - f);
    const double n2 = n * n, n3 = n2 * n, n4 = n3 * n, n5 = n4 * n, n6 = n5 * n;
    KruegerSeries s{};
    s.e = std::sqrt(f * (2.0 - f));
    s.radius = kSemiMajor / (1.0 + n) * (1.0 + n2 / 4.0 + n4 / 64.0 + n6 / 256.0);
    s.alpha = {
        n / 2.0 - 2.0 * n2 / 3.0 + 5.0 * n3 / 16.0 + 41.0 * n4 / 180.0 - 127.0 * n5 / 288.0 +
            7891.0 * n6 / 37800.0,
        13.0 * n2 / 48.0 - 3.0 * n3 / 5.0 + 557.0 * n4 / 1440.0 + 281.0 * n5 / 630.0 -
            1983433.0 * n6 / 1935360.0,
        61.0 * n3 / 240.0 - 103.0 * n4 / 140.0 + 15061.0 * n5 / 26880.0 + 167603.0 * n6 / 181440.0,
        49561.0 * n4 / 161280.0 - 179.0 * n5 / 168.0 + 6601661.0 * n6 / 7257600.0,
        34729.0 * n5 / 80640.0 - 3418889.0 * n6 / 1995840.0,
        212378941.0 * n6 / 319334400.0,
    };
    s.beta = {
        n / 2.0 - 2.0 * n2 / 3.0 + 37.0 * n3 / 96.0 - n4 / 360.0 - 81.0 * n5 / 512.0 +
            96199.0 * n6 / 604800.0,
        n2 / 48.0 + n3 / 15.0 - 437.0 * n4 / 1440.0 + 46.0 * n5 / 105.0 - 1118711.0 * n6 / 3870720.0,
        17.0 * n3 / 480.0 - 37.0 * n4 / 840.0 - 209.0 * n5 / 4480.0 + 5569.0 * n6 / 90720.0,
        4397.0 * n4 / 161280.0 - 11.0 * n5 / 504.0 - 830251.0 * n6 / 7257600.0,
        4583.0 * n5 / 161280.0 - 108847.0 * n6 / 3991680.0,
        20648693.0 * n6 / 638668800.0,
    };
    return s;
}

const KruegerSeries& series() {
    static const KruegerSeries s = make_series();
    return s;
}

}  // namespace

MetricPoint to_metric(GeoPoint geo) {
    if (!(geo.lat >= kUtmMinLatitude && geo.lat <= kUtmMaxLatitude)) {
        throw OutOfBand("latitude " + std::to_string(geo.lat) + " outside the UTM band [-80, 84]");
    }
    const auto& s = series();
    const double phi = geo.lat * kDeg;
    const double lambda = (geo.lon - kUtm54CentralMeridian) * kDeg;

    const double sin_phi = std::sin(phi);
    // Conformal latitude expressed through its tangent.
    const double t = std::sinh(std::atanh(sin_phi) - s.e * std::atanh(s.e * sin_phi));
    const double xi_p = std::atan2(t, std::cos(lambda));
    const double eta_p = std::atanh(std::sin(lambda) / std::sqrt(1.0 + t * t));

    double xi = xi_p;
    double eta = eta_p;
    for (int j = 1; j <= 6; ++j) {
        const double a = s.alpha[j - 1];
        xi += a * std::sin(2.0 * j * xi_p) * std::cosh(2.0 * j * eta_p);
        eta += a * std::cos(2.0 * j * xi_p) * std::sinh(2.0 * j * eta_p);
    }
    return {kUtmFalseEasting + kUtmScale * s.radius * eta, kUtmScale * s.radius * xi};
}

GeoPoint from_metric(MetricPoint m) {
    const auto& s = series();
    const double xi = m.northing / (kUtmScale * s.radius);
    const double eta = (m.easting - kUtmFalseEasting) / (kUtmScale * s.radius);

    double xi_p = xi;
    double eta_p = eta;
    for (int j = 1; j <= 6; ++j) {
        const double b = s.beta[j - 1];
        xi_p -= b * std::sin(2.0 * j * xi) * std::cosh(2.0 * j * eta);
        eta_p -= b * std::cos(2.0 * j * xi) * std::sinh(2.0 * j * eta);
    }
    const double chi = std::asin(std::sin(xi_p) / std::cosh(eta_p));
    const double lambda = std::atan2(std::sinh(eta_p), std::cos(xi_p));

    // Newton iteration from conformal to geodetic latitude tangent.
    const double e2 = s.e * s.e;
    const double tau_p = std::tan(chi);
    double tau = tau_p;
    for (int it = 0; it < 8; ++it) {
        const double sigma = std::sinh(s.e * std::atanh(s.e * tau / std::sqrt(1.0 + tau * tau)));
        const double tau_i = tau * std::sqrt(1.0 + sigma * sigma) - sigma * std::sqrt(1.0 + tau * tau);
        const double delta = (tau_p - tau_i) / std::sqrt(1.0 + tau_i * tau_i) * (1.0 + (1.0 - e2) * tau * tau) /
                             ((1.0 - e2) * std::sqrt(1.0 + tau * tau));
        tau += delta;
        if (std::abs(delta) < 1e-14) break;
    }
    return {std::atan(tau) / kDeg, kUtm54CentralMeridian + lambda / kDeg};
}

double geodesic_distance(GeoPoint p1, GeoPoint p2) {
    const double a = kSemiMajor;
    const double f = kFlattening;
    const double b = a * (1.0 - f);
    const double l = (p2.lon - p1.lon) * kDeg;
    const double u1 = std::atan((1.0 - f) * std::tan(p1.lat * kDeg));
    const double u2 = std::atan((1.0 - f) * std::tan(p2.lat * kDeg));
    const double sin_u1 = std::sin(u1), cos_u1 = std::cos(u1);
    const double sin_u2 = std::sin(u2), cos_u2 = std::cos(u2);

    double lambda = l;
    double sin_sigma = 0.0, cos_sigma = 1.0, sigma = 0.0, cos2_alpha = 1.0, cos_2sm = 0.0;
    for (int it = 0; it < 200; ++it) {
        const double sin_l = std::sin(lambda), cos_l = std::cos(lambda);
        sin_sigma = std::hypot(cos_u2 * sin_l, cos_u1 * sin_u2 - sin_u1 * cos_u2 * cos_l);
        if (sin_sigma == 0.0) return 0.0;
        cos_sigma = sin_u1 * sin_u2 + cos_u1 * cos_u2 * cos_l;
        sigma = std::atan2(sin_sigma, cos_sigma);
        const double sin_alpha = cos_u1 * cos_u2 * sin_l / sin_sigma;
        cos2_alpha = 1.0 - sin_alpha * sin_alpha;
        cos_2sm = cos2_alpha != 0.0 ? cos_sigma - 2.0 * sin_u1 * sin_u2 / cos2_alpha : 0.0;
        const double c = f / 16.0 * cos2_alpha * (4.0 + f * (4.0 - 3.0 * cos2_alpha));
        const double prev = lambda;
        lambda = l + (1.0 - c) * f * sin_alpha *
                         (sigma + c * sin_sigma * (cos_2sm + c * cos_sigma * (-1.0 + 2.0 * cos_2sm * cos_2sm)));
        if (std::abs(lambda - prev) < 1e-13) break;
    }
    const double u_sq = cos2_alpha * (a * a - b * b) / (b * b);
    const double big_a = 1.0 + u_sq / 16384.0 * (4096.0 + u_sq * (-768.0 + u_sq * (320.0 - 175.0 * u_sq)));
    const double big_b = u_sq / 1024.0 * (256.0 + u_sq * (-128.0 + u_sq * (74.0 - 47.0 * u_sq)));
    const double delta_sigma =
        big_b * sin_sigma *
        (cos_2sm + big_b / 4.0 *
                       (cos_sigma * (-1.0 + 2.0 * cos_2sm * cos_2sm) -
                        big_b / 6.0 * cos_2sm * (-3.0 + 4.0 * sin_sigma * sin_sigma) * (-3.0 + 4.0 * cos_2sm * cos_2sm)));
    return b * big_a * (sigma - delta_sigma);
}

}  // namespace trailroute
