#include "trailroute/refine.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <future>
#include <limits>
#include <ostream>
#include <random>

#include "trailroute/error.hpp"
#include "trailroute/projection.hpp"

namespace trailroute {

NearestIndex::NearestIndex(std::vector<MetricPoint> points) : points_(std::move(points)) {
    if (points_.empty()) return;
    double max_e = points_[0].easting, max_n = points_[0].northing;
    min_e_ = max_e;
    min_n_ = max_n;
    for (const MetricPoint& p : points_) {
        min_e_ = std::min(min_e_, p.easting);
        min_n_ = std::min(min_n_, p.northing);
        max_e = std::max(max_e, p.easting);
        max_n = std::max(max_n, p.northing);
    }
    const double span_e = max_e - min_e_;
    const double span_n = max_n - min_n_;
    // Roughly two points per occupied cell for area-like sets.
    const double area = std::max(span_e * span_n, std::max(span_e, span_n) * 1e-3);
    cell_ = std::sqrt(2.0 * area / static_cast<double>(points_.size()));
    if (!(cell_ > 0.0)) cell_ = 1.0;
    cell_ = std::max(cell_, std::max(span_e, span_n) / 2048.0);
    cols_ = static_cast<int>(span_e / cell_) + 1;
    rows_ = static_cast<int>(span_n / cell_) + 1;

    const std::size_t cells = static_cast<std::size_t>(cols_) * rows_;
    std::vector<std::uint32_t> cell_of(points_.size());
    cell_start_.assign(cells + 1, 0);
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const int c = std::min(cols_ - 1, static_cast<int>((points_[i].easting - min_e_) / cell_));
        const int r = std::min(rows_ - 1, static_cast<int>((points_[i].northing - min_n_) / cell_));
        cell_of[i] = static_cast<std::uint32_t>(r * cols_ + c);
        ++cell_start_[cell_of[i] + 1];
    }
    for (std::size_t c = 0; c < cells; ++c) cell_start_[c + 1] += cell_start_[c];
    order_.resize(points_.size());
    std::vector<std::uint32_t> fill(cell_start_.begin(), cell_start_.end() - 1);
    for (std::size_t i = 0; i < points_.size(); ++i) order_[fill[cell_of[i]]++] = static_cast<std::uint32_t>(i);
}

std::pair<std::size_t, double> NearestIndex::nearest(MetricPoint q) const {
    if (points_.empty()) throw EmptySet("nearest-neighbour query on an empty point set");
    const int qc = std::clamp(static_cast<int>(std::floor((q.easting - min_e_) / cell_)), 0, cols_ - 1);
    const int qr = std::clamp(static_cast<int>(std::floor((q.northing - min_n_) / cell_)), 0, rows_ - 1);

    double best_d2 = std::numeric_limits<double>::infinity();
    std::size_t best = 0;
    auto scan = [&](int r, int c) {
        const std::size_t cell = static_cast<std::size_t>(r) * cols_ + c;
        for (std::uint32_t k = cell_start_[cell]; k < cell_start_[cell + 1]; ++k) {
            const std::uint32_t i = order_[k];
            const double d2 = squared_distance(q, points_[i]);
            if (d2 < best_d2 || (d2 == best_d2 && i < best)) {
                best_d2 = d2;
                best = i;
            }
        }
    };

    const int max_ring = std::max({qc, cols_ - 1 - qc, qr, rows_ - 1 - qr});
    for (int ring = 0; ring <= max_ring; ++ring) {
        const int r0 = qr - ring, r1 = qr + ring, c0 = qc - ring, c1 = qc + ring;
        for (int c = std::max(c0, 0); c <= std::min(c1, cols_ - 1); ++c) {
            if (r0 >= 0) scan(r0, c);
            if (r1 < rows_ && r1 != r0) scan(r1, c);
        }
        for (int r = std::max(r0 + 1, 0); r <= std::min(r1 - 1, rows_ - 1); ++r) {
            if (c0 >= 0) scan(r, c0);
            if (c1 < cols_ && c1 != c0) scan(r, c1);
        }
        // Anything not yet scanned lies outside this rectangle.
        const double left = min_e_ + c0 * cell_, right = min_e_ + (c1 + 1) * cell_;
        const double bottom = min_n_ + r0 * cell_, top = min_n_ + (r1 + 1) * cell_;
        const double margin =
            std::min({q.easting - left, right - q.easting, q.northing - bottom, top - q.northing});
        // Strict: an equidistant point outside could still win on index.
        if (margin > 0.0 && best_d2 < margin * margin) break;
    }
    return {best, std::sqrt(best_d2)};
}

namespace {

double mean_nearest(const std::vector<MetricPoint>& from, const NearestIndex& to) {
    double sum = 0.0;
    for (const MetricPoint& p : from) sum += to.nearest(p).second;
    return sum / static_cast<double>(from.size());
}

}  // namespace

double chamfer(const std::vector<MetricPoint>& route, const NearestIndex& trail) {
    if (route.empty() || trail.empty()) throw EmptySet("Chamfer distance needs two nonempty point sets");
    const NearestIndex route_index(route);
    return 0.5 * mean_nearest(route, trail) + 0.5 * mean_nearest(trail.points(), route_index);
}

double chamfer(const std::vector<MetricPoint>& route, const std::vector<MetricPoint>& trail) {
    if (route.empty() || trail.empty()) throw EmptySet("Chamfer distance needs two nonempty point sets");
    return chamfer(route, NearestIndex(trail));
}

TrailPointSet::TrailPointSet(const BinaryRaster& mask, const AffineTransform& t, std::size_t max_points,
                             std::uint64_t seed) {
    std::vector<Pixel> all = mask.foreground();
    if (all.size() > max_points) {
        std::mt19937_64 rng(seed);
        std::sample(all.begin(), all.end(), std::back_inserter(pixels_), max_points, rng);
    } else {
        pixels_ = std::move(all);
    }
    geo_.reserve(pixels_.size());
    metric_.reserve(pixels_.size());
    for (Pixel p : pixels_) {
        geo_.push_back(t.to_geo(to_image_point(p)));
        metric_.push_back(to_metric(geo_.back()));
    }
    index_ = NearestIndex(metric_);
}

TrailPointSet::TrailPointSet(std::vector<MetricPoint> metric) : metric_(std::move(metric)) {
    geo_.reserve(metric_.size());
    for (const MetricPoint& m : metric_) geo_.push_back(from_metric(m));
    index_ = NearestIndex(metric_);
}

std::vector<MetricPoint> densify(const std::vector<MetricPoint>& line, double spacing) {
    if (spacing <= 0.0 || line.size() < 2) return line;
    std::vector<MetricPoint> out{line.front()};
    for (std::size_t i = 0; i + 1 < line.size(); ++i) {
        const MetricPoint a = line[i], b = line[i + 1];
        const int pieces = static_cast<int>(std::ceil(distance(a, b) / spacing));
        for (int k = 1; k < pieces; ++k) {
            const double f = static_cast<double>(k) / pieces;
            out.push_back({a.easting + f * (b.easting - a.easting), a.northing + f * (b.northing - a.northing)});
        }
        out.push_back(b);
    }
    return out;
}

std::vector<MetricPoint> route_points(const RoutePolyline& route, double spacing) {
    return densify(route.metric_points(), spacing);
}

double route_chamfer(const RoutePolyline& route, const TrailPointSet& trail, double spacing) {
    return chamfer(route_points(route, spacing), trail.index());
}

HighError detect_high_error(const RoutePolyline& route, const TrailPointSet& trail, double eps_route,
                            double eps_trail, double spacing) {
    HighError out;
    if (route.empty() || trail.empty()) return out;

    for (const MetricPoint& r : route_points(route, spacing)) {
        const auto [j, d] = trail.index().nearest(r);
        if (d > eps_route && (!out.route || d > out.route->distance)) out.route = RouteErrorPoint{r, j, d};
    }

    const std::vector<MetricPoint> line = route.metric_points();
    for (std::size_t j = 0; j < trail.size(); ++j) {
        const double d = point_polyline_distance(trail.metric()[j], line);
        if (d > eps_trail && (!out.trail || d > out.trail->distance)) out.trail = TrailErrorPoint{j, d};
    }
    return out;
}

std::vector<GeoPoint> insert_waypoint(std::vector<GeoPoint> waypoints, GeoPoint point) {
    if (waypoints.size() < 2) {
        waypoints.push_back(point);
        return waypoints;
    }
    const MetricPoint p = to_metric(point);
    std::vector<MetricPoint> m;
    m.reserve(waypoints.size());
    for (const GeoPoint& w : waypoints) m.push_back(to_metric(w));
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < m.size(); ++i) {
        const double d = point_segment_distance(p, m[i], m[i + 1]);
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    waypoints.insert(waypoints.begin() + static_cast<std::ptrdiff_t>(best) + 1, point);
    return waypoints;
}

namespace {

struct Candidate {
    bool present = false;
    bool failed = false;
    std::vector<GeoPoint> waypoints;
    RoutePolyline route;
    double chamfer = std::numeric_limits<double>::infinity();
};

std::string describe(const Candidate& c) {
    if (!c.present) return "none";
    if (c.failed) return "failed";
    return std::to_string(c.chamfer);
}

}  // namespace

RefinementState refine_from(std::vector<GeoPoint> waypoints, RoutePolyline route, const TrailPointSet& trail,
                            const Router& router, const RefineOptions& options, std::ostream* log) {
    if (trail.empty()) throw EmptySet("refinement needs a nonempty trail");
    RefinementState state;
    state.waypoints = std::move(waypoints);
    state.route = std::move(route);
    state.best_chamfer = route_chamfer(state.route, trail, options.densify_spacing);
    state.history.push_back(state.best_chamfer);

    for (int it = 1; it <= options.max_iters; ++it) {
        const HighError err =
            detect_high_error(state.route, trail, options.eps_route, options.eps_trail, options.densify_spacing);
        Candidate a, b;
        if (err.route) {
            a.present = true;
            a.waypoints = insert_waypoint(state.waypoints, trail.geo()[err.route->nearest_trail]);
        }
        if (err.trail) {
            b.present = true;
            b.waypoints = insert_waypoint(state.waypoints, trail.geo()[err.trail->trail_index]);
        }
        if (!a.present && !b.present) {
            if (log) *log << "iteration " << it << ": no high-error region, stop\n";
            break;
        }

        auto evaluate = [&](Candidate& c) {
            try {
                c.route = router.route({c.waypoints, Profile::Foot});
                c.chamfer = route_chamfer(c.route, trail, options.densify_spacing);
            } catch (const Error&) {
                c.failed = true;
            }
        };
        std::future<void> pending;
        if (a.present && b.present) {
            pending = std::async(std::launch::async, [&] { evaluate(b); });
            evaluate(a);
            pending.get();
        } else {
            evaluate(a.present ? a : b);
        }
        state.requests += static_cast<int>(a.present) + static_cast<int>(b.present);

        const bool a_ok = a.present && !a.failed;
        const bool b_ok = b.present && !b.failed;
        Candidate* winner = nullptr;
        if (a_ok && (!b_ok || a.chamfer <= b.chamfer)) winner = &a;
        else if (b_ok) winner = &b;

        const bool adopt = winner && winner->chamfer < state.best_chamfer;
        if (log) {
            *log << "iteration " << it << ": A=" << describe(a) << " B=" << describe(b)
                 << " adopted=" << (adopt ? (winner == &a ? "A" : "B") : "none") << "\n";
        }
        if (!adopt) break;
        state.route = std::move(winner->route);
        state.waypoints = std::move(winner->waypoints);
        state.best_chamfer = winner->chamfer;
        state.iteration = it;
        state.history.push_back(state.best_chamfer);
    }
    return state;
}

RefinementState refine_route(std::vector<GeoPoint> waypoints, const TrailPointSet& trail, const Router& router,
                             const RefineOptions& options, std::ostream* log) {
    RoutePolyline initial = router.route({waypoints, Profile::Foot});
    RefinementState state = refine_from(std::move(waypoints), std::move(initial), trail, router, options, log);
    state.requests += 1;
    return state;
}

std::string StrategyChoice::name() const {
    std::string base = strategy == Strategy::EndToEnd ? "E2E" : strategy == Strategy::GraphBased ? "GP" : "Hybrid";
    return refine ? base + "+IR" : base;
}

std::vector<StrategyChoice> ablation_strategies() {
    return {{Strategy::EndToEnd, true}, {Strategy::GraphBased, true}, {Strategy::Hybrid, true}, {Strategy::Hybrid, false}};
}

StrategyChoice parse_strategy(const std::string& text) {
    std::string base = text;
    bool refine = false;
    if (base.size() > 3 && base.compare(base.size() - 3, 3, "+IR") == 0) {
        refine = true;
        base.resize(base.size() - 3);
    }
    if (base == "E2E") return {Strategy::EndToEnd, refine};
    if (base == "GP") return {Strategy::GraphBased, refine};
    if (base == "Hybrid") return {Strategy::Hybrid, refine};
    throw InvalidConfig("unknown strategy '" + text + "' (expected E2E, GP or Hybrid, optionally +IR)");
}

StrategyResult run_strategy(const StrategyChoice& choice, const StrategyInputs& inputs, const TrailPointSet& trail,
                            const Router& router, const RefineOptions& options, std::ostream* log) {
    if (choice.strategy != Strategy::EndToEnd && inputs.graph_waypoints.size() < 2) {
        throw InvalidConfig(choice.name() + " needs at least two graph waypoints");
    }
    const std::vector<GeoPoint> e2e{inputs.start, inputs.goal};

    StrategyResult out;
    std::vector<GeoPoint> seed_waypoints;
    RoutePolyline seed_route;
    int requests = 0;
    if (choice.strategy == Strategy::Hybrid) {
        // Both seeds are routed; a failing seed loses unless both fail.
        std::optional<RoutePolyline> r_e2e, r_gp;
        std::exception_ptr first_error;
        try {
            r_e2e = router.route({e2e, Profile::Foot});
        } catch (const Error&) {
            first_error = std::current_exception();
        }
        try {
            r_gp = router.route({inputs.graph_waypoints, Profile::Foot});
        } catch (const Error&) {
            if (!first_error) first_error = std::current_exception();
        }
        requests = 2;
        if (!r_e2e && !r_gp) std::rethrow_exception(first_error);
        const double c_e2e = r_e2e ? route_chamfer(*r_e2e, trail, options.densify_spacing)
                                   : std::numeric_limits<double>::infinity();
        const double c_gp = r_gp ? route_chamfer(*r_gp, trail, options.densify_spacing)
                                 : std::numeric_limits<double>::infinity();
        if (c_gp <= c_e2e) {
            out.seed = Strategy::GraphBased;
            seed_waypoints = inputs.graph_waypoints;
            seed_route = std::move(*r_gp);
        } else {
            out.seed = Strategy::EndToEnd;
            seed_waypoints = e2e;
            seed_route = std::move(*r_e2e);
        }
        if (log) *log << "hybrid: E2E=" << c_e2e << " GP=" << c_gp << " seed=" << (c_gp <= c_e2e ? "GP" : "E2E") << "\n";
    } else {
        out.seed = choice.strategy;
        seed_waypoints = choice.strategy == Strategy::EndToEnd ? e2e : inputs.graph_waypoints;
        seed_route = router.route({seed_waypoints, Profile::Foot});
        requests = 1;
    }

    RefineOptions effective = options;
    if (!choice.refine) effective.max_iters = 0;
    out.state = refine_from(std::move(seed_waypoints), std::move(seed_route), trail, router, effective, log);
    out.state.requests += requests;
    out.seed_chamfer = out.state.history.front();
    return out;
}

}  // namespace trailroute
