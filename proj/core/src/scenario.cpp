#include "illss/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "fft.hpp"
#include "illss/dynamics.hpp"
#include "illss/error.hpp"

namespace illss {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_markers(std::size_t n) {
    if (n < Curve::kMinMarkers)
        throw ConfigError("markers: need at least " + std::to_string(Curve::kMinMarkers) + " markers");
}

// Appends points on a circular arc from angle a0 to a1 (either direction),
// spaced at most ds apart, excluding the end point.
void append_arc(std::vector<Vec2>& out, Vec2 c, double r, double a0, double a1, double ds) {
    const auto n = static_cast<std::size_t>(std::ceil(std::abs(a1 - a0) * r / ds)) + 1;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = a0 + (a1 - a0) * static_cast<double>(i) / static_cast<double>(n);
        out.push_back({c.x + r * std::cos(a), c.y + r * std::sin(a)});
    }
}

void append_segment(std::vector<Vec2>& out, Vec2 p, Vec2 q, double ds) {
    const auto n = static_cast<std::size_t>(std::ceil(norm(q - p) / ds)) + 1;
    for (std::size_t i = 0; i < n; ++i) out.push_back(p + (static_cast<double>(i) / static_cast<double>(n)) * (q - p));
}

// Uniform arc-length resampling of a closed polyline to n points.
std::vector<Vec2> resample_polyline(const std::vector<Vec2>& poly, std::size_t n) {
    const std::size_t m = poly.size();
    std::vector<double> cum(m + 1, 0.0);
    for (std::size_t i = 0; i < m; ++i) cum[i + 1] = cum[i] + norm(poly[(i + 1) % m] - poly[i]);
    const double total = cum[m];
    std::vector<Vec2> out(n);
    std::size_t seg = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const double s = total * static_cast<double>(k) / static_cast<double>(n);
        while (seg + 1 < m && cum[seg + 1] <= s) ++seg;
        const double f = (s - cum[seg]) / (cum[seg + 1] - cum[seg]);
        out[k] = poly[seg] + f * (poly[(seg + 1) % m] - poly[seg]);
    }
    return out;
}

}  // namespace

Curve circle_curve(double radius, std::size_t markers, Vec2 center) {
    return ellipse_curve(radius, radius, markers, center);
}

Curve ellipse_curve(double a, double b, std::size_t markers, Vec2 center) {
    require_markers(markers);
    if (!(a > 0.0 && b > 0.0)) throw ConfigError("scenario: semi-axes must be positive");
    Curve c;
    c.points.resize(markers);
    for (std::size_t i = 0; i < markers; ++i) {
        const double t = kTwoPi * static_cast<double>(i) / static_cast<double>(markers);
        c.points[i] = {center.x + a * std::cos(t), center.y + b * std::sin(t)};
    }
    return c;
}

Curve star_curve(double radius, double amplitude, int mode, std::size_t markers) {
    require_markers(markers);
    if (!(radius > 0.0)) throw ConfigError("scenario.radius: must be positive");
    if (!(std::abs(amplitude) < 1.0)) throw ConfigError("scenario.amplitude: |eps| must be below 1");
    if (mode < 0) throw ConfigError("scenario.mode: must be non-negative");
    Curve c;
    c.points.resize(markers);
    for (std::size_t i = 0; i < markers; ++i) {
        const double t = kTwoPi * static_cast<double>(i) / static_cast<double>(markers);
        const double r = radius * (1.0 + amplitude * std::cos(mode * t));
        c.points[i] = {r * std::cos(t), r * std::sin(t)};
    }
    if (auto hit = find_self_intersection(c))
        throw ConfigError("scenario: star curve self-intersects at edges " + std::to_string(hit->edge_a) + " and " +
                          std::to_string(hit->edge_b));
    return c;
}

Curve dumbbell_curve(const DumbbellShape& s, std::size_t markers) {
    require_markers(markers);
    const double a = 0.5 * s.neck_width;
    const double R = s.radius;
    const double rf = s.fillet;
    if (!(R > 0.0)) throw ConfigError("scenario.radius: must be positive");
    if (!(a > 0.0 && a < R)) throw ConfigError("scenario.neck_width: must lie in (0, 2 radius)");
    if (!(s.neck_length > 0.0)) throw ConfigError("scenario.neck_length: must be positive");
    if (!(rf > 0.0)) throw ConfigError("scenario.fillet: must be positive");
    if (!(s.smoothing >= 0.0)) throw ConfigError("scenario.smoothing: must be non-negative");

    const double cx = 0.5 * s.neck_length + std::sqrt(R * R - a * a);
    const Vec2 C{cx, 0.0};
    const double fx = cx - std::sqrt((R + rf) * (R + rf) - (a + rf) * (a + rf));
    if (!(fx > 0.0)) throw ConfigError("scenario.fillet: fillets overlap, neck too short for the fillet radius");
    const Vec2 F{fx, a + rf};
    const Vec2 to_c = C - F;
    const double alpha = std::atan2(to_c.y, to_c.x);          // fillet angle at the disc contact
    const Vec2 contact = F + (rf / norm(to_c)) * to_c;
    const double theta = std::atan2(contact.y - C.y, contact.x - C.x);  // disc angle at the contact

    const double ds = std::min({1e-3, 0.05 * rf, 0.05 * a});
    std::vector<Vec2> upper;
    append_arc(upper, C, R, 0.0, theta, ds);
    append_arc(upper, F, rf, alpha, -0.5 * std::numbers::pi, ds);
    append_segment(upper, {fx, a}, {-fx, a}, ds);
    append_arc(upper, {-fx, a + rf}, rf, -0.5 * std::numbers::pi, -std::numbers::pi - alpha, ds);
    append_arc(upper, {-cx, 0.0}, R, std::numbers::pi - theta, std::numbers::pi, ds);

    std::vector<Vec2> poly = upper;
    poly.push_back({-cx - R, 0.0});
    for (std::size_t i = upper.size(); i-- > 1;) poly.push_back({upper[i].x, -upper[i].y});

    double perimeter = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) perimeter += norm(poly[(i + 1) % poly.size()] - poly[i]);
    std::size_t dense = 1024;
    while (static_cast<double>(dense) < 4.0 * perimeter / ds && dense < (1u << 16)) dense *= 2;
    auto pts = resample_polyline(poly, dense);

    if (s.smoothing > 0.0) {
        std::vector<double> xs(dense), ys(dense);
        for (std::size_t i = 0; i < dense; ++i) {
            xs[i] = pts[i].x;
            ys[i] = pts[i].y;
        }
        std::vector<detail::cplx> X(dense / 2 + 1), Y(dense / 2 + 1);
        detail::rfft(xs, X);
        detail::rfft(ys, Y);
        for (std::size_t k = 0; k < X.size(); ++k) {
            const double w = kTwoPi * static_cast<double>(k) / perimeter * s.smoothing;
            const double g = std::exp(-0.5 * w * w) / static_cast<double>(dense);
            X[k] *= g;
            Y[k] *= g;
        }
        detail::irfft(X, xs);
        detail::irfft(Y, ys);
        for (std::size_t i = 0; i < dense; ++i) pts[i] = {xs[i], ys[i]};
    }

    Curve fine{std::move(pts), Orientation::CounterClockwise};
    return redistribute(fine, markers);
}

double extent(const Curve& curve) {
    double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
    for (const auto& p : curve.points) {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
    return std::max(xmax - xmin, ymax - ymin);
}

double neck_width(const Curve& curve) {
    const Vec2 c = centroid(curve);
    const auto& p = curve.points;
    const std::size_t n = p.size();
    double above = INFINITY, below = -INFINITY;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = p[i], b = p[(i + 1) % n];
        if ((a.x - c.x) * (b.x - c.x) > 0.0 || a.x == b.x) continue;
        const double y = a.y + (c.x - a.x) / (b.x - a.x) * (b.y - a.y);
        if (y >= c.y) above = std::min(above, y);
        else below = std::max(below, y);
    }
    if (!std::isfinite(above) || !std::isfinite(below)) return std::numeric_limits<double>::quiet_NaN();
    return above - below;
}

}  // namespace illss
