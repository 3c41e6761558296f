#include "illss/curve.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fft.hpp"
#include "illss/error.hpp"

namespace illss {

namespace detail {

std::vector<double> periodic_derivative(std::span<const double> f, int order) {
    const std::size_t n = f.size();
    std::vector<cplx> c(n / 2 + 1);
    rfft(f, c);
    const bool even = n % 2 == 0;
    for (std::size_t k = 0; k < c.size(); ++k) {
        const double kk = static_cast<double>(k);
        if (even && k == n / 2 && order % 2 == 1) {
            c[k] = 0.0;
            continue;
        }
        cplx factor = 1.0;
        for (int o = 0; o < order; ++o) factor *= cplx(0.0, kk);
        c[k] *= factor / static_cast<double>(n);
    }
    std::vector<double> out(n);
    irfft(c, out);
    return out;
}

}  // namespace detail

namespace {

struct Components {
    std::vector<double> x, y;
};

Components split(const Curve& curve) {
    Components c;
    c.x.reserve(curve.size());
    c.y.reserve(curve.size());
    for (const auto& p : curve.points) {
        c.x.push_back(p.x);
        c.y.push_back(p.y);
    }
    return c;
}

double sign_of(Orientation o) { return o == Orientation::CounterClockwise ? 1.0 : -1.0; }

double bounding_scale(const Curve& curve) {
    double s = 0.0;
    for (const auto& p : curve.points) s = std::max({s, std::abs(p.x), std::abs(p.y)});
    return std::max(s, 1.0);
}

void require_markers(const Curve& curve) {
    if (curve.size() < Curve::kMinMarkers)
        throw GeometryError("curve needs at least " + std::to_string(Curve::kMinMarkers) +
                            " markers, got " + std::to_string(curve.size()));
    const double tol = 1e-14 * bounding_scale(curve);
    const std::size_t n = curve.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 d = curve.points[(i + 1) % n] - curve.points[i];
        if (!std::isfinite(d.x) || !std::isfinite(d.y))
            throw GeometryError("non-finite marker coordinate", i);
        if (norm(d) <= tol) throw GeometryError("coincident markers", i);
    }
}

double green_area(const Components& c, std::span<const double> dx, std::span<const double> dy) {
    const std::size_t n = c.x.size();
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) sum += c.x[j] * dy[j] - c.y[j] * dx[j];
    return 0.5 * sum * (2.0 * std::numbers::pi / static_cast<double>(n));
}

bool segments_intersect(Vec2 p1, Vec2 p2, Vec2 q1, Vec2 q2) {
    const auto side = [](Vec2 a, Vec2 b, Vec2 c) { return cross(b - a, c - a); };
    const auto on_segment = [](Vec2 a, Vec2 b, Vec2 c) {
        return std::min(a.x, b.x) <= c.x && c.x <= std::max(a.x, b.x) &&
               std::min(a.y, b.y) <= c.y && c.y <= std::max(a.y, b.y);
    };
    const double d1 = side(q1, q2, p1);
    const double d2 = side(q1, q2, p2);
    const double d3 = side(p1, p2, q1);
    const double d4 = side(p1, p2, q2);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
        return true;
    if (d1 == 0 && on_segment(q1, q2, p1)) return true;
    if (d2 == 0 && on_segment(q1, q2, p2)) return true;
    if (d3 == 0 && on_segment(p1, p2, q1)) return true;
    if (d4 == 0 && on_segment(p1, p2, q2)) return true;
    return false;
}

}  // namespace

CurveGeometry geometry(const Curve& curve) {
    require_markers(curve);
    const std::size_t n = curve.size();
    const auto c = split(curve);
    const auto dx = detail::periodic_derivative(c.x, 1);
    const auto dy = detail::periodic_derivative(c.y, 1);
    const auto ddx = detail::periodic_derivative(c.x, 2);
    const auto ddy = detail::periodic_derivative(c.y, 2);

    const double sigma = sign_of(curve.orientation);
    const double dtheta = 2.0 * std::numbers::pi / static_cast<double>(n);

    CurveGeometry g;
    g.arc_weight.resize(n);
    g.tangent.resize(n);
    g.normal.resize(n);
    g.curvature.resize(n);
    const double tol = 1e-14 * bounding_scale(curve);
    for (std::size_t j = 0; j < n; ++j) {
        const double speed = std::hypot(dx[j], dy[j]);
        if (!(speed > tol)) throw GeometryError("vanishing parametric speed", j);
        const Vec2 t{dx[j] / speed, dy[j] / speed};
        g.arc_weight[j] = speed * dtheta;
        g.tangent[j] = t;
        // Outward normal: tangent rotated clockwise for a counterclockwise traversal.
        g.normal[j] = sigma * Vec2{t.y, -t.x};
        g.curvature[j] = -sigma * (dx[j] * ddy[j] - dy[j] * ddx[j]) / (speed * speed * speed);
        g.perimeter += g.arc_weight[j];
    }
    const double signed_area = green_area(c, dx, dy);
    if (signed_area * sigma <= 0.0)
        throw GeometryError("orientation flag disagrees with marker traversal");
    g.area = signed_area * sigma;
    return g;
}

double perimeter(const Curve& curve) { return geometry(curve).perimeter; }

double enclosed_area(const Curve& curve) {
    require_markers(curve);
    const auto c = split(curve);
    const auto dx = detail::periodic_derivative(c.x, 1);
    const auto dy = detail::periodic_derivative(c.y, 1);
    return green_area(c, dx, dy);
}

double perimeter_first_variation(const CurveGeometry& geom, std::span<const Vec2> marker_values) {
    if (marker_values.size() != geom.size())
        throw PreconditionError("marker value count does not match curve");
    double sum = 0.0;
    for (std::size_t j = 0; j < geom.size(); ++j)
        sum += geom.curvature[j] * dot(geom.normal[j], marker_values[j]) * geom.arc_weight[j];
    return -sum;
}

std::vector<Vec2> line_tension_density(const CurveGeometry& geom) {
    std::vector<Vec2> f(geom.size());
    for (std::size_t j = 0; j < geom.size(); ++j) f[j] = geom.curvature[j] * geom.normal[j];
    return f;
}

double total_turning(const CurveGeometry& geom) {
    double s = 0.0;
    for (std::size_t j = 0; j < geom.size(); ++j) s += geom.curvature[j] * geom.arc_weight[j];
    return s;
}

Vec2 total_line_force(const CurveGeometry& geom) {
    Vec2 s;
    for (std::size_t j = 0; j < geom.size(); ++j)
        s += (geom.curvature[j] * geom.arc_weight[j]) * geom.normal[j];
    return s;
}

Vec2 centroid(const Curve& curve) {
    Vec2 s;
    for (const auto& p : curve.points) s += p;
    return s / static_cast<double>(curve.size());
}

double isoperimetric_ratio(const Curve& curve) {
    const auto g = geometry(curve);
    return g.perimeter * g.perimeter / (4.0 * std::numbers::pi * g.area);
}

double min_spacing(const Curve& curve) {
    double m = INFINITY;
    const std::size_t n = curve.size();
    for (std::size_t i = 0; i < n; ++i)
        m = std::min(m, norm(curve.points[(i + 1) % n] - curve.points[i]));
    return m;
}

double max_spacing(const Curve& curve) {
    double m = 0.0;
    const std::size_t n = curve.size();
    for (std::size_t i = 0; i < n; ++i)
        m = std::max(m, norm(curve.points[(i + 1) % n] - curve.points[i]));
    return m;
}

double spacing_ratio(const Curve& curve) { return max_spacing(curve) / min_spacing(curve); }

std::optional<Intersection> find_self_intersection(const Curve& curve) {
    const std::size_t n = curve.size();
    const auto& p = curve.points;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a0 = p[i];
        const Vec2 a1 = p[(i + 1) % n];
        const double ax0 = std::min(a0.x, a1.x), ax1 = std::max(a0.x, a1.x);
        const double ay0 = std::min(a0.y, a1.y), ay1 = std::max(a0.y, a1.y);
        for (std::size_t j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) continue;  // edges share marker 0
            const Vec2 b0 = p[j];
            const Vec2 b1 = p[(j + 1) % n];
            if (std::max(b0.x, b1.x) < ax0 || std::min(b0.x, b1.x) > ax1 ||
                std::max(b0.y, b1.y) < ay0 || std::min(b0.y, b1.y) > ay1)
                continue;
            if (segments_intersect(a0, a1, b0, b1)) return Intersection{i, j};
        }
    }
    return std::nullopt;
}

void require_simple(const Curve& curve) {
    if (auto hit = find_self_intersection(curve))
        throw GeometryError("self-intersection between edges " + std::to_string(hit->edge_a) +
                                " and " + std::to_string(hit->edge_b),
                            hit->edge_a);
}

CurveInterpolant::CurveInterpolant(const Curve& curve) : n_(curve.size()) {
    const auto c = split(curve);
    const std::size_t kmax = n_ / 2;
    std::vector<detail::cplx> cx(kmax + 1), cy(kmax + 1);
    detail::rfft(c.x, cx);
    detail::rfft(c.y, cy);
    ax_.assign(kmax + 1, 0.0);
    bx_.assign(kmax + 1, 0.0);
    ay_.assign(kmax + 1, 0.0);
    by_.assign(kmax + 1, 0.0);
    const double nn = static_cast<double>(n_);
    for (std::size_t k = 0; k <= kmax; ++k) {
        const bool single = k == 0 || (n_ % 2 == 0 && k == kmax);
        const double scale = single ? 1.0 / nn : 2.0 / nn;
        ax_[k] = scale * cx[k].real();
        ay_[k] = scale * cy[k].real();
        if (!single) {
            bx_[k] = -scale * cx[k].imag();
            by_[k] = -scale * cy[k].imag();
        }
    }
}

Vec2 CurveInterpolant::position(double theta) const {
    Vec2 p{ax_[0], ay_[0]};
    const std::complex<double> step(std::cos(theta), std::sin(theta));
    std::complex<double> e = 1.0;
    for (std::size_t k = 1; k < ax_.size(); ++k) {
        e *= step;
        p.x += ax_[k] * e.real() + bx_[k] * e.imag();
        p.y += ay_[k] * e.real() + by_[k] * e.imag();
    }
    return p;
}

Vec2 CurveInterpolant::derivative(double theta) const {
    Vec2 d;
    const std::complex<double> step(std::cos(theta), std::sin(theta));
    std::complex<double> e = 1.0;
    const std::size_t last = ax_.size() - 1;
    for (std::size_t k = 1; k < ax_.size(); ++k) {
        e *= step;
        if (n_ % 2 == 0 && k == last) break;  // Nyquist term has no derivative on the grid
        const double kk = static_cast<double>(k);
        d.x += kk * (bx_[k] * e.real() - ax_[k] * e.imag());
        d.y += kk * (by_[k] * e.real() - ay_[k] * e.imag());
    }
    return d;
}

}  // namespace illss
