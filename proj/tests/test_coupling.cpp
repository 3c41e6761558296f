#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "illss/coupling.hpp"
#include "illss/error.hpp"
#include "illss/scenario.hpp"
#include "support.hpp"

using namespace illss;
using std::numbers::pi;

namespace {

struct CircleSpread {
    PlaneField force;
    SpreadStats stats;
};

CircleSpread spread_circle(std::size_t m, double box, double radius, std::size_t n, Vec2 centre = {}) {
    const auto plan = make_plan(m, box);
    const auto c = circle_curve(radius, n, centre);
    SpreadStats stats;
    auto f = spread_line_tension(c, geometry(c), plan, SpreadingKernel{}, 1.0, &stats);
    return {std::move(f), stats};
}

// |angular Fourier coefficient m| of the radial force, relative to mode 0.
double angular_anisotropy(const PlaneField& f, Vec2 centre, int max_mode) {
    const auto& plan = f.plan();
    std::vector<std::complex<double>> c(max_mode + 1);
    for (std::size_t j = 0; j < plan.size(); ++j)
        for (std::size_t i = 0; i < plan.size(); ++i) {
            const Vec2 p = plan.node(i, j) - centre;
            const double r = norm(p);
            if (r == 0.0) continue;
            const double fr = (f.at(0, i, j) * p.x + f.at(1, i, j) * p.y) / r;
            const double th = std::atan2(p.y, p.x);
            for (int k = 0; k <= max_mode; ++k) c[k] += fr * std::polar(1.0, k * th);
        }
    double worst = 0.0;
    for (int k = 1; k <= max_mode; ++k) worst = std::max(worst, std::abs(c[k]) / std::abs(c[0]));
    return worst;
}

}  // namespace

TEST_CASE("kernel partition of unity and moments") {
    for (auto family : {KernelFamily::Peskin4, KernelFamily::Cosine4}) {
        const SpreadingKernel k{family, 1.0};
        for (double u = -1.0; u <= 1.0; u += 0.0625) {
            double sum = 0.0, first = 0.0, square = 0.0;
            for (int i = -4; i <= 4; ++i) {
                const double w = k.phi(u - i);
                sum += w;
                first += (u - i) * w;
                square += w * w;
            }
            CHECK(std::abs(sum - 1.0) <= 1e-14);
            if (family == KernelFamily::Peskin4) {
                CHECK(std::abs(first) <= 1e-14);
                CHECK(std::abs(square - 0.375) <= 1e-14);
            }
        }
    }
    CHECK(SpreadingKernel{}.moment_order() == 1);
    CHECK(SpreadingKernel{KernelFamily::Cosine4, 1.0}.moment_order() == 0);
    CHECK(SpreadingKernel{KernelFamily::Peskin4, 2.0}.support() == 8.0);
    CHECK(parse_kernel_family("cosine4") == KernelFamily::Cosine4);
    CHECK_THROWS_AS(parse_kernel_family("gauss"), ConfigError);
}

TEST_CASE("constant fields interpolate exactly for integer widths") {
    const auto plan = make_plan(64, 4.0);
    const auto u = support::sample(plan, 2, [](std::size_t c, Vec2) { return c == 0 ? 0.7 : -2.5; });
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> pos(-1.2, 1.2);
    std::vector<Vec2> pts(50);
    for (auto& p : pts) p = {pos(rng), pos(rng)};
    for (double s : {1.0, 2.0}) {
        for (auto family : {KernelFamily::Peskin4, KernelFamily::Cosine4}) {
            const auto v = interpolate(u, SpreadingKernel{family, s}, pts);
            for (const auto& x : v) {
                CHECK(std::abs(x.x - 0.7) <= 1e-13);
                CHECK(std::abs(x.y + 2.5) <= 1e-13);
            }
        }
    }
}

TEST_CASE("spread and interpolate are adjoint") {
    const auto plan = make_plan(64, 6.0);
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> pos(-2.0, 2.0), val(-1.0, 1.0), wt(0.01, 0.1);
    for (double s : {1.0, 1.5}) {
        const SpreadingKernel kernel{KernelFamily::Peskin4, s};
        std::vector<Vec2> pts(200), g(200);
        std::vector<double> w(200);
        for (std::size_t k = 0; k < pts.size(); ++k) {
            pts[k] = {pos(rng), pos(rng)};
            g[k] = {val(rng), val(rng)};
            w[k] = wt(rng);
        }
        const auto W = support::random_vector(plan, 20, 5);
        const double lhs = inner(spread(plan, kernel, pts, g, w), W);
        const auto iw = interpolate(W, kernel, pts);
        double rhs = 0.0, scale = 0.0;
        for (std::size_t k = 0; k < pts.size(); ++k) {
            rhs += w[k] * dot(g[k], iw[k]);
            scale += w[k] * norm(g[k]) * norm(iw[k]);
        }
        CHECK(std::abs(lhs - rhs) <= 1e-12 * scale);
    }
}

TEST_CASE("smooth fields interpolate to second order") {
    // low-wavenumber field, locally linear on the kernel support
    auto error_at = [](std::size_t m) {
        const double L = 8.0;
        const auto plan = make_plan(m, L);
        auto exact = [&](Vec2 p) { return Vec2{std::sin(2 * pi * p.x / L), std::cos(2 * pi * (p.x + 2 * p.y) / L)}; };
        const auto u = support::sample(plan, 2, [&](std::size_t c, Vec2 p) { return c == 0 ? exact(p).x : exact(p).y; });
        const auto c = ellipse_curve(2.0, 1.0, 64);
        const auto v = interpolate(u, SpreadingKernel{}, c.points);
        double e = 0.0;
        for (std::size_t k = 0; k < v.size(); ++k) e = std::max(e, norm(v[k] - exact(c.points[k])));
        return e;
    };
    const double e1 = error_at(64), e2 = error_at(128), e3 = error_at(256);
    CHECK(e1 <= 5e-2);
    CHECK(e2 / e1 <= 0.3);
    CHECK(e3 / e2 <= 0.3);
}

TEST_CASE("straight segment sums match the segment integral") {
    const auto plan = make_plan(64, 4.0);
    const double h = plan->spacing();
    const Vec2 a{-1.1, -0.4}, b{0.9, 0.7};
    const Vec2 g{0.3, -1.7};  // constant assigned kappa n
    const std::size_t n = 80;
    const double ds = norm(b - a) / n;
    std::vector<Vec2> pts(n), vals(n, g);
    std::vector<double> w(n, ds);
    for (std::size_t k = 0; k < n; ++k) pts[k] = a + ((k + 0.5) / n) * (b - a);
    const auto f = spread(plan, SpreadingKernel{}, pts, vals, w);

    Vec2 total, moment_x;
    for (std::size_t j = 0; j < plan->size(); ++j)
        for (std::size_t i = 0; i < plan->size(); ++i) {
            const Vec2 v{f.at(0, i, j), f.at(1, i, j)};
            total += h * h * v;
            moment_x += h * h * plan->node(i, j).x * v;
        }
    const double length = norm(b - a);
    const double mid_x = 0.5 * (a.x + b.x);
    CHECK(norm(total - length * g) <= 1e-13);
    CHECK(norm(moment_x - length * mid_x * g) <= 1e-13);
}

TEST_CASE("circle line tension has zero net force") {
    double prev = INFINITY;
    for (std::size_t m : {64, 128, 256}) {
        const auto s = spread_circle(m, 8.0, 1.0, m);
        CHECK(std::abs(mean(s.force, 0)) <= 1e-15);
        CHECK(std::abs(mean(s.force, 1)) <= 1e-15);
        const double net = norm(s.stats.net_force_before_correction);
        CHECK(net <= 1e-3 * s.stats.total_abs_turning);
        CHECK(std::abs(s.stats.total_abs_turning - 2 * pi) <= 1e-10);
        if (prev > 1e-13) CHECK(net <= prev);
        prev = net;
    }
}

TEST_CASE("circle spread force is radially symmetric") {
    double prev = INFINITY;
    for (std::size_t m : {64, 128, 256}) {
        const Vec2 centre{0.013, -0.021};
        const auto s = spread_circle(m, 8.0, 1.0, m, centre);
        const double a = angular_anisotropy(s.force, centre, 8);
        CHECK(a <= 1e-2);
        CHECK(a <= prev * 1.05);
        prev = a;
    }
}

TEST_CASE("torque about the centroid is small") {
    const auto c = star_curve(1.0, 0.25, 3, 512);
    const auto plan = make_plan(256, 8.0);
    const auto f = spread_line_tension(c, geometry(c), plan, SpreadingKernel{});
    const Vec2 ctr = centroid(c);
    const double h = plan->spacing();
    double torque = 0.0, scale = 0.0;
    for (std::size_t j = 0; j < plan->size(); ++j)
        for (std::size_t i = 0; i < plan->size(); ++i) {
            const Vec2 r = plan->node(i, j) - ctr;
            const Vec2 v{f.at(0, i, j), f.at(1, i, j)};
            torque += h * h * cross(r, v);
            scale += h * h * norm(r) * norm(v);
        }
    CHECK(std::abs(torque) <= 1e-3 * scale);
}

TEST_CASE("translating curve and grid together changes nothing") {
    const auto c = star_curve(1.0, 0.2, 4, 256);
    const Vec2 d{0.3217, -0.1459};
    const auto plan_a = make_plan(128, 6.0, {-3.0, -3.0});
    const auto plan_b = make_plan(128, 6.0, Vec2{-3.0, -3.0} + d);
    Curve moved = c;
    for (auto& p : moved.points) p += d;
    const auto fa = spread_line_tension(c, geometry(c), plan_a, SpreadingKernel{});
    const auto fb = spread_line_tension(moved, geometry(moved), plan_b, SpreadingKernel{});
    CHECK(support::max_diff(fa, fb) <= 1e-11 * max_abs(fa));
}

TEST_CASE("domain fit and resolution guards") {
    const auto plan = make_plan(64, 4.0);
    const auto near_edge = circle_curve(1.0, 128, {0.85, 0.0});
    CHECK_THROWS_AS(spread_line_tension(near_edge, geometry(near_edge), plan, SpreadingKernel{}), DomainFitError);
    const auto inside = circle_curve(1.0, 128);
    CHECK_NOTHROW(spread_line_tension(inside, geometry(inside), plan, SpreadingKernel{}));

    const auto coarse = circle_curve(1.0, 32);  // spacing 0.196 > h = 0.0625
    try {
        spread_line_tension(coarse, geometry(coarse), plan, SpreadingKernel{});
        FAIL("expected ResolutionError");
    } catch (const ResolutionError& e) {
        CHECK(std::string(e.what()).find("exceeds grid spacing") != std::string::npos);
    }

    const auto u = PlaneField::vector(plan);
    const std::vector<Vec2> outside{{1.95, 0.0}};
    CHECK_THROWS_AS(interpolate(u, SpreadingKernel{}, outside), DomainFitError);
}

TEST_CASE("interpolation converges as the regularization narrows") {
    // wider kernels smooth more; at fixed physical width the result converges with the grid
    const double L = 8.0;
    auto exact = [&](Vec2 p) { return std::sin(4 * pi * p.x / L) * std::cos(2 * pi * p.y / L); };
    auto err = [&](std::size_t m, double s) {
        const auto plan = make_plan(m, L);
        const auto u = support::sample(plan, 2, [&](std::size_t, Vec2 p) { return exact(p); });
        const auto c = circle_curve(1.3, 128);
        const auto v = interpolate(u, SpreadingKernel{KernelFamily::Peskin4, s}, c.points);
        double e = 0.0;
        for (std::size_t k = 0; k < v.size(); ++k) e = std::max(e, std::abs(v[k].x - exact(c.points[k])));
        return e;
    };
    CHECK(err(128, 1.0) < err(128, 2.0));
    CHECK(err(128, 2.0) < err(128, 4.0));
    CHECK(err(256, 1.0) < 0.3 * err(128, 1.0));
    // same physical width on a finer grid: the smoothing error is a property of the width
    CHECK(std::abs(err(256, 2.0) - err(128, 1.0)) <= 0.2 * err(128, 1.0));
}
