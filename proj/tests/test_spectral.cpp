#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "illss/error.hpp"
#include "illss/spectral.hpp"
#include "support.hpp"

using namespace illss;
using std::numbers::pi;

namespace {

double norm2(const PlaneField& f) { return std::sqrt(inner(f, f)); }

PlaneField smooth_scalar(PlanPtr plan) {
    const double L = plan->box();
    return support::sample(plan, 1, [&](std::size_t, Vec2 p) {
        return std::sin(2 * pi * p.x / L) * std::cos(4 * pi * p.y / L) + 0.3 * std::cos(6 * pi * (p.x + p.y) / L);
    });
}

}  // namespace

TEST_CASE("plan validation") {
    CHECK_THROWS_AS(make_plan(48, 1.0), PreconditionError);
    CHECK_THROWS_AS(make_plan(16, 1.0), PreconditionError);
    CHECK_THROWS_AS(make_plan(64, 0.0), PreconditionError);
    const auto plan = make_plan(64, 10.0);
    CHECK(plan->spacing() == doctest::Approx(10.0 / 64));
    CHECK(plan->xi_x()[1] == doctest::Approx(2 * pi / 10.0));
    CHECK(plan->mode_y(63) == -1);
    CHECK(plan->mode_y(32) == -32);
}

TEST_CASE("Leray projection on the examples") {
    const auto plan = make_plan(64, 6.0);
    const auto grad = gradient(smooth_scalar(plan));
    CHECK(norm2(leray_project(grad)) <= 1e-12 * norm2(grad));

    const auto sol = rotated_gradient(smooth_scalar(plan));
    CHECK(support::max_diff(leray_project(sol), sol) <= 1e-12 * max_abs(sol));

    const double L = plan->box();
    const auto wave = support::sample(plan, 2, [&](std::size_t, Vec2 p) { return std::cos(2 * pi * p.x / L); });
    const auto w = leray_project(wave);
    const auto expect = support::sample(plan, 2, [&](std::size_t c, Vec2 p) { return c == 0 ? 0.0 : std::cos(2 * pi * p.x / L); });
    CHECK(support::max_diff(w, expect) <= 1e-13);
    CHECK(w.solenoidal());
}

TEST_CASE("Leray projector is idempotent, self-adjoint and keeps constants") {
    const auto plan = make_plan(64, 8.0);
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        const auto f = support::random_vector(plan, 12, seed);
        const auto g = support::random_vector(plan, 12, seed + 50);
        const auto pf = leray_project(f);
        CHECK(support::max_diff(leray_project(pf), pf) <= 1e-12 * max_abs(f));
        const double a = inner(pf, g), b = inner(f, leray_project(g));
        CHECK(std::abs(a - b) <= 1e-12 * norm2(f) * norm2(g));
        const auto div = surface_divergence(pf);
        CHECK(max_abs(div) <= 1e-10 * max_gradient(f));
    }
    auto c = support::sample(plan, 2, [](std::size_t comp, Vec2) { return comp == 0 ? 0.4 : -1.2; });
    CHECK(support::max_diff(leray_project(c), c) <= 1e-14);
}

TEST_CASE("Nyquist content stays real and projected") {
    const auto plan = make_plan(32, 1.0);
    // the checkerboard lives entirely on the Nyquist row and column
    const auto f = support::sample(plan, 2, [&](std::size_t, Vec2 p) {
        const double h = plan->spacing();
        return std::cos(pi * std::round((p.x + 0.5) / h)) + std::sin(2 * pi * p.y);
    });
    const auto pf = leray_project(f);
    CHECK(all_finite(pf));
    CHECK(support::max_diff(leray_project(pf), pf) <= 1e-12);
    CHECK(max_abs(surface_divergence(pf)) <= 1e-10 * std::max(1.0, max_gradient(f)));
}

TEST_CASE("half-Laplacian symbol and inverse pair") {
    const auto plan = make_plan(64, 5.0);
    const double L = plan->box();
    const auto wave = support::sample(plan, 1, [&](std::size_t, Vec2 p) { return std::cos(2 * pi * p.x / L); });
    const auto lw = half_laplacian(wave, 1);
    CHECK(support::max_diff(lw, (2 * pi / L) * wave) <= 1e-12);

    const auto f = support::random_vector(plan, 20, 3);
    CHECK(support::max_diff(half_laplacian(half_laplacian(f, -1), 1), f) <= 1e-12 * max_abs(f));
    CHECK(support::max_diff(half_laplacian(half_laplacian(f, 1), -1), f) <= 1e-12 * max_abs(f));

    CHECK_THROWS_AS(half_laplacian(f, 2), PreconditionError);
    auto shifted = f;
    for (double& v : shifted.component(1)) v += 1e-3;
    CHECK_THROWS_AS(half_laplacian(shifted, -1), ZeroModeError);
    CHECK_NOTHROW(half_laplacian(shifted, 1));
}

TEST_CASE("Lambda uses the true wavenumber at Nyquist") {
    const auto plan = make_plan(32, 2 * pi);
    const auto nyq = support::sample(plan, 1, [&](std::size_t, Vec2 p) { return std::cos(16.0 * p.x); });
    CHECK(support::max_diff(half_laplacian(nyq, 1), 16.0 * nyq) <= 1e-11);
}

TEST_CASE("half-Laplacian is positive and commutes with the projector") {
    const auto plan = make_plan(64, 7.0);
    for (std::uint64_t seed = 10; seed < 14; ++seed) {
        const auto f = support::random_vector(plan, 25, seed);
        CHECK(inner(f, half_laplacian(f, 1)) >= 0.0);
        const auto a = leray_project(half_laplacian(f, 1));
        const auto b = half_laplacian(leray_project(f), 1);
        CHECK(support::max_diff(a, b) <= 1e-13 * max_abs(a) * 10);
    }
}

TEST_CASE("surface divergence examples") {
    const auto plan = make_plan(64, 2 * pi);
    const auto f = support::sample(plan, 2, [](std::size_t c, Vec2 p) { return c == 0 ? std::sin(p.x) : 0.0; });
    const auto expect = support::sample(plan, 1, [](std::size_t, Vec2 p) { return std::cos(p.x); });
    CHECK(support::max_diff(surface_divergence(f), expect) <= 1e-12);

    // windowed rotation: perpendicular gradient of a periodic bump
    const auto bump = support::sample(plan, 1, [](std::size_t, Vec2 p) { return std::exp(-(p.x * p.x + p.y * p.y)); });
    const auto rot = rotated_gradient(bump);
    CHECK(max_abs(surface_divergence(rot)) <= 1e-12 * max_gradient(rot) + 1e-14);
}

TEST_CASE("pressure recovery") {
    const auto plan = make_plan(64, 9.0);
    const auto p0 = smooth_scalar(plan);
    auto expect = p0;
    const double m = mean(p0, 0);
    for (double& v : expect.values()) v -= m;
    CHECK(support::max_diff(recover_surface_pressure(gradient(p0)), expect) <= 1e-12);
    CHECK(max_abs(recover_surface_pressure(rotated_gradient(p0))) <= 1e-13);

    const auto f = support::random_vector(plan, 10, 4);
    const auto irrot = f - leray_project(f);
    CHECK(support::max_diff(gradient(recover_surface_pressure(f)), irrot) <= 1e-12 * max_abs(f));
}

TEST_CASE("Parseval") {
    const auto plan = make_plan(64, 3.0);
    for (std::uint64_t seed = 20; seed < 24; ++seed) {
        const auto f = support::random_vector(plan, 30, seed);
        const auto g = support::random_vector(plan, 30, seed + 7);
        const double a = inner(f, g), b = spectral_inner(f, g);
        CHECK(std::abs(a - b) <= 1e-12 * norm2(f) * norm2(g));
    }
}

TEST_CASE("forward and inverse transforms round trip") {
    const auto plan = make_plan(128, 4.0);
    const auto f = support::random_vector(plan, 60, 5);
    CHECK(support::max_diff(inverse(forward(f)), f) <= 1e-13);
}

TEST_CASE("random band-limited fields") {
    const auto plan = make_plan(64, 8.0);
    const auto a = random_band_limited(plan, 5, 3);
    const auto b = random_band_limited(plan, 5, 3);
    CHECK(support::max_diff(a, b) == 0.0);
    CHECK(rms(a) == doctest::Approx(1.0));
    CHECK(std::abs(mean(a, 0)) <= 1e-14);
    CHECK_THROWS_AS(random_band_limited(plan, 32, 1), PreconditionError);
    CHECK(rotated_gradient(a).solenoidal());
}

TEST_CASE("dealiasing keeps low modes") {
    const auto plan = make_plan(64, 2 * pi, {0, 0}, true);
    const auto low = support::sample(plan, 1, [](std::size_t, Vec2 p) { return std::cos(3 * p.x) * std::sin(5 * p.y); });
    const auto high = support::sample(plan, 1, [](std::size_t, Vec2 p) { return std::cos(30 * p.x); });
    CHECK(support::max_diff(dealias(low), low) <= 1e-13);
    CHECK(max_abs(dealias(high)) <= 1e-13);
}

TEST_CASE("field dump round trip") {
    const auto dir = support::scratch_dir("spectral_dump");
    const auto plan = make_plan(32, 3.5, {1.0, -2.0});
    auto f = support::random_vector(plan, 6, 9);
    const auto path = (dir / "field.bin").string();
    dump_field(path, f);
    const auto g = load_field(path);
    CHECK(g.components() == 2);
    CHECK(g.plan().size() == 32);
    CHECK(g.plan().box() == 3.5);
    CHECK(g.plan().origin() == Vec2{1.0, -2.0});
    CHECK(support::max_diff(f, g) == 0.0);
    CHECK(std::filesystem::file_size(path) == 2 * 32 * 32 * sizeof(double));

    CHECK_THROWS_AS(load_field((dir / "missing.bin").string()), IoError);
    std::filesystem::resize_file(path, 100);
    CHECK_THROWS_AS(load_field(path), IoError);
}

TEST_CASE("field arithmetic rejects mismatched plans") {
    const auto a = PlaneField::vector(make_plan(32, 1.0));
    const auto b = PlaneField::vector(make_plan(64, 1.0));
    CHECK_THROWS_AS(a + b, PreconditionError);
    CHECK_THROWS_AS(leray_project(PlaneField::scalar(make_plan(32, 1.0))), PreconditionError);
    CHECK_THROWS_AS(gradient(a), PreconditionError);
}
