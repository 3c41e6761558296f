#include <cmath>
#include <numbers>

#include <json.hpp>

#include "illss/halfspace.hpp"
#include "illss/solver.hpp"

namespace illss {

std::string to_json(const std::vector<VerificationRecord>& records) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : records)
        arr.push_back({{"check", r.check},
                       {"tolerance", r.tolerance},
                       {"measured", r.measured},
                       {"pass", r.passed}});
    return arr.dump(2);
}

namespace {

PlaneField random_vector(const PlanPtr& plan, int kmax, std::uint64_t seed) {
    auto a = random_band_limited(plan, kmax, seed);
    auto b = random_band_limited(plan, kmax, seed + 1);
    auto v = PlaneField::vector(plan);
    std::copy(a.values().begin(), a.values().end(), v.component(0).begin());
    std::copy(b.values().begin(), b.values().end(), v.component(1).begin());
    return v;
}

PlaneField random_solenoidal(const PlanPtr& plan, int kmax, std::uint64_t seed) {
    auto v = rotated_gradient(random_band_limited(plan, kmax, seed));
    v *= 1.0 / rms(v);
    return v;
}

VerificationRecord record(std::string name, double tol, double measured) {
    return {std::move(name), tol, measured, std::isfinite(measured) && measured <= tol};
}

}  // namespace

std::vector<VerificationRecord> run_verification_suite(const VerifyOptions& o) {
    std::vector<VerificationRecord> out;

    {
        const auto plan = make_plan(o.grid, o.box);
        const int full = static_cast<int>(o.grid / 2) - 1;
        const auto f = random_vector(plan, full, o.seed);
        const auto g = random_vector(plan, full, o.seed + 10);
        const auto pf = leray_project(f);
        const auto pg = leray_project(g);

        out.push_back(record("leray_idempotence", 1e-12, rms(leray_project(pf) - pf) / rms(pf)));
        const double scale = std::sqrt(inner(f, f) * inner(g, g));
        out.push_back(record("leray_self_adjoint", 1e-12, std::abs(inner(pf, g) - inner(f, pg)) / scale));

        const auto phi = random_band_limited(plan, full, o.seed + 20);
        const auto grad = gradient(phi);
        out.push_back(record("leray_annihilates_gradients", 1e-12, rms(leray_project(grad)) / rms(grad)));

        auto wave = PlaneField::scalar(plan);
        const double k = 2.0 * std::numbers::pi / plan->box();
        for (std::size_t j = 0; j < plan->size(); ++j)
            for (std::size_t i = 0; i < plan->size(); ++i)
                wave.at(0, i, j) = std::cos(k * plan->node(i, j).x);
        out.push_back(record("half_laplacian_symbol", 1e-12,
                             rms(half_laplacian(wave, 1) - k * wave) / (k * rms(wave))));

        auto zero_mean = f;
        for (std::size_t c = 0; c < 2; ++c) {
            const double m = mean(zero_mean, c);
            for (auto& v : zero_mean.component(c)) v -= m;
        }
        out.push_back(record("half_laplacian_inverse_pair", 1e-12,
                             rms(half_laplacian(half_laplacian(zero_mean, -1), 1) - zero_mean) /
                                 rms(zero_mean)));
        out.push_back(record("parseval", 1e-12,
                             std::abs(inner(f, g) - spectral_inner(f, g)) / scale));
        out.push_back(record("leray_half_laplacian_commute", 1e-13,
                             rms(leray_project(half_laplacian(f, 1)) - half_laplacian(leray_project(f), 1)) /
                                 rms(half_laplacian(f, 1))));
    }

    {
        const auto plan = make_plan(o.halfspace_grid, o.box);
        const auto u = random_solenoidal(plan, o.band_limit, o.seed + 30);

        double harmonic = 0.0;
        for (double z : {-1e-3, -0.5, -2.0}) harmonic = std::max(harmonic, harmonicity_residual(u, z, 1e-3).relative);
        out.push_back(record("extension_harmonicity", 1e-6, harmonic));

        out.push_back(record("dirichlet_to_neumann", 1e-6, dtn_check(u, 1e-3).relative_error));

        const auto ext = harmonic_extension(u, default_depths(*plan));
        const double vol = volume_dissipation(ext);
        const double bnd = dissipation_boundary_form(u);
        out.push_back(record("volume_vs_boundary_dissipation", 1e-4, std::abs(vol - bnd) / bnd));

        const double z1 = -0.7, z2 = -1.3;
        const auto once = harmonic_extension(u, std::array{z1}).levels[0];
        const auto twice = harmonic_extension(once, std::array{z2}).levels[0];
        const auto direct = harmonic_extension(u, std::array{z1 + z2}).levels[0];
        out.push_back(record("extension_semigroup", 1e-12, rms(twice - direct) / rms(direct)));
    }
    return out;
}

}  // namespace illss
