#include "illss/halfspace.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "illss/error.hpp"

namespace illss {

using cplx = std::complex<double>;

HalfSpaceField harmonic_extension(const PlaneField& surface, std::span<const double> depths) {
    HalfSpaceField ext{surface.plan_ptr(), {depths.begin(), depths.end()}, {}};
    const auto base = forward(surface);
    const auto xi = surface.plan().xi_norm();
    ext.levels.reserve(depths.size());
    for (double z : depths) {
        if (z > 0.0) throw PreconditionError("extension depths must be <= 0");
        Spectrum s = base;
        for (auto& comp : s.comps)
            for (std::size_t k = 0; k < xi.size(); ++k) comp[k] *= std::exp(xi[k] * z);
        ext.levels.push_back(inverse(s));
    }
    return ext;
}

std::vector<double> geometric_depths(double first_step, double ratio, double z_min) {
    if (!(first_step > 0.0) || !(ratio >= 1.0) || !(z_min < 0.0))
        throw PreconditionError("geometric depths need first_step > 0, ratio >= 1, z_min < 0");
    std::vector<double> z{0.0};
    double step = first_step;
    while (z.back() - step > z_min) {
        z.push_back(z.back() - step);
        step *= ratio;
    }
    z.push_back(z_min);
    return z;
}

std::vector<double> default_depths(const SpectralPlan& plan) {
    return geometric_depths(0.1 / plan.max_wavenumber(), 1.015, -plan.box());
}

HarmonicityReport harmonicity_residual(const PlaneField& surface, double z, double dz) {
    if (z + dz > 0.0) throw PreconditionError("harmonicity stencil must stay below the surface");
    const std::array<double, 3> depths{z + dz, z, z - dz};
    const auto ext = harmonic_extension(surface, depths);
    const auto centre = forward(ext.levels[1]);
    const auto kx = surface.plan().xi_x();
    const auto ky = surface.plan().xi_y();
    Spectrum lap = centre;
    for (auto& comp : lap.comps)
        for (std::size_t k = 0; k < kx.size(); ++k) comp[k] *= -(kx[k] * kx[k] + ky[k] * ky[k]);
    auto residual = inverse(lap);
    const double inv_dz2 = 1.0 / (dz * dz);
    auto r = residual.values();
    const auto up = ext.levels[0].values();
    const auto mid = ext.levels[1].values();
    const auto down = ext.levels[2].values();
    for (std::size_t k = 0; k < r.size(); ++k) r[k] += (up[k] - 2.0 * mid[k] + down[k]) * inv_dz2;

    HarmonicityReport rep;
    rep.max_residual = max_abs(residual);
    rep.field_scale = std::max({max_abs(ext.levels[0]), max_abs(ext.levels[1]), max_abs(ext.levels[2])});
    rep.relative = rep.field_scale > 0.0 ? rep.max_residual / rep.field_scale : 0.0;
    return rep;
}

DtnReport dtn_check(const PlaneField& surface, double dz) {
    const std::array<double, 5> depths{0.0, -dz, -2.0 * dz, -3.0 * dz, -4.0 * dz};
    const auto ext = harmonic_extension(surface, depths);
    auto fd = PlaneField(surface.plan_ptr(), surface.components());
    const std::array<double, 5> stencil{25.0, -48.0, 36.0, -16.0, 3.0};
    auto out = fd.values();
    for (std::size_t l = 0; l < 5; ++l) {
        const auto v = ext.levels[l].values();
        for (std::size_t k = 0; k < out.size(); ++k) out[k] += stencil[l] * v[k];
    }
    for (auto& v : out) v /= 12.0 * dz;

    const auto reference = half_laplacian(surface, 1);
    DtnReport rep;
    rep.reference_norm = rms(reference);
    const auto diff = fd - reference;
    rep.max_abs_error = max_abs(diff);
    const double err = rms(diff);
    rep.relative_error = rep.reference_norm > 0.0 ? err / rep.reference_norm : err;
    return rep;
}

namespace {

// Weights of the derivative at x[at] of the quadratic through three points.
// Weights of the derivative of the Lagrange interpolant through x, at x[at].
template <std::size_t K>
std::array<double, K> lagrange_derivative(const std::array<double, K>& x, std::size_t at) {
    std::array<double, K> w{};
    for (std::size_t k = 0; k < K; ++k) {
        double denom = 1.0;
        for (std::size_t m = 0; m < K; ++m)
            if (m != k) denom *= x[k] - x[m];
        double num = 0.0;
        for (std::size_t m = 0; m < K; ++m) {
            if (m == k) continue;
            double prod = 1.0;
            for (std::size_t q = 0; q < K; ++q)
                if (q != k && q != m) prod *= x[at] - x[q];
            num += prod;
        }
        w[k] = num / denom;
    }
    return w;
}

}  // namespace

double volume_dissipation(const HalfSpaceField& ext) {
    const std::size_t nl = ext.levels.size();
    if (nl < 5) throw PreconditionError("volume quadrature needs at least five depth levels");
    if (ext.depths.front() != 0.0) throw PreconditionError("extension must include the surface z = 0");
    for (std::size_t l = 1; l < nl; ++l)
        if (!(ext.depths[l] < ext.depths[l - 1]))
            throw PreconditionError("depth levels must decrease strictly");

    const auto& plan = *ext.plan;
    std::vector<Spectrum> spectra;
    spectra.reserve(nl);
    for (const auto& lvl : ext.levels) spectra.push_back(forward(lvl));

    const auto xi = plan.xi_norm();
    const auto kx = plan.xi_x_eff();
    const auto ky = plan.xi_y_eff();
    const auto w = plan.hermitian_weight();

    double amp_max = 0.0;
    for (const auto& comp : spectra.front().comps)
        for (const auto& c : comp) amp_max = std::max(amp_max, std::abs(c));
    double xi_max = 0.0;
    for (const auto& comp : spectra.front().comps)
        for (std::size_t k = 0; k < xi.size(); ++k)
            if (std::abs(comp[k]) > 1e-12 * amp_max) xi_max = std::max(xi_max, xi[k]);
    const double first_step = ext.depths[0] - ext.depths[1];
    if (xi_max * first_step > 0.1)
        throw ResolutionError("depth levels too coarse: max|xi| * first spacing = " +
                              std::to_string(xi_max * first_step) + " > 0.1");

    const double norm = plan.cell_area() / static_cast<double>(plan.point_count());
    std::vector<double> integrand(nl, 0.0);
    for (std::size_t l = 0; l < nl; ++l) {
        // Five-level stencil, shifted inward near both ends of the slab.
        const std::size_t c = std::clamp<std::size_t>(l, 2, nl - 3);
        std::array<double, 5> zs{};
        for (std::size_t q = 0; q < 5; ++q) zs[q] = ext.depths[c - 2 + q];
        const auto dw = lagrange_derivative(zs, l - (c - 2));
        double sum = 0.0;
        for (std::size_t comp = 0; comp < spectra[l].comps.size(); ++comp) {
            const auto& here = spectra[l].comps[comp];
            for (std::size_t k = 0; k < xi.size(); ++k) {
                cplx dz = 0.0;
                for (std::size_t q = 0; q < 5; ++q) dz += dw[q] * spectra[c - 2 + q].comps[comp][k];
                const double horiz = kx[k] * kx[k] + ky[k] * ky[k];
                sum += w[k] * (horiz * std::norm(here[k]) + std::norm(dz));
            }
        }
        integrand[l] = sum * norm;
    }
    // Composite Simpson on the non-uniform levels; an odd interval left over
    // at the bottom is integrated with the quadratic through its last three levels.
    const auto& z = ext.depths;
    auto simpson = [&](std::size_t a) {
        const double h0 = z[a] - z[a + 1], h1 = z[a + 1] - z[a + 2], hs = h0 + h1;
        return hs / 6.0 *
               ((2.0 - h1 / h0) * integrand[a] + hs * hs / (h0 * h1) * integrand[a + 1] +
                (2.0 - h0 / h1) * integrand[a + 2]);
    };
    double total = 0.0;
    std::size_t a = 0;
    for (; a + 2 < nl; a += 2) total += simpson(a);
    if (a + 1 < nl) {
        // last interval [z[a], z[a+1]] from the quadratic through a-1, a, a+1
        const double h0 = z[a - 1] - z[a], h1 = z[a] - z[a + 1];
        total += h1 / 6.0 *
                 (-h1 * h1 / (h0 * (h0 + h1)) * integrand[a - 1] + (3.0 + h1 / h0) * integrand[a] +
                  (3.0 * h0 + 2.0 * h1) / (h0 + h1) * integrand[a + 1]);
    }
    return total;
}

}  // namespace illss
