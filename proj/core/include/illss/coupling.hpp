#pragma once

#include <span>
#include <string>
#include <vector>

#include "illss/curve.hpp"
#include "illss/spectral.hpp"

namespace illss {

enum class KernelFamily {
    Peskin4,  // standard 4-point kernel: partition of unity, zero first moment, C1
    Cosine4,  // (1 + cos(pi r / 2)) / 4: partition of unity only
};

KernelFamily parse_kernel_family(const std::string& name);
std::string to_string(KernelFamily family);

/// Regularized delta phi(x / (s h)) phi(y / (s h)) / (s h)^2 built from a
/// one-dimensional kernel phi. `width_scale` s stretches the support; the
/// discrete moment identities are exact only for s = 1.
struct SpreadingKernel {
    KernelFamily family = KernelFamily::Peskin4;
    double width_scale = 1.0;

    /// One-dimensional kernel in grid units (unscaled).
    double phi(double r) const noexcept;

    /// Support diameter in grid cells, after scaling.
    double support() const noexcept { return 4.0 * width_scale; }
    int moment_order() const noexcept;
};

/// Spreads weighted marker vectors: F(x) = sum_m values_m w_m delta_h(x - X_m).
PlaneField spread(PlanPtr plan, const SpreadingKernel& kernel, std::span<const Vec2> positions,
                  std::span<const Vec2> values, std::span<const double> weights);

/// Kernel-weighted samples U(X_m) = sum_x h^2 delta_h(x - X_m) U(x); the
/// adjoint of `spread` under the grid and weighted marker inner products.
std::vector<Vec2> interpolate(const PlaneField& field, const SpreadingKernel& kernel,
                              std::span<const Vec2> positions);

struct SpreadStats {
    Vec2 net_force_before_correction;  // integral of the spread field
    double total_abs_turning = 0.0;    // sum |kappa| ds
};

/// Line tension F_l = lambda kappa n delta(d) spread onto the grid, with its
/// grid mean removed so the integral is exactly zero.
///
/// Throws DomainFitError when a marker is within one kernel width of the box
/// edge, ResolutionError when markers are spaced wider than the grid.
PlaneField spread_line_tension(const Curve& curve, const CurveGeometry& geom, PlanPtr plan,
                               const SpreadingKernel& kernel, double line_tension = 1.0,
                               SpreadStats* stats = nullptr);

/// Surface velocity at the markers.
std::vector<Vec2> interpolate_velocity(const PlaneField& velocity, const Curve& curve,
                                       const SpreadingKernel& kernel);

/// First variation of the perimeter along a grid field sampled at the markers.
double perimeter_first_variation(const CurveGeometry& geom, const Curve& curve,
                                 const PlaneField& field, const SpreadingKernel& kernel);

/// Throws DomainFitError if any point lies within the kernel margin of the box edge.
void require_inside(const SpectralPlan& plan, const SpreadingKernel& kernel,
                    std::span<const Vec2> positions);

}  // namespace illss
