#pragma once

#include <span>
#include <vector>

#include "illss/curve.hpp"
#include "illss/spectral.hpp"

namespace illss {

/// Result of the constrained force balance on the surface.
///
/// The subfluid velocity is the decaying harmonic extension of U, so its
/// normal derivative at the surface is the half-Laplacian of U and the
/// traction on the layer is F_s = -Lambda U. Leray-projecting the balance
/// grad Pi = F_s + F_l eliminates Pi and leaves Lambda U = P F_l.
struct SurfaceSolve {
    PlaneField line_force;    // F_l (input, mean-corrected)
    PlaneField velocity;      // U = Lambda^{-1} P F_l
    PlaneField subfluid_force;  // F_s = -Lambda U
    PlaneField pressure;      // Pi, zero mean

    double balance_residual = 0.0;     // ||P(F_s + F_l)|| / ||F_l||
    double divergence_residual = 0.0;  // max|div U| / max|grad U|
    double pressure_residual = 0.0;    // ||grad Pi - (F_s + F_l)|| / ||F_l||
};

/// Full solve with all diagnostics. Throws ZeroModeError if F_l has a mean.
SurfaceSolve solve_surface_velocity(const PlaneField& line_force);

/// U only; the path taken inside time stepping.
PlaneField surface_velocity(const PlaneField& line_force);

/// <U, Lambda U> on the grid, equal to the volume dissipation of the
/// harmonic extension of U.
double dissipation_boundary_form(const PlaneField& velocity);

/// sum kappa (n . U) ds over the markers: the rate at which the perimeter
/// decreases when markers move with `marker_velocities`.
double dissipation_line_form(const CurveGeometry& geom, std::span<const Vec2> marker_velocities);

}  // namespace illss
