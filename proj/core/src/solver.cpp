#include "illss/solver.hpp"

#include <cmath>

#include "illss/error.hpp"

namespace illss {

namespace {

double safe_ratio(double num, double den) { return den > 0.0 ? num / den : num; }

}  // namespace

PlaneField surface_velocity(const PlaneField& line_force) {
    if (line_force.components() != 2) throw PreconditionError("line force must be a vector field");
    auto u = half_laplacian(leray_project(line_force), -1);
    u.mark_solenoidal();
    return u;
}

SurfaceSolve solve_surface_velocity(const PlaneField& line_force) {
    auto velocity = surface_velocity(line_force);
    auto subfluid = half_laplacian(velocity, 1);
    subfluid *= -1.0;
    subfluid.mark_solenoidal(false);
    const auto total = subfluid + line_force;
    auto pressure = recover_surface_pressure(total);

    const double force_norm = rms(line_force);
    const auto solenoidal_part = leray_project(total);
    const auto gradient_part = total - solenoidal_part;
    SurfaceSolve s{line_force, std::move(velocity), std::move(subfluid), std::move(pressure)};
    s.balance_residual = safe_ratio(rms(solenoidal_part), force_norm);
    s.divergence_residual = safe_ratio(max_abs(surface_divergence(s.velocity)), max_gradient(s.velocity));
    s.pressure_residual = safe_ratio(rms(gradient(s.pressure) - gradient_part), force_norm);
    return s;
}

double dissipation_boundary_form(const PlaneField& velocity) {
    if (velocity.components() != 2) throw PreconditionError("dissipation needs a vector field");
    const auto s = forward(velocity);
    const auto& plan = velocity.plan();
    const auto xi = plan.xi_norm();
    const auto w = plan.hermitian_weight();
    double sum = 0.0;
    for (const auto& comp : s.comps)
        for (std::size_t k = 0; k < xi.size(); ++k) sum += w[k] * xi[k] * std::norm(comp[k]);
    return sum * plan.cell_area() / static_cast<double>(plan.point_count());
}

double dissipation_line_form(const CurveGeometry& geom, std::span<const Vec2> marker_velocities) {
    if (marker_velocities.size() != geom.size())
        throw PreconditionError("velocity count does not match curve");
    double sum = 0.0;
    for (std::size_t j = 0; j < geom.size(); ++j)
        sum += geom.curvature[j] * dot(geom.normal[j], marker_velocities[j]) * geom.arc_weight[j];
    return sum;
}

}  // namespace illss
