#include "illss/coupling.hpp"

#include <cmath>
#include <numbers>

#include "illss/error.hpp"

namespace illss {

KernelFamily parse_kernel_family(const std::string& name) {
    if (name == "peskin4") return KernelFamily::Peskin4;
    if (name == "cosine4") return KernelFamily::Cosine4;
    throw ConfigError("unknown kernel family '" + name + "' (expected peskin4 or cosine4)");
}

std::string to_string(KernelFamily family) {
    switch (family) {
        case KernelFamily::Peskin4: return "peskin4";
        case KernelFamily::Cosine4: return "cosine4";
    }
    return "unknown";
}

double SpreadingKernel::phi(double r) const noexcept {
    const double a = std::abs(r);
    switch (family) {
        case KernelFamily::Peskin4:
            if (a < 1.0) return 0.125 * (3.0 - 2.0 * a + std::sqrt(1.0 + 4.0 * a - 4.0 * a * a));
            if (a < 2.0) return 0.125 * (5.0 - 2.0 * a - std::sqrt(-7.0 + 12.0 * a - 4.0 * a * a));
            return 0.0;
        case KernelFamily::Cosine4:
            return a < 2.0 ? 0.25 * (1.0 + std::cos(0.5 * std::numbers::pi * a)) : 0.0;
    }
    return 0.0;
}

int SpreadingKernel::moment_order() const noexcept {
    return family == KernelFamily::Peskin4 ? 1 : 0;
}

namespace {

// Visits the grid nodes touched by a marker with their delta weights.
template <typename Visit>
void for_each_node(const SpectralPlan& plan, const SpreadingKernel& kernel, Vec2 p, Visit&& visit) {
    const double h = plan.spacing();
    const double s = kernel.width_scale;
    const double half = 0.5 * kernel.support();
    const double u = (p.x - plan.origin().x) / h;
    const double v = (p.y - plan.origin().y) / h;
    const long m = static_cast<long>(plan.size());
    const long i0 = static_cast<long>(std::ceil(u - half));
    const long i1 = static_cast<long>(std::floor(u + half));
    const long j0 = static_cast<long>(std::ceil(v - half));
    const long j1 = static_cast<long>(std::floor(v + half));
    const double norm = 1.0 / (s * s * h * h);
    for (long j = j0; j <= j1; ++j) {
        const double wy = kernel.phi((v - static_cast<double>(j)) / s);
        if (wy == 0.0) continue;
        const auto jj = static_cast<std::size_t>(((j % m) + m) % m);
        for (long i = i0; i <= i1; ++i) {
            const double wx = kernel.phi((u - static_cast<double>(i)) / s);
            if (wx == 0.0) continue;
            const auto ii = static_cast<std::size_t>(((i % m) + m) % m);
            visit(ii, jj, wx * wy * norm);
        }
    }
}

}  // namespace

void require_inside(const SpectralPlan& plan, const SpreadingKernel& kernel,
                    std::span<const Vec2> positions) {
    const double margin = (0.5 * kernel.support() + 1.0) * plan.spacing();
    const Vec2 lo = plan.origin();
    const double hi_x = lo.x + plan.box();
    const double hi_y = lo.y + plan.box();
    for (std::size_t k = 0; k < positions.size(); ++k) {
        const Vec2 p = positions[k];
        if (!(p.x >= lo.x + margin && p.x <= hi_x - margin && p.y >= lo.y + margin &&
              p.y <= hi_y - margin))
            throw DomainFitError("marker " + std::to_string(k) + " at (" + std::to_string(p.x) + ", " +
                                 std::to_string(p.y) + ") is within the kernel margin of the box edge");
    }
}

PlaneField spread(PlanPtr plan, const SpreadingKernel& kernel, std::span<const Vec2> positions,
                  std::span<const Vec2> values, std::span<const double> weights) {
    if (values.size() != positions.size() || weights.size() != positions.size())
        throw PreconditionError("spread: positions, values and weights differ in length");
    require_inside(*plan, kernel, positions);
    auto f = PlaneField::vector(plan);
    for (std::size_t k = 0; k < positions.size(); ++k) {
        const Vec2 g = weights[k] * values[k];
        for_each_node(*plan, kernel, positions[k], [&](std::size_t i, std::size_t j, double w) {
            f.at(0, i, j) += w * g.x;
            f.at(1, i, j) += w * g.y;
        });
    }
    return f;
}

std::vector<Vec2> interpolate(const PlaneField& field, const SpreadingKernel& kernel,
                              std::span<const Vec2> positions) {
    if (field.components() != 2) throw PreconditionError("interpolate needs a vector field");
    const auto& plan = field.plan();
    require_inside(plan, kernel, positions);
    const double area = plan.cell_area();
    std::vector<Vec2> out(positions.size());
    for (std::size_t k = 0; k < positions.size(); ++k) {
        Vec2 acc;
        for_each_node(plan, kernel, positions[k], [&](std::size_t i, std::size_t j, double w) {
            acc.x += w * field.at(0, i, j);
            acc.y += w * field.at(1, i, j);
        });
        out[k] = area * acc;
    }
    return out;
}

PlaneField spread_line_tension(const Curve& curve, const CurveGeometry& geom, PlanPtr plan,
                               const SpreadingKernel& kernel, double line_tension, SpreadStats* stats) {
    const double h = plan->spacing();
    for (std::size_t k = 0; k < geom.size(); ++k)
        if (geom.arc_weight[k] > h)
            throw ResolutionError("marker spacing " + std::to_string(geom.arc_weight[k]) + " at marker " +
                                  std::to_string(k) + " exceeds grid spacing " + std::to_string(h));
    auto density = line_tension_density(geom);
    for (auto& d : density) d *= line_tension;
    auto f = spread(plan, kernel, curve.points, density, geom.arc_weight);

    const double box_area = plan->box() * plan->box();
    const double ax = box_area * mean(f, 0);
    const double ay = box_area * mean(f, 1);
    if (stats) {
        stats->net_force_before_correction = {ax, ay};
        stats->total_abs_turning = 0.0;
        for (std::size_t k = 0; k < geom.size(); ++k)
            stats->total_abs_turning += std::abs(geom.curvature[k]) * geom.arc_weight[k];
    }
    for (auto& v : f.component(0)) v -= ax / box_area;
    for (auto& v : f.component(1)) v -= ay / box_area;
    return f;
}

std::vector<Vec2> interpolate_velocity(const PlaneField& velocity, const Curve& curve,
                                       const SpreadingKernel& kernel) {
    return interpolate(velocity, kernel, curve.points);
}

double perimeter_first_variation(const CurveGeometry& geom, const Curve& curve,
                                 const PlaneField& field, const SpreadingKernel& kernel) {
    const auto samples = interpolate(field, kernel, curve.points);
    return perimeter_first_variation(geom, samples);
}

}  // namespace illss
