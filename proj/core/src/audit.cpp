#include "illss/audit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include <json.hpp>

#include "illss/error.hpp"
#include "illss/solver.hpp"

namespace illss {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
    std::nth_element(v.begin(), mid, v.end());
    if (v.size() % 2 == 1) return *mid;
    const double upper = *mid;
    const double lower = *std::max_element(v.begin(), mid);
    return 0.5 * (lower + upper);
}

nlohmann::json number_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(); }

}  // namespace

WeakFormResidual weak_form_residual(const PlaneField& velocity, const CurveGeometry& geom,
                                    const Curve& curve, const PlaneField& test_field,
                                    const SpreadingKernel& kernel, double line_tension) {
    if (test_field.components() != 2) throw PreconditionError("test field must be a vector field");
    const double grad = max_gradient(test_field);
    if (max_abs(surface_divergence(test_field)) > 1e-10 * std::max(grad, 1e-300) && grad > 0.0)
        throw PreconditionError("test field is not divergence-free");

    WeakFormResidual r;
    const auto lambda_v = half_laplacian(test_field, 1);
    r.lhs = inner(velocity, lambda_v);
    const auto samples = interpolate(test_field, kernel, curve.points);
    r.rhs = line_tension * dissipation_line_form(geom, samples);

    double fluctuation = 0.0;
    for (std::size_t c = 0; c < 2; ++c) {
        const double m = mean(test_field, c);
        for (double v : test_field.component(c)) fluctuation = std::max(fluctuation, std::abs(v - m));
    }
    if (fluctuation <= 1e-12 * max_abs(test_field)) return r;  // constant field: null direction

    const double normalizer = std::sqrt(inner(lambda_v, lambda_v) * inner(velocity, velocity)) + std::abs(r.rhs);
    r.residual = normalizer > 0.0 ? (r.lhs - r.rhs) / normalizer : 0.0;
    return r;
}

std::vector<PlaneField> random_solenoidal_fields(const PlanPtr& plan, std::size_t count,
                                                 std::uint64_t seed, int band) {
    if (band <= 0) band = static_cast<int>(plan->size() / 8);
    std::vector<PlaneField> out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        auto v = rotated_gradient(random_band_limited(plan, band, seed + 7919 * k));
        v *= 1.0 / rms(v);
        out.push_back(std::move(v));
    }
    return out;
}

WeakFormStats weak_form_batch(const PlaneField& velocity, const CurveGeometry& geom, const Curve& curve,
                              std::span<const PlaneField> test_fields, const SpreadingKernel& kernel,
                              double line_tension) {
    WeakFormStats s;
    for (const auto& v : test_fields) {
        const double r = std::abs(weak_form_residual(velocity, geom, curve, v, kernel, line_tension).residual);
        s.max_abs = std::max(s.max_abs, r);
        s.mean_abs += r;
        ++s.fields;
    }
    if (s.fields) s.mean_abs /= static_cast<double>(s.fields);
    return s;
}

AuditReport energy_budget(std::span<const HistoryRow> history, const AuditTolerances& tol) {
    if (history.size() < 3)
        throw AuditInsufficient("energy audit needs at least 3 history rows, got " + std::to_string(history.size()));
    AuditReport rep;
    rep.tolerances = tol;
    const std::size_t n = history.size();
    rep.rows.resize(n);

    std::vector<double> relative, cross;
    auto& s = rep.summary;
    s.rows = n;
    s.min_dissipation_boundary = INFINITY;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& h = history[i];
        auto& row = rep.rows[i];
        row.t = h.t;
        row.energy = h.energy;
        row.dissipation_boundary = h.dissipation_boundary;
        row.dissipation_line = h.dissipation_line;
        row.energy_rate = kNaN;
        row.relative_violation = kNaN;
        row.weak_form_max = kNaN;
        s.min_dissipation_boundary = std::min(s.min_dissipation_boundary, h.dissipation_boundary);

        if (h.dissipation_boundary > tol.dissipation_floor) {
            const double gap = std::abs(h.dissipation_boundary - h.dissipation_line) / h.dissipation_boundary;
            cross.push_back(gap);
            s.max_cross_form_gap = std::max(s.max_cross_form_gap, gap);
        }
        if (i + 1 < n && history[i + 1].energy > h.energy + tol.energy_band * h.dissipation_boundary * h.dt)
            ++s.energy_band_violations;

        if (i == 0 || i + 1 == n) continue;
        const double h1 = h.t - history[i - 1].t;
        const double h2 = history[i + 1].t - h.t;
        if (!(h1 > 0.0 && h2 > 0.0)) throw AuditInsufficient("history times must increase strictly");
        const double rate = -h2 / (h1 * (h1 + h2)) * history[i - 1].energy + (h2 - h1) / (h1 * h2) * h.energy +
                            h1 / (h2 * (h1 + h2)) * history[i + 1].energy;
        row.energy_rate = rate;
        const double defect = std::abs(rate + h.dissipation_boundary);
        s.max_absolute_defect = std::max(s.max_absolute_defect, defect);
        if (h.dissipation_boundary > tol.dissipation_floor) {
            row.relative_violation = defect / h.dissipation_boundary;
            relative.push_back(row.relative_violation);
        }
    }
    s.assessed_rows = relative.size();
    s.median_relative_violation = median(relative);
    s.max_relative_violation = relative.empty() ? 0.0 : *std::max_element(relative.begin(), relative.end());
    s.median_cross_form_gap = median(cross);

    s.budget_pass = s.median_relative_violation <= tol.budget_median && s.max_relative_violation <= tol.budget_max;
    s.cross_form_pass = s.median_cross_form_gap <= tol.cross_form_median;
    s.positivity_pass = s.min_dissipation_boundary >= 0.0;
    s.monotone_pass = s.energy_band_violations == 0;
    return rep;
}

void attach_weak_form(AuditReport& report, std::span<const std::pair<double, double>> t_and_max) {
    for (const auto& [t, value] : t_and_max) {
        auto it = std::find_if(report.rows.begin(), report.rows.end(), [t = t](const AuditRow& r) { return r.t == t; });
        if (it != report.rows.end()) it->weak_form_max = value;
        report.summary.max_weak_form_residual = std::max(report.summary.max_weak_form_residual, value);
    }
}

std::string to_json(const AuditReport& report) {
    const auto& s = report.summary;
    const auto& t = report.tolerances;
    nlohmann::json j;
    j["tolerances"] = {{"budget_median", t.budget_median},
                       {"budget_max", t.budget_max},
                       {"cross_form_median", t.cross_form_median},
                       {"energy_band", t.energy_band},
                       {"dissipation_floor", t.dissipation_floor}};
    j["summary"] = {{"rows", s.rows},
                    {"assessed_rows", s.assessed_rows},
                    {"median_relative_violation", s.median_relative_violation},
                    {"max_relative_violation", s.max_relative_violation},
                    {"max_absolute_defect", s.max_absolute_defect},
                    {"median_cross_form_gap", s.median_cross_form_gap},
                    {"max_cross_form_gap", s.max_cross_form_gap},
                    {"min_dissipation_boundary", number_or_null(s.min_dissipation_boundary)},
                    {"energy_band_violations", s.energy_band_violations},
                    {"max_weak_form_residual", s.max_weak_form_residual},
                    {"budget_pass", s.budget_pass},
                    {"cross_form_pass", s.cross_form_pass},
                    {"positivity_pass", s.positivity_pass},
                    {"monotone_pass", s.monotone_pass},
                    {"pass", s.pass()}};
    auto rows = nlohmann::json::array();
    for (const auto& r : report.rows)
        rows.push_back({{"t", r.t},
                        {"E", r.energy},
                        {"dEdt", number_or_null(r.energy_rate)},
                        {"D_boundary", r.dissipation_boundary},
                        {"D_line", r.dissipation_line},
                        {"relative_violation", number_or_null(r.relative_violation)},
                        {"weak_form_max", number_or_null(r.weak_form_max)}});
    j["rows"] = std::move(rows);
    return j.dump(2);
}

void write_audit_csv(std::ostream& os, const AuditReport& report) {
    os << "t,E,dEdt,D_boundary,D_line,relative_violation,weak_form_max\n";
    char buf[256];
    for (const auto& r : report.rows) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.t, r.energy, r.energy_rate,
                      r.dissipation_boundary, r.dissipation_line, r.relative_violation, r.weak_form_max);
        os << buf;
    }
}

}  // namespace illss
