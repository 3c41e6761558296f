#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "illss/coupling.hpp"
#include "illss/curve.hpp"
#include "illss/dynamics.hpp"
#include "illss/spectral.hpp"

namespace illss {

/// Both sides of the weak gradient-flow identity for one test field V:
/// lhs = <U, Lambda V> (metric pairing reduced to the surface),
/// rhs = sum kappa (n . V) ds (minus the perimeter variation).
struct WeakFormResidual {
    double lhs = 0.0;
    double rhs = 0.0;
    double residual = 0.0;  // (lhs - rhs) / (||Lambda V|| ||U|| + |rhs|)
};

/// Throws PreconditionError unless V is a divergence-free vector field.
/// A spatially constant V is a null direction of both sides; its residual
/// is reported as zero.
WeakFormResidual weak_form_residual(const PlaneField& velocity, const CurveGeometry& geom,
                                    const Curve& curve, const PlaneField& test_field,
                                    const SpreadingKernel& kernel, double line_tension = 1.0);

/// Divergence-free fields from random stream functions with modes
/// 1 <= max(|k1|, |k2|) <= band, each scaled to unit rms. band = 0 selects M/8.
std::vector<PlaneField> random_solenoidal_fields(const PlanPtr& plan, std::size_t count,
                                                 std::uint64_t seed, int band = 0);

struct WeakFormStats {
    double max_abs = 0.0;
    double mean_abs = 0.0;
    std::size_t fields = 0;
};

WeakFormStats weak_form_batch(const PlaneField& velocity, const CurveGeometry& geom, const Curve& curve,
                              std::span<const PlaneField> test_fields, const SpreadingKernel& kernel,
                              double line_tension = 1.0);

struct AuditTolerances {
    double budget_median = 0.02;
    double budget_max = 0.05;
    double cross_form_median = 0.02;
    double energy_band = 1e-2;          // E_{n+1} <= E_n + band * D_n * dt_n
    double dissipation_floor = 1e-12;   // rows below it are judged by absolute defect only
};

struct AuditRow {
    double t = 0.0;
    double energy = 0.0;
    double energy_rate = 0.0;  // centred finite difference, NaN at the ends
    double dissipation_boundary = 0.0;
    double dissipation_line = 0.0;
    double relative_violation = 0.0;  // |dE/dt + D_boundary| / D_boundary, NaN if not assessed
    double weak_form_max = 0.0;       // NaN when no weak-form batch ran at this row
};

struct AuditSummary {
    std::size_t rows = 0;
    std::size_t assessed_rows = 0;
    double median_relative_violation = 0.0;
    double max_relative_violation = 0.0;
    double max_absolute_defect = 0.0;
    double median_cross_form_gap = 0.0;  // |D_boundary - D_line| / D_boundary
    double max_cross_form_gap = 0.0;
    double min_dissipation_boundary = 0.0;
    std::size_t energy_band_violations = 0;
    double max_weak_form_residual = 0.0;

    bool budget_pass = false;
    bool cross_form_pass = false;
    bool positivity_pass = false;
    bool monotone_pass = false;
    bool pass() const { return budget_pass && cross_form_pass && positivity_pass && monotone_pass; }
};

struct AuditReport {
    AuditTolerances tolerances;
    std::vector<AuditRow> rows;
    AuditSummary summary;
};

/// Centred differences of E along the history compared against
/// -D_boundary, over the interior rows. Throws AuditInsufficient with fewer
/// than three rows.
AuditReport energy_budget(std::span<const HistoryRow> history, const AuditTolerances& tol = {});

/// Attaches weak-form maxima, keyed by time, to the matching report rows.
void attach_weak_form(AuditReport& report, std::span<const std::pair<double, double>> t_and_max);

std::string to_json(const AuditReport& report);
void write_audit_csv(std::ostream& os, const AuditReport& report);

}  // namespace illss
