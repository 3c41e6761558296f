#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "illss/coupling.hpp"
#include "illss/curve.hpp"
#include "illss/error.hpp"
#include "illss/spectral.hpp"

namespace illss {

/// Monitors recorded at the start of every step.
struct HistoryRow {
    double t = 0.0;
    double energy = 0.0;  // line tension * perimeter
    double area = 0.0;
    double dissipation_boundary = 0.0;
    double dissipation_line = 0.0;
    double dt = 0.0;
};

struct SimState {
    Curve curve;
    double time = 0.0;
    std::size_t step = 0;
    std::vector<HistoryRow> history;
    std::uint64_t config_hash = 0;
};

enum class Scheme { RK4, Euler };

Scheme parse_scheme(const std::string& name);
std::string to_string(Scheme scheme);

struct StepControl {
    Scheme scheme = Scheme::RK4;
    double dt = 1e-2;
    bool adaptive = true;
    double cfl = 0.5;
    double dt_min = 1e-6;
    double dt_max = 5e-2;
    double velocity_floor = 1e-8;
    double redistribute_ratio = 2.0;   // <= 0 disables redistribution
    double marker_spacing_limit = 0.0;  // > 0: add markers when perimeter / N exceeds it
    std::size_t max_steps = 1000;
    std::size_t intersection_check_every = 10;  // 0 disables
    double stiffness = 0.0;         // spectral radius of the velocity Jacobian, 0 = not estimated
    double stability_safety = 0.8;  // fraction of the explicit stability interval used

    /// Throws ConfigError on dt <= 0, CFL outside (0, 1] or inverted clamps.
    void validate() const;
};

/// Evaluation of the surface velocity for a marker configuration:
/// geometry -> spread line tension -> solve -> interpolate.
class VelocityPipeline {
public:
    VelocityPipeline(PlanPtr plan, SpreadingKernel kernel, double line_tension = 1.0);

    struct Evaluation {
        CurveGeometry geom;
        PlaneField grid_velocity;
        std::vector<Vec2> marker_velocity;
        double energy = 0.0;
        double dissipation_boundary = 0.0;
        double dissipation_line = 0.0;
    };

    Evaluation evaluate(const Curve& curve) const;
    std::vector<Vec2> marker_velocity(const Curve& curve) const;

    const PlanPtr& plan() const noexcept { return plan_; }
    const SpreadingKernel& kernel() const noexcept { return kernel_; }
    double line_tension() const noexcept { return line_tension_; }

private:
    PlanPtr plan_;
    SpreadingKernel kernel_;
    double line_tension_;
};

/// Raised when the run cannot continue; carries the offending configuration.
class SimulationHalt : public Error {
public:
    SimulationHalt(const std::string& what, SimState state)
        : Error(what), state_(std::move(state)) {}
    const SimState& state() const noexcept { return state_; }

private:
    SimState state_;
};

/// Advances the markers by one step of the configured scheme, appends the
/// start-of-step monitors to the history, then redistributes markers if the
/// spacing ratio exceeds the trigger. Every `intersection_check_every` steps
/// the new curve is tested for self-intersection (SimulationHalt); non-finite
/// positions raise NumericFailure.
SimState step(const SimState& state, const StepControl& control, const VelocityPipeline& pipeline);

/// Largest dt keeping the scheme's real stability interval (2.78 for RK4,
/// 2 for Euler) scaled by the safety factor; infinity when stiffness is unset.
double stable_dt(const StepControl& control);

/// Power-iteration estimate of the largest |eigenvalue| of the Jacobian of
/// the marker velocity with respect to marker positions, by centred
/// differences. The result scales like line_tension / h^2.
double estimate_stiffness(const VelocityPipeline& pipeline, const Curve& curve, std::size_t iterations = 40,
                          std::uint64_t seed = 1);

/// CFL * min spacing / max|U| clamped to [dt_min, dt_max]; dt_max when every
/// speed is below the floor. Never exceeds stable_dt(control).
double adaptive_dt(std::span<const Vec2> marker_velocities, const CurveGeometry& geom,
                   const StepControl& control);

/// Resamples the curve at equal arc length from its trigonometric
/// interpolant, keeping marker 0 in place. `markers` defaults to the
/// current count.
Curve redistribute(const Curve& curve, std::optional<std::size_t> markers = std::nullopt);

void write_history(std::ostream& os, std::span<const HistoryRow> rows);
void write_history(const std::string& path, std::span<const HistoryRow> rows);
std::vector<HistoryRow> read_history(std::istream& is);
std::vector<HistoryRow> read_history(const std::string& path);

/// Checkpoint directory: curve.csv (curve serialization), history.csv and state.json.
void write_checkpoint(const std::string& dir, const SimState& state);
SimState read_checkpoint(const std::string& dir);

}  // namespace illss
