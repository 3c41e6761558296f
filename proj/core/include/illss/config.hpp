#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "illss/audit.hpp"
#include "illss/coupling.hpp"
#include "illss/dynamics.hpp"
#include "illss/scenario.hpp"

namespace illss {

enum class ScenarioKind { Circle, Ellipse, Star, Dumbbell, File };

ScenarioKind parse_scenario_kind(const std::string& name);
std::string to_string(ScenarioKind kind);

struct ScenarioParams {
    ScenarioKind kind = ScenarioKind::Circle;
    double radius = 1.0;
    double a = 2.0;  // ellipse semi-axes
    double b = 1.0;
    double amplitude = 0.1;  // star
    int mode = 5;
    DumbbellShape dumbbell;
    std::string file;  // curve file for ScenarioKind::File
};

/// Pass/fail thresholds of the invariant suites evaluated after a run.
struct CheckTolerances {
    double area_drift = 1e-3;      // |A_end - A_0| / A_0
    double stationarity = 1e-3;    // circle: max marker displacement / radius
    double weak_form = 2e-2;       // max weak-form residual over audited steps
    double turning = 1e-8;         // |total turning + 2 pi| of the initial curve
    AuditTolerances audit;
};

struct RunConfig {
    ScenarioParams scenario;
    std::size_t grid = 256;
    double box = 0.0;         // 0: box_factor times the curve extent
    double box_factor = 8.0;
    std::size_t markers = 512;
    SpreadingKernel kernel;
    double line_tension = 1.0;
    StepControl control;
    double t_end = 0.0;                 // 0: no time limit
    double target_isoperimetric = 0.0;  // 0: no shape target
    std::uint64_t seed = 1;

    std::string output_dir;         // empty: no artifacts written
    double snapshot_interval = 0.0;  // 0: initial and final curves only
    std::size_t audit_every = 10;    // weak-form batch cadence in steps, 0 disables
    std::size_t audit_fields = 16;

    CheckTolerances checks;
};

/// Parses TOML text, applies `key=value` overrides on dotted paths, then
/// validates. Unknown keys and type mismatches raise ConfigError naming the key.
RunConfig parse_config(const std::string& toml_text, const std::vector<std::string>& overrides = {});
RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {});

/// Checks every stand-alone constraint; throws ConfigError naming the first violation.
void validate(const RunConfig& config);

/// Canonical TOML rendering; parse_config(to_toml(c)) reproduces c.
std::string to_toml(const RunConfig& config);

/// FNV-1a of the canonical rendering, ignoring the output directory, the
/// snapshot cadence and the stopping criteria, so a run can be extended.
std::uint64_t config_hash(const RunConfig& config);

}  // namespace illss
