#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "illss/audit.hpp"
#include "illss/config.hpp"
#include "illss/dynamics.hpp"
#include "illss/spectral.hpp"

namespace illss {

/// Initial state of the configured scenario, resampled at equal arc length.
SimState build_initial_state(const RunConfig& config);

/// Box side actually used: config.box, or box_factor times the curve extent.
double resolve_box(const RunConfig& config, const Curve& curve);

/// Grid for the run. Throws ConfigError when markers are spaced wider than
/// the grid ("resolution") or the curve does not fit inside the box with the
/// kernel margin ("domain").
PlanPtr build_plan(const RunConfig& config, const Curve& curve);

enum class SuiteStatus { Pass, Fail, Skipped };

struct SuiteResult {
    std::string name;
    SuiteStatus status = SuiteStatus::Skipped;
    double measured = 0.0;
    double tolerance = 0.0;
    std::string note;
};

struct RunResult {
    RunConfig config;  // with the resolved box
    Curve initial;
    SimState state;
    std::optional<AuditReport> audit;
    std::vector<SuiteResult> suites;
    std::vector<std::pair<double, double>> weak_form;  // (t, max residual)
    std::vector<std::pair<double, double>> neck;       // (t, width), dumbbell only
    bool halted = false;
    std::string halt_reason;

    /// Every evaluated suite passed and the run was not halted.
    bool pass() const;
    const SuiteResult* suite(const std::string& name) const;
};

struct RunOptions {
    std::optional<std::string> resume_dir;  // checkpoint directory to continue from
    std::ostream* log = nullptr;            // progress lines
    std::size_t log_every = 100;
};

/// Runs until max_steps, t_end or the isoperimetric target, then evaluates
/// the invariant suites. Artifacts go to config.output_dir when it is set.
RunResult run(const RunConfig& config, const RunOptions& options = {});

/// History of the run plus a row for the final state; this is what gets
/// written and audited.
std::vector<HistoryRow> closed_history(const RunResult& result);

std::string summary_json(const RunResult& result);

struct SweepEntry {
    std::string label;
    std::optional<RunResult> result;
    std::string error;  // set when the run could not start
};

/// Runs independent configurations concurrently, at most `jobs` at a time.
std::vector<SweepEntry> sweep(const std::vector<std::pair<std::string, RunConfig>>& configs, unsigned jobs);

/// Energy-budget audit of a history file written by a run.
AuditReport audit_history(const std::string& path, const AuditTolerances& tolerances = {});

}  // namespace illss
