#include "illss/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <numbers>
#include <ostream>

#include <json.hpp>

#include "illss/error.hpp"
#include "illss/scenario.hpp"

namespace illss {

namespace fs = std::filesystem;

namespace {

const char* to_string(SuiteStatus s) {
    switch (s) {
        case SuiteStatus::Pass: return "pass";
        case SuiteStatus::Fail: return "fail";
        case SuiteStatus::Skipped: return "skipped";
    }
    return "skipped";
}

SuiteResult judged(std::string name, double measured, double tolerance, std::string note = {}) {
    SuiteResult r{std::move(name), SuiteStatus::Fail, measured, tolerance, std::move(note)};
    if (std::isfinite(measured) && measured <= tolerance) r.status = SuiteStatus::Pass;
    return r;
}

SuiteResult flag(std::string name, bool ok, double measured, double tolerance, std::string note = {}) {
    return {std::move(name), ok ? SuiteStatus::Pass : SuiteStatus::Fail, measured, tolerance, std::move(note)};
}

SuiteResult skipped(std::string name, std::string note) {
    return {std::move(name), SuiteStatus::Skipped, 0.0, 0.0, std::move(note)};
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << text;
}

std::string snapshot_name(std::size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "curve_%06zu.csv", index);
    return buf;
}

void evaluate_suites(RunResult& r) {
    const auto& cfg = r.config;
    const auto& tol = cfg.checks;
    auto& suites = r.suites;

    suites.push_back(r.halted ? flag("completed", false, 1.0, 0.0, r.halt_reason) : flag("completed", true, 0.0, 0.0));

    const auto g0 = geometry(r.initial);
    suites.push_back(judged("initial_turning", std::abs(std::abs(total_turning(g0)) - 2.0 * std::numbers::pi),
                            tol.turning));

    const double a0 = g0.area;
    const double a1 = enclosed_area(r.state.curve);
    suites.push_back(judged("area_conservation", std::abs(a1 - a0) / std::abs(a0), tol.area_drift));

    if (cfg.scenario.kind == ScenarioKind::Circle) {
        const Vec2 c0 = centroid(r.initial);
        double dev = 0.0;
        for (const auto& p : r.state.curve.points) dev = std::max(dev, std::abs(norm(p - c0) - cfg.scenario.radius));
        suites.push_back(judged("stationarity", dev / cfg.scenario.radius, tol.stationarity));
    }

    if (r.audit) {
        const auto& s = r.audit->summary;
        const auto& t = r.audit->tolerances;
        suites.push_back(flag("energy_budget", s.budget_pass, s.median_relative_violation, t.budget_median,
                              "max " + std::to_string(s.max_relative_violation)));
        suites.push_back(flag("dissipation_cross_form", s.cross_form_pass, s.median_cross_form_gap,
                              t.cross_form_median));
        suites.push_back(flag("dissipation_positive", s.positivity_pass, s.min_dissipation_boundary, 0.0));
        suites.push_back(flag("energy_monotone", s.monotone_pass, static_cast<double>(s.energy_band_violations), 0.0));
    } else {
        suites.push_back(skipped("energy_budget", "fewer than three history rows"));
    }

    if (r.weak_form.empty()) {
        suites.push_back(skipped("weak_form", "weak-form audit disabled"));
    } else {
        double worst = 0.0;
        for (const auto& [t, v] : r.weak_form) worst = std::max(worst, v);
        suites.push_back(judged("weak_form", worst, tol.weak_form));
    }
}

}  // namespace

bool RunResult::pass() const {
    if (halted) return false;
    return std::none_of(suites.begin(), suites.end(), [](const SuiteResult& s) { return s.status == SuiteStatus::Fail; });
}

const SuiteResult* RunResult::suite(const std::string& name) const {
    for (const auto& s : suites)
        if (s.name == name) return &s;
    return nullptr;
}

SimState build_initial_state(const RunConfig& config) {
    const auto& s = config.scenario;
    const std::size_t n = config.markers;
    Curve curve;
    switch (s.kind) {
        case ScenarioKind::Circle: curve = circle_curve(s.radius, n); break;
        case ScenarioKind::Ellipse: curve = ellipse_curve(s.a, s.b, n); break;
        case ScenarioKind::Star: curve = star_curve(s.radius, s.amplitude, s.mode, n); break;
        case ScenarioKind::Dumbbell: curve = dumbbell_curve(s.dumbbell, n); break;
        case ScenarioKind::File: {
            curve = read_curve(s.file).curve;
            if (curve.orientation == Orientation::Clockwise) {
                std::reverse(curve.points.begin(), curve.points.end());
                curve.orientation = Orientation::CounterClockwise;
            }
            if (auto hit = find_self_intersection(curve))
                throw ConfigError("scenario.file: curve self-intersects at edges " + std::to_string(hit->edge_a) +
                                  " and " + std::to_string(hit->edge_b));
            break;
        }
    }
    if (s.kind != ScenarioKind::Dumbbell) curve = redistribute(curve, n);
    SimState state;
    state.curve = std::move(curve);
    state.config_hash = config_hash(config);
    return state;
}

double resolve_box(const RunConfig& config, const Curve& curve) {
    return config.box > 0.0 ? config.box : config.box_factor * extent(curve);
}

PlanPtr build_plan(const RunConfig& config, const Curve& curve) {
    const double box = resolve_box(config, curve);
    auto plan = make_plan(config.grid, box);
    const double h = plan->spacing();
    if (max_spacing(curve) > h)
        throw ConfigError("resolution: marker spacing " + std::to_string(max_spacing(curve)) +
                          " exceeds grid spacing " + std::to_string(h) + "; raise markers.N or lower grid.M");
    try {
        require_inside(*plan, config.kernel, curve.points);
    } catch (const DomainFitError& e) {
        throw ConfigError(std::string("domain: ") + e.what() + "; enlarge grid.L");
    }
    return plan;
}

std::vector<HistoryRow> closed_history(const RunResult& r) {
    std::vector<HistoryRow> rows = r.state.history;
    try {
        auto plan = build_plan(r.config, r.state.curve);
        VelocityPipeline pipeline(plan, r.config.kernel, r.config.line_tension);
        const auto e = pipeline.evaluate(r.state.curve);
        if (rows.empty() || rows.back().t < r.state.time)
            rows.push_back({r.state.time, e.energy, e.geom.area, e.dissipation_boundary, e.dissipation_line, 0.0});
    } catch (const Error&) {
        // final state not evaluable (halted run); history stays open
    }
    return rows;
}

std::string summary_json(const RunResult& r) {
    nlohmann::json j;
    j["status"] = r.halted ? "halted" : "completed";
    if (r.halted) j["halt_reason"] = r.halt_reason;
    j["scenario"] = to_string(r.config.scenario.kind);
    j["config_hash"] = r.state.config_hash;
    j["steps"] = r.state.step;
    j["final_time"] = r.state.time;
    j["markers"] = r.state.curve.size();
    j["grid"] = r.config.grid;
    j["box"] = r.config.box;
    j["stiffness"] = r.config.control.stiffness;
    j["stable_dt"] = stable_dt(r.config.control);
    j["initial_isoperimetric_ratio"] = isoperimetric_ratio(r.initial);
    try {
        j["final_isoperimetric_ratio"] = isoperimetric_ratio(r.state.curve);
    } catch (const Error&) {
        j["final_isoperimetric_ratio"] = nullptr;
    }
    if (!r.state.history.empty()) {
        j["initial_energy"] = r.state.history.front().energy;
        j["last_energy"] = r.state.history.back().energy;
    }
    auto suites = nlohmann::json::object();
    for (const auto& s : r.suites) {
        nlohmann::json e{{"status", to_string(s.status)}, {"measured", s.measured}, {"tolerance", s.tolerance}};
        if (!s.note.empty()) e["note"] = s.note;
        suites[s.name] = e;
    }
    j["suites"] = suites;
    j["pass"] = r.pass();
    return j.dump(2);
}

RunResult run(const RunConfig& config, const RunOptions& options) {
    RunResult r;
    r.config = config;
    r.initial = build_initial_state(config).curve;
    r.config.box = resolve_box(config, r.initial);
    const auto hash = config_hash(r.config);
    SimState state;
    if (options.resume_dir) {
        state = read_checkpoint(*options.resume_dir);
        if (state.config_hash != hash)
            throw ConfigError("resume: checkpoint was written with a different configuration");
    } else {
        state.curve = r.initial;
        state.config_hash = hash;
    }
    auto plan = build_plan(r.config, state.curve);
    VelocityPipeline pipeline(plan, config.kernel, config.line_tension);
    StepControl base_control = config.control;
    if (!(base_control.stiffness > 0.0)) base_control.stiffness = estimate_stiffness(pipeline, r.initial);
    r.config.control.stiffness = base_control.stiffness;
    if (!base_control.adaptive && base_control.dt > stable_dt(base_control))
        throw ConfigError("time.dt: " + std::to_string(base_control.dt) + " exceeds the explicit stability limit " +
                          std::to_string(stable_dt(base_control)));

    const bool write = !config.output_dir.empty();
    const fs::path out = config.output_dir;
    std::size_t snapshot_index = 0;
    double next_snapshot = state.time;
    double last_snapshot = -INFINITY;
    if (write) {
        fs::create_directories(out / "snapshots");
        write_text(out / "config.toml", to_toml(r.config));
        write_curve((out / "curve_initial.csv").string(), r.initial, 0.0);
    }
    auto snapshot = [&](const SimState& s) {
        if (!write) return;
        write_curve((out / "snapshots" / snapshot_name(snapshot_index++)).string(), s.curve, s.time);
        last_snapshot = s.time;
    };
    if (config.snapshot_interval > 0.0) {
        snapshot(state);
        next_snapshot = state.time + config.snapshot_interval;
    }

    std::vector<PlaneField> test_fields;
    if (config.audit_every > 0) test_fields = random_solenoidal_fields(plan, config.audit_fields, config.seed);
    const bool dumbbell = config.scenario.kind == ScenarioKind::Dumbbell;

    auto done = [&](const SimState& s) {
        if (s.step >= config.control.max_steps) return true;
        if (config.t_end > 0.0 && s.time >= config.t_end) return true;
        if (config.target_isoperimetric > 0.0 && isoperimetric_ratio(s.curve) <= config.target_isoperimetric)
            return true;
        return false;
    };

    try {
        while (!done(state)) {
            if (dumbbell) r.neck.emplace_back(state.time, neck_width(state.curve));
            if (config.audit_every > 0 && state.step % config.audit_every == 0) {
                const auto e = pipeline.evaluate(state.curve);
                const auto stats =
                    weak_form_batch(e.grid_velocity, e.geom, state.curve, test_fields, config.kernel,
                                    config.line_tension);
                r.weak_form.emplace_back(state.time, stats.max_abs);
            }
            StepControl control = base_control;
            if (config.t_end > 0.0) {
                // land on t_end exactly
                const double remaining = config.t_end - state.time;
                if (!control.adaptive) control.dt = std::min(control.dt, remaining);
                else control.dt_max = std::min(control.dt_max, std::max(remaining, control.dt_min));
            }
            state = step(state, control, pipeline);
            if (config.snapshot_interval > 0.0 && state.time >= next_snapshot - 1e-12) {
                snapshot(state);
                while (next_snapshot <= state.time + 1e-12) next_snapshot += config.snapshot_interval;
            }
            if (options.log && options.log_every > 0 && state.step % options.log_every == 0) {
                const auto& h = state.history.back();
                char buf[160];
                std::snprintf(buf, sizeof buf, "step %zu  t=%.6g  E=%.10g  A=%.10g  D=%.4g  dt=%.3g\n", state.step,
                              state.time, h.energy, h.area, h.dissipation_boundary, h.dt);
                *options.log << buf << std::flush;
            }
        }
        if (dumbbell) r.neck.emplace_back(state.time, neck_width(state.curve));
    } catch (const SimulationHalt& e) {
        r.halted = true;
        r.halt_reason = e.what();
        if (write) write_checkpoint((out / "halt").string(), e.state());
        state = e.state();
    } catch (const Error& e) {
        r.halted = true;
        r.halt_reason = e.what();
        if (write) write_checkpoint((out / "halt").string(), state);
    }
    r.state = std::move(state);

    const auto rows = closed_history(r);
    try {
        r.audit = energy_budget(rows, config.checks.audit);
        attach_weak_form(*r.audit, r.weak_form);
    } catch (const AuditInsufficient&) {
        r.audit.reset();
    }
    evaluate_suites(r);

    if (write) {
        write_history((out / "history.csv").string(), rows);
        write_curve((out / "curve_final.csv").string(), r.state.curve, r.state.time);
        if (config.snapshot_interval > 0.0 && r.state.time > last_snapshot) snapshot(r.state);
        if (r.audit) {
            write_text(out / "audit.json", to_json(*r.audit));
            std::ofstream csv(out / "audit.csv");
            write_audit_csv(csv, *r.audit);
        }
        if (!r.halted) write_checkpoint((out / "checkpoint").string(), r.state);
        if (dumbbell) {
            std::ofstream neck(out / "neck.csv");
            neck << "t,width\n";
            char buf[64];
            for (const auto& [t, w] : r.neck) {
                std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", t, w);
                neck << buf;
            }
        }
        write_text(out / "summary.json", summary_json(r));
    }
    return r;
}

std::vector<SweepEntry> sweep(const std::vector<std::pair<std::string, RunConfig>>& configs, unsigned jobs) {
    jobs = std::max(1u, jobs);
    std::vector<SweepEntry> entries(configs.size());
    for (std::size_t first = 0; first < configs.size(); first += jobs) {
        const std::size_t last = std::min(configs.size(), first + jobs);
        std::vector<std::future<void>> batch;
        for (std::size_t i = first; i < last; ++i) {
            batch.push_back(std::async(std::launch::async, [&, i] {
                entries[i].label = configs[i].first;
                try {
                    entries[i].result = run(configs[i].second);
                } catch (const std::exception& e) {
                    entries[i].error = e.what();
                }
            }));
        }
        for (auto& f : batch) f.get();
    }
    return entries;
}

AuditReport audit_history(const std::string& path, const AuditTolerances& tolerances) {
    return energy_budget(read_history(path), tolerances);
}

}  // namespace illss
