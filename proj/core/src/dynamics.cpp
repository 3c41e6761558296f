#include "illss/dynamics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include <json.hpp>

#include "fft.hpp"
#include "illss/solver.hpp"

namespace illss {

Scheme parse_scheme(const std::string& name) {
    if (name == "rk4") return Scheme::RK4;
    if (name == "euler") return Scheme::Euler;
    throw ConfigError("unknown time scheme '" + name + "' (expected rk4 or euler)");
}

std::string to_string(Scheme scheme) { return scheme == Scheme::RK4 ? "rk4" : "euler"; }

void StepControl::validate() const {
    if (!(dt > 0.0)) throw ConfigError("time.dt must be positive");
    if (!(cfl > 0.0 && cfl <= 1.0)) throw ConfigError("time.cfl must lie in (0, 1]");
    if (!(dt_min > 0.0) || !(dt_max >= dt_min)) throw ConfigError("time.dt_min/dt_max must satisfy 0 < dt_min <= dt_max");
    if (!(velocity_floor >= 0.0)) throw ConfigError("time.velocity_floor must be non-negative");
    if (!(stability_safety > 0.0 && stability_safety <= 1.0))
        throw ConfigError("time.stability_safety must lie in (0, 1]");
}

VelocityPipeline::VelocityPipeline(PlanPtr plan, SpreadingKernel kernel, double line_tension)
    : plan_(std::move(plan)), kernel_(kernel), line_tension_(line_tension) {}

VelocityPipeline::Evaluation VelocityPipeline::evaluate(const Curve& curve) const {
    Evaluation e{geometry(curve), PlaneField::vector(plan_), {}, 0.0, 0.0, 0.0};
    const auto force = spread_line_tension(curve, e.geom, plan_, kernel_, line_tension_);
    e.grid_velocity = surface_velocity(force);
    e.marker_velocity = interpolate_velocity(e.grid_velocity, curve, kernel_);
    e.energy = line_tension_ * e.geom.perimeter;
    e.dissipation_boundary = dissipation_boundary_form(e.grid_velocity);
    e.dissipation_line = line_tension_ * dissipation_line_form(e.geom, e.marker_velocity);
    return e;
}

std::vector<Vec2> VelocityPipeline::marker_velocity(const Curve& curve) const {
    const auto geom = geometry(curve);
    const auto force = spread_line_tension(curve, geom, plan_, kernel_, line_tension_);
    return interpolate_velocity(surface_velocity(force), curve, kernel_);
}

double adaptive_dt(std::span<const Vec2> marker_velocities, const CurveGeometry& geom,
                   const StepControl& control) {
    double vmax = 0.0;
    for (const auto& v : marker_velocities) {
        const double s = norm(v);
        if (!std::isfinite(s)) throw NumericFailure("non-finite marker velocity");
        vmax = std::max(vmax, s);
    }
    const double limit = stable_dt(control);
    if (vmax <= control.velocity_floor) return std::min(control.dt_max, limit);
    const double h = *std::min_element(geom.arc_weight.begin(), geom.arc_weight.end());
    return std::min(std::clamp(control.cfl * h / vmax, control.dt_min, control.dt_max), limit);
}

double stable_dt(const StepControl& control) {
    if (!(control.stiffness > 0.0)) return INFINITY;
    const double interval = control.scheme == Scheme::RK4 ? 2.785 : 2.0;
    return control.stability_safety * interval / control.stiffness;
}

double estimate_stiffness(const VelocityPipeline& pipeline, const Curve& curve, std::size_t iterations,
                          std::uint64_t seed) {
    const std::size_t n = curve.size();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    std::vector<Vec2> v(n);
    for (auto& p : v) p = {gauss(rng), gauss(rng)};
    auto normalize = [](std::vector<Vec2>& x) {
        double s = 0.0;
        for (const auto& p : x) s += dot(p, p);
        s = std::sqrt(s);
        for (auto& p : x) p = (1.0 / s) * p;
        return s;
    };
    normalize(v);
    // perturbation well inside the linear range, a small fraction of the grid spacing
    const double eps = 1e-6 * pipeline.plan()->spacing() * std::sqrt(static_cast<double>(n));
    double rho = 0.0;
    for (std::size_t it = 0; it < iterations; ++it) {
        Curve plus = curve, minus = curve;
        for (std::size_t k = 0; k < n; ++k) {
            plus.points[k] += eps * v[k];
            minus.points[k] -= eps * v[k];
        }
        const auto up = pipeline.marker_velocity(plus);
        const auto dn = pipeline.marker_velocity(minus);
        for (std::size_t k = 0; k < n; ++k) v[k] = (0.5 / eps) * (up[k] - dn[k]);
        rho = normalize(v);
    }
    return rho;
}

namespace {

Curve displaced(const Curve& c, std::span<const Vec2> v, double tau) {
    Curve out = c;
    for (std::size_t k = 0; k < out.points.size(); ++k) out.points[k] += tau * v[k];
    return out;
}

// Arc length S(theta) along a trigonometric speed profile.
class ArcLength {
public:
    explicit ArcLength(std::span<const double> speed) {
        const std::size_t n = speed.size();
        std::vector<detail::cplx> c(n / 2 + 1);
        detail::rfft(speed, c);
        const double nn = static_cast<double>(n);
        mean_ = c[0].real() / nn;
        const std::size_t kmax = (n % 2 == 0) ? n / 2 - 1 : n / 2;  // Nyquist does not integrate
        a_.resize(kmax + 1);
        b_.resize(kmax + 1);
        for (std::size_t k = 1; k <= kmax; ++k) {
            a_[k] = 2.0 * c[k].real() / nn;
            b_[k] = -2.0 * c[k].imag() / nn;
        }
    }

    double total() const { return 2.0 * std::numbers::pi * mean_; }

    // Arc length and speed at theta.
    std::pair<double, double> eval(double theta) const {
        double s = mean_ * theta;
        double v = mean_;
        const std::complex<double> step(std::cos(theta), std::sin(theta));
        std::complex<double> e = 1.0;
        for (std::size_t k = 1; k < a_.size(); ++k) {
            e *= step;
            const double kk = static_cast<double>(k);
            s += (a_[k] * e.imag() - b_[k] * (e.real() - 1.0)) / kk;
            v += a_[k] * e.real() + b_[k] * e.imag();
        }
        return {s, v};
    }

private:
    double mean_ = 0.0;
    std::vector<double> a_, b_;
};

}  // namespace

Curve redistribute(const Curve& curve, std::optional<std::size_t> markers) {
    const std::size_t n = curve.size();
    const std::size_t target = markers.value_or(n);
    if (target < Curve::kMinMarkers) throw PreconditionError("redistribution target below minimum marker count");

    std::vector<double> x(n), y(n);
    for (std::size_t k = 0; k < n; ++k) {
        x[k] = curve.points[k].x;
        y[k] = curve.points[k].y;
    }
    const auto dx = detail::periodic_derivative(x, 1);
    const auto dy = detail::periodic_derivative(y, 1);
    std::vector<double> speed(n);
    for (std::size_t k = 0; k < n; ++k) {
        speed[k] = std::hypot(dx[k], dy[k]);
        if (!(speed[k] > 0.0) || !std::isfinite(speed[k]))
            throw NumericFailure("redistribution: degenerate parametrization at marker " + std::to_string(k));
    }
    const ArcLength arc(speed);
    const CurveInterpolant interp(curve);
    const double total = arc.total();
    const double two_pi = 2.0 * std::numbers::pi;

    Curve out;
    out.orientation = curve.orientation;
    out.points.resize(target);
    out.points[0] = curve.points[0];
    double theta = 0.0;
    for (std::size_t j = 1; j < target; ++j) {
        const double s_target = total * static_cast<double>(j) / static_cast<double>(target);
        double lo = theta, hi = two_pi;
        {
            const auto [s0, v0] = arc.eval(theta);
            theta += (s_target - s0) / std::max(v0, 1e-300);
        }
        bool converged = false;
        for (int it = 0; it < 60; ++it) {
            if (!(theta > lo && theta < hi)) theta = 0.5 * (lo + hi);
            const auto [s, sp] = arc.eval(theta);
            const double r = s - s_target;
            if (r > 0.0) hi = theta; else lo = theta;
            const double next = sp > 0.0 ? theta - r / sp : 0.5 * (lo + hi);
            if (std::abs(next - theta) <= 1e-14 * two_pi || std::abs(r) <= 1e-15 * total) {
                theta = next;
                converged = true;
                break;
            }
            theta = next;
        }
        if (!converged || !std::isfinite(theta))
            throw NumericFailure("redistribution: arc-length inversion failed at marker " + std::to_string(j));
        out.points[j] = interp.position(theta);
    }
    return out;
}

SimState step(const SimState& state, const StepControl& control, const VelocityPipeline& pipeline) {
    const auto start = pipeline.evaluate(state.curve);
    const double dt = control.adaptive ? adaptive_dt(start.marker_velocity, start.geom, control) : control.dt;

    SimState next = state;
    next.history.push_back({state.time, start.energy, start.geom.area, start.dissipation_boundary,
                            start.dissipation_line, dt});

    const auto& k1 = start.marker_velocity;
    Curve advanced;
    try {
        if (control.scheme == Scheme::Euler) {
            advanced = displaced(state.curve, k1, dt);
        } else {
            const auto k2 = pipeline.marker_velocity(displaced(state.curve, k1, 0.5 * dt));
            const auto k3 = pipeline.marker_velocity(displaced(state.curve, k2, 0.5 * dt));
            const auto k4 = pipeline.marker_velocity(displaced(state.curve, k3, dt));
            advanced = state.curve;
            for (std::size_t k = 0; k < advanced.points.size(); ++k)
                advanced.points[k] += (dt / 6.0) * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]);
        }
    } catch (const GeometryError& e) {
        throw SimulationHalt(std::string("intermediate stage failed: ") + e.what(), next);
    }
    for (const auto& p : advanced.points)
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw NumericFailure("non-finite marker position after step");

    next.curve = std::move(advanced);
    next.time = state.time + dt;
    next.step = state.step + 1;

    if (control.intersection_check_every > 0 && next.step % control.intersection_check_every == 0) {
        if (auto hit = find_self_intersection(next.curve))
            throw SimulationHalt("self-intersection between edges " + std::to_string(hit->edge_a) + " and " +
                                     std::to_string(hit->edge_b) + " at step " + std::to_string(next.step),
                                 next);
    }

    std::optional<std::size_t> target;
    if (control.marker_spacing_limit > 0.0) {
        const double per = perimeter(next.curve);
        const double n = static_cast<double>(next.curve.size());
        if (per / n > control.marker_spacing_limit) {
            auto want = static_cast<std::size_t>(std::ceil(per / (0.75 * control.marker_spacing_limit)));
            target = want + (want % 2);
        }
    }
    if (target || (control.redistribute_ratio > 0.0 && spacing_ratio(next.curve) > control.redistribute_ratio)) {
        try {
            next.curve = redistribute(next.curve, target);
        } catch (const NumericFailure& e) {
            throw SimulationHalt(e.what(), next);
        }
    }
    return next;
}

namespace {

std::string fmt17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double to_double(std::string_view s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) throw IoError("malformed number '" + std::string(s) + "'");
    return v;
}

constexpr const char* kHistoryHeader = "t,E,A,D_boundary,D_line,dt";

}  // namespace

void write_history(std::ostream& os, std::span<const HistoryRow> rows) {
    os << kHistoryHeader << '\n';
    for (const auto& r : rows)
        os << fmt17(r.t) << ',' << fmt17(r.energy) << ',' << fmt17(r.area) << ',' << fmt17(r.dissipation_boundary)
           << ',' << fmt17(r.dissipation_line) << ',' << fmt17(r.dt) << '\n';
}

void write_history(const std::string& path, std::span<const HistoryRow> rows) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open " + path);
    write_history(os, rows);
}

std::vector<HistoryRow> read_history(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != kHistoryHeader)
        throw IoError(std::string("history must start with '") + kHistoryHeader + "'");
    std::vector<HistoryRow> rows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::array<double, 6> v{};
        std::size_t pos = 0;
        for (std::size_t k = 0; k < 6; ++k) {
            const auto comma = line.find(',', pos);
            const auto end = comma == std::string::npos ? line.size() : comma;
            if (pos > line.size() || (k < 5 && comma == std::string::npos))
                throw IoError("history row has fewer than 6 columns: " + line);
            v[k] = to_double(std::string_view(line).substr(pos, end - pos));
            pos = end + 1;
        }
        rows.push_back({v[0], v[1], v[2], v[3], v[4], v[5]});
    }
    return rows;
}

std::vector<HistoryRow> read_history(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open " + path);
    return read_history(is);
}

void write_checkpoint(const std::string& dir, const SimState& state) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    write_curve((fs::path(dir) / "curve.csv").string(), state.curve, state.time);
    write_history((fs::path(dir) / "history.csv").string(), state.history);
    nlohmann::json meta{{"time", state.time}, {"step", state.step}, {"config_hash", state.config_hash}};
    std::ofstream os(fs::path(dir) / "state.json");
    if (!os) throw IoError("cannot write checkpoint metadata in " + dir);
    os << meta.dump(2) << '\n';
}

SimState read_checkpoint(const std::string& dir) {
    namespace fs = std::filesystem;
    SimState s;
    auto cf = read_curve((fs::path(dir) / "curve.csv").string());
    s.curve = std::move(cf.curve);
    s.history = read_history((fs::path(dir) / "history.csv").string());
    std::ifstream is(fs::path(dir) / "state.json");
    if (!is) throw IoError("missing state.json in " + dir);
    const auto meta = nlohmann::json::parse(is);
    s.time = meta.at("time").get<double>();
    s.step = meta.at("step").get<std::size_t>();
    s.config_hash = meta.at("config_hash").get<std::uint64_t>();
    return s;
}

}  // namespace illss
