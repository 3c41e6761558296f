#include "illss/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <toml.hpp>

#include "illss/error.hpp"

namespace illss {

namespace {

const std::set<std::string> kKnownKeys = {
    "seed", "line_tension",
    "scenario.name", "scenario.radius", "scenario.a", "scenario.b", "scenario.amplitude", "scenario.mode",
    "scenario.neck_width", "scenario.neck_length", "scenario.fillet", "scenario.smoothing", "scenario.file",
    "grid.M", "grid.L", "grid.box_factor",
    "markers.N",
    "kernel.family", "kernel.width_scale",
    "time.scheme", "time.dt", "time.adaptive", "time.cfl", "time.dt_min", "time.dt_max", "time.velocity_floor",
    "time.max_steps", "time.t_end", "time.target_isoperimetric", "time.redistribute_ratio",
    "time.marker_spacing_limit", "time.intersection_check_every", "time.stability_safety",
    "output.dir", "output.snapshot_interval", "output.audit_every", "output.audit_fields",
    "checks.area_drift", "checks.stationarity", "checks.weak_form", "checks.turning", "checks.budget_median",
    "checks.budget_max", "checks.cross_form_median", "checks.energy_band", "checks.dissipation_floor",
};

void collect_leaves(const toml::table& t, const std::string& prefix, std::vector<std::string>& out) {
    for (const auto& [k, node] : t) {
        const std::string path = prefix.empty() ? std::string(k.str()) : prefix + "." + std::string(k.str());
        if (const auto* sub = node.as_table()) collect_leaves(*sub, path, out);
        else out.push_back(path);
    }
}

class Reader {
public:
    explicit Reader(const toml::table& root) : root_(root) {}

    void get(const std::string& path, double& out) const {
        auto n = root_.at_path(path);
        if (!n) return;
        if (!n.is_number()) throw ConfigError(path + ": expected a number");
        out = *n.value<double>();
    }
    void get(const std::string& path, std::size_t& out) const {
        auto n = root_.at_path(path);
        if (!n) return;
        const auto v = n.value_exact<std::int64_t>();
        if (!v || *v < 0) throw ConfigError(path + ": expected a non-negative integer");
        out = static_cast<std::size_t>(*v);
    }
    void get(const std::string& path, int& out) const {
        auto n = root_.at_path(path);
        if (!n) return;
        const auto v = n.value_exact<std::int64_t>();
        if (!v) throw ConfigError(path + ": expected an integer");
        out = static_cast<int>(*v);
    }
    void get(const std::string& path, bool& out) const {
        auto n = root_.at_path(path);
        if (!n) return;
        const auto v = n.value_exact<bool>();
        if (!v) throw ConfigError(path + ": expected a boolean");
        out = *v;
    }
    void get(const std::string& path, std::string& out) const {
        auto n = root_.at_path(path);
        if (!n) return;
        const auto v = n.value_exact<std::string>();
        if (!v) throw ConfigError(path + ": expected a string");
        out = *v;
    }

private:
    const toml::table& root_;
};

void apply_override(toml::table& root, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + assignment + "': expected key=value");
    std::string key = assignment.substr(0, eq);
    std::string value = assignment.substr(eq + 1);
    while (!key.empty() && key.back() == ' ') key.pop_back();

    toml::table parsed;
    try {
        parsed = toml::parse("v = " + value);
    } catch (const toml::parse_error&) {
        parsed.insert_or_assign("v", value);  // bare word, taken as a string
    }

    toml::table* t = &root;
    std::size_t start = 0;
    for (auto dot = key.find('.'); dot != std::string::npos; dot = key.find('.', start)) {
        const std::string part = key.substr(start, dot - start);
        auto* node = t->get(part);
        if (!node) node = &t->insert_or_assign(part, toml::table{}).first->second;
        t = node->as_table();
        if (!t) throw ConfigError("override '" + key + "': '" + part + "' is not a table");
        start = dot + 1;
    }
    t->insert_or_assign(key.substr(start), *parsed.get("v"));
}

bool power_of_two(std::size_t n) { return n && (n & (n - 1)) == 0; }

void require(bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
}

}  // namespace

ScenarioKind parse_scenario_kind(const std::string& name) {
    if (name == "circle") return ScenarioKind::Circle;
    if (name == "ellipse") return ScenarioKind::Ellipse;
    if (name == "star") return ScenarioKind::Star;
    if (name == "dumbbell") return ScenarioKind::Dumbbell;
    if (name == "file") return ScenarioKind::File;
    throw ConfigError("scenario.name: unknown scenario '" + name + "'");
}

std::string to_string(ScenarioKind kind) {
    switch (kind) {
        case ScenarioKind::Circle: return "circle";
        case ScenarioKind::Ellipse: return "ellipse";
        case ScenarioKind::Star: return "star";
        case ScenarioKind::Dumbbell: return "dumbbell";
        case ScenarioKind::File: return "file";
    }
    return "circle";
}

RunConfig parse_config(const std::string& toml_text, const std::vector<std::string>& overrides) {
    toml::table root;
    try {
        root = toml::parse(toml_text);
    } catch (const toml::parse_error& e) {
        std::ostringstream os;
        os << "config: " << e.description() << " at line " << e.source().begin.line;
        throw ConfigError(os.str());
    }
    for (const auto& o : overrides) apply_override(root, o);

    std::vector<std::string> leaves;
    collect_leaves(root, "", leaves);
    for (const auto& k : leaves)
        if (!kKnownKeys.count(k)) throw ConfigError(k + ": unknown key");

    RunConfig c;
    Reader r(root);
    r.get("seed", c.seed);
    r.get("line_tension", c.line_tension);

    std::string name = to_string(c.scenario.kind);
    r.get("scenario.name", name);
    c.scenario.kind = parse_scenario_kind(name);
    r.get("scenario.radius", c.scenario.radius);
    c.scenario.dumbbell.radius = c.scenario.radius;
    r.get("scenario.a", c.scenario.a);
    r.get("scenario.b", c.scenario.b);
    r.get("scenario.amplitude", c.scenario.amplitude);
    r.get("scenario.mode", c.scenario.mode);
    r.get("scenario.neck_width", c.scenario.dumbbell.neck_width);
    r.get("scenario.neck_length", c.scenario.dumbbell.neck_length);
    r.get("scenario.fillet", c.scenario.dumbbell.fillet);
    r.get("scenario.smoothing", c.scenario.dumbbell.smoothing);
    r.get("scenario.file", c.scenario.file);

    r.get("grid.M", c.grid);
    r.get("grid.L", c.box);
    r.get("grid.box_factor", c.box_factor);
    r.get("markers.N", c.markers);

    std::string family = to_string(c.kernel.family);
    r.get("kernel.family", family);
    try {
        c.kernel.family = parse_kernel_family(family);
    } catch (const Error&) {
        throw ConfigError("kernel.family: unknown kernel '" + family + "'");
    }
    r.get("kernel.width_scale", c.kernel.width_scale);

    std::string scheme = to_string(c.control.scheme);
    r.get("time.scheme", scheme);
    try {
        c.control.scheme = parse_scheme(scheme);
    } catch (const Error&) {
        throw ConfigError("time.scheme: unknown scheme '" + scheme + "'");
    }
    r.get("time.dt", c.control.dt);
    r.get("time.adaptive", c.control.adaptive);
    r.get("time.cfl", c.control.cfl);
    r.get("time.dt_min", c.control.dt_min);
    r.get("time.dt_max", c.control.dt_max);
    r.get("time.velocity_floor", c.control.velocity_floor);
    r.get("time.max_steps", c.control.max_steps);
    r.get("time.t_end", c.t_end);
    r.get("time.target_isoperimetric", c.target_isoperimetric);
    r.get("time.redistribute_ratio", c.control.redistribute_ratio);
    r.get("time.marker_spacing_limit", c.control.marker_spacing_limit);
    r.get("time.intersection_check_every", c.control.intersection_check_every);
    r.get("time.stability_safety", c.control.stability_safety);

    r.get("output.dir", c.output_dir);
    r.get("output.snapshot_interval", c.snapshot_interval);
    r.get("output.audit_every", c.audit_every);
    r.get("output.audit_fields", c.audit_fields);

    r.get("checks.area_drift", c.checks.area_drift);
    r.get("checks.stationarity", c.checks.stationarity);
    r.get("checks.weak_form", c.checks.weak_form);
    r.get("checks.turning", c.checks.turning);
    r.get("checks.budget_median", c.checks.audit.budget_median);
    r.get("checks.budget_max", c.checks.audit.budget_max);
    r.get("checks.cross_form_median", c.checks.audit.cross_form_median);
    r.get("checks.energy_band", c.checks.audit.energy_band);
    r.get("checks.dissipation_floor", c.checks.audit.dissipation_floor);

    validate(c);
    return c;
}

RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str(), overrides);
}

void validate(const RunConfig& c) {
    require(c.grid >= 32 && power_of_two(c.grid), "grid.M: must be a power of two, at least 32");
    require(c.box >= 0.0 && std::isfinite(c.box), "grid.L: must be non-negative (0 selects the box automatically)");
    require(c.box_factor > 2.0, "grid.box_factor: must exceed 2");
    require(c.markers >= Curve::kMinMarkers, "markers.N: must be at least 8");
    require(c.kernel.width_scale >= 1.0 && std::isfinite(c.kernel.width_scale),
            "kernel.width_scale: must be at least 1");
    require(c.line_tension > 0.0, "line_tension: must be positive");
    c.control.validate();
    require(c.t_end >= 0.0, "time.t_end: must be non-negative");
    require(c.target_isoperimetric == 0.0 || c.target_isoperimetric >= 1.0,
            "time.target_isoperimetric: must be 0 (off) or at least 1");
    require(c.snapshot_interval >= 0.0, "output.snapshot_interval: must be non-negative");
    require(c.audit_every == 0 || c.audit_fields >= 1, "output.audit_fields: need at least one field when auditing");

    const auto& s = c.scenario;
    require(s.radius > 0.0, "scenario.radius: must be positive");
    switch (s.kind) {
        case ScenarioKind::Ellipse:
            require(s.a > 0.0 && s.b > 0.0, "scenario.a, scenario.b: semi-axes must be positive");
            break;
        case ScenarioKind::Star:
            require(std::abs(s.amplitude) < 1.0, "scenario.amplitude: |eps| must be below 1");
            require(s.mode >= 0, "scenario.mode: must be non-negative");
            break;
        case ScenarioKind::Dumbbell:
            require(s.dumbbell.neck_width > 0.0 && s.dumbbell.neck_width < 2.0 * s.dumbbell.radius,
                    "scenario.neck_width: must lie in (0, 2 radius)");
            require(s.dumbbell.neck_length > 0.0, "scenario.neck_length: must be positive");
            require(s.dumbbell.fillet > 0.0, "scenario.fillet: must be positive");
            require(s.dumbbell.smoothing >= 0.0, "scenario.smoothing: must be non-negative");
            break;
        case ScenarioKind::File:
            require(!s.file.empty(), "scenario.file: required for the file scenario");
            break;
        case ScenarioKind::Circle:
            break;
    }
    const auto& k = c.checks;
    require(k.area_drift > 0.0 && k.stationarity > 0.0 && k.weak_form > 0.0 && k.turning > 0.0,
            "checks: tolerances must be positive");
    require(k.audit.budget_median > 0.0 && k.audit.budget_max > 0.0 && k.audit.cross_form_median > 0.0 &&
                k.audit.energy_band >= 0.0 && k.audit.dissipation_floor >= 0.0,
            "checks: audit tolerances must be positive");
}

std::string to_toml(const RunConfig& c) {
    const auto i64 = [](std::size_t v) { return static_cast<std::int64_t>(v); };
    toml::table scenario{{"name", to_string(c.scenario.kind)}, {"radius", c.scenario.radius}};
    switch (c.scenario.kind) {
        case ScenarioKind::Ellipse:
            scenario.insert("a", c.scenario.a);
            scenario.insert("b", c.scenario.b);
            break;
        case ScenarioKind::Star:
            scenario.insert("amplitude", c.scenario.amplitude);
            scenario.insert("mode", c.scenario.mode);
            break;
        case ScenarioKind::Dumbbell:
            scenario.insert("neck_width", c.scenario.dumbbell.neck_width);
            scenario.insert("neck_length", c.scenario.dumbbell.neck_length);
            scenario.insert("fillet", c.scenario.dumbbell.fillet);
            scenario.insert("smoothing", c.scenario.dumbbell.smoothing);
            break;
        case ScenarioKind::File:
            scenario.insert("file", c.scenario.file);
            break;
        case ScenarioKind::Circle:
            break;
    }
    const auto& t = c.control;
    toml::table root{
        {"seed", static_cast<std::int64_t>(c.seed)},
        {"line_tension", c.line_tension},
        {"scenario", scenario},
        {"grid", toml::table{{"M", i64(c.grid)}, {"L", c.box}, {"box_factor", c.box_factor}}},
        {"markers", toml::table{{"N", i64(c.markers)}}},
        {"kernel", toml::table{{"family", to_string(c.kernel.family)}, {"width_scale", c.kernel.width_scale}}},
        {"time", toml::table{{"scheme", to_string(t.scheme)},
                             {"dt", t.dt},
                             {"adaptive", t.adaptive},
                             {"cfl", t.cfl},
                             {"dt_min", t.dt_min},
                             {"dt_max", t.dt_max},
                             {"velocity_floor", t.velocity_floor},
                             {"max_steps", i64(t.max_steps)},
                             {"t_end", c.t_end},
                             {"target_isoperimetric", c.target_isoperimetric},
                             {"redistribute_ratio", t.redistribute_ratio},
                             {"marker_spacing_limit", t.marker_spacing_limit},
                             {"intersection_check_every", i64(t.intersection_check_every)},
                             {"stability_safety", t.stability_safety}}},
        {"output", toml::table{{"dir", c.output_dir},
                               {"snapshot_interval", c.snapshot_interval},
                               {"audit_every", i64(c.audit_every)},
                               {"audit_fields", i64(c.audit_fields)}}},
        {"checks", toml::table{{"area_drift", c.checks.area_drift},
                               {"stationarity", c.checks.stationarity},
                               {"weak_form", c.checks.weak_form},
                               {"turning", c.checks.turning},
                               {"budget_median", c.checks.audit.budget_median},
                               {"budget_max", c.checks.audit.budget_max},
                               {"cross_form_median", c.checks.audit.cross_form_median},
                               {"energy_band", c.checks.audit.energy_band},
                               {"dissipation_floor", c.checks.audit.dissipation_floor}}},
    };
    std::ostringstream os;
    os << root << '\n';
    return os.str();
}

std::uint64_t config_hash(const RunConfig& config) {
    // where a run stops and what it writes do not change its trajectory
    RunConfig physics = config;
    physics.output_dir.clear();
    physics.snapshot_interval = 0.0;
    physics.control.max_steps = 0;
    physics.t_end = 0.0;
    physics.target_isoperimetric = 0.0;
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : to_toml(physics)) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    return h;
}

}  // namespace illss
