#include <cstdio>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "illss/config.hpp"
#include "illss/error.hpp"
#include "illss/halfspace.hpp"
#include "illss/runner.hpp"

namespace {

void print_suites(const illss::RunResult& r) {
    for (const auto& s : r.suites) {
        const char* status = s.status == illss::SuiteStatus::Pass   ? "PASS"
                             : s.status == illss::SuiteStatus::Fail ? "FAIL"
                                                                    : "SKIP";
        std::printf("  %-24s %s  measured=%.3e  tol=%.3e%s%s\n", s.name.c_str(), status, s.measured, s.tolerance,
                    s.note.empty() ? "" : "  ", s.note.c_str());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Line-tension-driven interface dynamics on a Stokesian subfluid"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    std::string resume_dir;
    std::size_t log_every = 100;
    auto* run_cmd = app.add_subcommand("run", "Run one configuration and write its artifacts");
    run_cmd->add_option("config", config_path, "TOML configuration")->required()->check(CLI::ExistingFile);
    run_cmd->add_option("--set", overrides, "Override a configuration key, e.g. --set grid.M=512");
    run_cmd->add_option("--resume", resume_dir, "Continue from a checkpoint directory")->check(CLI::ExistingDirectory);
    run_cmd->add_option("--log-every", log_every, "Progress line cadence in steps (0 silences)");

    illss::VerifyOptions verify_options;
    std::string verify_out;
    auto* verify_cmd = app.add_subcommand("verify", "Spectral-operator and half-space checks (no dynamics)");
    verify_cmd->add_option("--grid", verify_options.grid, "Grid size of the operator checks");
    verify_cmd->add_option("--halfspace-grid", verify_options.halfspace_grid, "Grid size of the half-space checks");
    verify_cmd->add_option("--box", verify_options.box, "Box side");
    verify_cmd->add_option("--seed", verify_options.seed, "Random seed");
    verify_cmd->add_option("--json", verify_out, "Also write the records to this file");

    std::vector<std::string> sweep_paths;
    unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
    auto* sweep_cmd = app.add_subcommand("sweep", "Run independent configurations concurrently");
    sweep_cmd->add_option("configs", sweep_paths, "TOML configurations")->required()->check(CLI::ExistingFile);
    sweep_cmd->add_option("--set", overrides, "Override applied to every configuration");
    sweep_cmd->add_option("-j,--jobs", jobs, "Concurrent runs");

    std::string history_path;
    illss::AuditTolerances audit_tol;
    auto* audit_cmd = app.add_subcommand("audit", "Energy-budget audit of a history CSV");
    audit_cmd->add_option("history", history_path, "history.csv from a run")->required()->check(CLI::ExistingFile);
    audit_cmd->add_option("--budget-median", audit_tol.budget_median);
    audit_cmd->add_option("--budget-max", audit_tol.budget_max);
    audit_cmd->add_option("--cross-form-median", audit_tol.cross_form_median);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) {
            const auto config = illss::load_config(config_path, overrides);
            illss::RunOptions opts;
            if (!resume_dir.empty()) opts.resume_dir = resume_dir;
            opts.log = log_every ? &std::cerr : nullptr;
            opts.log_every = log_every;
            const auto result = illss::run(config, opts);
            std::printf("%s: %zu steps, t=%.6g, %s\n", illss::to_string(config.scenario.kind).c_str(),
                        result.state.step, result.state.time, result.halted ? "halted" : "completed");
            if (result.halted) std::printf("  halt: %s\n", result.halt_reason.c_str());
            print_suites(result);
            return result.pass() ? 0 : 1;
        }
        if (*verify_cmd) {
            const auto records = illss::run_verification_suite(verify_options);
            bool ok = true;
            for (const auto& r : records) {
                std::printf("%-34s %s  measured=%.3e  tol=%.1e\n", r.check.c_str(), r.passed ? "PASS" : "FAIL",
                            r.measured, r.tolerance);
                ok = ok && r.passed;
            }
            if (!verify_out.empty()) {
                std::ofstream out(verify_out);
                out << illss::to_json(records) << '\n';
            }
            return ok ? 0 : 1;
        }
        if (*sweep_cmd) {
            std::vector<std::pair<std::string, illss::RunConfig>> configs;
            for (const auto& p : sweep_paths) configs.emplace_back(p, illss::load_config(p, overrides));
            const auto entries = illss::sweep(configs, jobs);
            bool ok = true;
            for (const auto& e : entries) {
                if (!e.result) {
                    std::printf("%s: ERROR %s\n", e.label.c_str(), e.error.c_str());
                    ok = false;
                    continue;
                }
                std::printf("%s: %s\n", e.label.c_str(), e.result->pass() ? "PASS" : "FAIL");
                print_suites(*e.result);
                ok = ok && e.result->pass();
            }
            return ok ? 0 : 1;
        }
        if (*audit_cmd) {
            const auto report = illss::audit_history(history_path, audit_tol);
            std::cout << illss::to_json(report) << '\n';
            return report.summary.pass() ? 0 : 1;
        }
    } catch (const illss::ConfigError& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return 2;
    } catch (const illss::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 0;
}
