// yflow — conformally hyperbolic Yamabe flow laboratory.
//
//   yflow run --config scenario.json [--out DIR] [--quiet]
//   yflow verify --suite <lemma1|lemma3|lemma4|lemma5|lemma6|lemma7|
//                         rigidity|theorem1|fastdiff|all> [--quiet]
//   yflow constants --m <int>
//
// Exit codes: 0 all checks pass, 1 a check failed, 2 usage or config error.

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "yflow/barriers.hpp"
#include "yflow/scenario.hpp"
#include "yflow/suites.hpp"

namespace {

void print_records(const std::vector<yflow::CheckRecord>& records, bool quiet) {
    if (quiet) return;
    for (const auto& r : records)
        std::printf("[%s] %-28s violation=%12.5e tol=%9.2e  (%s)\n",
                    r.pass ? " ok " : "FAIL", r.id.c_str(), r.violation, r.tolerance,
                    r.anchor.c_str());
}

bool all_pass(const std::vector<yflow::CheckRecord>& records) {
    for (const auto& r : records)
        if (!r.pass) return false;
    return true;
}

int cmd_run(const std::string& config_path, std::string out_dir, bool quiet) {
    yflow::ScenarioConfig cfg;
    try {
        cfg = yflow::ScenarioConfig::from_file(config_path);
    } catch (const std::runtime_error& e) {
        std::fprintf(stderr, "invalid config: %s\n", e.what());
        return 2;
    }

    if (out_dir.empty()) {
        const char* env = std::getenv("YFLOW_OUT_DIR");
        out_dir = env ? env : ".";
    }

    yflow::RunResult res = yflow::run_scenario(cfg);
    print_records(res.report.checks, quiet);

    const std::string base = out_dir + "/" + cfg.name;
    try {
        if (res.exhaustion) {
            for (std::size_t i = 0; i < res.exhaustion->trajectories.size(); ++i) {
                const auto& t = res.exhaustion->trajectories[i];
                char k_tag[32];
                std::snprintf(k_tag, sizeof k_tag, "%g", res.exhaustion->radii[i]);
                yflow::emit_csv(t, base + "_k" + k_tag + ".csv");
            }
            yflow::emit_csv(res.exhaustion->limit, base + "_limit.csv");
        } else if (res.trajectory) {
            yflow::emit_csv(*res.trajectory, base + ".csv");
        }
        yflow::emit_report(res.report, base + "_report.json");
    } catch (const std::runtime_error& e) {
        std::fprintf(stderr, "output failure: %s\n", e.what());
        return 1;
    }

    if (!quiet)
        std::printf("%s: %s (%.2f s), outputs in %s\n", cfg.name.c_str(),
                    res.report.pass ? "pass" : "fail", res.wall_seconds, out_dir.c_str());
    return res.report.pass ? 0 : 1;
}

int cmd_verify(const std::string& suite, bool quiet) {
    std::vector<std::string> selected;
    if (suite == "all")
        selected = yflow::suite_names();
    else
        selected.push_back(suite);

    bool ok = true;
    for (const std::string& name : selected) {
        std::vector<yflow::CheckRecord> records;
        try {
            records = yflow::run_suite(name);
        } catch (const yflow::config_error& e) {
            std::fprintf(stderr, "%s\n", e.what());
            return 2;
        }
        if (!quiet) std::printf("suite %s:\n", name.c_str());
        print_records(records, quiet);
        ok = ok && all_pass(records);
    }
    if (!quiet) std::printf("verify: %s\n", ok ? "pass" : "fail");
    return ok ? 0 : 1;
}

int cmd_constants(int m) {
    yflow::Dimension dim(m);
    const double lambda =
        yflow::profile_lambda(1.0 / dim.eta(), (m - 1.0) / std::tanh(1.0));
    const double C_m = yflow::lower_bound_rate(dim);
    const auto phi = yflow::CutoffProfile::smoothstep_power(4.0, 4.0);
    const double c_m = yflow::cutoff_drift_constant(phi, yflow::RadialGrid(4.0, 4000), dim);
    std::printf("eta=%.17g\n", dim.eta());
    std::printf("m(m-1)=%d\n", m * (m - 1));
    std::printf("lambda=%.17g\n", lambda);
    std::printf("C_m=%.17g\n", C_m);
    std::printf("c_m=%.17g\n", c_m);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"conformally hyperbolic Yamabe flow laboratory"};
    app.require_subcommand(1);
    bool quiet = false;
    app.add_flag("--quiet", quiet, "suppress per-check lines");

    auto* run = app.add_subcommand("run", "run a scenario config");
    std::string config_path, out_dir;
    run->add_option("--config", config_path, "scenario JSON file")->required();
    run->add_option("--out", out_dir, "output directory (default $YFLOW_OUT_DIR or .)");

    auto* verify = app.add_subcommand("verify", "run a built-in verification suite");
    std::string suite;
    verify->add_option("--suite", suite, "suite name or 'all'")
        ->required()
        ->check(CLI::IsMember({"lemma1", "lemma3", "lemma4", "lemma5", "lemma6", "lemma7",
                               "rigidity", "theorem1", "fastdiff", "all"}));

    auto* constants = app.add_subcommand("constants", "print the explicit constants");
    int m = 3;
    constants->add_option("--m", m, "dimension (>= 3)")->required()->check(CLI::Range(3, 64));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        // CLI11 prints its own message; map every usage problem to exit 2.
        app.exit(e);
        return 2;
    }

    try {
        if (run->parsed()) return cmd_run(config_path, out_dir, quiet);
        if (verify->parsed()) return cmd_verify(suite, quiet);
        if (constants->parsed()) return cmd_constants(m);
    } catch (const std::runtime_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
