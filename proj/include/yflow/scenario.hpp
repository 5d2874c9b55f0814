// Scenario configuration, check registry, verification reports and data
// export: the user-facing surface behind the CLI.
//
// A scenario is a JSON document selecting dimension, grid, time stepping,
// initial data (constant / euclidean / expression in r) and a list of
// registered checks with optional tolerance overrides. Runs are fully
// deterministic: the same config produces byte-identical CSV and report
// files.
#pragma once

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "yflow/barriers.hpp"
#include "yflow/conformal.hpp"
#include "yflow/expression.hpp"
#include "yflow/flow.hpp"
#include "yflow/grid.hpp"

namespace yflow {

// ---------------------------------------------------------------------------
// Configuration.
// ---------------------------------------------------------------------------

struct GridConfig {
    double r_max = 0.0;
    std::size_t n = 0;
};

struct TimeConfig {
    double horizon = 0.0;
    double dt = 0.0;
    std::vector<double> stamps; // empty -> 11 uniform stamps
};

struct InitialConfig {
    enum class Kind { constant, euclidean, expression };
    Kind kind = Kind::constant;
    double value = 1.0;   // constant
    std::string expr;     // expression
};

struct ExhaustionConfig {
    std::vector<double> k_list;
    double r_obs = 0.0;
};

struct ScenarioCheck {
    std::string id;
    std::optional<double> tolerance;
};

struct CheckRecord {
    std::string id;
    std::string anchor;
    double violation = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct ScenarioConfig {
    std::string name;
    int m = 3;
    GridConfig grid;
    TimeConfig time;
    InitialConfig initial;
    std::optional<ExhaustionConfig> exhaustion;
    std::vector<ScenarioCheck> checks;

    static ScenarioConfig from_json(const nlohmann::json& j);
    static ScenarioConfig from_file(const std::string& path);

    /// The radial profile selected by `initial`.
    std::function<double(double)> initial_profile() const {
        switch (initial.kind) {
            case InitialConfig::Kind::constant: {
                const double c = initial.value;
                return [c](double) { return c; };
            }
            case InitialConfig::Kind::euclidean:
                return [](double r) { return euclidean_factor_at(r); };
            case InitialConfig::Kind::expression: {
                Expression e = Expression::parse(initial.expr);
                return [e](double r) { return e(r); };
            }
        }
        throw config_error("initial.kind: unknown kind");
    }

    /// Radius of the ball the checks run against (largest exhaustion ball,
    /// or the grid extent).
    double effective_ball_radius() const {
        return exhaustion ? exhaustion->k_list.back() : grid.r_max;
    }
};

// ---------------------------------------------------------------------------
// Check registry.
// ---------------------------------------------------------------------------

struct CheckContext {
    const ScenarioConfig& cfg;
    Dimension dim;
    const Trajectory* trajectory;        // largest-k run for exhaustion scenarios
    const ExhaustionResult* exhaustion;  // nullptr for plain runs
};

struct RegisteredCheck {
    std::string anchor;
    double default_tolerance;
    std::function<double(const CheckContext&)> violation;
};

namespace detail {

inline double completeness_violation(const CheckContext& ctx) {
    const double rate = static_cast<double>(ctx.dim.m()) * (ctx.dim.m() - 1);
    double worst = -std::numeric_limits<double>::infinity();
    if (ctx.exhaustion) {
        const FieldSeries& w = ctx.exhaustion->limit;
        for (std::size_t s = 0; s < w.times.size(); ++s)
            for (std::size_t i = 0; i < w.fields[s].size(); ++i)
                worst = std::max(worst, rate * w.times[s] - w.fields[s][i]);
    } else {
        for (const FlowState& st : ctx.trajectory->states)
            for (std::size_t i = 0; i < st.u.size(); ++i)
                worst = std::max(worst, rate * st.t - st.u[i]);
    }
    return worst;
}

inline BarrierParams scenario_barrier(const CheckContext& ctx) {
    const Trajectory& traj = *ctx.trajectory;
    const double r0 = traj.problem.ball_radius() - 2.0;
    const RadialField U0 = to_U(traj.states.front().u, ctx.dim);
    return BarrierParams::for_dimension(ctx.dim, U0.min_on_ball(r0));
}

} // namespace detail

/// Max over interior nodes of the mutual residuals of the four equivalent
/// right-hand sides (u-form, U-form, pressure form, divergence form).
inline double form_equivalence_residual(const ConformalFactor& u, const Dimension& dim) {
    const RadialGrid& g = u.grid();
    const std::size_t n = g.intervals();
    const RadialField R = scalar_curvature(u, dim);
    const RadialField Fu = rhs_u(u, dim);
    const RadialField FU = rhs_U(to_U(u, dim), dim);
    const RadialField Fv = rhs_pressure(pressure(u), dim);
    const RadialField Fdiv = divergence_form_rate(u, dim);
    const double eta = dim.eta();
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) { // one-sided boundary node excluded
        const double ui = u[i];
        worst = std::max(worst, std::abs(Fu[i] + R[i] * ui));
        worst = std::max(worst, std::abs(FU[i] - eta * std::pow(ui, eta - 1.0) * Fu[i]));
        worst = std::max(worst, std::abs(Fv[i] + Fu[i] / (ui * ui)));
        worst = std::max(worst,
                         std::abs((eta + 1.0) * std::pow(ui, eta) * Fu[i] - Fdiv[i]));
    }
    return worst;
}

inline const std::map<std::string, RegisteredCheck>& check_registry() {
    static const std::map<std::string, RegisteredCheck> registry = {
        {"positivity",
         {"u > 0 at every node and stamp", 0.0,
          [](const CheckContext& ctx) {
              double lowest = std::numeric_limits<double>::infinity();
              for (const FlowState& s : ctx.trajectory->states)
                  lowest = std::min(lowest, s.u.field().min());
              return -lowest;
          }}},
        {"rigidity",
         {"u(., t) = u0 + m(m-1) t for constant initial data", 5e-3,
          [](const CheckContext& ctx) {
              const Trajectory& traj = *ctx.trajectory;
              const double c0 = traj.problem.boundary_constant();
              const double rate = static_cast<double>(ctx.dim.m()) * (ctx.dim.m() - 1);
              double worst = 0.0;
              for (const FlowState& s : traj.states) {
                  const double exact = c0 + rate * s.t;
                  for (std::size_t i = 0; i < s.u.size(); ++i)
                      worst = std::max(worst, std::abs(s.u[i] - exact));
              }
              return worst;
          }}},
        {"sandwich",
         {"inf u0 <= u(., t) - m(m-1) t <= sup u0", 5e-3,
          [](const CheckContext& ctx) {
              const SandwichViolations v = sandwich_violations(*ctx.trajectory);
              return std::max(v.lower, v.upper);
          }}},
        {"completeness",
         {"u(., t) >= m(m-1) t", 5e-3, detail::completeness_violation}},
        {"lower_bound",
         {"u(., t) >= inf_{B_r0} u(., 0) - C_m t in B_{r0-1}", 5e-3,
          [](const CheckContext& ctx) {
              const double r0 = ctx.trajectory->problem.ball_radius() - 2.0;
              return lower_bound_violation(*ctx.trajectory, r0, lower_bound_rate(ctx.dim));
          }}},
        {"upper_bound",
         {"u(., t) <= sup_{B_r0} u(., 0) + (m-1)(m+c_m) t in B_{r0-1}", 5e-3,
          [](const CheckContext& ctx) {
              const double r0 = ctx.trajectory->problem.ball_radius() - 2.0;
              const CutoffProfile phi = CutoffProfile::smoothstep_power(r0, 4.0);
              const auto n = static_cast<std::size_t>(std::llround(r0 / 1e-3));
              const double c_m = cutoff_drift_constant(phi, RadialGrid(r0, n), ctx.dim);
              return upper_bound_violation(*ctx.trajectory, r0, c_m);
          }}},
        {"form_equivalence",
         {"u-, U-, pressure- and divergence-form rates agree", 5e-3,
          [](const CheckContext& ctx) {
              return form_equivalence_residual(ctx.trajectory->states.back().u, ctx.dim);
          }}},
        {"barrier_domination",
         {"u^eta >= V on B_1 for t < t0", 5e-3,
          [](const CheckContext& ctx) {
              return flow_barrier_domination_violation(*ctx.trajectory,
                                                       detail::scenario_barrier(ctx));
          }}},
        {"excess_monotone",
         {"J(t) = int (V^{1+1/eta} - U^{1+1/eta})_+ dmu is nonincreasing", 1e-4,
          [](const CheckContext& ctx) {
              const std::vector<double> J =
                  excess_series(*ctx.trajectory, detail::scenario_barrier(ctx));
              double worst = -std::numeric_limits<double>::infinity();
              if (J.size() < 2) return 0.0;
              for (std::size_t j = 0; j + 1 < J.size(); ++j)
                  worst = std::max(worst, J[j + 1] - J[j]);
              return worst;
          }}},
        {"cauchy_decreasing",
         {"window sup-differences d_k decrease in k", 0.0,
          [](const CheckContext& ctx) {
              const std::vector<double>& d = ctx.exhaustion->sup_differences;
              if (d.size() < 2) return 0.0;
              double worst = -std::numeric_limits<double>::infinity();
              for (std::size_t j = 0; j + 1 < d.size(); ++j)
                  worst = std::max(worst, d[j + 1] - d[j]);
              return worst;
          }}},
    };
    return registry;
}

// ---------------------------------------------------------------------------
// Config parsing and validation.
// ---------------------------------------------------------------------------

namespace detail {

[[noreturn]] inline void reject(const std::string& path, const std::string& why) {
    throw config_error(path + ": " + why);
}

inline double need_number(const nlohmann::json& j, const std::string& path) {
    if (!j.is_number()) reject(path, "must be a number");
    return j.get<double>();
}

inline const nlohmann::json& need_object(const nlohmann::json& j, const char* key,
                                         const std::string& path) {
    if (!j.contains(key)) reject(path, "missing");
    if (!j.at(key).is_object()) reject(path, "must be an object");
    return j.at(key);
}

} // namespace detail

inline ScenarioConfig ScenarioConfig::from_json(const nlohmann::json& j) {
    using detail::need_number;
    using detail::need_object;
    using detail::reject;
    ScenarioConfig cfg;

    if (!j.contains("name") || !j.at("name").is_string() ||
        j.at("name").get<std::string>().empty())
        reject("name", "must be a nonempty string");
    cfg.name = j.at("name").get<std::string>();

    if (!j.contains("m") || !j.at("m").is_number_integer()) reject("m", "must be an integer");
    cfg.m = j.at("m").get<int>();
    if (cfg.m < 3) reject("m", "must be >= 3");

    {
        const auto& g = need_object(j, "grid", "grid");
        if (!g.contains("r_max")) reject("grid.r_max", "missing");
        cfg.grid.r_max = need_number(g.at("r_max"), "grid.r_max");
        if (!(cfg.grid.r_max > 0.0)) reject("grid.r_max", "must be > 0");
        if (!g.contains("n") || !g.at("n").is_number_integer()) reject("grid.n", "must be an integer");
        const long long n = g.at("n").get<long long>();
        if (n < 8) reject("grid.n", "must be >= 8");
        cfg.grid.n = static_cast<std::size_t>(n);
    }
    {
        const auto& t = need_object(j, "time", "time");
        if (!t.contains("T")) reject("time.T", "missing");
        cfg.time.horizon = need_number(t.at("T"), "time.T");
        if (!(cfg.time.horizon > 0.0)) reject("time.T", "must be > 0");
        if (!t.contains("dt")) reject("time.dt", "missing");
        cfg.time.dt = need_number(t.at("dt"), "time.dt");
        if (!(cfg.time.dt > 0.0)) reject("time.dt", "must be > 0");
        if (t.contains("output_stamps")) {
            if (!t.at("output_stamps").is_array()) reject("time.output_stamps", "must be an array");
            double prev = -1.0;
            for (std::size_t i = 0; i < t.at("output_stamps").size(); ++i) {
                const double s = need_number(t.at("output_stamps").at(i),
                                             "time.output_stamps[" + std::to_string(i) + "]");
                if (s < 0.0 || s > cfg.time.horizon * (1.0 + 1e-12) || s <= prev)
                    reject("time.output_stamps",
                           "must be strictly increasing within [0, T]");
                prev = s;
                cfg.time.stamps.push_back(s);
            }
        }
    }
    {
        const auto& in = need_object(j, "initial", "initial");
        if (!in.contains("kind") || !in.at("kind").is_string()) reject("initial.kind", "missing");
        const std::string kind = in.at("kind").get<std::string>();
        if (kind == "constant") {
            cfg.initial.kind = InitialConfig::Kind::constant;
            if (!in.contains("value")) reject("initial.value", "missing");
            cfg.initial.value = need_number(in.at("value"), "initial.value");
            if (!(cfg.initial.value > 0.0)) reject("initial.value", "must be > 0");
        } else if (kind == "euclidean") {
            cfg.initial.kind = InitialConfig::Kind::euclidean;
        } else if (kind == "expression") {
            cfg.initial.kind = InitialConfig::Kind::expression;
            if (!in.contains("expr") || !in.at("expr").is_string()) reject("initial.expr", "missing");
            cfg.initial.expr = in.at("expr").get<std::string>();
            try {
                Expression::parse(cfg.initial.expr);
            } catch (const config_error& e) {
                reject("initial.expr", e.what());
            }
        } else {
            reject("initial.kind", "must be constant, euclidean or expression");
        }
    }
    if (j.contains("exhaustion")) {
        const auto& ex = need_object(j, "exhaustion", "exhaustion");
        ExhaustionConfig ec;
        if (!ex.contains("k_list") || !ex.at("k_list").is_array() || ex.at("k_list").empty())
            reject("exhaustion.k_list", "must be a nonempty array");
        for (std::size_t i = 0; i < ex.at("k_list").size(); ++i) {
            const double k = need_number(ex.at("k_list").at(i),
                                         "exhaustion.k_list[" + std::to_string(i) + "]");
            if (!ec.k_list.empty() && k <= ec.k_list.back())
                reject("exhaustion.k_list", "must be strictly increasing");
            ec.k_list.push_back(k);
        }
        if (!ex.contains("r_obs")) reject("exhaustion.r_obs", "missing");
        ec.r_obs = need_number(ex.at("r_obs"), "exhaustion.r_obs");
        if (!(ec.r_obs > 0.0)) reject("exhaustion.r_obs", "must be > 0");
        if (ec.k_list.front() < ec.r_obs + 3.0)
            reject("exhaustion.k_list", "smallest radius must be >= r_obs + 3");
        if (std::abs(ec.k_list.back() - cfg.grid.r_max) > 1e-9 * cfg.grid.r_max)
            reject("grid.r_max", "must equal the largest exhaustion radius");
        cfg.exhaustion = std::move(ec);
    }
    if (j.contains("checks")) {
        if (!j.at("checks").is_array()) reject("checks", "must be an array");
        for (std::size_t i = 0; i < j.at("checks").size(); ++i) {
            const std::string path = "checks[" + std::to_string(i) + "]";
            const auto& c = j.at("checks").at(i);
            if (!c.is_object() || !c.contains("id") || !c.at("id").is_string())
                reject(path + ".id", "missing");
            ScenarioCheck sc;
            sc.id = c.at("id").get<std::string>();
            if (!check_registry().count(sc.id)) reject(path + ".id", "unknown check '" + sc.id + "'");
            if (c.contains("tolerance"))
                sc.tolerance = need_number(c.at("tolerance"), path + ".tolerance");

            if (sc.id == "rigidity" && cfg.initial.kind != InitialConfig::Kind::constant)
                reject(path + ".id", "rigidity requires constant initial data");
            if (sc.id == "cauchy_decreasing" && !cfg.exhaustion)
                reject(path + ".id", "cauchy_decreasing requires an exhaustion block");
            if ((sc.id == "lower_bound" || sc.id == "upper_bound" ||
                 sc.id == "barrier_domination" || sc.id == "excess_monotone") &&
                !(cfg.effective_ball_radius() > 3.0))
                reject(path + ".id", "requires a ball radius > 3");
            cfg.checks.push_back(std::move(sc));
        }
    }
    if (!cfg.exhaustion && !(cfg.grid.r_max > 2.0))
        reject("grid.r_max", "ball radius must exceed 2");
    return cfg;
}

inline ScenarioConfig ScenarioConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw config_error("config: not valid JSON (" + std::string(e.what()) + ")");
    }
    return from_json(j);
}

// ---------------------------------------------------------------------------
// Reports.
// ---------------------------------------------------------------------------

struct VerificationReport {
    std::string scenario;
    bool pass = true;
    std::vector<CheckRecord> checks;
    double h = 0.0;
    double dt = 0.0;
    int halvings = 0;
    std::vector<double> cauchy_differences; // filled for exhaustion runs

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["scenario"] = scenario;
        j["status"] = pass ? "pass" : "fail";
        j["checks"] = nlohmann::ordered_json::array();
        for (const CheckRecord& c : checks) {
            nlohmann::ordered_json cj;
            cj["id"] = c.id;
            cj["anchor"] = c.anchor;
            cj["violation"] = c.violation;
            cj["tolerance"] = c.tolerance;
            cj["pass"] = c.pass;
            j["checks"].push_back(std::move(cj));
        }
        j["solver"]["h"] = h;
        j["solver"]["dt"] = dt;
        j["solver"]["halvings"] = halvings;
        if (!cauchy_differences.empty())
            j["solver"]["cauchy_differences"] = cauchy_differences;
        return j;
    }

    static VerificationReport from_json(const nlohmann::json& j) {
        VerificationReport r;
        r.scenario = j.at("scenario").get<std::string>();
        r.pass = j.at("status").get<std::string>() == "pass";
        for (const auto& cj : j.at("checks")) {
            CheckRecord c;
            c.id = cj.at("id").get<std::string>();
            c.anchor = cj.at("anchor").get<std::string>();
            c.violation = cj.at("violation").get<double>();
            c.tolerance = cj.at("tolerance").get<double>();
            c.pass = cj.at("pass").get<bool>();
            r.checks.push_back(std::move(c));
        }
        r.h = j.at("solver").at("h").get<double>();
        r.dt = j.at("solver").at("dt").get<double>();
        r.halvings = j.at("solver").at("halvings").get<int>();
        if (j.at("solver").contains("cauchy_differences"))
            r.cauchy_differences =
                j.at("solver").at("cauchy_differences").get<std::vector<double>>();
        return r;
    }
};

// ---------------------------------------------------------------------------
// Running.
// ---------------------------------------------------------------------------

struct RunResult {
    std::optional<Trajectory> trajectory;
    std::optional<ExhaustionResult> exhaustion;
    VerificationReport report;
    double wall_seconds = 0.0; // console-only; never serialized
};

inline RunResult run_scenario(const ScenarioConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    RunResult out;
    const Dimension dim(cfg.m);
    out.report.scenario = cfg.name;
    out.report.dt = cfg.time.dt;

    try {
        if (cfg.exhaustion) {
            const double h = cfg.grid.r_max / static_cast<double>(cfg.grid.n);
            out.exhaustion = exhaustion_run(cfg.initial_profile(), dim, cfg.exhaustion->k_list,
                                            cfg.exhaustion->r_obs, cfg.time.horizon, cfg.time.dt,
                                            h, cfg.time.stamps);
            out.report.cauchy_differences = out.exhaustion->sup_differences;
            int halvings = 0;
            for (const Trajectory& t : out.exhaustion->trajectories) halvings += t.halvings;
            out.report.halvings = halvings;
            out.report.h = out.exhaustion->trajectories.back().problem.grid().spacing();
        } else {
            RadialGrid grid(cfg.grid.r_max, cfg.grid.n);
            ConformalFactor raw(RadialField::sample(grid, cfg.initial_profile()));
            DirichletProblem problem = DirichletProblem::from_raw(dim, raw, cfg.time.horizon);
            out.trajectory = solve_dirichlet(problem, cfg.time.dt, cfg.time.stamps);
            out.report.halvings = out.trajectory->halvings;
            out.report.h = grid.spacing();
        }
    } catch (const std::runtime_error& e) {
        out.report.pass = false;
        out.report.checks.push_back(
            CheckRecord{"solver_fatal", e.what(), 1e300, 0.0, false});
        out.wall_seconds = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - start).count();
        return out;
    }

    const Trajectory* traj =
        out.exhaustion ? &out.exhaustion->trajectories.back() : &*out.trajectory;
    CheckContext ctx{cfg, dim, traj, out.exhaustion ? &*out.exhaustion : nullptr};
    for (const ScenarioCheck& sc : cfg.checks) {
        const RegisteredCheck& entry = check_registry().at(sc.id);
        CheckRecord rec;
        rec.id = sc.id;
        rec.anchor = entry.anchor;
        rec.tolerance = sc.tolerance.value_or(entry.default_tolerance);
        rec.violation = entry.violation(ctx);
        rec.pass = rec.violation <= rec.tolerance;
        out.report.pass = out.report.pass && rec.pass;
        out.report.checks.push_back(std::move(rec));
    }
    out.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

// ---------------------------------------------------------------------------
// Export.
// ---------------------------------------------------------------------------

inline FieldSeries to_series(const Trajectory& traj) {
    FieldSeries s{traj.problem.dim(), {}, {}};
    for (const FlowState& st : traj.states) {
        s.times.push_back(st.t);
        s.fields.push_back(st.u.field());
    }
    return s;
}

/// Writes rows (t, r, u, U, R_g), t-major, full double precision.
inline void emit_csv(const FieldSeries& series, const std::string& path) {
    if (series.times.empty()) throw domain_error("emit_csv: empty series");
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw io_error("emit_csv: cannot open " + path);
    std::fputs("t,r,u,U,R\n", f);
    for (std::size_t s = 0; s < series.times.size(); ++s) {
        const RadialField& u = series.fields[s];
        const ConformalFactor cu{u};
        const RadialField U = to_U(cu, series.dim);
        const RadialField R = scalar_curvature(cu, series.dim);
        for (std::size_t i = 0; i < u.size(); ++i)
            std::fprintf(f, "%.17e,%.17e,%.17e,%.17e,%.17e\n", series.times[s],
                         u.grid().node(i), u[i], U[i], R[i]);
    }
    if (std::fclose(f) != 0) throw io_error("emit_csv: write failure on " + path);
}

inline void emit_csv(const Trajectory& traj, const std::string& path) {
    emit_csv(to_series(traj), path);
}

inline void emit_report(const VerificationReport& report, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw io_error("emit_report: cannot open " + path);
    f << report.to_json().dump(2) << "\n";
    if (!f.good()) throw io_error("emit_report: write failure on " + path);
}

} // namespace yflow
