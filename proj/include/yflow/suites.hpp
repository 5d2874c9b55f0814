// Built-in desk-scale verification suites behind `yflow verify`.
//
// Each suite runs a fixed configuration (grids, steps and tolerances are
// pinned here) and returns one record per check. The acceptance test
// binary drives the same functions.
#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "yflow/barriers.hpp"
#include "yflow/conformal.hpp"
#include "yflow/flow.hpp"
#include "yflow/scenario.hpp"

namespace yflow {

inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {
        "lemma1", "lemma3", "lemma4", "lemma5", "lemma6",
        "lemma7", "rigidity", "theorem1", "fastdiff"};
    return names;
}

namespace suites {

inline CheckRecord record(std::string id, std::string anchor, double violation,
                          double tolerance) {
    return CheckRecord{std::move(id), std::move(anchor), violation, tolerance,
                       violation <= tolerance};
}

/// Flow started from the flat factor on B_6, m = 3, h = 0.02, dt = 1e-3, T = 1.
inline Trajectory euclidean_ball_run(double horizon = 1.0) {
    const Dimension dim(3);
    RadialGrid grid(6.0, 300);
    DirichletProblem problem = DirichletProblem::from_raw(dim, euclidean_factor(grid), horizon);
    return solve_dirichlet(problem, 1e-3);
}

// --- sandwich bound ---------------------------------------------------------

inline std::vector<CheckRecord> suite_lemma1() {
    const SandwichViolations v = sandwich_violations(euclidean_ball_run());
    return {
        record("sandwich_lower", "inf u0 <= u(., t) - m(m-1) t", v.lower, 5e-3),
        record("sandwich_upper", "u(., t) - m(m-1) t <= sup u0", v.upper, 5e-3),
    };
}

// --- profile inequality and its sharp constant -------------------------------

inline std::vector<CheckRecord> suite_lemma3() {
    const double lam = profile_lambda(1.0, 2.0);
    const double exact = 16875.0 / 512.0;
    const double admissible = profile_violation(1.0, 2.0, 33.0, 10000);
    const double short_lambda = profile_violation(1.0, 2.0, 30.0, 10000);
    return {
        record("lambda_exact", "lambda(1, 2) = 16875/512", std::abs(lam - exact), 1e-12),
        record("profile_admissible", "f'' + (c/r) f' >= -33 f^2 on ]0,1[", admissible, 1e-10),
        // lambda = 30 sits below the sharp constant, so the inequality must fail
        record("profile_short_fails", "f'' + (c/r) f' >= -30 f^2 is violated somewhere",
               -short_lambda, -1e-6),
    };
}

// --- barrier inequality -------------------------------------------------------

inline std::vector<CheckRecord> suite_lemma4() {
    std::vector<CheckRecord> out;
    for (int m : {3, 4, 5}) {
        const Dimension dim(m);
        const BarrierParams p = BarrierParams::for_dimension(dim, 1.0);
        const double v = barrier_inequality_violation(p, dim, RadialGrid(1.0, 1000), 50);
        out.push_back(record("barrier_inequality_m" + std::to_string(m),
                             "d/dt V^{1+a} <= b Lap V", v, 1e-6));
    }
    return out;
}

// --- fast diffusion vs the barrier -------------------------------------------

inline std::vector<CheckRecord> suite_fastdiff() {
    std::vector<CheckRecord> out;
    for (int m : {3, 4, 5}) {
        const Dimension dim(m);
        const BarrierParams p = BarrierParams::for_dimension(dim, 1.0);
        const FastDiffusionResult fd =
            fast_diffusion_solve(p, dim, RadialGrid(1.0, 200), p.t0 / 2000.0);
        out.push_back(record("fastdiff_domination_m" + std::to_string(m),
                             "W(., t) >= V(., t) for t < t0",
                             fast_diffusion_domination_violation(fd), 5e-3));
        // no numerical extinction within the horizon is at least as late as t0
        const double ext = fd.extinction_time.value_or(2.0 * p.t0);
        out.push_back(record("fastdiff_extinction_m" + std::to_string(m),
                             "detected extinction >= 0.98 t0", 0.98 * p.t0 - ext, 0.0));
    }
    return out;
}

// --- local lower bound and the excess integral --------------------------------

inline std::vector<CheckRecord> suite_lemma5() {
    const Dimension dim(3);
    const Trajectory traj = euclidean_ball_run();
    const double r0 = 4.0;
    const double C_m = lower_bound_rate(dim);
    std::vector<CheckRecord> out;
    out.push_back(record("lower_bound", "u(., t) >= inf_{B_4} u(., 0) - C_m t in B_3",
                         lower_bound_violation(traj, r0, C_m), 5e-3));

    // Coupled short-horizon run: the barrier lives on [0, t0[, so sample there.
    const RadialField U0 = to_U(traj.states.front().u, dim);
    const BarrierParams p = BarrierParams::for_dimension(dim, U0.min_on_ball(r0));
    const double Tc = 0.9 * p.t0;
    DirichletProblem short_problem(dim, 6.0, Tc,
                                   build_initial_data(euclidean_factor(RadialGrid(6.0, 300)), 6.0));
    const Trajectory coupled =
        solve_dirichlet(short_problem, Tc / 50.0, uniform_stamps(Tc, 51));
    out.push_back(record("barrier_domination", "u^eta >= V on B_1 for t < t0",
                         flow_barrier_domination_violation(coupled, p), 5e-3));
    const std::vector<double> J = excess_series(coupled, p);
    double jstep = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < J.size(); ++i) jstep = std::max(jstep, J[i + 1] - J[i]);
    out.push_back(record("excess_monotone", "J(t) nonincreasing along the coupled run",
                         jstep, 1e-4));
    return out;
}

// --- level-set divergence inequality ------------------------------------------

/// Random even sum of Gaussian bumps minus an offset, nonpositive at the
/// outer boundary with a nonempty positivity set. Even reflection keeps the
/// profile smooth at the pole; draws whose bumps pile up at the boundary
/// are redrawn.
inline RadialField random_bump_field(std::mt19937& rng, const RadialGrid& grid) {
    std::uniform_real_distribution<double> amp(0.5, 2.0);
    std::uniform_real_distribution<double> center(0.2, 0.8 * grid.r_max());
    std::uniform_real_distribution<double> width(0.25, 0.6);
    std::uniform_real_distribution<double> off(0.3, 0.8);
    const int bumps = 3;
    std::vector<double> A(bumps), c(bumps), w(bumps);
    for (int attempt = 0; attempt < 10; ++attempt) {
        for (int b = 0; b < bumps; ++b) {
            A[b] = amp(rng);
            c[b] = center(rng);
            w[b] = width(rng);
        }
        const auto bump_sum = [&](double r) {
            double s = 0.0;
            for (int b = 0; b < bumps; ++b) {
                const double d1 = (r - c[b]) / w[b];
                const double d2 = (r + c[b]) / w[b];
                s += A[b] * (std::exp(-d1 * d1) + std::exp(-d2 * d2));
            }
            return s;
        };
        double peak = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i)
            peak = std::max(peak, bump_sum(grid.node(i)));
        const double offset =
            std::max(off(rng) * peak, bump_sum(grid.r_max()) + 0.05);
        if (peak - offset > 0.05 || attempt == 9)
            return RadialField::sample(grid, [&](double r) { return bump_sum(r) - offset; });
    }
    throw numerical_error("random_bump_field: unreachable");
}

inline std::vector<CheckRecord> suite_lemma6() {
    const Dimension dim(3);
    RadialGrid grid(2.0, 400); // h = 0.005
    std::mt19937 rng(12345);
    double worst = -std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < 50; ++trial) {
        const RadialField f = random_bump_field(rng, grid);
        worst = std::max(worst, positive_set_laplacian_integral(f, dim));
    }
    return {record("level_set_divergence",
                   "int over {f > 0} of Lap f dmu <= 0 for 50 random bump profiles", worst,
                   1e-3)};
}

// --- local upper bound ---------------------------------------------------------

inline std::vector<CheckRecord> suite_lemma7() {
    const Dimension dim(3);
    const double r0 = 4.0;
    const CutoffProfile phi = CutoffProfile::smoothstep_power(r0, 4.0);
    const double c_m = cutoff_drift_constant(phi, RadialGrid(r0, 4000), dim);
    const double c_m_fine = cutoff_drift_constant(phi, RadialGrid(r0, 8000), dim);
    const Trajectory traj = euclidean_ball_run();
    return {
        record("upper_bound", "u(., t) <= sup_{B_4} u(., 0) + (m-1)(m+c_m) t in B_3",
               upper_bound_violation(traj, r0, c_m), 5e-3),
        record("cutoff_constant_stable", "c_m stable within 1% under grid halving",
               std::abs(c_m - c_m_fine) / c_m, 1e-2),
    };
}

// --- rigidity and the sech cutoff estimates ------------------------------------

inline std::vector<CheckRecord> suite_rigidity() {
    const Dimension dim(3);
    RadialGrid grid(8.0, 400); // h = 0.02
    DirichletProblem problem =
        DirichletProblem::from_raw(dim, ConformalFactor(RadialField::constant(grid, 1.0)), 1.0);
    const Trajectory traj = solve_dirichlet(problem, 1e-3);
    double worst = 0.0;
    for (const FlowState& s : traj.states) {
        const double exact = rigidity_factor(dim, s.t);
        for (std::size_t i = 0; i < s.u.size(); ++i)
            worst = std::max(worst, std::abs(s.u[i] - exact));
    }

    double grad_sup = -std::numeric_limits<double>::infinity();
    double lap_sup = -std::numeric_limits<double>::infinity();
    RadialGrid far_grid(50.0, 2500);
    for (int m : {3, 5})
        for (double eps : {0.05, 0.1, 0.4}) {
            const CutoffViolations v = sech_cutoff_violations(eps, far_grid, Dimension(m));
            grad_sup = std::max(grad_sup, v.gradient);
            lap_sup = std::max(lap_sup, v.laplacian);
        }
    return {
        record("rigidity", "sup |u - (m(m-1) t + 1)| over the run", worst, 5e-3),
        record("cutoff_gradient_bound", "|grad phi|^2 <= eps^2 phi^2 for phi = sech(eps r)",
               grad_sup, 1e-8),
        record("cutoff_laplacian_bound", "-Lap phi <= (eps^2 + (m-1) eps) phi", lap_sup, 1e-8),
    };
}

// --- exhaustion and form equivalence --------------------------------------------

inline ExhaustionResult canonical_exhaustion() {
    return exhaustion_run([](double r) { return euclidean_factor_at(r); }, Dimension(3),
                          {6.0, 8.0, 10.0}, 3.0, 1.0, 1e-3, 0.02);
}

/// Order-of-accuracy probe: max form-equivalence residual of random smooth
/// positive fields must shrink by >= 3.5 per grid halving.
inline double form_equivalence_min_ratio(int fields, unsigned seed) {
    const Dimension dim(3);
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> base(1.5, 2.5);
    std::uniform_real_distribution<double> coef(-0.12, 0.12);
    double min_ratio = std::numeric_limits<double>::infinity();
    for (int fcase = 0; fcase < fields; ++fcase) {
        const double c0 = base(rng);
        const double a1 = coef(rng), a2 = coef(rng), a3 = coef(rng);
        const auto profile = [&](double r_max) {
            return [=](double r) {
                const double x = std::numbers::pi * r / r_max;
                return c0 + a1 * std::cos(x) + a2 * std::cos(2.0 * x) + a3 * std::cos(3.0 * x);
            };
        };
        const double res_coarse = form_equivalence_residual(
            ConformalFactor(RadialField::sample(RadialGrid(2.0, 100), profile(2.0))), dim);
        const double res_fine = form_equivalence_residual(
            ConformalFactor(RadialField::sample(RadialGrid(2.0, 200), profile(2.0))), dim);
        min_ratio = std::min(min_ratio, res_coarse / res_fine);
    }
    return min_ratio;
}

inline std::vector<CheckRecord> suite_theorem1() {
    const ExhaustionResult ex = canonical_exhaustion();
    double worst = -std::numeric_limits<double>::infinity();
    const double rate = 6.0; // m(m-1) at m = 3
    for (std::size_t s = 0; s < ex.limit.times.size(); ++s)
        for (std::size_t i = 0; i < ex.limit.fields[s].size(); ++i)
            worst = std::max(worst, rate * ex.limit.times[s] - ex.limit.fields[s][i]);
    double dstep = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j + 1 < ex.sup_differences.size(); ++j)
        dstep = std::max(dstep, ex.sup_differences[j + 1] - ex.sup_differences[j]);
    const double min_ratio = form_equivalence_min_ratio(20, 777);
    return {
        record("completeness", "limit candidate satisfies u - m(m-1) t >= 0 on the window",
               worst, 5e-3),
        record("cauchy_decreasing", "window sup-differences d_k decrease in k", dstep, 0.0),
        record("form_equivalence_order",
               "pairwise form residuals shrink at second order (ratio >= 3.5)",
               3.5 - min_ratio, 0.0),
    };
}

} // namespace suites

inline std::vector<CheckRecord> run_suite(const std::string& name) {
    if (name == "lemma1") return suites::suite_lemma1();
    if (name == "lemma3") return suites::suite_lemma3();
    if (name == "lemma4") return suites::suite_lemma4();
    if (name == "lemma5") return suites::suite_lemma5();
    if (name == "lemma6") return suites::suite_lemma6();
    if (name == "lemma7") return suites::suite_lemma7();
    if (name == "rigidity") return suites::suite_rigidity();
    if (name == "theorem1") return suites::suite_theorem1();
    if (name == "fastdiff") return suites::suite_fastdiff();
    throw config_error("unknown verification suite '" + name + "'");
}

} // namespace yflow
