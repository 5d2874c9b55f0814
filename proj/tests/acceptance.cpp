// Acceptance suite: runs every top-level criterion at its stated tolerance
// and prints one pass/fail line each. Exits nonzero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "yflow/suites.hpp"

namespace {

int failures = 0;

double now_seconds() {
    using clock = std::chrono::steady_clock;
    static const clock::time_point t0 = clock::now();
    return std::chrono::duration<double>(clock::now() - t0).count();
}

void line(int criterion, const std::string& what, bool pass, double violation,
          double tolerance) {
    std::printf("[%s] %2d. %-58s violation=%12.5e tol=%9.2e\n", pass ? "PASS" : "FAIL",
                criterion, what.c_str(), violation, tolerance);
    if (!pass) ++failures;
}

void line_timed(int criterion, const std::string& what, bool pass, double violation,
                double tolerance, double seconds, double budget) {
    const bool ok = pass && seconds < budget;
    std::printf("[%s] %2d. %-58s violation=%12.5e tol=%9.2e (%.2f s < %.0f s)\n",
                ok ? "PASS" : "FAIL", criterion, what.c_str(), violation, tolerance, seconds,
                budget);
    if (!ok) ++failures;
}

const yflow::CheckRecord& find(const std::vector<yflow::CheckRecord>& records,
                               const std::string& id) {
    for (const auto& r : records)
        if (r.id == id) return r;
    std::fprintf(stderr, "missing record %s\n", id.c_str());
    std::exit(2);
}

} // namespace

int main() {
    using namespace yflow;

    // 1. Rigidity reproduction: constant start stays on m(m-1) t + 1.
    double t_start = now_seconds();
    const auto rigidity = run_suite("rigidity");
    const double t_rigidity = now_seconds() - t_start;
    {
        const auto& r = find(rigidity, "rigidity");
        line_timed(1, "rigidity: sup |u - (6t+1)| on B_8, h=0.02, dt=1e-3", r.pass, r.violation,
                   r.tolerance, t_rigidity, 10.0);
    }

    // 2. The sharp profile constant and the admissibility threshold.
    t_start = now_seconds();
    const auto lemma3 = run_suite("lemma3");
    const double t_lemma3 = now_seconds() - t_start;
    {
        const auto& exact = find(lemma3, "lambda_exact");
        const bool in_range = profile_lambda(1.0, 2.0) >= 32.958 &&
                              profile_lambda(1.0, 2.0) <= 32.961;
        line_timed(2, "profile constant: lambda(1,2) = 16875/512 in [32.958, 32.961]",
                   exact.pass && in_range, exact.violation, exact.tolerance, t_lemma3, 1.0);
        const auto& pass33 = find(lemma3, "profile_admissible");
        line(2, "profile inequality holds at lambda = 33 on 1e4 nodes", pass33.pass,
             pass33.violation, pass33.tolerance);
        const auto& fail30 = find(lemma3, "profile_short_fails");
        line(2, "profile inequality fails at lambda = 30", fail30.pass, fail30.violation,
             fail30.tolerance);
    }

    // 3. Sandwich bound along the flat-start run.
    const auto lemma1 = run_suite("lemma1");
    for (const char* id : {"sandwich_lower", "sandwich_upper"}) {
        const auto& r = find(lemma1, id);
        line(3, std::string("sandwich: ") + id + " on the flat start, B_6, T=1", r.pass,
             r.violation, r.tolerance);
    }

    // 4. Barrier inequality and fast-diffusion domination.
    const auto lemma4 = run_suite("lemma4");
    for (int m : {3, 4, 5}) {
        const auto& r = find(lemma4, "barrier_inequality_m" + std::to_string(m));
        line(4, "barrier inequality d/dt V^{1+a} <= b Lap V, m = " + std::to_string(m), r.pass,
             r.violation, r.tolerance);
    }
    const auto fastdiff = run_suite("fastdiff");
    for (int m : {3, 4, 5}) {
        const auto& dom = find(fastdiff, "fastdiff_domination_m" + std::to_string(m));
        line(4, "fast diffusion dominates the barrier, m = " + std::to_string(m), dom.pass,
             dom.violation, dom.tolerance);
        const auto& ext = find(fastdiff, "fastdiff_extinction_m" + std::to_string(m));
        line(4, "fast-diffusion extinction >= 0.98 t0, m = " + std::to_string(m), ext.pass,
             ext.violation, ext.tolerance);
    }

    // 5. Local lower bound and the excess integral.
    const auto lemma5 = run_suite("lemma5");
    {
        const auto& lb = find(lemma5, "lower_bound");
        line(5, "lower bound u >= inf u0 - C_m t on the flat start", lb.pass, lb.violation,
             lb.tolerance);
        const auto& dom = find(lemma5, "barrier_domination");
        line(5, "barrier stays below U on B_1 for t < t0", dom.pass, dom.violation,
             dom.tolerance);
        const auto& mono = find(lemma5, "excess_monotone");
        line(5, "excess integral J nonincreasing (1e-4 per step)", mono.pass, mono.violation,
             mono.tolerance);
    }

    // 6. Level-set divergence inequality on 50 random profiles.
    const auto lemma6 = run_suite("lemma6");
    {
        const auto& r = find(lemma6, "level_set_divergence");
        line(6, "int over {f>0} of Lap f dmu <= 1e-3 for 50 random bumps", r.pass, r.violation,
             r.tolerance);
    }

    // 7. Local upper bound with the computed cutoff constant.
    const auto lemma7 = run_suite("lemma7");
    {
        const auto& ub = find(lemma7, "upper_bound");
        line(7, "upper bound u <= sup u0 + (m-1)(m+c_m) t, r0 = 4", ub.pass, ub.violation,
             ub.tolerance);
        const auto& st = find(lemma7, "cutoff_constant_stable");
        line(7, "cutoff constant stable within 1% under halving", st.pass, st.violation,
             st.tolerance);
    }

    // 8. Exhaustion: completeness bound and Cauchy decrease.
    const auto theorem1 = run_suite("theorem1");
    {
        const auto& comp = find(theorem1, "completeness");
        line(8, "exhaustion limit satisfies u - 6t >= -5e-3 on B_3 x [0,1]", comp.pass,
             comp.violation, comp.tolerance);
        const auto& dk = find(theorem1, "cauchy_decreasing");
        // strictly decreasing: the worst consecutive difference must be < 0
        line(8, "consecutive sup-differences d_k strictly decreasing", dk.violation < 0.0,
             dk.violation, 0.0);
    }

    // 9. Closed-form sech-cutoff estimates.
    {
        const auto& gr = find(rigidity, "cutoff_gradient_bound");
        line(9, "|grad phi|^2 <= eps^2 phi^2 for eps in {.05,.1,.4}, m in {3,5}", gr.pass,
             gr.violation, gr.tolerance);
        const auto& lp = find(rigidity, "cutoff_laplacian_bound");
        line(9, "-Lap phi <= (eps^2 + (m-1) eps) phi, grid to r = 50", lp.pass, lp.violation,
             lp.tolerance);
    }

    // 10. Second-order agreement of the four equivalent forms.
    {
        const auto& r = find(theorem1, "form_equivalence_order");
        line(10, "form residuals shrink by >= 3.5 per halving (20 fields)", r.pass, r.violation,
             r.tolerance);
    }

    std::printf("%s (%d criterion line(s) failed)\n", failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL",
                failures);
    return failures == 0 ? 0 : 1;
}
