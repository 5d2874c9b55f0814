// Closed-form barriers, sharp constants and integral functionals used as
// oracles against numerical flow trajectories.
//
// The central object is the compactly supported subsolution
//     V(r, t) = (h0^a - C t)^{1/a} (1 - r^2)^2   on the unit ball,
// which satisfies d/dt V^{1+a} <= b Lap V as long as the profile
// f(r) = (1-r^2)^2 obeys f'' + (c/r) f' >= -lambda f^{1+a} with
// c = (m-1)/tanh(1). The smallest admissible lambda has a closed form and
// everything else (extinction time t0, the lower-bound rate C_m, the
// cutoff constant c_m, the minimax bound) is derived from it.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "yflow/conformal.hpp"
#include "yflow/flow.hpp"
#include "yflow/grid.hpp"
#include "yflow/operators.hpp"
#include "yflow/tridiagonal.hpp"

namespace yflow {

// ---------------------------------------------------------------------------
// Profile inequality f'' + (c/r) f' >= -lambda f^{1+a} for f = (1-r^2)^2.
// ---------------------------------------------------------------------------

/// Smallest lambda > 0 such that the inequality holds on ]0,1[. Writing the
/// left side as y(1/(1-r^2)) f^{1+a} with y(x) = 8 x^{2+2a} - 4(3+c) x^{1+2a},
/// the minimum of y on [1, inf[ sits at x* = (3+c)(1+2a)/(4(1+a)) and
/// lambda = -min y, i.e. -y(x*) if x* > 1, else -y(1) = 4(1+c).
inline double profile_lambda(double a, double c) {
    if (!(a > 0.0) || !(c > 0.0)) throw domain_error("profile_lambda: need a, c > 0");
    const double x_star = (3.0 + c) * (1.0 + 2.0 * a) / (4.0 * (1.0 + a));
    if (x_star <= 1.0) return 4.0 * (1.0 + c);
    return 4.0 * (3.0 + c) * std::pow(x_star, 1.0 + 2.0 * a) -
           8.0 * std::pow(x_star, 2.0 + 2.0 * a);
}

/// Max over an equispaced grid of ]0,1[ of -lambda f^{1+a} - f'' - (c/r) f',
/// all terms in closed form. Nonpositive (up to round-off) exactly when
/// lambda >= profile_lambda(a, c).
inline double profile_violation(double a, double c, double lambda, std::size_t nodes) {
    if (nodes < 2) throw config_error("profile_violation: need at least 2 nodes");
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 1; j < nodes; ++j) {
        const double r = static_cast<double>(j) / static_cast<double>(nodes);
        const double one_m_r2 = 1.0 - r * r;
        const double f = one_m_r2 * one_m_r2;
        const double fp = -4.0 * r * one_m_r2;
        const double fpp = -4.0 + 12.0 * r * r;
        worst = std::max(worst, -lambda * std::pow(f, 1.0 + a) - fpp - (c / r) * fp);
    }
    return worst;
}

// ---------------------------------------------------------------------------
// The barrier V and its fast-diffusion inequality.
// ---------------------------------------------------------------------------

/// Parameters of the barrier: exponent a, diffusion constant b, drift
/// constant c, initial height h0, admissible lambda, decay rate
/// C = a b lambda / (a+1) and extinction time t0 = h0^a / C.
struct BarrierParams {
    double a, b, c, h0, lambda, C, t0;

    static BarrierParams make(double a, double b, double c, double h0,
                              std::optional<double> lambda = {}) {
        if (!(a > 0.0) || !(b > 0.0) || !(c > 0.0) || !(h0 > 0.0))
            throw domain_error("BarrierParams: need a, b, c, h0 > 0");
        const double lam_min = profile_lambda(a, c);
        const double lam = lambda.value_or(lam_min);
        if (lam < lam_min * (1.0 - 1e-12))
            throw domain_error("BarrierParams: lambda below the admissible minimum");
        const double C = a * b * lam / (a + 1.0);
        return BarrierParams{a, b, c, h0, lam, C, std::pow(h0, a) / C};
    }

    /// The parameter set driven by the flow in dimension m:
    /// a = 1/eta, b = (m-1)(eta+1)/eta, c = (m-1)/tanh(1).
    static BarrierParams for_dimension(const Dimension& dim, double h0) {
        const double eta = dim.eta();
        return make(1.0 / eta, (dim.m() - 1.0) * (eta + 1.0) / eta,
                    (dim.m() - 1.0) / std::tanh(1.0), h0);
    }

    /// Height factor (h0^a - C t)^{1/a}; requires t < t0.
    double height(double t) const {
        if (!(t >= 0.0) || t >= t0)
            throw extinction_error("barrier expired: t = " + std::to_string(t) +
                                   " >= t0 = " + std::to_string(t0));
        return std::pow(std::pow(h0, a) - C * t, 1.0 / a);
    }
};

/// V(r, t) = height(t) (1 - r^2)^2 on the unit ball, 0 outside.
inline double barrier_value(const BarrierParams& p, double r, double t) {
    if (r >= 1.0) return 0.0;
    const double f = (1.0 - r * r) * (1.0 - r * r);
    return p.height(t) * f;
}

inline RadialField barrier_field(const BarrierParams& p, const RadialGrid& grid, double t) {
    const double hb = p.height(t); // validates t < t0 even if the grid is tiny
    return RadialField::sample(grid, [&](double r) {
        if (r >= 1.0) return 0.0;
        const double f = (1.0 - r * r) * (1.0 - r * r);
        return hb * f;
    });
}

/// Max over time samples in [0, t0[ and grid nodes of
///     d/dt V^{1+a} - b Lap V,
/// with the time derivative in closed form (-b lambda height(t) f^{1+a})
/// and the Laplacian discretized on the given unit-ball grid. Nonpositive
/// up to O(h^2) when the parameters are admissible.
inline double barrier_inequality_violation(const BarrierParams& p, const Dimension& dim,
                                           const RadialGrid& unit_grid,
                                           std::size_t t_samples) {
    if (std::abs(unit_grid.r_max() - 1.0) > 1e-12)
        throw config_error("barrier_inequality_violation: grid must cover [0, 1]");
    if (t_samples == 0) throw config_error("barrier_inequality_violation: no time samples");
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < t_samples; ++s) {
        const double t = p.t0 * static_cast<double>(s) / static_cast<double>(t_samples);
        const double hb = p.height(t);
        const RadialField V = barrier_field(p, unit_grid, t);
        const RadialField LV = laplacian_radial(V, dim);
        for (std::size_t i = 0; i < V.size(); ++i) {
            const double r = unit_grid.node(i);
            const double f = (1.0 - r * r) * (1.0 - r * r);
            const double dVp = -p.b * p.lambda * hb * std::pow(f, 1.0 + p.a);
            worst = std::max(worst, dVp - p.b * LV[i]);
        }
    }
    return worst;
}

/// The rate constant C_m = (m-1) lambda / eta of the local lower bound
/// u(., t) >= inf u(., 0) - C_m t, with lambda for a = 1/eta and
/// c = (m-1)/tanh(1).
inline double lower_bound_rate(const Dimension& dim) {
    const double lam =
        profile_lambda(1.0 / dim.eta(), (dim.m() - 1.0) / std::tanh(1.0));
    return (dim.m() - 1.0) * lam / dim.eta();
}

// ---------------------------------------------------------------------------
// Trajectory checks.
// ---------------------------------------------------------------------------

struct SandwichViolations {
    double lower; // max of inf u0 - (u - m(m-1) t); <= 0 when the bound holds
    double upper; // max of (u - m(m-1) t) - sup u0
};

/// Pointwise sandwich inf u0 <= u(., t) - m(m-1) t <= sup u0 against the
/// problem's blended initial data, over every stored state.
inline SandwichViolations sandwich_violations(const Trajectory& traj) {
    const Dimension& dim = traj.problem.dim();
    const double rate = static_cast<double>(dim.m()) * (dim.m() - 1);
    const double lo = traj.problem.initial().field().min();
    const double hi = traj.problem.initial().field().max();
    SandwichViolations v{-std::numeric_limits<double>::infinity(),
                         -std::numeric_limits<double>::infinity()};
    for (const FlowState& s : traj.states) {
        for (std::size_t i = 0; i < s.u.size(); ++i) {
            const double shifted = s.u[i] - rate * s.t;
            v.lower = std::max(v.lower, lo - shifted);
            v.upper = std::max(v.upper, shifted - hi);
        }
    }
    return v;
}

/// Max over states and nodes r <= r0 - 1 of
///     inf_{B_r0} u(., 0) - C_m t - u(., t).
inline double lower_bound_violation(const Trajectory& traj, double r0, double rate_C) {
    if (!(r0 > 1.0)) throw domain_error("lower_bound_violation: need r0 > 1");
    const RadialGrid& g = traj.problem.grid();
    if (r0 > g.r_max() + 1e-12)
        throw domain_error("lower_bound_violation: ball exceeds the domain");
    const double inf0 = traj.states.front().u.field().min_on_ball(r0);
    const double h = g.spacing();
    const auto last = static_cast<std::size_t>(std::floor((r0 - 1.0) / h + 1e-9));
    double worst = -std::numeric_limits<double>::infinity();
    for (const FlowState& s : traj.states)
        for (std::size_t i = 0; i <= last && i < s.u.size(); ++i)
            worst = std::max(worst, inf0 - rate_C * s.t - s.u[i]);
    return worst;
}

/// Max over states and nodes r <= r0 - 1 of
///     u(., t) - sup_{B_r0} u(., 0) - (m-1)(m + c_m) t.
inline double upper_bound_violation(const Trajectory& traj, double r0, double c_m) {
    if (!(r0 > 1.0)) throw domain_error("upper_bound_violation: need r0 > 1");
    const RadialGrid& g = traj.problem.grid();
    if (r0 > g.r_max() + 1e-12)
        throw domain_error("upper_bound_violation: ball exceeds the domain");
    const Dimension& dim = traj.problem.dim();
    const double sup0 = traj.states.front().u.field().max_on_ball(r0);
    const double rate = (dim.m() - 1.0) * (dim.m() + c_m);
    const double h = g.spacing();
    const auto last = static_cast<std::size_t>(std::floor((r0 - 1.0) / h + 1e-9));
    double worst = -std::numeric_limits<double>::infinity();
    for (const FlowState& s : traj.states)
        for (std::size_t i = 0; i <= last && i < s.u.size(); ++i)
            worst = std::max(worst, s.u[i] - sup0 - rate * s.t);
    return worst;
}

// ---------------------------------------------------------------------------
// The excess integral J and the level-set divergence inequality.
// ---------------------------------------------------------------------------

/// J = int over B_1 of (V^{1+1/eta} - U^{1+1/eta})_+ dmu, both fields on a
/// common grid covering [0, 1].
inline double excess_integral(const RadialField& U, const RadialField& V,
                              const Dimension& dim) {
    detail::require_positive(U, "excess_integral");
    if (!(U.grid() == V.grid()))
        throw config_error("excess_integral: fields on different grids");
    if (U.grid().r_max() < 1.0 - 1e-12)
        throw config_error("excess_integral: grid must cover the unit ball");
    const double p = 1.0 + dim.inv_eta();
    std::vector<double> w(U.size());
    for (std::size_t i = 0; i < w.size(); ++i)
        w[i] = std::max(std::pow(V[i], p) - std::pow(U[i], p), 0.0);
    return integrate_radial(RadialField(U.grid(), std::move(w)), dim, 0.0,
                            std::min(1.0, U.grid().r_max()));
}

/// Integral of the discrete Laplacian over the positivity set {f > 0},
/// with set boundaries located by linear interpolation of sign changes.
/// Requires f <= 0 at the outer node; the result is <= 0 up to O(h).
inline double positive_set_laplacian_integral(const RadialField& f, const Dimension& dim) {
    const RadialGrid& g = f.grid();
    const std::size_t n = g.intervals();
    if (f[n] > 0.0)
        throw precondition_error("positive_set_laplacian_integral: f > 0 at the boundary");
    const RadialField L = laplacian_radial(f, dim);
    const double em1 = dim.m() - 1.0;
    std::vector<double> w(f.size());
    for (std::size_t i = 0; i < w.size(); ++i)
        w[i] = L[i] * std::pow(std::sinh(g.node(i)), em1);

    // Walk the cells; within each cell integrate the (linear) integrand over
    // the sub-interval where the linear interpolant of f is positive.
    double total = 0.0;
    const double h = g.spacing();
    for (std::size_t i = 0; i < n; ++i) {
        const double fa = f[i], fb = f[i + 1];
        if (fa <= 0.0 && fb <= 0.0) continue;
        double ta = 0.0, tb = 1.0; // sub-cell in local coordinates
        if (fa <= 0.0) ta = fa / (fa - fb);
        if (fb <= 0.0) tb = fa / (fa - fb);
        const double wa = w[i] + ta * (w[i + 1] - w[i]);
        const double wb = w[i] + tb * (w[i + 1] - w[i]);
        total += 0.5 * (wa + wb) * (tb - ta) * h;
    }
    return unit_sphere_area(dim.m()) * total;
}

// ---------------------------------------------------------------------------
// Cutoff profiles and their drift constants.
// ---------------------------------------------------------------------------

/// Radial cutoff with closed-form derivatives. Two kinds:
///  - smoothstep_power: phi = S((r0 - r)/1)^p over the collar [r0-1, r0],
///    identically 1 inside, 0 outside (p >= 2 keeps |phi'|^2/phi bounded);
///  - inverse_cosh: phi = 1/cosh(eps r), positive everywhere.
struct CutoffProfile {
    enum class Kind { smoothstep_power, inverse_cosh };
    Kind kind;
    double r0 = 0.0;
    double p = 0.0;
    double epsilon = 0.0;

    static CutoffProfile smoothstep_power(double r0, double p) {
        if (!(r0 > 1.0)) throw config_error("CutoffProfile: need r0 > 1");
        if (!(p > 0.0)) throw config_error("CutoffProfile: need p > 0");
        return CutoffProfile{Kind::smoothstep_power, r0, p, 0.0};
    }
    static CutoffProfile inverse_cosh(double epsilon) {
        if (!(epsilon > 0.0)) throw config_error("CutoffProfile: need epsilon > 0");
        return CutoffProfile{Kind::inverse_cosh, 0.0, 0.0, epsilon};
    }

    double value(double r) const {
        if (kind == Kind::inverse_cosh) return 1.0 / std::cosh(epsilon * r);
        const double s = r0 - r;
        if (s >= 1.0) return 1.0;
        if (s <= 0.0) return 0.0;
        return std::pow(smoothstep(s), p);
    }
    double d1(double r) const {
        if (kind == Kind::inverse_cosh) {
            const double phi = 1.0 / std::cosh(epsilon * r);
            return -epsilon * std::tanh(epsilon * r) * phi;
        }
        const double s = r0 - r;
        if (s >= 1.0 || s <= 0.0) return 0.0;
        const double S = smoothstep(s);
        const double S1 = 30.0 * s * s * (1.0 - s) * (1.0 - s);
        return -p * std::pow(S, p - 1.0) * S1; // d/dr = -d/ds
    }
    double d2(double r) const {
        if (kind == Kind::inverse_cosh) {
            const double phi = 1.0 / std::cosh(epsilon * r);
            const double th = std::tanh(epsilon * r);
            return epsilon * epsilon * phi * (th * th - (1.0 - th * th));
        }
        const double s = r0 - r;
        if (s >= 1.0 || s <= 0.0) return 0.0;
        const double S = smoothstep(s);
        const double S1 = 30.0 * s * s * (1.0 - s) * (1.0 - s);
        const double S2 = 60.0 * s * (1.0 - s) * (1.0 - 2.0 * s);
        return p * (p - 1.0) * std::pow(S, p - 2.0) * S1 * S1 + p * std::pow(S, p - 1.0) * S2;
    }
};

/// Laplace-Beltrami of the cutoff at radius r, closed-form derivatives with
/// the pole rule at r = 0.
inline double cutoff_laplacian(const CutoffProfile& phi, double r, const Dimension& dim) {
    if (r <= 0.0) return dim.m() * phi.d2(0.0);
    return phi.d2(r) + (dim.m() - 1.0) * coth(r) * phi.d1(r);
}

/// Grid-sup over the open support {phi > 0} of
///     (m+2)/(4 phi) |phi'|^2 - Lap phi,
/// the constant c_m entering the local upper bound. Requires p >= 2 for the
/// smoothstep-power kind, so the ratio stays bounded as phi -> 0.
inline double cutoff_drift_constant(const CutoffProfile& phi, const RadialGrid& grid,
                                    const Dimension& dim) {
    if (phi.kind == CutoffProfile::Kind::smoothstep_power && phi.p < 2.0)
        throw config_error("cutoff_drift_constant: need power p >= 2");
    const double coef = 0.25 * (dim.m() + 2.0);
    double sup = 0.0; // the expression vanishes wherever phi is locally constant
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double r = grid.node(i);
        const double v = phi.value(r);
        if (!(v > 0.0)) continue;
        const double g1 = phi.d1(r);
        sup = std::max(sup, coef * g1 * g1 / v - cutoff_laplacian(phi, r, dim));
    }
    return sup;
}

struct CutoffViolations {
    double gradient;  // sup of |phi'|^2 - eps^2 phi^2
    double laplacian; // sup of -Lap phi - (eps^2 + (m-1) eps) phi
};

/// Closed-form check of the two estimates satisfied by phi = 1/cosh(eps r):
/// |grad phi|^2 <= eps^2 phi^2 and -Lap phi <= (eps^2 + (m-1) eps) phi.
inline CutoffViolations sech_cutoff_violations(double epsilon, const RadialGrid& grid,
                                               const Dimension& dim) {
    if (!(epsilon > 0.0) || !(epsilon < 0.5))
        throw domain_error("sech_cutoff_violations: need 0 < epsilon < 1/2");
    const CutoffProfile phi = CutoffProfile::inverse_cosh(epsilon);
    const double bound = epsilon * epsilon + (dim.m() - 1.0) * epsilon;
    CutoffViolations v{-std::numeric_limits<double>::infinity(),
                       -std::numeric_limits<double>::infinity()};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double r = grid.node(i);
        const double f = phi.value(r);
        const double g1 = phi.d1(r);
        v.gradient = std::max(v.gradient, g1 * g1 - epsilon * epsilon * f * f);
        v.laplacian = std::max(v.laplacian, -cutoff_laplacian(phi, r, dim) - bound * f);
    }
    return v;
}

// ---------------------------------------------------------------------------
// Minimax bound and the exact rigidity solution.
// ---------------------------------------------------------------------------

/// Lower bound a b / (a + c) for max{ a t, b - c t } over t > 0, attained
/// at t = b / (a + c).
inline double minimax_lower(double a, double b, double c) {
    if (!(a > 0.0) || !(b > 0.0) || !(c > 0.0))
        throw domain_error("minimax_lower: need a, b, c > 0");
    return a * b / (a + c);
}

/// The pure-scaling solution m(m-1) t + 1 started from the background metric.
inline double rigidity_factor(const Dimension& dim, double t) {
    if (!(t >= 0.0)) throw domain_error("rigidity_factor: need t >= 0");
    return static_cast<double>(dim.m()) * (dim.m() - 1) * t + 1.0;
}

// ---------------------------------------------------------------------------
// Fast diffusion solver d/dt W^{1+a} = b Lap W on the unit ball.
// ---------------------------------------------------------------------------

struct FastDiffusionResult {
    BarrierParams params;
    RadialGrid grid;
    std::vector<double> times;
    std::vector<RadialField> states;        // W at the stored times
    std::optional<double> extinction_time;  // first t with max W < 1e-8
    int halvings = 0;
};

/// Integrates the fast diffusion equation started from the barrier profile
/// W(., 0) = V(., 0) with zero Dirichlet data at r = 1. The conserved
/// variable is Z = W^{1+a}; each step solves
///     (I - dt b L D) dZ = dt b L W,   D = dW/dZ = (1/(1+a)) W^{-a},
/// one tridiagonal system with the flux-form Laplacian L. Positivity is
/// enforced by clipping Z at zero once the front extinguishes.
inline FastDiffusionResult fast_diffusion_solve(const BarrierParams& p, const Dimension& dim,
                                                const RadialGrid& unit_grid, double dt,
                                                double horizon = 0.0,
                                                std::size_t stores = 64) {
    if (std::abs(unit_grid.r_max() - 1.0) > 1e-12)
        throw config_error("fast_diffusion_solve: grid must cover [0, 1]");
    if (!(dt > 0.0)) throw domain_error("fast_diffusion_solve: dt must be positive");
    if (horizon <= 0.0) horizon = 2.0 * p.t0;

    const std::size_t n = unit_grid.intervals();
    const double h = unit_grid.spacing();
    const double em1 = dim.m() - 1.0; // sinh exponent of the volume weight
    const double inv1pa = 1.0 / (1.0 + p.a);
    const double w_floor = 1e-12;
    const double eps_t = 1e-12 * horizon;

    // Flux-form Laplacian coefficients: row i couples (i-1, i, i+1) through
    // lo_i, -(lo_i + up_i), up_i; origin row via the pole rule.
    std::vector<double> Llo(n + 1, 0.0), Lup(n + 1, 0.0);
    Lup[0] = 2.0 * dim.m() / (h * h);
    for (std::size_t i = 1; i < n; ++i) {
        const double r = unit_grid.node(i);
        Llo[i] = std::pow(std::sinh(r - 0.5 * h) / std::sinh(r), em1) / (h * h);
        Lup[i] = std::pow(std::sinh(r + 0.5 * h) / std::sinh(r), em1) / (h * h);
    }

    RadialField W0 = barrier_field(p, unit_grid, 0.0);
    std::vector<double> W(W0.values().begin(), W0.values().end());
    std::vector<double> Z(n + 1);
    for (std::size_t i = 0; i <= n; ++i) Z[i] = std::pow(W[i], 1.0 + p.a);

    FastDiffusionResult res{p, unit_grid, {}, {}, std::nullopt, 0};
    const auto nsteps = static_cast<std::size_t>(std::ceil(horizon / dt - 1e-12));
    const std::size_t stride = std::max<std::size_t>(1, nsteps / std::max<std::size_t>(1, stores));

    const auto lap = [&](const std::vector<double>& v, std::size_t i) {
        if (i == 0) return Lup[0] * (v[1] - v[0]);
        return Llo[i] * v[i - 1] - (Llo[i] + Lup[i]) * v[i] + Lup[i] * v[i + 1];
    };
    const auto dwdz = [&](double w) { return inv1pa * std::pow(std::max(w, w_floor), -p.a); };

    double t = 0.0;
    res.times.push_back(0.0);
    res.states.push_back(W0);
    // time-based loop: emergency halvings may shorten individual steps
    const std::size_t max_steps = 4 * nsteps + 100;
    for (std::size_t s = 0; s < max_steps && t < horizon - eps_t; ++s) {
        const double want = std::min(dt, horizon - t);
        double trial = want;
        int halved = 0;
        for (;;) {
            std::vector<double> lo(n + 1, 0.0), di(n + 1, 1.0), up(n + 1, 0.0), rhs(n + 1, 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                if (i == 0) {
                    di[0] = 1.0 + trial * p.b * Lup[0] * dwdz(W[0]);
                    up[0] = -trial * p.b * Lup[0] * dwdz(W[1]);
                } else {
                    lo[i] = -trial * p.b * Llo[i] * dwdz(W[i - 1]);
                    di[i] = 1.0 + trial * p.b * (Llo[i] + Lup[i]) * dwdz(W[i]);
                    up[i] = -trial * p.b * Lup[i] * dwdz(W[i + 1]);
                }
                rhs[i] = trial * p.b * lap(W, i);
            }
            di[n] = 1.0;
            rhs[n] = 0.0; // W stays pinned at zero on the boundary

            bool ok = true;
            std::vector<double> dZ;
            try {
                dZ = tridiagonal_solve(lo, di, up, rhs);
            } catch (const numerical_error&) {
                ok = false;
            }
            if (ok) {
                for (double x : dZ)
                    if (!std::isfinite(x)) { ok = false; break; }
            }
            if (ok) {
                for (std::size_t i = 0; i <= n; ++i) {
                    Z[i] = std::max(Z[i] + dZ[i], 0.0);
                    W[i] = std::pow(Z[i], inv1pa);
                }
                break;
            }
            if (++halved > 20)
                throw stability_error("fast_diffusion_solve: unstable after 20 halvings", t, 0);
            trial *= 0.5;
        }
        res.halvings += halved;
        t += trial;
        const double wmax = *std::max_element(W.begin(), W.end());
        if (!res.extinction_time && wmax < 1e-8) {
            res.extinction_time = t;
            res.times.push_back(t);
            res.states.emplace_back(unit_grid, W);
            break;
        }
        if ((s + 1) % stride == 0 || t >= horizon - eps_t) {
            res.times.push_back(t);
            res.states.emplace_back(unit_grid, W);
        }
    }
    return res;
}

/// Max over stored times t < t0 and nodes of V(., t) - W(., t): how far the
/// numerical fast-diffusion solution dips below the barrier it dominates.
inline double fast_diffusion_domination_violation(const FastDiffusionResult& fd) {
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < fd.times.size(); ++s) {
        const double t = fd.times[s];
        if (t >= fd.params.t0) break;
        for (std::size_t i = 0; i < fd.states[s].size(); ++i)
            worst = std::max(worst,
                             barrier_value(fd.params, fd.grid.node(i), t) - fd.states[s][i]);
    }
    return worst;
}

/// Max over stored states with t < t0 and nodes r <= 1 of V(r, t) - U(r, t),
/// where U = u^eta along the flow trajectory: the discrete lower-bound
/// barrier comparison on the unit ball.
inline double flow_barrier_domination_violation(const Trajectory& traj,
                                                const BarrierParams& p) {
    const Dimension& dim = traj.problem.dim();
    double worst = -std::numeric_limits<double>::infinity();
    for (const FlowState& s : traj.states) {
        if (s.t >= p.t0) continue;
        const RadialField U = to_U(s.u, dim);
        const RadialGrid& g = U.grid();
        for (std::size_t i = 0; i < U.size() && g.node(i) <= 1.0 + 1e-12; ++i)
            worst = std::max(worst, barrier_value(p, g.node(i), s.t) - U[i]);
    }
    return worst;
}

/// The excess integral J sampled at every stored state with t < t0.
inline std::vector<double> excess_series(const Trajectory& traj, const BarrierParams& p) {
    const Dimension& dim = traj.problem.dim();
    std::vector<double> out;
    for (const FlowState& s : traj.states) {
        if (s.t >= p.t0) continue;
        const RadialField U = to_U(s.u, dim);
        const RadialField V = barrier_field(p, U.grid(), s.t);
        out.push_back(excess_integral(U, V, dim));
    }
    return out;
}

} // namespace yflow
