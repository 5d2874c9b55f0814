// Time integration of the conformal Yamabe flow on geodesic balls of H^m.
//
// The conformal factor u of g = u g_H evolves by
//     du/dt = (m-1) ( m + Lap u / u + (m-6)/4 |u'|^2 / u^2 ),
// posed on B_k with moving boundary value c_k + m(m-1) t and initial data
// blended to the constant c_k = min u0 near the boundary sphere. The three
// equivalent right-hand sides (u, U = u^eta, pressure v = 1/u) are exposed
// for cross-checking; the stepper advances the u-form.
//
// Stepping is semi-implicit: the Laplacian enters implicitly with the
// diffusion coefficient (m-1)/u frozen at the current state (one
// tridiagonal solve per step); the gradient-square and constant terms are
// explicit. The implicit matrix discretizes the Laplacian in flux form,
//     Lap u = sinh^{1-m} (sinh^{m-1} u')',
// which keeps every off-diagonal nonpositive for all m; see laplacian_radial
// for the stencil used by the evaluation operators.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "yflow/conformal.hpp"
#include "yflow/grid.hpp"
#include "yflow/operators.hpp"
#include "yflow/tridiagonal.hpp"

namespace yflow {

struct FlowState {
    double t;
    ConformalFactor u;
};

/// Quintic smoothstep, 0 at s <= 0, 1 at s >= 1, C^2 at both ends.
inline double smoothstep(double s) {
    if (s <= 0.0) return 0.0;
    if (s >= 1.0) return 1.0;
    return s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
}

/// Cutoff used to build ball initial data: identically 1 on [0, k-1],
/// descending over [k-1, k-1/4], identically 0 on [k-1/4, k].
inline double initial_cutoff(double r, double ball_radius) {
    return smoothstep((ball_radius - 0.25 - r) / 0.75);
}

struct InitialData {
    double boundary_constant; // c_k = grid-min of the raw factor on the ball
    ConformalFactor data;     // raw factor blended to c_k near the boundary
};

/// Builds (c_k, u0k) from a raw positive factor: c_k = min u0 on [0, k],
/// u0k = c_k + chi (u0 - c_k). The branches of the cutoff guarantee
/// u0k == u0 on [0, k-1] and u0k == c_k on [k-1/4, k] exactly.
inline InitialData build_initial_data(const ConformalFactor& u0_raw, double ball_radius) {
    const RadialGrid& g = u0_raw.grid();
    if (!(ball_radius > 2.0))
        throw config_error("build_initial_data: ball radius must exceed 2, got " +
                           std::to_string(ball_radius));
    if (ball_radius > g.r_max() * (1.0 + 1e-12))
        throw config_error("build_initial_data: ball radius " + std::to_string(ball_radius) +
                           " larger than grid extent " + std::to_string(g.r_max()));

    const double c_k = u0_raw.field().min_on_ball(ball_radius);
    std::vector<double> v(u0_raw.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double chi = initial_cutoff(g.node(i), ball_radius);
        if (chi >= 1.0)
            v[i] = u0_raw[i];
        else if (chi <= 0.0)
            v[i] = c_k;
        else
            v[i] = c_k + chi * (u0_raw[i] - c_k);
    }
    return InitialData{c_k, ConformalFactor(RadialField(g, std::move(v)))};
}

/// Moving boundary value c_k + m(m-1) t.
inline double boundary_value(double c_k, const Dimension& dim, double t) {
    return c_k + static_cast<double>(dim.m()) * (dim.m() - 1) * t;
}

/// The full ball problem: dimension, radius, horizon and blended data.
class DirichletProblem {
public:
    DirichletProblem(Dimension dim, double ball_radius, double horizon, InitialData initial)
        : dim_(dim), k_(ball_radius), horizon_(horizon), initial_(std::move(initial)) {
        if (!(k_ > 2.0))
            throw config_error("DirichletProblem: ball radius must exceed 2");
        if (std::abs(initial_.data.grid().r_max() - k_) > 1e-9 * k_)
            throw config_error("DirichletProblem: grid extent must equal the ball radius");
        if (!(initial_.boundary_constant > 0.0))
            throw config_error("DirichletProblem: boundary constant must be positive");
        if (horizon_ < 0.0) throw config_error("DirichletProblem: negative horizon");
    }

    static DirichletProblem from_raw(const Dimension& dim, const ConformalFactor& u0_raw,
                                     double horizon) {
        const double k = u0_raw.grid().r_max();
        return DirichletProblem(dim, k, horizon, build_initial_data(u0_raw, k));
    }

    const Dimension& dim() const { return dim_; }
    double ball_radius() const { return k_; }
    double horizon() const { return horizon_; }
    double boundary_constant() const { return initial_.boundary_constant; }
    const ConformalFactor& initial() const { return initial_.data; }
    const RadialGrid& grid() const { return initial_.data.grid(); }
    double boundary_at(double t) const { return boundary_value(initial_.boundary_constant, dim_, t); }

private:
    Dimension dim_;
    double k_;
    double horizon_;
    InitialData initial_;
};

// ---------------------------------------------------------------------------
// Right-hand sides of the three equivalent evolution equations.
// ---------------------------------------------------------------------------

/// du/dt = (m-1) ( m + Lap u / u + (m-6)/4 |u'|^2 / u^2 ).
inline RadialField rhs_u(const ConformalFactor& u, const Dimension& dim) {
    const RadialField L = laplacian_radial(u.field(), dim);
    const RadialField G = gradient_radial(u.field());
    const double mm1 = dim.m() - 1.0;
    const double grad_coef = 0.25 * (dim.m() - 6.0);
    std::vector<double> out(u.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double gi = G[i] / u[i];
        out[i] = mm1 * (dim.m() + L[i] / u[i] + grad_coef * gi * gi);
    }
    return RadialField(u.grid(), std::move(out));
}

inline RadialField rhs_u(const FlowState& state, const Dimension& dim) {
    return rhs_u(state.u, dim);
}

/// dU/dt = (m-1) ( m eta U + Lap U ) U^{-1/eta} for U = u^eta.
inline RadialField rhs_U(const RadialField& U, const Dimension& dim) {
    detail::require_positive(U, "rhs_U");
    const RadialField L = laplacian_radial(U, dim);
    const double mm1 = dim.m() - 1.0;
    const double meta = dim.m() * dim.eta();
    std::vector<double> out(U.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = mm1 * (meta * U[i] + L[i]) * std::pow(U[i], -dim.inv_eta());
    return RadialField(U.grid(), std::move(out));
}

/// dv/dt = (m-1) ( -m v^2 + v Lap v - (m+2)/4 |v'|^2 ) for the pressure v = 1/u.
inline RadialField rhs_pressure(const Pressure& v, const Dimension& dim) {
    const RadialField& f = v.field();
    const RadialField L = laplacian_radial(f, dim);
    const RadialField G = gradient_radial(f);
    const double mm1 = dim.m() - 1.0;
    const double grad_coef = 0.25 * (dim.m() + 2.0);
    std::vector<double> out(f.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = mm1 * (-dim.m() * f[i] * f[i] + f[i] * L[i] - grad_coef * G[i] * G[i]);
    return RadialField(f.grid(), std::move(out));
}

/// Rate of the power u^{eta+1} in divergence form,
///     (m-1) ( m (eta+1) u^eta + div( (1/u) grad u^{eta+1} ) ),
/// used to cross-check the chain-rule rate (eta+1) u^eta du/dt.
inline RadialField divergence_form_rate(const ConformalFactor& u, const Dimension& dim) {
    const RadialGrid& g = u.grid();
    const double ep1 = dim.eta() + 1.0;
    std::vector<double> w(u.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::pow(u[i], ep1);
    const RadialField Gw = gradient_radial(RadialField(g, std::move(w)));
    std::vector<double> flux(u.size());
    for (std::size_t i = 0; i < flux.size(); ++i) flux[i] = Gw[i] / u[i];
    const RadialField div = divergence_radial(RadialField(g, std::move(flux)), dim);
    const double mm1 = dim.m() - 1.0;
    std::vector<double> out(u.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = mm1 * (dim.m() * ep1 * std::pow(u[i], dim.eta()) + div[i]);
    return RadialField(g, std::move(out));
}

// ---------------------------------------------------------------------------
// Semi-implicit stepping.
// ---------------------------------------------------------------------------

/// One step of the semi-implicit scheme. The returned state lives at
/// t + dt, satisfies the boundary value there and is strictly positive,
/// otherwise a stability_error carrying the offending node is thrown.
inline FlowState step(const FlowState& state, double dt, const DirichletProblem& problem) {
    if (!(dt > 0.0)) throw domain_error("step: dt must be positive");
    const RadialGrid& g = state.u.grid();
    if (!(g == problem.grid()))
        throw config_error("step: state grid does not match the problem grid");
    const std::size_t n = g.intervals();
    const double h = g.spacing();
    const Dimension& dim = problem.dim();
    const double mm1 = dim.m() - 1.0;
    const double grad_coef = 0.25 * (dim.m() - 6.0);

    const double bdry = problem.boundary_at(state.t);
    if (std::abs(state.u[n] - bdry) > 1e-8 * std::max(1.0, std::abs(bdry)))
        throw precondition_error("step: state does not satisfy the boundary value at r = k");

    const RadialField& u = state.u.field();
    const RadialField G = gradient_radial(u);

    std::vector<double> lo(g.size(), 0.0), di(g.size(), 1.0), up(g.size(), 0.0), rhs(g.size());

    // Origin row: Lap u(0) = 2 m (u_1 - u_0) / h^2.
    {
        const double D = mm1 / u[0];
        const double c = dt * D * 2.0 * dim.m() / (h * h);
        di[0] = 1.0 + c;
        up[0] = -c;
        rhs[0] = u[0] + dt * mm1 * dim.m();
    }
    for (std::size_t i = 1; i < n; ++i) {
        const double r = g.node(i);
        const double s_lo = std::pow(std::sinh(r - 0.5 * h) / std::sinh(r), mm1) / (h * h);
        const double s_up = std::pow(std::sinh(r + 0.5 * h) / std::sinh(r), mm1) / (h * h);
        const double D = dt * mm1 / u[i];
        lo[i] = -D * s_lo;
        up[i] = -D * s_up;
        di[i] = 1.0 + D * (s_lo + s_up);
        const double gi = G[i] / u[i];
        rhs[i] = u[i] + dt * mm1 * (dim.m() + grad_coef * gi * gi);
    }
    // Dirichlet row at r = k.
    di[n] = 1.0;
    rhs[n] = problem.boundary_at(state.t + dt);

    std::vector<double> next = tridiagonal_solve(std::move(lo), std::move(di),
                                                 std::move(up), std::move(rhs));
    for (std::size_t i = 0; i < next.size(); ++i)
        if (!(next[i] > 0.0) || !std::isfinite(next[i]))
            throw stability_error("step: positivity lost at node " + std::to_string(i) +
                                      " (t = " + std::to_string(state.t + dt) + ")",
                                  state.t + dt, i);
    return FlowState{state.t + dt, ConformalFactor(RadialField(g, std::move(next)))};
}

struct Trajectory {
    DirichletProblem problem;
    std::vector<FlowState> states; // one per output stamp, first at t = 0
    double dt = 0.0;               // nominal step used
    int halvings = 0;              // emergency halvings spent across the run

    std::vector<double> times() const {
        std::vector<double> t(states.size());
        for (std::size_t i = 0; i < t.size(); ++i) t[i] = states[i].t;
        return t;
    }
};

inline std::vector<double> uniform_stamps(double horizon, std::size_t count = 11) {
    if (horizon <= 0.0) return {0.0};
    std::vector<double> s(count);
    for (std::size_t i = 0; i < count; ++i)
        s[i] = horizon * static_cast<double>(i) / static_cast<double>(count - 1);
    return s;
}

/// Integrates the ball problem from t = 0 to the horizon, recording the
/// state at each output stamp. A step that loses positivity is retried at
/// half the step size, up to 20 halvings, before giving up.
inline Trajectory solve_dirichlet(const DirichletProblem& problem, double dt,
                                  std::vector<double> stamps = {}) {
    if (!(dt > 0.0)) throw domain_error("solve_dirichlet: dt must be positive");
    const double T = problem.horizon();
    if (stamps.empty()) stamps = uniform_stamps(T);
    std::sort(stamps.begin(), stamps.end());
    if (stamps.front() < 0.0 || stamps.back() > T * (1.0 + 1e-12))
        throw config_error("solve_dirichlet: output stamps outside [0, T]");

    const double eps = 1e-12 * std::max(1.0, T);
    // trajectories always carry the initial state; duplicates collapse
    if (stamps.front() > eps) stamps.insert(stamps.begin(), 0.0);
    stamps.erase(std::unique(stamps.begin(), stamps.end(),
                             [&](double a, double b) { return std::abs(a - b) <= eps; }),
                 stamps.end());

    Trajectory traj{problem, {}, dt, 0};
    FlowState state{0.0, problem.initial()};

    for (double stamp : stamps) {
        while (stamp - state.t > eps) {
            const double want = std::min(dt, stamp - state.t);
            double trial = want;
            int halved = 0;
            for (;;) {
                try {
                    state = step(state, trial, problem);
                    break;
                } catch (const stability_error& e) {
                    if (++halved > 20)
                        throw stability_error(
                            "solve_dirichlet: unstable after 20 halvings at node " +
                                std::to_string(e.node) + ", t = " + std::to_string(e.t),
                            e.t, e.node);
                    trial *= 0.5;
                }
            }
            traj.halvings += halved;
        }
        traj.states.push_back(FlowState{stamp, state.u});
    }
    return traj;
}

// ---------------------------------------------------------------------------
// Exhaustion by balls.
// ---------------------------------------------------------------------------

/// A time series of radial fields with its dimension, used for restricted
/// views (the exhaustion limit candidate) and for CSV export.
struct FieldSeries {
    Dimension dim;
    std::vector<double> times;
    std::vector<RadialField> fields;
};

struct ExhaustionResult {
    std::vector<double> radii;          // the ball radii k
    std::vector<Trajectory> trajectories;
    double window_radius = 0.0;
    std::vector<double> sup_differences; // sup over window of |u_{k+} - u_k|
    FieldSeries limit;                   // largest-k run restricted to the window
};

/// Solves the ball problem for each k on a common grid refinement h and
/// reports the pairwise sup-differences over the observation window
/// [0, r_obs] x [0, T] together with the largest-k trajectory restricted
/// to the window.
inline ExhaustionResult exhaustion_run(const std::function<double(double)>& u0,
                                       const Dimension& dim,
                                       const std::vector<double>& k_list, double r_obs,
                                       double horizon, double dt, double h,
                                       std::vector<double> stamps = {}) {
    if (k_list.empty()) throw config_error("exhaustion_run: empty radius list");
    for (std::size_t i = 1; i < k_list.size(); ++i)
        if (!(k_list[i] > k_list[i - 1]))
            throw config_error("exhaustion_run: radii must be strictly increasing");
    if (!(r_obs > 0.0) || k_list.front() < r_obs + 3.0)
        throw config_error("exhaustion_run: every radius must satisfy k >= r_obs + 3");
    if (stamps.empty()) stamps = uniform_stamps(horizon);

    ExhaustionResult res{{}, {}, r_obs, {}, FieldSeries{dim, {}, {}}};
    res.radii = k_list;
    for (double k : k_list) {
        const auto n = static_cast<std::size_t>(std::llround(k / h));
        RadialGrid grid(k, n);
        ConformalFactor raw(RadialField::sample(grid, u0));
        DirichletProblem problem(dim, k, horizon, build_initial_data(raw, k));
        res.trajectories.push_back(solve_dirichlet(problem, dt, stamps));
    }

    const auto window_index = [&](const Trajectory& t) {
        return static_cast<std::size_t>(
            std::floor(r_obs / t.problem.grid().spacing() + 1e-9));
    };
    for (std::size_t j = 0; j + 1 < res.trajectories.size(); ++j) {
        const Trajectory& a = res.trajectories[j];
        const Trajectory& b = res.trajectories[j + 1];
        const std::size_t iw = std::min(window_index(a), window_index(b));
        double d = 0.0;
        for (std::size_t s = 0; s < a.states.size(); ++s)
            for (std::size_t i = 0; i <= iw; ++i)
                d = std::max(d, std::abs(b.states[s].u[i] - a.states[s].u[i]));
        res.sup_differences.push_back(d);
    }

    const Trajectory& top = res.trajectories.back();
    const std::size_t iw = window_index(top);
    const double hw = top.problem.grid().spacing();
    RadialGrid wgrid(static_cast<double>(iw) * hw, iw);
    for (const FlowState& s : top.states) {
        std::vector<double> v(iw + 1);
        for (std::size_t i = 0; i <= iw; ++i) v[i] = s.u[i];
        res.limit.times.push_back(s.t);
        res.limit.fields.emplace_back(wgrid, std::move(v));
    }
    return res;
}

} // namespace yflow
