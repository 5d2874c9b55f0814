// Radial differential and integral operators on hyperbolic space H^m.
//
// The Laplace-Beltrami operator of a radial function is
//     L f = f''(r) + (m-1) coth(r) f'(r),
// singular at the pole r = 0. Smooth radial functions are even in r, which
// gives the regular limit L f(0) = m f''(0); that rule is built into the
// stencils below. Stencils are assembled from nested node differences so
// that constants are annihilated exactly, not merely to round-off.
#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>

#include "yflow/grid.hpp"

namespace yflow {

inline double coth(double r) { return 1.0 / std::tanh(r); }

/// Hypersurface area of the unit (m-1)-sphere, 2 pi^{m/2} / Gamma(m/2).
inline double unit_sphere_area(int m) {
    return 2.0 * std::pow(std::numbers::pi, 0.5 * m) / std::tgamma(0.5 * m);
}

/// Second-order discrete Laplace-Beltrami operator of a radial field.
/// Interior: central differences; origin: m f''(0) via even extension;
/// outer node: one-sided second-order stencils.
inline RadialField laplacian_radial(const RadialField& f, const Dimension& dim) {
    const RadialGrid& g = f.grid();
    const std::size_t n = g.intervals();
    const double h = g.spacing();
    const double mm1 = dim.m() - 1.0;
    std::vector<double> out(g.size());

    // r = 0: f'(0) = 0 and coth(r) f'(r) -> f''(0), so L f(0) = m f''(0)
    // with f''(0) = 2 (f_1 - f_0) / h^2 from the even extension.
    out[0] = dim.m() * 2.0 * (f[1] - f[0]) / (h * h);

    for (std::size_t i = 1; i < n; ++i) {
        const double d_up = f[i + 1] - f[i];
        const double d_lo = f[i] - f[i - 1];
        const double fpp = (d_up - d_lo) / (h * h);
        const double fp = (d_up + d_lo) / (2.0 * h);
        out[i] = fpp + mm1 * coth(g.node(i)) * fp;
    }

    {
        const double d1 = f[n] - f[n - 1];
        const double d2 = f[n - 1] - f[n - 2];
        const double d3 = f[n - 2] - f[n - 3];
        const double fp = (2.0 * d1 + (d1 - d2)) / (2.0 * h);
        const double fpp = ((d1 - d2) + ((d1 - d2) - (d2 - d3))) / (h * h);
        out[n] = fpp + mm1 * coth(g.r_max()) * fp;
    }
    return RadialField(g, std::move(out));
}

/// Second-order discrete radial derivative f'. Zero at the origin (even
/// symmetry), central in the interior, one-sided at the outer node.
inline RadialField gradient_radial(const RadialField& f) {
    const RadialGrid& g = f.grid();
    const std::size_t n = g.intervals();
    const double h = g.spacing();
    std::vector<double> out(g.size());

    out[0] = 0.0;
    for (std::size_t i = 1; i < n; ++i) out[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
    {
        const double d1 = f[n] - f[n - 1];
        const double d2 = f[n - 1] - f[n - 2];
        out[n] = (2.0 * d1 + (d1 - d2)) / (2.0 * h);
    }
    return RadialField(g, std::move(out));
}

/// Divergence of the radial vector field F(r) d/dr:
///     div F = F'(r) + (m-1) coth(r) F(r),
/// with the pole limit m F'(0) for odd F (any radial flux vanishes at 0).
inline RadialField divergence_radial(const RadialField& flux, const Dimension& dim) {
    const RadialGrid& g = flux.grid();
    const std::size_t n = g.intervals();
    const double h = g.spacing();
    const double mm1 = dim.m() - 1.0;
    std::vector<double> out(g.size());

    // Odd extension at the pole: F'(0) ~ F_1 / h, div F(0) = m F'(0).
    out[0] = dim.m() * flux[1] / h;
    for (std::size_t i = 1; i < n; ++i) {
        const double fp = (flux[i + 1] - flux[i - 1]) / (2.0 * h);
        out[i] = fp + mm1 * coth(g.node(i)) * flux[i];
    }
    {
        const double d1 = flux[n] - flux[n - 1];
        const double d2 = flux[n - 1] - flux[n - 2];
        const double fp = (2.0 * d1 + (d1 - d2)) / (2.0 * h);
        out[n] = fp + mm1 * coth(g.r_max()) * flux[n];
    }
    return RadialField(g, std::move(out));
}

/// Integral of f against the hyperbolic volume measure over the annulus
/// r in [r_lo, r_hi]:
///     omega_{m-1} * int f(r) sinh^{m-1}(r) dr,
/// composite trapezoid on the grid; off-node endpoints are handled by
/// linear interpolation of the integrand.
inline double integrate_radial(const RadialField& f, const Dimension& dim,
                               double r_lo, double r_hi) {
    const RadialGrid& g = f.grid();
    const double eps = 1e-12 * std::max(1.0, g.r_max());
    if (!(r_lo >= -eps) || !(r_lo < r_hi) || !(r_hi <= g.r_max() + eps))
        throw domain_error("integrate_radial: interval [" + std::to_string(r_lo) + ", " +
                           std::to_string(r_hi) + "] not inside [0, " +
                           std::to_string(g.r_max()) + "]");
    r_lo = std::max(r_lo, 0.0);
    r_hi = std::min(r_hi, g.r_max());

    const std::size_t n = g.intervals();
    const double h = g.spacing();
    const double em1 = dim.m() - 1.0;
    std::vector<double> w(g.size());
    for (std::size_t i = 0; i < w.size(); ++i)
        w[i] = f[i] * std::pow(std::sinh(g.node(i)), em1);

    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = std::max(r_lo, g.node(i));
        const double b = std::min(r_hi, g.node(i + 1));
        if (b <= a) continue;
        const double ta = (a - g.node(i)) / h;
        const double tb = (b - g.node(i)) / h;
        const double wa = w[i] + ta * (w[i + 1] - w[i]);
        const double wb = w[i] + tb * (w[i + 1] - w[i]);
        sum += 0.5 * (wa + wb) * (b - a);
    }
    return unit_sphere_area(dim.m()) * sum;
}

} // namespace yflow
