// Conformal-factor bookkeeping for metrics g = u g_H on hyperbolic space:
// the power map U = u^eta, the pressure v = 1/u, the scalar curvature of
// the conformal metric, and the flat (Poincare ball) initial factor.
#pragma once

#include <cmath>
#include <string>
#include <utility>

#include "yflow/grid.hpp"
#include "yflow/operators.hpp"

namespace yflow {

namespace detail {
inline void require_positive(const RadialField& f, const char* who) {
    for (std::size_t i = 0; i < f.size(); ++i)
        if (!(f[i] > 0.0))
            throw domain_error(std::string(who) + ": nonpositive value " +
                               std::to_string(f[i]) + " at node " + std::to_string(i));
}
} // namespace detail

/// Positive conformal factor u with g = u g_H.
class ConformalFactor {
public:
    explicit ConformalFactor(RadialField u) : u_(std::move(u)) {
        detail::require_positive(u_, "ConformalFactor");
    }
    const RadialField& field() const { return u_; }
    const RadialGrid& grid() const { return u_.grid(); }
    double operator[](std::size_t i) const { return u_[i]; }
    std::size_t size() const { return u_.size(); }

private:
    RadialField u_;
};

/// Pressure v = 1/u.
class Pressure {
public:
    explicit Pressure(RadialField v) : v_(std::move(v)) {
        detail::require_positive(v_, "Pressure");
    }
    const RadialField& field() const { return v_; }

private:
    RadialField v_;
};

/// U = u^eta, pointwise.
inline RadialField to_U(const ConformalFactor& u, const Dimension& dim) {
    std::vector<double> v(u.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::pow(u[i], dim.eta());
    return RadialField(u.grid(), std::move(v));
}

/// Inverse power map u = U^{1/eta}.
inline ConformalFactor from_U(const RadialField& U, const Dimension& dim) {
    detail::require_positive(U, "from_U");
    std::vector<double> v(U.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::pow(U[i], dim.inv_eta());
    return ConformalFactor(RadialField(U.grid(), std::move(v)));
}

/// Scalar curvature of g = u g_H, computed through U = u^eta:
///     R_g = U^{-(m+2)/(m-2)} ( R_H U - 4 (m-1)/(m-2) Lap U ),
/// with R_H = -m(m-1).
inline RadialField scalar_curvature(const ConformalFactor& u, const Dimension& dim) {
    const int m = dim.m();
    const RadialField U = to_U(u, dim);
    const RadialField LU = laplacian_radial(U, dim);
    const double r_h = dim.background_curvature();
    const double diff_coef = 4.0 * (m - 1.0) / (m - 2.0);
    const double expo = -static_cast<double>(m + 2) / (m - 2);
    std::vector<double> out(U.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = std::pow(U[i], expo) * (r_h * U[i] - diff_coef * LU[i]);
    return RadialField(u.grid(), std::move(out));
}

inline Pressure pressure(const ConformalFactor& u) {
    std::vector<double> v(u.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = 1.0 / u[i];
    return Pressure(RadialField(u.grid(), std::move(v)));
}

/// Reads a pressure field back as the conformal factor u = 1/v.
inline ConformalFactor pressure_to_factor(const Pressure& v) {
    const RadialField& f = v.field();
    std::vector<double> u(f.size());
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = 1.0 / f[i];
    return ConformalFactor(RadialField(f.grid(), std::move(u)));
}

/// Conformal factor of the flat metric, g_E = u0 g_H in the Poincare ball
/// model: u0(r) = sech^4(r/2) / 4, with u0(0) = 1/4, strictly decaying.
inline double euclidean_factor_at(double r) {
    const double s = 1.0 / std::cosh(0.5 * r);
    return 0.25 * s * s * s * s;
}

inline ConformalFactor euclidean_factor(const RadialGrid& grid) {
    return ConformalFactor(RadialField::sample(grid, euclidean_factor_at));
}

} // namespace yflow
