// Ambient dimension, uniform radial grid and sampled radial fields.
//
// Everything downstream is parameterized by geodesic radius r on H^m;
// a field is just the node values of a rotationally symmetric function.
#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "yflow/errors.hpp"

namespace yflow {

/// Dimension m >= 3 of hyperbolic space together with the conformal
/// exponent eta = (m-2)/4 used throughout.
class Dimension {
public:
    explicit Dimension(int m) : m_(m), eta_((m - 2) / 4.0) {
        if (m < 3) throw config_error("Dimension: m must be >= 3, got " + std::to_string(m));
    }

    int m() const { return m_; }
    double eta() const { return eta_; }
    double inv_eta() const { return 4.0 / (m_ - 2); }

    /// Scalar curvature of the background metric: -m(m-1).
    double background_curvature() const { return -static_cast<double>(m_) * (m_ - 1); }

private:
    int m_;
    double eta_;
};

/// Uniform grid 0 = r_0 < r_1 < ... < r_n = r_max in geodesic radius.
class RadialGrid {
public:
    RadialGrid(double r_max, std::size_t intervals) : r_max_(r_max), n_(intervals) {
        if (!(r_max > 0.0) || !std::isfinite(r_max))
            throw config_error("RadialGrid: r_max must be positive and finite");
        if (n_ < 8)
            throw config_error("RadialGrid: need at least 8 intervals, got " + std::to_string(n_));
        h_ = r_max / static_cast<double>(n_);
    }

    double r_max() const { return r_max_; }
    std::size_t intervals() const { return n_; }
    std::size_t size() const { return n_ + 1; }          // number of nodes
    double spacing() const { return h_; }
    double node(std::size_t i) const { return static_cast<double>(i) * h_; }

    friend bool operator==(const RadialGrid& a, const RadialGrid& b) {
        return a.n_ == b.n_ && a.r_max_ == b.r_max_;
    }

private:
    double r_max_;
    std::size_t n_;
    double h_;
};

/// Node values of a radial function on a grid. Values are validated finite.
class RadialField {
public:
    RadialField(RadialGrid grid, std::vector<double> values)
        : grid_(grid), v_(std::move(values)) {
        if (v_.size() != grid_.size())
            throw config_error("RadialField: expected " + std::to_string(grid_.size()) +
                               " values, got " + std::to_string(v_.size()));
        for (std::size_t i = 0; i < v_.size(); ++i)
            if (!std::isfinite(v_[i]))
                throw domain_error("RadialField: non-finite value at node " + std::to_string(i));
    }

    template <class Fn>
    static RadialField sample(const RadialGrid& grid, Fn&& fn) {
        std::vector<double> v(grid.size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(grid.node(i));
        return RadialField(grid, std::move(v));
    }

    static RadialField constant(const RadialGrid& grid, double c) {
        return RadialField(grid, std::vector<double>(grid.size(), c));
    }

    const RadialGrid& grid() const { return grid_; }
    std::size_t size() const { return v_.size(); }
    std::span<const double> values() const { return v_; }

    double operator[](std::size_t i) const { return v_[i]; }
    double& operator[](std::size_t i) { return v_[i]; }

    double min() const {
        double m = v_[0];
        for (double x : v_) m = x < m ? x : m;
        return m;
    }
    double max() const {
        double m = v_[0];
        for (double x : v_) m = x > m ? x : m;
        return m;
    }

    /// min / max restricted to nodes with r <= radius.
    double min_on_ball(double radius) const { return extreme_on_ball(radius, /*want_min=*/true); }
    double max_on_ball(double radius) const { return extreme_on_ball(radius, /*want_min=*/false); }

private:
    double extreme_on_ball(double radius, bool want_min) const {
        if (radius < 0.0) throw domain_error("RadialField: negative ball radius");
        const double h = grid_.spacing();
        std::size_t last = static_cast<std::size_t>(std::floor(radius / h + 1e-9));
        if (last >= v_.size()) last = v_.size() - 1;
        double m = v_[0];
        for (std::size_t i = 1; i <= last; ++i)
            m = want_min ? (v_[i] < m ? v_[i] : m) : (v_[i] > m ? v_[i] : m);
        return m;
    }

    RadialGrid grid_;
    std::vector<double> v_;
};

} // namespace yflow
