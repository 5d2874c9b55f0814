// Thomas algorithm for tridiagonal systems.
#pragma once

#include <cmath>
#include <vector>

#include "yflow/errors.hpp"

namespace yflow {

/// Solves the tridiagonal system with subdiagonal `lo` (lo[0] unused),
/// diagonal `di` and superdiagonal `up` (up[n-1] unused), in place over
/// copies. Throws numerical_error on a vanishing pivot.
inline std::vector<double> tridiagonal_solve(std::vector<double> lo,
                                             std::vector<double> di,
                                             std::vector<double> up,
                                             std::vector<double> rhs) {
    const std::size_t n = di.size();
    for (std::size_t i = 1; i < n; ++i) {
        if (std::abs(di[i - 1]) < 1e-300)
            throw numerical_error("tridiagonal_solve: singular pivot at row " +
                                  std::to_string(i - 1));
        const double w = lo[i] / di[i - 1];
        di[i] -= w * up[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    if (std::abs(di[n - 1]) < 1e-300)
        throw numerical_error("tridiagonal_solve: singular pivot at last row");
    rhs[n - 1] /= di[n - 1];
    for (std::size_t i = n - 1; i-- > 0;)
        rhs[i] = (rhs[i] - up[i] * rhs[i + 1]) / di[i];
    return rhs;
}

} // namespace yflow
