// Error taxonomy shared by the whole library.
#pragma once

#include <stdexcept>
#include <string>

namespace yflow {

// Invalid setup: bad grid sizes, dimensions, scenario fields, cutoff powers.
struct config_error : std::runtime_error {
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// Values outside the mathematical domain of an operation (nonpositive
// conformal factor, integration interval off the grid, dt <= 0, ...).
struct domain_error : std::runtime_error {
    explicit domain_error(const std::string& what) : std::runtime_error(what) {}
};

// A caller-side contract was violated (boundary data mismatch, sign
// condition at the outer node, ...).
struct precondition_error : std::runtime_error {
    explicit precondition_error(const std::string& what) : std::runtime_error(what) {}
};

// A time step lost positivity. Carries the time level and the offending
// node so the driver can shrink dt and retry.
struct stability_error : std::runtime_error {
    double t;
    std::size_t node;
    stability_error(const std::string& what, double t_, std::size_t node_)
        : std::runtime_error(what), t(t_), node(node_) {}
};

// Linear algebra breakdown (singular tridiagonal system).
struct numerical_error : std::runtime_error {
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

// A barrier was evaluated at or past its extinction time.
struct extinction_error : std::runtime_error {
    explicit extinction_error(const std::string& what) : std::runtime_error(what) {}
};

// File output failure.
struct io_error : std::runtime_error {
    explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace yflow
