#pragma once

// Fully discrete third-order Active Flux kernel for q_t + a q_x = 0, a > 0,
// with the correction terms weighted by R, S, T, U.
//
// The scalar update formulas are templates so that the same code can act on
// real grid data and on complex Fourier amplitudes.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "afl/core.hpp"

namespace afl {

/// q(xi) = c0 + c1 xi + c2 xi^2 on the reference cell [-dx/2, dx/2].
struct ReconstructionCoeffs {
    double c0 = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;

    /// Exact cell mean of the quadratic.
    double mean(double dx) const noexcept { return c0 + c2 * dx * dx / 12.0; }
};

inline ReconstructionCoeffs reconstruct(double avg, double q_left, double q_right, double dx) {
    if (!(dx > 0.0)) {
        throw ConfigError("reconstruction needs dx > 0");
    }
    if (!std::isfinite(avg) || !std::isfinite(q_left) || !std::isfinite(q_right) || !std::isfinite(dx)) {
        throw ConfigError("reconstruction inputs must be finite");
    }
    return {(6.0 * avg - q_right - q_left) / 4.0,
            (q_right - q_left) / dx,
            3.0 * (q_left + q_right - 2.0 * avg) / (dx * dx)};
}

inline double eval_reconstruction(const ReconstructionCoeffs& c, double xi) noexcept {
    return c.c0 + xi * (c.c1 + xi * c.c2);
}

/// New point value at i+1/2 from q_{i+1/2}, q_{i-1/2} and Q_i.
template <typename T>
T point_value_update(const T& q_right, const T& q_left, const T& avg,
                     const SchemeParameters& p, double nu) {
    return (1.0 - nu) * q_right + nu * q_left -
           nu * (1.0 - nu) * (p.R * (q_right - avg) - p.S * (avg - q_left));
}

/// Time-averaged interface value over one step at i+1/2, from cell i.
template <typename T>
T interface_time_average(const T& q_right, const T& q_left, const T& avg,
                         const SchemeParameters& p, double nu) {
    return avg + (1.0 - nu) * (p.T * (q_right - avg) + p.U * (avg - q_left));
}

template <typename T>
T average_update(const T& avg, const T& flux_right, const T& flux_left, double nu) {
    return avg - nu * (flux_right - flux_left);
}

/// Simpson's rule in time applied to the exact solution at the right
/// interface, which travels back into the cell's reconstruction.
inline double simpson_time_average(double avg, double q_left, double q_right, double dx, CourantNumber nu) {
    const auto c = reconstruct(avg, q_left, q_right, dx);
    const auto f = [&](double l) { return eval_reconstruction(c, 0.5 * dx - l * nu.value() * dx); };
    return (f(0.0) + 4.0 * f(0.5) + f(1.0)) / 6.0;
}

namespace detail {

inline void check_finite(const std::vector<double>& v, std::int64_t step_index, const char* what) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v[i])) {
            throw BlowUpError(std::string("non-finite ") + what + " in cell " + std::to_string(i) +
                                  " at step " + std::to_string(step_index),
                              step_index);
        }
    }
}

}  // namespace detail

/// One time step. Uses only time-level n data: every interface flux is
/// computed into a scratch buffer before any update is written.
inline SolutionState step(const SolutionState& state, const SchemeParameters& params, CourantNumber nu,
                          std::int64_t step_index = 0) {
    const std::size_t n = state.size();
    const double c = nu.value();
    const auto& Q = state.averages();
    const auto& q = state.point_values();

    auto left = [n](std::size_t i) { return i == 0 ? n - 1 : i - 1; };

    std::vector<double> flux(n);
    for (std::size_t i = 0; i < n; ++i) {
        flux[i] = interface_time_average(q[i], q[left(i)], Q[i], params, c);
    }

    std::vector<double> Q_new(n), q_new(n);
    for (std::size_t i = 0; i < n; ++i) {
        Q_new[i] = average_update(Q[i], flux[i], flux[left(i)], c);
        q_new[i] = point_value_update(q[i], q[left(i)], Q[i], params, c);
    }

    detail::check_finite(Q_new, step_index, "cell average");
    detail::check_finite(q_new, step_index, "point value");
    return SolutionState(std::move(Q_new), std::move(q_new));
}

inline SolutionState advance(const SolutionState& state, const SchemeParameters& params, CourantNumber nu,
                             std::int64_t n_steps) {
    if (n_steps < 0) {
        throw ConfigError("number of steps must be nonnegative");
    }
    SolutionState current = state;
    for (std::int64_t k = 0; k < n_steps; ++k) {
        current = step(current, params, nu, k + 1);
    }
    return current;
}

}  // namespace afl
