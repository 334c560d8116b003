#pragma once

// Von Neumann analysis of the parameterized scheme.
//
// A single harmonic Q_i = Q_hat e^{I(i+1/2)theta}, q_{i+1/2} = q_hat
// e^{I(i+1/2)theta} is mapped across one step by a 2x2 complex matrix acting
// on (Q_hat, q_hat). Its eigenvalues are compared against the exact symbol
// e^{-I nu theta}.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "afl/core.hpp"
#include "afl/families.hpp"
#include "afl/scheme.hpp"

namespace afl {

template <typename Real = double>
struct AmplificationMatrix {
    using complex_type = std::complex<Real>;

    complex_type a11, a12, a21, a22;
    Real theta = 0;
    Real nu = 0;
    SchemeParameters params;

    complex_type trace() const { return a11 + a22; }
    complex_type determinant() const { return a11 * a22 - a12 * a21; }

    std::array<complex_type, 2> apply(const complex_type& Q, const complex_type& q) const {
        return {a11 * Q + a12 * q, a21 * Q + a22 * q};
    }
};

template <typename Real = double>
struct EigenPair {
    std::complex<Real> principal;
    std::complex<Real> spurious;
    /// tr^2 - 4 det; zero where the two branches collide.
    std::complex<Real> discriminant;
};

template <typename Real = double>
std::complex<Real> exact_eigenvalue(Real nu, Real theta) {
    return std::polar(Real(1), -nu * theta);
}

template <typename Real = double>
AmplificationMatrix<Real> amplification_matrix(const SchemeParameters& p, double nu_in, double theta_in) {
    using C = std::complex<Real>;
    const Real nu = nu_in;
    const Real theta = theta_in;
    const Real R = p.R, S = p.S, T = p.T, U = p.U;

    const Real s = std::sin(theta);
    const Real half = std::sin(theta / 2);
    const C shift(std::cos(theta), -s);              // e^{-I theta}
    const C one_minus_shift(2 * half * half, s);     // 1 - e^{-I theta} without cancellation

    AmplificationMatrix<Real> A;
    A.a11 = C(1) - nu * (1 + (1 - nu) * (U - T)) * one_minus_shift;
    A.a12 = nu * (1 - nu) * (U * shift - T) * one_minus_shift;
    A.a21 = C(nu * (1 - nu) * (R + S));
    A.a22 = (1 - nu) * (1 - nu * R) + nu * (1 - (1 - nu) * S) * shift;
    A.theta = theta;
    A.nu = nu;
    A.params = p;
    return A;
}

/// Rebuilds the matrix column by column from the scalar update formulas
/// acting on complex harmonic data and returns the largest entrywise
/// deviation from amplification_matrix.
inline double matrix_consistency_check(const SchemeParameters& p, double nu, double theta) {
    using C = std::complex<double>;
    const C shift = std::polar(1.0, -theta);
    const auto A = amplification_matrix(p, nu, theta);

    double residual = 0.0;
    const std::array<std::array<C, 2>, 2> unit{{{C(1), C(0)}, {C(0), C(1)}}};
    for (int col = 0; col < 2; ++col) {
        const C Q = unit[col][0];
        const C q = unit[col][1];
        // Cell i and its upwind neighbour i-1, each carrying one more factor e^{-I theta}.
        const C q_right = q;
        const C q_left = q * shift;
        const C q_left_left = q * shift * shift;
        const C Q_left = Q * shift;

        const C flux_right = interface_time_average(q_right, q_left, Q, p, nu);
        const C flux_left = interface_time_average(q_left, q_left_left, Q_left, p, nu);
        const C Q_new = average_update(Q, flux_right, flux_left, nu);
        const C q_new = point_value_update(q_right, q_left, Q, p, nu);

        const C ref_top = col == 0 ? A.a11 : A.a12;
        const C ref_bottom = col == 0 ? A.a21 : A.a22;
        residual = std::max({residual, std::abs(Q_new - ref_top), std::abs(q_new - ref_bottom)});
    }
    return residual;
}

/// Roots of the characteristic polynomial, split into principal (closest to
/// e^{-I nu theta}) and spurious.
///
/// The quadratic is solved for the shifted matrix A - lambda_exact I, using
/// the cancellation-free root pair (q, det/q). This keeps the principal
/// deviation accurate to absolute round-off even when it is far below
/// machine epsilon relative to 1, and handles double roots gracefully.
template <typename Real>
EigenPair<Real> eigenvalues(const AmplificationMatrix<Real>& A) {
    using C = std::complex<Real>;
    const C exact = exact_eigenvalue<Real>(A.nu, A.theta);
    const C m11 = A.a11 - exact;
    const C m22 = A.a22 - exact;
    const C t = m11 + m22;
    const C d = m11 * m22 - A.a12 * A.a21;
    const C disc = t * t - Real(4) * d;
    const C root = std::sqrt(disc);

    const bool plus = (std::conj(t) * root).real() >= 0;
    const C big = (plus ? t + root : t - root) / Real(2);
    const C small = big == C(0) ? C(0) : d / big;

    C first = exact + small;
    C second = exact + big;
    if (std::abs(small) == std::abs(big) && std::abs(first + Real(1)) < std::abs(second + Real(1))) {
        std::swap(first, second);
    }
    return {first, second, disc};
}

struct DissipationError {
    double principal;
    double spurious;
};

/// |lambda_j| / |lambda_exact|.
template <typename Real>
DissipationError dissipation_error(const EigenPair<Real>& pair, double nu, double theta) {
    const double exact = std::abs(exact_eigenvalue(nu, theta));
    return {static_cast<double>(std::abs(pair.principal)) / exact,
            static_cast<double>(std::abs(pair.spurious)) / exact};
}

struct DispersionError {
    /// Empty when the eigenvalue is too small to carry a phase.
    std::optional<double> principal;
    std::optional<double> spurious;
};

/// Relative wave speed arg(lambda_j) / (-nu theta), principal argument.
template <typename Real>
DispersionError dispersion_error(const EigenPair<Real>& pair, double nu, double theta) {
    if (theta == 0.0) {
        throw ConfigError("dispersion error is undefined at theta = 0");
    }
    const double exact_phase = -nu * theta;
    const auto phase = [&](const std::complex<Real>& lam) -> std::optional<double> {
        if (!(std::abs(lam) > Real(1e-300))) {
            return std::nullopt;
        }
        return static_cast<double>(std::arg(lam)) / exact_phase;
    };
    return {phase(pair.principal), phase(pair.spurious)};
}

inline FourierMode evolve_mode(const FourierMode& mode, const SchemeParameters& p, CourantNumber nu,
                               std::int64_t n_steps) {
    if (n_steps < 0) {
        throw ConfigError("number of steps must be nonnegative");
    }
    const auto A = amplification_matrix(p, nu.value(), mode.theta);
    FourierMode out = mode;
    for (std::int64_t k = 0; k < n_steps; ++k) {
        const auto next = A.apply(out.Q_hat, out.q_hat);
        out.Q_hat = next[0];
        out.q_hat = next[1];
    }
    return out;
}

/// Distance between two eigenvalue pairs regarded as unordered sets.
template <typename Real>
double eigen_set_distance(const EigenPair<Real>& a, const EigenPair<Real>& b) {
    const double same = std::max(std::abs(a.principal - b.principal), std::abs(a.spurious - b.spurious));
    const double crossed = std::max(std::abs(a.principal - b.spurious), std::abs(a.spurious - b.principal));
    return std::min(same, crossed);
}

/// n uniform cell-midpoint samples of [-pi, pi]; for even n none is zero.
inline std::vector<double> uniform_theta_grid(std::size_t n) {
    std::vector<double> grid(n);
    const double h = 2.0 * pi / static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j) {
        grid[j] = -pi + (static_cast<double>(j) + 0.5) * h;
    }
    return grid;
}

// ---------------------------------------------------------------------------
// Sweeps

struct SweepRow {
    double nu;
    double theta;
    std::complex<double> lam1;
    std::complex<double> lam2;
    double e1_principal;
    double e1_spurious;
    std::optional<double> e2_principal;
    bool collision;
};

inline constexpr double collision_tolerance = 1e-10;

inline std::vector<SweepRow> spectral_sweep(const SchemeParameters& p, double nu, std::span<const double> thetas) {
    std::vector<SweepRow> rows;
    rows.reserve(thetas.size());
    for (double theta : thetas) {
        const auto pair = eigenvalues(amplification_matrix(p, nu, theta));
        const auto e1 = dissipation_error(pair, nu, theta);
        std::optional<double> e2;
        if (theta != 0.0) {
            e2 = dispersion_error(pair, nu, theta).principal;
        }
        rows.push_back({nu, theta, pair.principal, pair.spurious, e1.principal, e1.spurious, e2,
                        std::abs(pair.discriminant) < collision_tolerance});
    }
    return rows;
}

struct StabilityRow {
    double nu;
    double max_radius;
    double argmax_theta;
    bool exceeds;
};

struct StabilityReport {
    std::vector<StabilityRow> rows;
    double tolerance = 1e-12;

    bool stable() const {
        return std::none_of(rows.begin(), rows.end(), [](const StabilityRow& r) { return r.exceeds; });
    }
    double max_radius() const {
        double m = 0.0;
        for (const auto& r : rows) {
            m = std::max(m, r.max_radius);
        }
        return m;
    }
};

inline StabilityReport stability_scan(const FamilySpec& spec, std::span<const double> nu_grid,
                                      std::span<const double> theta_grid, double tolerance = 1e-12) {
    if (nu_grid.empty() || theta_grid.empty()) {
        throw ConfigError("stability scan needs non-empty grids");
    }
    StabilityReport report;
    report.tolerance = tolerance;
    for (double nu : nu_grid) {
        const auto p = resolve(spec, CourantNumber(nu));
        StabilityRow row{nu, -1.0, 0.0, false};
        for (double theta : theta_grid) {
            const auto pair = eigenvalues(amplification_matrix(p, nu, theta));
            const double radius = std::max(std::abs(pair.principal), std::abs(pair.spurious));
            if (radius > row.max_radius) {
                row.max_radius = radius;
                row.argmax_theta = theta;
            }
        }
        row.exceeds = row.max_radius > 1.0 + tolerance;
        report.rows.push_back(row);
    }
    return report;
}

// ---------------------------------------------------------------------------
// Order verification

struct OrderEstimate {
    /// Least-squares slope of log|lambda_1 - lambda_exact| against log theta;
    /// empty when too few points rise above the noise floor.
    std::optional<double> slope;
    std::size_t points_used = 0;

    bool exact_to_machine_precision() const { return !slope.has_value(); }
};

inline constexpr double order_noise_floor = 1e-13;
inline constexpr std::size_t order_min_points = 3;

inline OrderEstimate principal_order(const SchemeParameters& p, double nu) {
    std::vector<double> xs, ys;
    for (int k = 4; k <= 14; ++k) {
        const double theta = std::ldexp(1.0, -k);
        const auto pair = eigenvalues(amplification_matrix(p, nu, theta));
        const double diff = std::abs(pair.principal - exact_eigenvalue(nu, theta));
        if (diff < order_noise_floor) {
            continue;
        }
        xs.push_back(std::log(theta));
        ys.push_back(std::log(diff));
    }
    OrderEstimate est;
    est.points_used = xs.size();
    if (xs.size() < order_min_points) {
        return est;
    }
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    est.slope = sxy / sxx;
    return est;
}

inline OrderEstimate principal_order(const FamilySpec& spec, CourantNumber nu) {
    return principal_order(resolve(spec, nu), nu.value());
}

struct CoefficientCheck {
    std::complex<double> measured;
    std::complex<double> predicted;
    int power = 0;
    /// |measured - predicted| / |predicted|, or the absolute gap when the
    /// prediction vanishes.
    double deviation = 0.0;
    bool relative = true;
    bool pass = false;
};

/// Leading error coefficient of the principal eigenvalue for the third-order
/// (theta^4) and fourth-order (theta^5) families.
inline std::complex<double> predicted_leading_coefficient(const FamilySpec& spec, double nu, int& power) {
    const bool fourth = std::holds_alternative<family::FourthOrder>(spec) ||
                        std::holds_alternative<family::SuperDuper>(spec);
    const bool third = std::holds_alternative<family::ThirdOrder>(spec) ||
                       std::holds_alternative<family::Method3>(spec) ||
                       std::holds_alternative<family::Traditional>(spec);
    if (fourth) {
        power = 5;
        const double poly = 2 * std::pow(nu, 4) - 5 * std::pow(nu, 3) + 5 * nu - 2;
        return {0.0, nu * poly / 540.0};
    }
    if (third) {
        power = 4;
        const auto p = resolve(spec, CourantNumber(nu));
        return {(nu - 1) * nu * ((nu - 2) * (nu + 1) + 18.0 / (p.R + p.S)) / 72.0, 0.0};
    }
    throw ConfigError("leading coefficient is only defined for third- and fourth-order families");
}

/// Measures (lambda_1 - lambda_exact) / theta^p as theta -> 0 by Richardson
/// extrapolation on a halving ladder, in extended precision.
inline CoefficientCheck leading_coefficient_check(const FamilySpec& spec, CourantNumber nu,
                                                  double relative_tolerance = 0.01,
                                                  double absolute_tolerance = 1e-10) {
    using Real = long double;
    using C = std::complex<Real>;
    CoefficientCheck out;
    out.predicted = predicted_leading_coefficient(spec, nu.value(), out.power);
    const auto p = resolve(spec, nu);

    constexpr int levels = 5;
    constexpr Real theta0 = 0.8L;
    // table[k] holds the k-th ladder value, overwritten in place by Neville's
    // scheme for extrapolation to theta = 0 (polynomial in theta, ratio 2).
    std::array<C, levels> table;
    for (int k = 0; k < levels; ++k) {
        const Real theta = std::ldexp(theta0, -k);
        const auto A = amplification_matrix<Real>(p, nu.value(), static_cast<double>(theta));
        const auto pair = eigenvalues(A);
        const C diff = pair.principal - exact_eigenvalue<Real>(A.nu, A.theta);
        table[k] = diff / std::pow(A.theta, static_cast<Real>(out.power));
    }
    for (int m = 1; m < levels; ++m) {
        const Real factor = std::ldexp(Real(1), m);
        for (int k = levels - 1; k >= m; --k) {
            table[k] = (factor * table[k] - table[k - 1]) / (factor - 1);
        }
    }
    out.measured = std::complex<double>(static_cast<double>(table[levels - 1].real()),
                                        static_cast<double>(table[levels - 1].imag()));

    const double scale = std::abs(out.predicted);
    const double gap = std::abs(out.measured - out.predicted);
    if (scale > absolute_tolerance) {
        out.relative = true;
        out.deviation = gap / scale;
        out.pass = out.deviation <= relative_tolerance;
    } else {
        out.relative = false;
        out.deviation = gap;
        out.pass = gap <= absolute_tolerance;
    }
    return out;
}

}  // namespace afl
