#pragma once

// Domain types shared by every part of the library: grids, solution states,
// scheme parameters, Courant numbers and Fourier modes.

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace afl {

inline constexpr double pi = 3.14159265358979323846;

/// Raised for invalid inputs to any library operation (bad grid, bad
/// parameters, unresolvable initial data). The CLI maps it to exit code 1.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a time step produces a non-finite value.
class BlowUpError : public std::runtime_error {
public:
    BlowUpError(const std::string& what, std::int64_t step_index)
        : std::runtime_error(what), step_index_(step_index) {}

    std::int64_t step_index() const noexcept { return step_index_; }

private:
    std::int64_t step_index_;
};

/// Correction weights of the parameterized scheme. The classical method is
/// R = S = 3, T = 1 - nu, U = nu.
///
/// Values are not restricted in sign here; the closed-form families can
/// produce negative T or U and R = 0 is a legal second-order choice.
struct SchemeParameters {
    double R = 3.0;
    double S = 3.0;
    double T = 0.0;
    double U = 0.0;

    bool finite() const noexcept {
        return std::isfinite(R) && std::isfinite(S) && std::isfinite(T) && std::isfinite(U);
    }

    void validate() const {
        if (!finite()) {
            throw ConfigError("scheme parameters must be finite");
        }
    }

    friend bool operator==(const SchemeParameters&, const SchemeParameters&) = default;
};

/// nu = a * dt / dx, restricted to (0, 1].
class CourantNumber {
public:
    explicit CourantNumber(double nu) : nu_(nu) {
        if (!(nu > 0.0 && nu <= 1.0)) {
            throw ConfigError("Courant number must lie in (0, 1], got " + std::to_string(nu));
        }
    }

    double value() const noexcept { return nu_; }
    operator double() const noexcept { return nu_; }

private:
    double nu_;
};

/// Uniform periodic grid. Cell i spans [x_min + i dx, x_min + (i+1) dx).
class Grid1D {
public:
    Grid1D(double x_min, double x_max, std::size_t n_cells)
        : x_min_(x_min), x_max_(x_max), n_cells_(n_cells) {
        if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_max > x_min)) {
            throw ConfigError("grid interval must satisfy x_max > x_min");
        }
        if (n_cells < 2) {
            throw ConfigError("grid needs at least 2 cells");
        }
        dx_ = (x_max_ - x_min_) / static_cast<double>(n_cells_);
    }

    double x_min() const noexcept { return x_min_; }
    double x_max() const noexcept { return x_max_; }
    double length() const noexcept { return x_max_ - x_min_; }
    std::size_t n_cells() const noexcept { return n_cells_; }
    double dx() const noexcept { return dx_; }

    /// Interface j sits at x_min + j dx, j = 0..n_cells.
    double interface(std::size_t j) const noexcept {
        return x_min_ + static_cast<double>(j) * dx_;
    }
    double center(std::size_t i) const noexcept {
        return x_min_ + (static_cast<double>(i) + 0.5) * dx_;
    }
    double right_interface(std::size_t i) const noexcept { return interface(i + 1); }

private:
    double x_min_;
    double x_max_;
    std::size_t n_cells_;
    double dx_;
};

inline Grid1D make_grid(double x_min, double x_max, long long n_cells) {
    if (n_cells < 2) {
        throw ConfigError("grid needs at least 2 cells, got " + std::to_string(n_cells));
    }
    return Grid1D(x_min, x_max, static_cast<std::size_t>(n_cells));
}

/// Periodic index: i mod n mapped into [0, n).
constexpr std::ptrdiff_t wrap_index(std::ptrdiff_t i, std::ptrdiff_t n_cells) noexcept {
    const std::ptrdiff_t r = i % n_cells;
    return r < 0 ? r + n_cells : r;
}

/// Degrees of freedom on a periodic grid. point_values[i] is the value at the
/// RIGHT interface of cell i, so the left value of cell 0 is
/// point_values[n - 1].
class SolutionState {
public:
    SolutionState() = default;

    SolutionState(std::vector<double> averages, std::vector<double> point_values)
        : averages_(std::move(averages)), point_values_(std::move(point_values)) {
        if (averages_.size() != point_values_.size()) {
            throw ConfigError("averages and point values must have the same length");
        }
        for (std::size_t i = 0; i < averages_.size(); ++i) {
            if (!std::isfinite(averages_[i]) || !std::isfinite(point_values_[i])) {
                throw ConfigError("solution state entries must be finite");
            }
        }
    }

    static SolutionState constant(std::size_t n_cells, double value) {
        return SolutionState(std::vector<double>(n_cells, value), std::vector<double>(n_cells, value));
    }

    std::size_t size() const noexcept { return averages_.size(); }
    bool periodic() const noexcept { return true; }

    const std::vector<double>& averages() const noexcept { return averages_; }
    const std::vector<double>& point_values() const noexcept { return point_values_; }

    double average(std::ptrdiff_t i) const noexcept {
        return averages_[static_cast<std::size_t>(wrap_index(i, static_cast<std::ptrdiff_t>(size())))];
    }
    /// Value at the right interface of cell i (i + 1/2), periodic.
    double point_value(std::ptrdiff_t i) const noexcept {
        return point_values_[static_cast<std::size_t>(wrap_index(i, static_cast<std::ptrdiff_t>(size())))];
    }

    double total_mass() const noexcept {
        double sum = 0.0;
        for (double q : averages_) {
            sum += q;
        }
        return sum;
    }

    /// Periodic shift of both arrays by `cells` to the right.
    SolutionState shifted(std::ptrdiff_t cells) const {
        const auto n = static_cast<std::ptrdiff_t>(size());
        std::vector<double> avg(size()), pts(size());
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            avg[static_cast<std::size_t>(i)] = average(i - cells);
            pts[static_cast<std::size_t>(i)] = point_value(i - cells);
        }
        return SolutionState(std::move(avg), std::move(pts));
    }

    friend bool operator==(const SolutionState&, const SolutionState&) = default;

private:
    std::vector<double> averages_;
    std::vector<double> point_values_;
};

/// One harmonic e^{I (i + 1/2) theta} of the averages (Q_hat) and the point
/// values (q_hat).
struct FourierMode {
    double theta = 0.0;
    std::complex<double> Q_hat{};
    std::complex<double> q_hat{};

    FourierMode() = default;
    FourierMode(double theta_, std::complex<double> Q, std::complex<double> q)
        : theta(theta_), Q_hat(Q), q_hat(q) {
        if (!(theta >= -pi && theta <= pi)) {
            throw ConfigError("phase angle must lie in [-pi, pi]");
        }
    }
};

}  // namespace afl
