#pragma once

// Initial data, projection onto the degrees of freedom, exact periodic
// solutions, error norms, convergence studies and amplitude retention.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "afl/core.hpp"
#include "afl/families.hpp"
#include "afl/scheme.hpp"

namespace afl {

/// Placement of the three-shape profile, in absolute coordinates.
struct ShapeLayout {
    double gauss_center = -3.0;
    double gauss_width = 0.4;
    double pulse_left = -1.0;
    double pulse_right = 0.0;
    double spike_center = 2.5;
    double spike_halfwidth = 0.4;

    double gauss_area() const { return gauss_width * std::sqrt(pi); }
    double pulse_area() const { return pulse_right - pulse_left; }
    double spike_area() const { return spike_halfwidth; }
};

/// Periodic scalar profile q0(x) on a grid's domain.
class InitialCondition {
public:
    enum class Kind { Sine, Square, Shapes, Custom };

    static InitialCondition sine(int mode) {
        if (mode < 1) {
            throw ConfigError("sine mode must be >= 1");
        }
        InitialCondition ic(Kind::Sine);
        ic.mode_ = mode;
        return ic;
    }

    static InitialCondition square(double left = -1.0, double right = 1.0) {
        if (!(left < right)) {
            throw ConfigError("square wave needs left < right");
        }
        InitialCondition ic(Kind::Square);
        ic.left_ = left;
        ic.right_ = right;
        return ic;
    }

    static InitialCondition shapes(const ShapeLayout& layout = {}) {
        InitialCondition ic(Kind::Shapes);
        ic.layout_ = layout;
        return ic;
    }

    /// Arbitrary profile given on [x_min, x_max); cell averages use 5-point
    /// Gauss-Legendre quadrature.
    static InitialCondition custom(std::function<double(double)> f, bool smooth = true) {
        InitialCondition ic(Kind::Custom);
        ic.custom_ = std::move(f);
        ic.smooth_custom_ = smooth;
        return ic;
    }

    Kind kind() const noexcept { return kind_; }
    int mode() const noexcept { return mode_; }
    const ShapeLayout& layout() const noexcept { return layout_; }

    bool smooth() const noexcept {
        return kind_ == Kind::Sine || (kind_ == Kind::Custom && smooth_custom_);
    }

    void check_resolvable(const Grid1D& grid) const {
        if (kind_ == Kind::Sine && 2 * static_cast<std::size_t>(mode_) > grid.n_cells()) {
            throw ConfigError("sine mode " + std::to_string(mode_) + " is not resolvable on " +
                              std::to_string(grid.n_cells()) + " cells");
        }
        if (kind_ == Kind::Square && !(left_ >= grid.x_min() && right_ <= grid.x_max())) {
            throw ConfigError("square wave edges must lie inside the domain");
        }
    }

    /// q0 at x, wrapped into the periodic domain.
    double value(double x, const Grid1D& grid) const {
        return base_value(wrap(x, grid), grid);
    }

    /// Integral of q0 over [lo, hi] with periodic continuation.
    double integral(double lo, double hi, const Grid1D& grid) const {
        const double L = grid.length();
        const double periods = std::floor((lo - grid.x_min()) / L);
        double a = lo - periods * L;
        double b = hi - periods * L;
        double total = 0.0;
        while (b > grid.x_max()) {
            total += base_integral(a, grid.x_max(), grid);
            a = grid.x_min();
            b -= L;
        }
        return total + base_integral(a, b, grid);
    }

private:
    explicit InitialCondition(Kind kind) : kind_(kind) {}

    static double wrap(double x, const Grid1D& grid) {
        const double L = grid.length();
        double r = std::fmod(x - grid.x_min(), L);
        if (r < 0) {
            r += L;
        }
        if (r >= L) {
            r = 0.0;
        }
        return grid.x_min() + r;
    }

    static double indicator(double x, double left, double right) { return (x >= left && x < right) ? 1.0 : 0.0; }

    static double indicator_primitive(double x, double left, double right) {
        return std::clamp(x, left, right) - left;
    }

    /// Length of [a, b] inside [left, right); exact when [a, b] lies inside.
    static double indicator_overlap(double a, double b, double left, double right) {
        return std::max(0.0, std::min(b, right) - std::max(a, left));
    }

    double base_value(double x, const Grid1D& grid) const {
        switch (kind_) {
            case Kind::Sine: {
                const double k = 2.0 * pi * mode_ / grid.length();
                return std::sin(k * (x - grid.x_min()));
            }
            case Kind::Square:
                return indicator(x, left_, right_);
            case Kind::Shapes: {
                const auto& s = layout_;
                const double z = (x - s.gauss_center) / s.gauss_width;
                const double spike = std::max(0.0, 1.0 - std::abs(x - s.spike_center) / s.spike_halfwidth);
                return std::exp(-z * z) + indicator(x, s.pulse_left, s.pulse_right) + spike;
            }
            case Kind::Custom:
                return custom_(x);
        }
        return 0.0;
    }

    double primitive(double x, const Grid1D& grid) const {
        switch (kind_) {
            case Kind::Sine: {
                const double k = 2.0 * pi * mode_ / grid.length();
                return -std::cos(k * (x - grid.x_min())) / k;
            }
            case Kind::Square:
                return indicator_primitive(x, left_, right_);
            case Kind::Shapes: {
                const auto& s = layout_;
                const double gauss =
                    0.5 * s.gauss_width * std::sqrt(pi) * std::erf((x - s.gauss_center) / s.gauss_width);
                const double h = s.spike_halfwidth;
                const double lo = s.spike_center - h;
                const double hi = s.spike_center + h;
                double spike = 0.0;
                if (x >= hi) {
                    spike = h;
                } else if (x > s.spike_center) {
                    spike = h - (hi - x) * (hi - x) / (2.0 * h);
                } else if (x > lo) {
                    spike = (x - lo) * (x - lo) / (2.0 * h);
                }
                return gauss + indicator_primitive(x, s.pulse_left, s.pulse_right) + spike;
            }
            case Kind::Custom:
                break;
        }
        return 0.0;
    }

    double base_integral(double a, double b, const Grid1D& grid) const {
        if (b <= a) {
            return 0.0;
        }
        if (kind_ == Kind::Square) {
            return indicator_overlap(a, b, left_, right_);
        }
        if (kind_ != Kind::Custom) {
            return primitive(b, grid) - primitive(a, grid);
        }
        // 5-point Gauss-Legendre on [a, b].
        static const double r = 2.0 * std::sqrt(10.0 / 7.0);
        static const double nodes[5] = {0.0, -std::sqrt(5.0 - r) / 3.0, std::sqrt(5.0 - r) / 3.0,
                                        -std::sqrt(5.0 + r) / 3.0, std::sqrt(5.0 + r) / 3.0};
        static const double w1 = (322.0 + 13.0 * std::sqrt(70.0)) / 900.0;
        static const double w2 = (322.0 - 13.0 * std::sqrt(70.0)) / 900.0;
        static const double weights[5] = {2.0 - 2.0 * (w1 + w2), w1, w1, w2, w2};
        const double mid = 0.5 * (a + b);
        const double half = 0.5 * (b - a);
        double sum = 0.0;
        for (int k = 0; k < 5; ++k) {
            sum += weights[k] * custom_(mid + half * nodes[k]);
        }
        return half * sum;
    }

    Kind kind_;
    int mode_ = 1;
    double left_ = -1.0;
    double right_ = 1.0;
    ShapeLayout layout_{};
    std::function<double(double)> custom_;
    bool smooth_custom_ = true;
};

/// Three-shape profile placed on the grid's domain; positions are defined on
/// [-5, 5] and mapped affinely onto other domains.
inline InitialCondition shape_suite(const Grid1D& grid, const ShapeLayout& reference = {}) {
    const double scale = grid.length() / 10.0;
    const auto map = [&](double x) { return grid.x_min() + (x + 5.0) * scale; };
    ShapeLayout s;
    s.gauss_center = map(reference.gauss_center);
    s.gauss_width = reference.gauss_width * scale;
    s.pulse_left = map(reference.pulse_left);
    s.pulse_right = map(reference.pulse_right);
    s.spike_center = map(reference.spike_center);
    s.spike_halfwidth = reference.spike_halfwidth * scale;
    return InitialCondition::shapes(s);
}

namespace detail {

inline SolutionState project_shifted(const InitialCondition& ic, const Grid1D& grid, double shift) {
    ic.check_resolvable(grid);
    const std::size_t n = grid.n_cells();
    std::vector<double> avg(n), pts(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double lo = grid.interface(i) - shift;
        const double hi = grid.interface(i + 1) - shift;
        avg[i] = ic.integral(lo, hi, grid) / (hi - lo);
        pts[i] = ic.value(grid.right_interface(i) - shift, grid);
    }
    return SolutionState(std::move(avg), std::move(pts));
}

}  // namespace detail

inline SolutionState project(const InitialCondition& ic, const Grid1D& grid) {
    return detail::project_shifted(ic, grid, 0.0);
}

/// Projection of q0(x - a t). Shifts that land on whole cells are applied as
/// an exact periodic roll of the projected data.
inline SolutionState exact_state(const InitialCondition& ic, const Grid1D& grid, double t, double a = 1.0) {
    if (!(t >= 0.0)) {
        throw ConfigError("exact solution needs t >= 0");
    }
    double shift = std::fmod(a * t, grid.length());
    if (shift < 0) {
        shift += grid.length();
    }
    const double cells = shift / grid.dx();
    const double whole = std::round(cells);
    if (std::abs(cells - whole) <= 1e-9 * std::max(1.0, cells)) {
        return project(ic, grid).shifted(static_cast<std::ptrdiff_t>(whole));
    }
    return detail::project_shifted(ic, grid, shift);
}

struct Norms {
    double l1 = 0.0;
    double l2 = 0.0;
    double linf = 0.0;
};

struct ErrorReport {
    Norms averages;
    Norms point_values;

    double max_linf() const { return std::max(averages.linf, point_values.linf); }
};

namespace detail {

inline Norms discrete_norms(const std::vector<double>& a, const std::vector<double>& b, double dx) {
    Norms n;
    double sq = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double e = std::abs(a[i] - b[i]);
        n.l1 += e;
        sq += e * e;
        n.linf = std::max(n.linf, e);
    }
    n.l1 *= dx;
    n.l2 = std::sqrt(dx * sq);
    return n;
}

}  // namespace detail

inline ErrorReport error_norms(const SolutionState& state, const SolutionState& reference, const Grid1D& grid) {
    if (state.size() != reference.size() || state.size() != grid.n_cells()) {
        throw ConfigError("error norms need states of matching size");
    }
    return {detail::discrete_norms(state.averages(), reference.averages(), grid.dx()),
            detail::discrete_norms(state.point_values(), reference.point_values(), grid.dx())};
}

/// Normalized DFT coefficient (1/N) sum_i v_i e^{-2 pi I m i / N}.
inline std::complex<double> fourier_coefficient(const std::vector<double>& values, int mode) {
    const double n = static_cast<double>(values.size());
    std::complex<double> sum = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        sum += values[i] * std::polar(1.0, -2.0 * pi * mode * static_cast<double>(i) / n);
    }
    return sum / n;
}

/// |c_m(averages)| / baseline, where baseline is |c_m| of the reference data.
inline double amplitude_retention(const SolutionState& state, const Grid1D& grid, int mode, double baseline) {
    if (mode < 1 || 2 * static_cast<std::size_t>(mode) > grid.n_cells()) {
        throw ConfigError("retention mode must lie in [1, n_cells/2]");
    }
    if (!(baseline > 0.0)) {
        throw ConfigError("retention baseline must be nonzero");
    }
    return std::abs(fourier_coefficient(state.averages(), mode)) / baseline;
}

inline double amplitude_retention(const SolutionState& state, const Grid1D& grid, int mode,
                                  const SolutionState& initial) {
    return amplitude_retention(state, grid, mode, std::abs(fourier_coefficient(initial.averages(), mode)));
}

// ---------------------------------------------------------------------------
// Runs

/// Steps needed to reach t_final with dt = nu dx / a, rounded to nearest.
inline std::int64_t steps_for(double t_final, double nu, double dx, double a) {
    return static_cast<std::int64_t>(std::llround(t_final / (nu * dx / a)));
}

struct ExperimentConfig {
    FamilySpec family = family::Traditional{};
    double nu = 0.5;
    double a = 1.0;
    double x_min = -5.0;
    double x_max = 5.0;
    long long n_cells = 100;
    double t_final = 0.0;
    InitialCondition ic = InitialCondition::sine(10);
    std::string ic_text = "sine:m=10";
    std::string outputs = ".";
    bool emit_svg = false;
};

struct RunResult {
    Grid1D grid;
    SchemeParameters params;
    SolutionState initial;
    SolutionState final_state;
    SolutionState exact;
    ErrorReport errors;
    std::optional<double> retention;
    std::int64_t n_steps = 0;
    double t_requested = 0.0;
    double t_real = 0.0;
    double mass_initial = 0.0;
    double mass_final = 0.0;
    double wall_seconds = 0.0;

    double mass_drift() const { return std::abs(mass_final - mass_initial); }
};

inline RunResult run_experiment(const ExperimentConfig& config) {
    if (!(config.a > 0.0) || !std::isfinite(config.a)) {
        throw ConfigError("advection speed a must be positive");
    }
    if (!(config.t_final >= 0.0) || !std::isfinite(config.t_final)) {
        throw ConfigError("t_final must be a nonnegative number");
    }
    const auto start = std::chrono::steady_clock::now();
    const Grid1D grid = make_grid(config.x_min, config.x_max, config.n_cells);
    const CourantNumber nu(config.nu);
    const SchemeParameters params = resolve(config.family, nu);

    const std::int64_t n_steps = steps_for(config.t_final, nu, grid.dx(), config.a);
    const double t_real = static_cast<double>(n_steps) * nu.value() * grid.dx() / config.a;

    SolutionState initial = project(config.ic, grid);
    SolutionState final_state = advance(initial, params, nu, n_steps);
    SolutionState exact = exact_state(config.ic, grid, t_real, config.a);

    std::optional<double> retention;
    if (config.ic.kind() == InitialCondition::Kind::Sine) {
        retention = amplitude_retention(final_state, grid, config.ic.mode(), initial);
    }
    const ErrorReport errors = error_norms(final_state, exact, grid);
    const double mass_initial = initial.total_mass();
    const double mass_final = final_state.total_mass();
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    return RunResult{grid,     params,       std::move(initial), std::move(final_state), std::move(exact),
                     errors,   retention,    n_steps,            config.t_final,         t_real,
                     mass_initial, mass_final, wall};
}

struct ConvergenceRow {
    std::size_t n_cells = 0;
    ErrorReport errors;
    /// log2(previous / current) per norm, from the second row on.
    std::optional<ErrorReport> eoc;
    std::int64_t n_steps = 0;
    double t_real = 0.0;
    double mass_drift = 0.0;

    std::optional<double> headline_eoc() const {
        return eoc ? std::optional<double>(eoc->averages.l2) : std::nullopt;
    }
};

struct ConvergenceStudy {
    std::vector<ConvergenceRow> rows;
    /// Set for non-smooth data, where the EOC is not meaningful.
    bool non_smooth_warning = false;
    /// Set when t_final is not a whole number of steps on some grid.
    bool time_mismatch = false;
};

inline ConvergenceStudy convergence_study(const InitialCondition& ic, const FamilySpec& spec, CourantNumber nu,
                                          double a, double t_final, const std::vector<long long>& cell_counts,
                                          double x_min = -5.0, double x_max = 5.0) {
    if (cell_counts.empty()) {
        throw ConfigError("convergence study needs at least one grid");
    }
    ConvergenceStudy study;
    study.non_smooth_warning = !ic.smooth();
    const auto params = resolve(spec, nu);

    const auto log2_ratio = [](double coarse, double fine) {
        return (coarse > 0.0 && fine > 0.0) ? std::log2(coarse / fine) : std::nan("");
    };

    for (long long n : cell_counts) {
        const Grid1D grid = make_grid(x_min, x_max, n);
        const double exact_steps = t_final / (nu.value() * grid.dx() / a);
        const std::int64_t steps = steps_for(t_final, nu, grid.dx(), a);
        if (std::abs(exact_steps - static_cast<double>(steps)) > 1e-9 * std::max(1.0, exact_steps)) {
            study.time_mismatch = true;
        }
        const double t_real = static_cast<double>(steps) * nu.value() * grid.dx() / a;

        const auto initial = project(ic, grid);
        const auto final_state = advance(initial, params, nu, steps);
        ConvergenceRow row;
        row.n_cells = grid.n_cells();
        row.errors = error_norms(final_state, exact_state(ic, grid, t_real, a), grid);
        row.n_steps = steps;
        row.t_real = t_real;
        row.mass_drift = std::abs(final_state.total_mass() - initial.total_mass());
        if (!study.rows.empty()) {
            const auto& prev = study.rows.back().errors;
            const auto& cur = row.errors;
            ErrorReport eoc;
            eoc.averages = {log2_ratio(prev.averages.l1, cur.averages.l1), log2_ratio(prev.averages.l2, cur.averages.l2),
                            log2_ratio(prev.averages.linf, cur.averages.linf)};
            eoc.point_values = {log2_ratio(prev.point_values.l1, cur.point_values.l1),
                                log2_ratio(prev.point_values.l2, cur.point_values.l2),
                                log2_ratio(prev.point_values.linf, cur.point_values.linf)};
            row.eoc = eoc;
        }
        study.rows.push_back(row);
    }
    return study;
}

// ---------------------------------------------------------------------------
// Text form of initial conditions: sine:m=10, square[:left=..,right=..],
// shapes[:gauss_center=..,gauss_width=..,pulse_left=..,pulse_right=..,
// spike_center=..,spike_halfwidth=..]. Shape positions refer to [-5, 5].

inline InitialCondition parse_initial_condition(std::string_view text, const Grid1D& grid) {
    const std::string full = detail::trim(text);
    const auto colon = full.find(':');
    const std::string name = detail::lower(detail::trim(full.substr(0, colon)));
    const std::string body = colon == std::string::npos ? std::string{} : full.substr(colon + 1);
    const auto kv = detail::parse_kv_reals(body, full);
    const auto get = [&](const char* key, double fallback) {
        const auto it = kv.find(key);
        return it == kv.end() ? fallback : it->second;
    };

    if (name == "sine") {
        detail::allow_only(kv, {"m"}, full);
        const double m = get("m", 10.0);
        if (m != std::floor(m) || m < 1) {
            throw ConfigError("sine mode must be a positive integer in '" + full + "'");
        }
        return InitialCondition::sine(static_cast<int>(m));
    }
    if (name == "square") {
        detail::allow_only(kv, {"left", "right"}, full);
        return InitialCondition::square(get("left", -1.0), get("right", 1.0));
    }
    if (name == "shapes") {
        detail::allow_only(kv, {"gauss_center", "gauss_width", "pulse_left", "pulse_right", "spike_center",
                                "spike_halfwidth"},
                           full);
        ShapeLayout ref;
        ref.gauss_center = get("gauss_center", ref.gauss_center);
        ref.gauss_width = get("gauss_width", ref.gauss_width);
        ref.pulse_left = get("pulse_left", ref.pulse_left);
        ref.pulse_right = get("pulse_right", ref.pulse_right);
        ref.spike_center = get("spike_center", ref.spike_center);
        ref.spike_halfwidth = get("spike_halfwidth", ref.spike_halfwidth);
        if (!(ref.gauss_width > 0 && ref.spike_halfwidth > 0 && ref.pulse_left < ref.pulse_right)) {
            throw ConfigError("invalid shape layout in '" + full + "'");
        }
        return shape_suite(grid, ref);
    }
    throw ConfigError("unknown initial condition '" + full + "'");
}

}  // namespace afl
