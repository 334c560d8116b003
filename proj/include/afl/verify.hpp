#pragma once

// Verification battery for the order conditions, the closed-form error
// coefficients and the exactness results. Each check reports its measured
// worst case against a fixed threshold.

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <string>
#include <vector>

#include "afl/core.hpp"
#include "afl/families.hpp"
#include "afl/scheme.hpp"
#include "afl/spectral.hpp"

namespace afl::verify {

struct Check {
    std::string name;
    bool pass = true;
    /// Worst measured value (a residual or a slope deviation).
    double measured = 0.0;
    double threshold = 0.0;
    std::vector<std::string> failures;

    void record(double value, bool ok, const std::string& where) {
        measured = std::max(measured, value);
        if (!ok) {
            pass = false;
            failures.push_back(where);
        }
    }
};

struct Options {
    /// Added to U of the third-order families in the slope check. Used to
    /// confirm the check is sensitive.
    double perturb_u = 0.0;
    std::uint32_t seed = 20250426;
};

inline const std::vector<double>& nu_grid_tenths() {
    static const std::vector<double> grid{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    return grid;
}

inline std::string at(const std::string& family, double nu) {
    return family + " nu=" + detail::format_real(nu);
}

inline Check family_consistency() {
    Check c{"family_consistency_chain", true, 0.0, 1e-12, {}};
    std::vector<double> nus = nu_grid_tenths();
    nus.push_back(1.0);
    for (double nu : nus) {
        for (double R : {1.0, 2.0, 3.0, 3.75, 4.0, 5.0, 6.0, 6.0 / (2.0 - nu)}) {
            const auto fourth = fourth_order_STU(R, nu);
            const auto third = third_order_TU(R, fourth.S, nu);
            const double d43 = std::max(std::abs(third.T - fourth.T), std::abs(third.U - fourth.U));
            c.record(d43, d43 <= c.threshold, "fourth=>third R=" + detail::format_real(R) + at("", nu));

            const auto tu = third_order_TU(R, R + 1.0, nu);
            const double d32 = std::abs(second_order_U(R, R + 1.0, tu.T) - tu.U);
            c.record(d32, d32 <= c.threshold, "third=>second R=" + detail::format_real(R) + at("", nu));
        }
    }
    for (double R : {0.5, 2.0, 3.0, 4.0, 6.0, 7.5}) {
        const auto half = half_cfl_exact(R);
        const auto fourth = fourth_order_STU(R, 0.5);
        const double d = std::max({std::abs(half.S - fourth.S), std::abs(half.T - fourth.T), std::abs(half.U - fourth.U)});
        c.record(d, d <= c.threshold, "halfcfl vs fourth R=" + detail::format_real(R));
    }
    for (double nu : nus) {
        const CourantNumber cn(nu);
        const auto a = resolve(family::Traditional{}, cn);
        const auto b = resolve(family::ThirdOrder{3.0, 3.0}, cn);
        const auto m = resolve(family::Method3{3.0}, cn);
        const double d = std::max({std::abs(a.T - b.T), std::abs(a.U - b.U), std::abs(b.T - m.T), std::abs(b.U - m.U)});
        c.record(d, d <= c.threshold, at("traditional vs third(3,3)", nu));
    }
    return c;
}

inline Check matrix_consistency(std::uint32_t seed) {
    Check c{"matrix_consistency", true, 0.0, 1e-13, {}};
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> par(0.0, 8.0), th(-pi, pi), cfl(0.01, 1.0);
    for (int k = 0; k < 2000; ++k) {
        const SchemeParameters p{par(rng), par(rng), par(rng), par(rng)};
        const double nu = cfl(rng), theta = th(rng);
        const double r = matrix_consistency_check(p, nu, theta);
        c.record(r, r <= c.threshold, "sample " + std::to_string(k));
    }
    return c;
}

/// Slopes of log|lambda_1 - lambda_exact| against log theta.
inline Check order_slopes(const Options& opt) {
    Check c{"principal_order_slopes", true, 0.0, 0.1, {}};

    const auto expect = [&](const std::string& name, const SchemeParameters& p, double nu, double slope,
                            bool exact_allowed) {
        const auto est = principal_order(p, nu);
        if (!est.slope) {
            c.record(0.0, exact_allowed, at(name, nu) + ": exact to machine precision");
            return;
        }
        const double dev = std::abs(*est.slope - slope);
        c.record(dev, dev <= c.threshold, at(name, nu) + ": slope " + detail::format_real(*est.slope));
    };

    std::mt19937 rng(opt.seed);
    std::uniform_real_distribution<double> rs(1.0, 6.0), ts(0.0, 1.0);
    for (double nu : nu_grid_tenths()) {
        for (int k = 0; k < 4; ++k) {
            const family::SecondOrder f{rs(rng), rs(rng), ts(rng)};
            expect(to_string(FamilySpec{f}), resolve(f, CourantNumber(nu)), nu, 3.0, false);
        }
        for (const FamilySpec& f : {FamilySpec{family::Method3{2.0}}, FamilySpec{family::Method3{3.0}},
                                    FamilySpec{family::Method3{4.0}}, FamilySpec{family::ThirdOrder{2.0, 6.0}}}) {
            auto p = resolve(f, CourantNumber(nu));
            p.U += opt.perturb_u;
            int power = 0;
            const bool vanishing = std::abs(predicted_leading_coefficient(f, nu, power)) < 1e-12;
            expect(to_string(f), p, nu, 4.0, vanishing && opt.perturb_u == 0.0);
        }
        for (const FamilySpec& f : {FamilySpec{family::FourthOrder{3.0}}, FamilySpec{family::SuperDuper{}}}) {
            expect(to_string(f), resolve(f, CourantNumber(nu)), nu, 5.0, nu == 0.5);
        }
    }
    return c;
}

inline Check leading_coefficients() {
    Check c{"leading_coefficients", true, 0.0, 0.01, {}};
    const auto run = [&](const FamilySpec& f, double nu) {
        const auto r = leading_coefficient_check(f, CourantNumber(nu));
        // Absolute comparisons are folded into the same worst-case column.
        c.record(r.deviation, r.pass,
                 at(to_string(f), nu) + (r.relative ? ": relative " : ": absolute ") + detail::format_real(r.deviation));
    };
    for (double R : {2.0, 3.0, 4.0}) {
        for (double nu : {0.3, 0.7}) {
            run(family::Method3{R}, nu);
        }
    }
    for (double nu : {0.5, 0.7, 1.0}) {
        run(family::FourthOrder{3.0}, nu);
        run(family::SuperDuper{}, nu);
    }
    return c;
}

/// Two steps at nu = 1/2 equal a one-cell shift, and the eigenvalues are
/// exactly +-e^{-I theta/2}.
inline Check half_cfl_exactness(std::uint32_t seed) {
    Check c{"half_cfl_exactness", true, 0.0, 1e-11, {}};
    const CourantNumber nu(0.5);
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const std::size_t n = 64;
    std::vector<double> avg(n), pts(n);
    for (std::size_t i = 0; i < n; ++i) {
        avg[i] = u(rng);
        pts[i] = u(rng);
    }
    const SolutionState state(avg, pts);
    const SolutionState shifted = state.shifted(1);

    std::vector<FamilySpec> families{family::HalfCflExact{2.0}, family::HalfCflExact{3.0}, family::HalfCflExact{4.0},
                                     family::HalfCflExact{6.0}, family::SuperDuper{},      family::FourthOrder{5.0},
                                     family::Method3{4.0}};
    for (const auto& f : families) {
        const auto p = resolve(f, nu);
        const auto two = advance(state, p, nu, 2);
        double r = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            r = std::max({r, std::abs(two.averages()[i] - shifted.averages()[i]),
                          std::abs(two.point_values()[i] - shifted.point_values()[i])});
        }
        c.record(r, r <= c.threshold, to_string(f) + ": two-step shift residual " + detail::format_real(r));

        double e = 0.0;
        for (double theta : uniform_theta_grid(256)) {
            const auto pair = eigenvalues(amplification_matrix(p, 0.5, theta));
            const auto half = std::polar(1.0, -0.5 * theta);
            e = std::max({e, std::abs(pair.principal - half), std::abs(pair.spurious + half)});
        }
        c.record(e, e <= c.threshold, to_string(f) + ": eigenvalue residual " + detail::format_real(e));
    }
    return c;
}

inline Check eigenvalue_invariance() {
    Check c{"eigenvalue_set_invariance", true, 0.0, 1e-10, {}};
    const auto thetas = uniform_theta_grid(512);
    std::vector<double> nus = nu_grid_tenths();
    nus.push_back(1.0);
    for (double nu : nus) {
        const CourantNumber cn(nu);
        const auto ref4 = resolve(family::FourthOrder{2.0}, cn);
        const auto alt4a = resolve(family::FourthOrder{4.0}, cn);
        const auto alt4b = resolve(family::FourthOrder{6.0 / (2.0 - nu)}, cn);
        const auto ref3 = resolve(family::ThirdOrder{2.0, 6.0}, cn);
        const auto alt3a = resolve(family::ThirdOrder{4.0, 4.0}, cn);
        const auto alt3b = resolve(family::ThirdOrder{1.0, 7.0}, cn);
        double d4 = 0.0, d3 = 0.0;
        for (double theta : thetas) {
            const auto e = [&](const SchemeParameters& p) { return eigenvalues(amplification_matrix(p, nu, theta)); };
            d4 = std::max({d4, eigen_set_distance(e(ref4), e(alt4a)), eigen_set_distance(e(ref4), e(alt4b))});
            d3 = std::max({d3, eigen_set_distance(e(ref3), e(alt3a)), eigen_set_distance(e(ref3), e(alt3b))});
        }
        c.record(d4, d4 <= c.threshold, at("fourth-order R invariance", nu));
        c.record(d3, d3 <= c.threshold, at("third-order R+S invariance", nu));
    }
    return c;
}

inline std::vector<Check> run_all(const Options& opt = {}) {
    return {family_consistency(),   matrix_consistency(opt.seed), order_slopes(opt),
            leading_coefficients(), half_cfl_exactness(opt.seed), eigenvalue_invariance()};
}

inline bool all_pass(const std::vector<Check>& checks) {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

}  // namespace afl::verify
