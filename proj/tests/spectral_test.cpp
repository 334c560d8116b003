#include <gtest/gtest.h>

#include <random>

#include "afl/experiments.hpp"
#include "afl/families.hpp"
#include "afl/spectral.hpp"

namespace afl {
namespace {

using C = std::complex<double>;

SchemeParameters traditional(double nu) { return {3.0, 3.0, 1.0 - nu, nu}; }

TEST(AmplificationMatrix, ZeroPhase) {
    for (double nu : {0.1, 0.4, 0.7}) {
        const auto A = amplification_matrix(traditional(nu), nu, 0.0);
        EXPECT_EQ(A.a11, C(1.0));
        EXPECT_EQ(A.a12, C(0.0));
        EXPECT_NEAR(std::abs(A.a22 - C(1 - 6 * nu + 6 * nu * nu)), 0.0, 1e-15);
    }
}

TEST(AmplificationMatrix, UnitCourant) {
    const double theta = 1.3;
    const auto A = amplification_matrix(SchemeParameters{2.0, 5.0, 0.1, 0.9}, 1.0, theta);
    const C shift = std::polar(1.0, -theta);
    EXPECT_EQ(A.a21, C(0.0));
    EXPECT_EQ(A.a12, C(0.0));
    EXPECT_NEAR(std::abs(A.a11 - shift), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(A.a22 - shift), 0.0, 1e-15);
}

TEST(MatrixConsistency, Examples) {
    EXPECT_LE(matrix_consistency_check(traditional(0.7), 0.7, 1.0), 1e-13);
    EXPECT_LE(matrix_consistency_check(traditional(0.7), 0.7, 0.0), 1e-15);
}

TEST(MatrixConsistency, RandomParameters) {
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> par(0.0, 8.0), th(-pi, pi), c(0.001, 1.0);
    for (int k = 0; k < 5000; ++k) {
        const SchemeParameters p{par(rng), par(rng), par(rng), par(rng)};
        ASSERT_LE(matrix_consistency_check(p, c(rng), th(rng)), 1e-13);
    }
}

TEST(ExactEigenvalue, Examples) {
    EXPECT_EQ(exact_eigenvalue(0.3, 0.0), C(1.0));
    EXPECT_NEAR(std::abs(exact_eigenvalue(1.0, pi) - C(-1.0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(exact_eigenvalue(0.5, pi) - C(0.0, -1.0)), 0.0, 1e-15);
}

TEST(Eigenvalues, ZeroPhaseTraditional) {
    for (double nu : {0.2, 0.7, 0.9}) {
        const auto pair = eigenvalues(amplification_matrix(traditional(nu), nu, 0.0));
        EXPECT_EQ(pair.principal, C(1.0));
        EXPECT_NEAR(std::abs(pair.spurious - C(1 - 6 * nu + 6 * nu * nu)), 0.0, 1e-15);
    }
}

TEST(Eigenvalues, HalfCourantExactFamily) {
    for (double R : {2.0, 3.0, 4.0, 6.0}) {
        for (double theta : uniform_theta_grid(64)) {
            const auto pair = eigenvalues(amplification_matrix(half_cfl_exact(R), 0.5, theta));
            const C half = std::polar(1.0, -0.5 * theta);
            ASSERT_NEAR(std::abs(pair.principal - half), 0.0, 1e-13);
            ASSERT_NEAR(std::abs(pair.spurious + half), 0.0, 1e-13);
        }
    }
}

TEST(Eigenvalues, UnitCourantDoubleRoot) {
    for (double theta : {-2.0, 0.3, 1.0, 3.0}) {
        const auto pair = eigenvalues(amplification_matrix(SchemeParameters{4.0, 4.0, 0.5, 0.5}, 1.0, theta));
        const C shift = std::polar(1.0, -theta);
        EXPECT_NEAR(std::abs(pair.principal - shift), 0.0, 1e-14);
        EXPECT_NEAR(std::abs(pair.spurious - shift), 0.0, 1e-14);
    }
}

TEST(Eigenvalues, CharacteristicPolynomialResidual) {
    std::mt19937 rng(37);
    std::uniform_real_distribution<double> par(0.0, 8.0), th(-pi, pi), c(0.001, 1.0);
    for (int k = 0; k < 5000; ++k) {
        const SchemeParameters p{par(rng), par(rng), par(rng), par(rng)};
        const auto A = amplification_matrix(p, c(rng), th(rng));
        const auto pair = eigenvalues(A);
        const C tr = A.trace(), det = A.determinant();
        double scale = 1.0 + std::abs(tr) * std::abs(tr) + std::abs(det);
        for (const C lam : {pair.principal, pair.spurious}) {
            ASSERT_LE(std::abs(lam * lam - tr * lam + det), 1e-12 * scale);
        }
    }
}

TEST(Eigenvalues, ConjugateSymmetry) {
    std::mt19937 rng(41);
    std::uniform_real_distribution<double> par(0.0, 8.0), th(0.0, pi), c(0.01, 1.0);
    for (int k = 0; k < 1000; ++k) {
        const SchemeParameters p{par(rng), par(rng), par(rng), par(rng)};
        const double nu = c(rng), theta = th(rng);
        const auto A = amplification_matrix(p, nu, theta);
        const auto B = amplification_matrix(p, nu, -theta);
        ASSERT_NEAR(std::abs(B.a12 - std::conj(A.a12)), 0.0, 1e-14);
        ASSERT_NEAR(std::abs(B.a22 - std::conj(A.a22)), 0.0, 1e-14);
        const auto pa = eigenvalues(A);
        const auto pb = eigenvalues(B);
        const EigenPair<double> conj_a{std::conj(pa.principal), std::conj(pa.spurious), pa.discriminant};
        ASSERT_LE(eigen_set_distance(pb, conj_a), 1e-12);
    }
}

// Along a sweep the principal branch moves less than the gap between the
// branches, except where the branches collide.
TEST(Eigenvalues, PrincipalBranchContinuity) {
    const std::vector<FamilySpec> families{family::Traditional{}, family::Method3{2.0}, family::Method3{4.0},
                                           family::SuperDuper{}};
    for (const auto& f : families) {
        for (double nu : {0.1, 0.3, 0.7, 0.9}) {
            const auto p = resolve(f, CourantNumber(nu));
            std::vector<double> thetas;
            for (int k = 0; k <= 1024; ++k) {
                thetas.push_back(pi * k / 1024.0);
            }
            const auto rows = spectral_sweep(p, nu, thetas);
            for (std::size_t k = 1; k < rows.size(); ++k) {
                if (rows[k].collision || rows[k - 1].collision) {
                    continue;
                }
                const double jump = std::abs(rows[k].lam1 - rows[k - 1].lam1);
                const double gap = std::abs(rows[k].lam1 - rows[k].lam2);
                ASSERT_LT(jump, gap) << to_string(f) << " nu=" << nu << " theta=" << rows[k].theta;
            }
        }
    }
}

TEST(DissipationError, ExactCases) {
    for (double theta : {0.2, 1.0, 2.5}) {
        const auto unit = dissipation_error(eigenvalues(amplification_matrix(traditional(1.0), 1.0, theta)), 1.0, theta);
        EXPECT_NEAR(unit.principal, 1.0, 1e-14);
        EXPECT_NEAR(unit.spurious, 1.0, 1e-14);
        const auto half =
            dissipation_error(eigenvalues(amplification_matrix(half_cfl_exact(3.0), 0.5, theta)), 0.5, theta);
        EXPECT_NEAR(half.principal, 1.0, 1e-13);
        EXPECT_NEAR(half.spurious, 1.0, 1e-13);
    }
}

// Golden values from numpy.linalg.eigvals on the same matrix.
TEST(DissipationError, TraditionalGolden) {
    const double theta = pi / 2;
    const auto pair = eigenvalues(amplification_matrix(traditional(0.7), 0.7, theta));
    const auto e1 = dissipation_error(pair, 0.7, theta);
    EXPECT_NEAR(e1.principal, 0.9883098489554482, 1e-13);
    EXPECT_NEAR(e1.spurious, 0.5652592345127748, 1e-13);
    EXPECT_NEAR(std::abs(pair.principal - C(0.45068059834513796, -0.8795699834678359)), 0.0, 1e-13);
}

TEST(DispersionError, ExactCases) {
    for (double theta : {0.1, 1.0, 3.0}) {
        const auto unit = dispersion_error(eigenvalues(amplification_matrix(traditional(1.0), 1.0, theta)), 1.0, theta);
        EXPECT_NEAR(*unit.principal, 1.0, 1e-13);
        const auto half =
            dispersion_error(eigenvalues(amplification_matrix(half_cfl_exact(4.0), 0.5, theta)), 0.5, theta);
        EXPECT_NEAR(*half.principal, 1.0, 1e-12);
    }
}

TEST(DispersionError, OppositeTrendsAtLowCourant) {
    const auto m3 = resolve(family::Method3{2.0}, CourantNumber(0.1));
    for (double theta : {2.0, 2.5, 3.0}) {
        const auto trad = dispersion_error(eigenvalues(amplification_matrix(traditional(0.1), 0.1, theta)), 0.1, theta);
        const auto low = dispersion_error(eigenvalues(amplification_matrix(m3, 0.1, theta)), 0.1, theta);
        EXPECT_GT(*trad.principal, 1.0);
        EXPECT_LT(*low.principal, 1.0);
    }
    // numpy reference at theta = 2.5
    const double theta = 2.5;
    EXPECT_NEAR(*dispersion_error(eigenvalues(amplification_matrix(traditional(0.1), 0.1, theta)), 0.1, theta).principal,
                1.0420320213260739, 1e-12);
    EXPECT_NEAR(*dispersion_error(eigenvalues(amplification_matrix(m3, 0.1, theta)), 0.1, theta).principal,
                0.9742506269803557, 1e-12);
}

TEST(DispersionError, Errors) {
    const auto pair = eigenvalues(amplification_matrix(traditional(0.5), 0.5, 0.0));
    EXPECT_THROW(dispersion_error(pair, 0.5, 0.0), ConfigError);
    const EigenPair<double> zero{C(0.0), C(0.5, 0.5), C(0.0)};
    const auto e = dispersion_error(zero, 0.5, 1.0);
    EXPECT_FALSE(e.principal.has_value());
    EXPECT_TRUE(e.spurious.has_value());
}

TEST(EvolveMode, ZeroAndOneStep) {
    const FourierMode m(0.8, C(0.3, -0.2), C(1.0, 0.5));
    const auto p = resolve(family::SuperDuper{}, CourantNumber(0.6));
    const auto zero = evolve_mode(m, p, CourantNumber(0.6), 0);
    EXPECT_EQ(zero.Q_hat, m.Q_hat);
    EXPECT_EQ(zero.q_hat, m.q_hat);
    const auto A = amplification_matrix(p, 0.6, 0.8);
    const auto one = evolve_mode(m, p, CourantNumber(0.6), 1);
    EXPECT_EQ(one.Q_hat, A.a11 * m.Q_hat + A.a12 * m.q_hat);
    EXPECT_EQ(one.q_hat, A.a21 * m.Q_hat + A.a22 * m.q_hat);
}

// A real single-harmonic grid state evolves, mode by mode, exactly as the
// amplification matrix predicts.
TEST(EvolveMode, MatchesSolverDft) {
    const std::size_t n = 64;
    const int mode = 5;
    const double theta = 2 * pi * mode / static_cast<double>(n);
    const auto grid = make_grid(0.0, 1.0, static_cast<long long>(n));
    const auto initial = project(InitialCondition::sine(mode), grid);

    // (1/N) sum_i v_i e^{-I(i+1/2)theta}
    const auto amp = [&](const std::vector<double>& v) {
        return fourier_coefficient(v, mode) * std::polar(1.0, -0.5 * theta);
    };
    for (const FamilySpec& f : {FamilySpec{family::Traditional{}}, FamilySpec{family::Method3{4.0}},
                                FamilySpec{family::SuperDuper{}}}) {
        const CourantNumber nu(0.65);
        const auto p = resolve(f, nu);
        const FourierMode m0(theta, amp(initial.averages()), amp(initial.point_values()));
        const auto predicted = evolve_mode(m0, p, nu, 40);
        const auto state = advance(initial, p, nu, 40);
        const double scale = std::abs(m0.Q_hat) + std::abs(m0.q_hat);
        EXPECT_LE(std::abs(amp(state.averages()) - predicted.Q_hat), 1e-12 * scale);
        EXPECT_LE(std::abs(amp(state.point_values()) - predicted.q_hat), 1e-12 * scale);
    }
}

TEST(StabilityScan, TraditionalIsStable) {
    std::vector<double> nus;
    for (int k = 1; k <= 20; ++k) {
        nus.push_back(0.05 * k);
    }
    const auto thetas = uniform_theta_grid(1024);
    const auto report = stability_scan(family::Traditional{}, nus, thetas);
    EXPECT_TRUE(report.stable());
    EXPECT_LE(report.max_radius(), 1.0 + 1e-12);
    ASSERT_EQ(report.rows.size(), 20u);
    EXPECT_NEAR(report.rows.back().max_radius, 1.0, 1e-15);

    const auto sd = stability_scan(family::SuperDuper{}, nus, thetas);
    EXPECT_EQ(sd.rows.size(), 20u);
}

TEST(StabilityScan, FlagsUnstableParameters) {
    const std::vector<double> nus{0.5};
    const auto thetas = uniform_theta_grid(128);
    const auto report = stability_scan(family::Custom{{12.0, 12.0, 3.0, 0.0}}, nus, thetas);
    EXPECT_FALSE(report.stable());
    EXPECT_THROW(stability_scan(family::Traditional{}, std::vector<double>{}, thetas), ConfigError);
}

TEST(PrincipalOrder, Examples) {
    const auto trad = principal_order(family::Traditional{}, CourantNumber(0.7));
    ASSERT_TRUE(trad.slope.has_value());
    EXPECT_NEAR(*trad.slope, 4.0, 0.1);

    const auto fourth = principal_order(family::FourthOrder{3.0}, CourantNumber(0.7));
    ASSERT_TRUE(fourth.slope.has_value());
    EXPECT_NEAR(*fourth.slope, 5.0, 0.1);

    for (double R : {1.0, 3.0, 5.0}) {
        EXPECT_TRUE(principal_order(family::FourthOrder{R}, CourantNumber(0.5)).exact_to_machine_precision());
    }
}

TEST(PrincipalOrder, PerturbedThirdOrderLosesOrder) {
    auto p = resolve(family::Method3{3.0}, CourantNumber(0.7));
    p.U += 1e-3;
    const auto est = principal_order(p, 0.7);
    ASSERT_TRUE(est.slope.has_value());
    EXPECT_LT(*est.slope, 3.9);
}

TEST(LeadingCoefficient, Method3Prediction) {
    const auto r = leading_coefficient_check(family::Method3{3.0}, CourantNumber(0.7));
    EXPECT_EQ(r.power, 4);
    EXPECT_NEAR(r.predicted.real(), -0.21 * 0.79 / 72.0, 1e-15);
    EXPECT_NEAR(r.predicted.real(), -0.0023041666666666666, 1e-12);
    EXPECT_TRUE(r.pass);
    EXPECT_LE(r.deviation, 0.01);
}

TEST(LeadingCoefficient, FourthOrderVanishes) {
    for (double nu : {0.5, 1.0}) {
        const auto r = leading_coefficient_check(family::FourthOrder{3.0}, CourantNumber(nu));
        EXPECT_EQ(r.power, 5);
        EXPECT_EQ(std::abs(r.predicted), 0.0);
        EXPECT_FALSE(r.relative);
        EXPECT_TRUE(r.pass);
        EXPECT_LE(std::abs(r.measured), 1e-10);
    }
    EXPECT_THROW(leading_coefficient_check(family::HalfCflExact{3.0}, CourantNumber(0.5)), ConfigError);
}

TEST(Invariance, FourthOrderIndependentOfR) {
    for (double nu : {0.2, 0.5, 0.7, 0.9}) {
        const CourantNumber c(nu);
        for (double theta : uniform_theta_grid(200)) {
            const auto a = eigenvalues(amplification_matrix(resolve(family::FourthOrder{2.0}, c), nu, theta));
            const auto b = eigenvalues(amplification_matrix(resolve(family::FourthOrder{4.0}, c), nu, theta));
            const auto d = eigenvalues(amplification_matrix(resolve(family::SuperDuper{}, c), nu, theta));
            ASSERT_LE(eigen_set_distance(a, b), 1e-10);
            ASSERT_LE(eigen_set_distance(a, d), 1e-10);
        }
    }
}

TEST(Invariance, ThirdOrderDependsOnlyOnSum) {
    for (double nu : {0.2, 0.5, 0.7, 0.9}) {
        const CourantNumber c(nu);
        for (double theta : uniform_theta_grid(200)) {
            const auto a = eigenvalues(amplification_matrix(resolve(family::ThirdOrder{2.0, 6.0}, c), nu, theta));
            const auto b = eigenvalues(amplification_matrix(resolve(family::ThirdOrder{4.0, 4.0}, c), nu, theta));
            const auto d = eigenvalues(amplification_matrix(resolve(family::ThirdOrder{1.0, 7.0}, c), nu, theta));
            ASSERT_LE(eigen_set_distance(a, b), 1e-10);
            ASSERT_LE(eigen_set_distance(a, d), 1e-10);
        }
    }
    // Different sums give different spectra.
    const auto a = eigenvalues(amplification_matrix(resolve(family::ThirdOrder{2.0, 6.0}, CourantNumber(0.7)), 0.7, 2.0));
    const auto b = eigenvalues(amplification_matrix(resolve(family::ThirdOrder{3.0, 3.0}, CourantNumber(0.7)), 0.7, 2.0));
    EXPECT_GT(eigen_set_distance(a, b), 1e-3);
}

}  // namespace
}  // namespace afl
