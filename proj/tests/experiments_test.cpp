#include <gtest/gtest.h>

#include <random>

#include "afl/experiments.hpp"
#include "afl/spectral.hpp"

namespace afl {
namespace {

const Grid1D reference_grid = make_grid(-5.0, 5.0, 100);

TEST(Project, ConstantProfile) {
    const auto ic = InitialCondition::custom([](double) { return 2.5; });
    const auto s = project(ic, reference_grid);
    for (std::size_t i = 0; i < s.size(); ++i) {
        EXPECT_NEAR(s.averages()[i], 2.5, 1e-14);
        EXPECT_EQ(s.point_values()[i], 2.5);
    }
}

// Averages of sin(k(x - x_min)) over a cell are sinc-weighted center samples.
TEST(Project, SineClosedForm) {
    for (int m : {1, 3, 10, 50}) {
        const auto s = project(InitialCondition::sine(m), reference_grid);
        const double k = 2 * pi * m / 10.0;
        const double dx = reference_grid.dx();
        const double sinc = std::sin(0.5 * k * dx) / (0.5 * k * dx);
        for (std::size_t i = 0; i < s.size(); ++i) {
            const double xc = reference_grid.center(i) + 5.0;
            ASSERT_NEAR(s.averages()[i], sinc * std::sin(k * xc), 1e-13);
            ASSERT_NEAR(s.point_values()[i], std::sin(k * (reference_grid.right_interface(i) + 5.0)), 1e-13);
        }
    }
}

TEST(Project, SquareWaveOnInterfaces) {
    const auto s = project(InitialCondition::square(), reference_grid);
    int ones = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double v = s.averages()[i];
        ASSERT_TRUE(v == 0.0 || v == 1.0) << "cell " << i << " average " << v;
        ones += v == 1.0;
    }
    EXPECT_EQ(ones, 20);
    // Half-open support: value 1 at the left edge, 0 at the right edge.
    EXPECT_EQ(InitialCondition::square().value(-1.0, reference_grid), 1.0);
    EXPECT_EQ(InitialCondition::square().value(1.0, reference_grid), 0.0);
}

TEST(Project, CustomQuadratureIsDegreeNineExact) {
    const auto ic = InitialCondition::custom([](double x) { return std::pow(x, 9) - 3 * std::pow(x, 4); });
    const auto grid = make_grid(0.0, 2.0, 4);
    const auto s = project(ic, grid);
    for (std::size_t i = 0; i < 4; ++i) {
        const double a = grid.interface(i), b = grid.interface(i + 1);
        const double exact = ((std::pow(b, 10) - std::pow(a, 10)) / 10 - 3 * (std::pow(b, 5) - std::pow(a, 5)) / 5) /
                             grid.dx();
        EXPECT_NEAR(s.averages()[i], exact, 1e-12 * std::max(1.0, std::abs(exact)));
    }
}

TEST(Project, RejectsUnresolvableSine) {
    EXPECT_THROW(project(InitialCondition::sine(51), reference_grid), ConfigError);
    EXPECT_NO_THROW(project(InitialCondition::sine(50), reference_grid));
    EXPECT_THROW(InitialCondition::sine(0), ConfigError);
    EXPECT_THROW(InitialCondition::square(1.0, -1.0), ConfigError);
}

TEST(ExactState, Examples) {
    const auto ic = shape_suite(reference_grid);
    const auto p = project(ic, reference_grid);
    EXPECT_EQ(exact_state(ic, reference_grid, 0.0).averages(), p.averages());
    const auto period = exact_state(ic, reference_grid, 10.0);
    EXPECT_EQ(period.averages(), p.averages());
    EXPECT_EQ(period.point_values(), p.point_values());
    const auto one = exact_state(ic, reference_grid, 0.1);
    EXPECT_EQ(one.averages(), p.shifted(1).averages());
    const auto slow = exact_state(ic, reference_grid, 0.2, 0.5);
    EXPECT_EQ(slow.point_values(), p.shifted(1).point_values());
    EXPECT_THROW(exact_state(ic, reference_grid, -1.0), ConfigError);
}

TEST(ExactState, OffGridShiftMatchesAnalytic) {
    const auto s = exact_state(InitialCondition::sine(2), reference_grid, 0.37);
    const double k = 2 * pi * 2 / 10.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double x = reference_grid.right_interface(i) + 5.0 - 0.37;
        ASSERT_NEAR(s.point_values()[i], std::sin(k * x), 1e-13);
    }
}

TEST(ErrorNorms, Examples) {
    const auto grid = make_grid(0.0, 1.0, 10);
    const SolutionState zero = SolutionState::constant(10, 0.0);
    const auto same = error_norms(zero, zero, grid);
    EXPECT_EQ(same.max_linf(), 0.0);
    EXPECT_EQ(same.averages.l2, 0.0);

    std::vector<double> avg(10, 0.0);
    avg[3] = 1.0;
    const auto single = error_norms(SolutionState(avg, std::vector<double>(10, 0.0)), zero, grid);
    EXPECT_NEAR(single.averages.l1, 0.1, 1e-15);
    EXPECT_NEAR(single.averages.l2, std::sqrt(0.1), 1e-15);
    EXPECT_EQ(single.averages.linf, 1.0);
    EXPECT_EQ(single.point_values.linf, 0.0);

    const auto flat = error_norms(SolutionState::constant(10, 0.25), zero, grid);
    EXPECT_EQ(flat.point_values.linf, 0.25);
    EXPECT_NEAR(flat.point_values.l1, 0.25, 1e-15);

    EXPECT_THROW(error_norms(SolutionState::constant(9, 0.0), zero, grid), ConfigError);
}

TEST(Convergence, TraditionalThirdOrder) {
    const auto study =
        convergence_study(InitialCondition::sine(1), family::Traditional{}, CourantNumber(0.7), 1.0, 2.1,
                          {50, 100, 200, 400});
    ASSERT_EQ(study.rows.size(), 4u);
    EXPECT_FALSE(study.rows.front().eoc.has_value());
    EXPECT_FALSE(study.time_mismatch);
    EXPECT_FALSE(study.non_smooth_warning);
    const double eoc = *study.rows.back().headline_eoc();
    EXPECT_GE(eoc, 2.8);
    EXPECT_LE(eoc, 3.2);
    for (const auto& r : study.rows) {
        EXPECT_LE(r.mass_drift, 1e-9);
    }
}

TEST(Convergence, SuperDuperAtLeastThird) {
    const auto study = convergence_study(InitialCondition::sine(1), family::SuperDuper{}, CourantNumber(0.7), 1.0,
                                         2.1, {50, 100, 200, 400});
    EXPECT_GE(*study.rows.back().headline_eoc(), 2.8);
}

TEST(Convergence, UnitCourantIsExact) {
    const auto study = convergence_study(InitialCondition::sine(3), family::Method3{2.0}, CourantNumber(1.0), 1.0,
                                         2.0, {50, 100, 200});
    for (const auto& r : study.rows) {
        EXPECT_LE(r.errors.max_linf(), 1e-12);
    }
}

TEST(Convergence, Markers) {
    const auto square = convergence_study(InitialCondition::square(), family::Traditional{}, CourantNumber(0.5), 1.0,
                                          1.0, {20, 40});
    EXPECT_TRUE(square.non_smooth_warning);
    const auto odd = convergence_study(InitialCondition::sine(1), family::Traditional{}, CourantNumber(0.7), 1.0,
                                       1.0, {50, 100});
    EXPECT_TRUE(odd.time_mismatch);
    EXPECT_THROW(convergence_study(InitialCondition::sine(1), family::Traditional{}, CourantNumber(0.7), 1.0, 1.0, {}),
                 ConfigError);
}

TEST(Retention, Examples) {
    const auto ic = InitialCondition::sine(10);
    const auto initial = project(ic, reference_grid);
    EXPECT_NEAR(amplitude_retention(initial, reference_grid, 10, initial), 1.0, 1e-15);

    const auto p = resolve(family::Traditional{}, CourantNumber(1.0));
    const auto moved = advance(initial, p, CourantNumber(1.0), 37);
    EXPECT_NEAR(amplitude_retention(moved, reference_grid, 10, initial), 1.0, 1e-12);

    EXPECT_THROW(amplitude_retention(initial, reference_grid, 51, initial), ConfigError);
    EXPECT_THROW(amplitude_retention(initial, reference_grid, 10, 0.0), ConfigError);
}

TEST(Retention, MatchesDominantEigenvalue) {
    const auto ic = InitialCondition::sine(10);
    const auto initial = project(ic, reference_grid);
    const double theta = 2 * pi * 10 / 100.0;
    const std::int64_t n = 2000;
    for (const FamilySpec& f : {FamilySpec{family::Traditional{}}, FamilySpec{family::Method3{4.0}},
                                FamilySpec{family::SuperDuper{}}}) {
        const CourantNumber nu(0.7);
        const auto p = resolve(f, nu);
        const auto pair = eigenvalues(amplification_matrix(p, 0.7, theta));
        const double predicted =
            std::pow(std::max(std::abs(pair.principal), std::abs(pair.spurious)), static_cast<double>(n));
        const double measured = amplitude_retention(advance(initial, p, nu, n), reference_grid, 10, initial);
        EXPECT_NEAR(measured / predicted, 1.0, 0.1) << to_string(f);
        EXPECT_LE(measured, 1.0 + 1e-6);
    }
}

TEST(ShapeSuite, Areas) {
    const auto ic = shape_suite(reference_grid);
    const double total = ic.integral(-5.0, 5.0, reference_grid);
    EXPECT_NEAR(total, 0.4 * std::sqrt(pi) + 1.0 + 0.4, 1e-12);
    const auto s = project(ic, reference_grid);
    EXPECT_NEAR(s.total_mass() * reference_grid.dx(), total, 1e-12);
}

TEST(ShapeSuite, ValuesAndPeaks) {
    const auto ic = shape_suite(reference_grid);
    // The Gaussian tail is below 1e-12 this far from its center.
    for (double x : {1.0, 1.5, 2.05, 3.0, 4.5}) {
        EXPECT_NEAR(ic.value(x, reference_grid), 0.0, 1e-12) << x;
    }
    EXPECT_EQ(ic.value(2.5, reference_grid), 1.0);
    EXPECT_NEAR(ic.value(-3.0, reference_grid), 1.0, 1e-15);
    double peak = 0.0;
    for (int k = 0; k < 20000; ++k) {
        peak = std::max(peak, ic.value(-5.0 + 10.0 * k / 20000.0, reference_grid));
    }
    // The Gaussian tail reaches the pulse edge at exp(-25).
    EXPECT_NEAR(peak, 1.0, 2.0 * std::exp(-25.0));
}

TEST(ShapeSuite, RescaledDomain) {
    const auto grid = make_grid(0.0, 1.0, 50);
    const auto ic = shape_suite(grid);
    EXPECT_NEAR(ic.integral(0.0, 1.0, grid), (0.4 * std::sqrt(pi) + 1.0 + 0.4) / 10.0, 1e-12);
    EXPECT_EQ(ic.value(0.75, grid), 1.0);
}

TEST(RunExperiment, LongSineRunStepCount) {
    ExperimentConfig cfg;
    cfg.family = family::SuperDuper{};
    cfg.nu = 0.7;
    cfg.t_final = 1000.0;
    const auto r = run_experiment(cfg);
    EXPECT_EQ(r.n_steps, 14286);
    EXPECT_NEAR(r.t_real, 1000.02, 1e-9);
    EXPECT_EQ(r.t_requested, 1000.0);
    ASSERT_TRUE(r.retention.has_value());
    EXPECT_GE(*r.retention, 0.9);
    EXPECT_LE(r.mass_drift(), 1e-9);
}

TEST(RunExperiment, SuperDuperExactAtHalfCourant) {
    for (const char* ic : {"shapes", "square", "sine:m=10"}) {
        ExperimentConfig cfg;
        cfg.family = family::SuperDuper{};
        cfg.nu = 0.5;
        cfg.t_final = 10.0;
        cfg.ic = parse_initial_condition(ic, reference_grid);
        const auto r = run_experiment(cfg);
        EXPECT_EQ(r.n_steps, 200);
        EXPECT_LE(r.errors.max_linf(), 1e-11) << ic;
    }
}

TEST(RunExperiment, ZeroTime) {
    ExperimentConfig cfg;
    cfg.ic = InitialCondition::square();
    cfg.t_final = 0.0;
    const auto r = run_experiment(cfg);
    EXPECT_EQ(r.n_steps, 0);
    EXPECT_EQ(r.final_state.averages(), r.initial.averages());
    EXPECT_EQ(r.errors.max_linf(), 0.0);
    EXPECT_FALSE(r.retention.has_value());
}

TEST(RunExperiment, BlowUpCarriesStepIndex) {
    ExperimentConfig cfg;
    cfg.family = family::Custom{{40.0, 40.0, 5.0, 0.0}};
    cfg.nu = 0.5;
    cfg.t_final = 1000.0;
    try {
        run_experiment(cfg);
        FAIL() << "expected blow-up";
    } catch (const BlowUpError& e) {
        EXPECT_GT(e.step_index(), 0);
    }
}

TEST(RunExperiment, MassConservedForRandomFamilies) {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> r(2.0, 4.0), c(0.1, 1.0);
    for (int k = 0; k < 20; ++k) {
        ExperimentConfig cfg;
        cfg.family = family::Method3{r(rng)};
        cfg.nu = c(rng);
        cfg.t_final = 20.0;
        cfg.ic = shape_suite(reference_grid);
        const auto res = run_experiment(cfg);
        ASSERT_LE(res.mass_drift(), 1e-9);
    }
}

TEST(ParseInitialCondition, Forms) {
    EXPECT_EQ(parse_initial_condition("sine:m=7", reference_grid).mode(), 7);
    EXPECT_EQ(parse_initial_condition("sine", reference_grid).mode(), 10);
    EXPECT_EQ(parse_initial_condition(" Square ", reference_grid).kind(), InitialCondition::Kind::Square);
    const auto shapes = parse_initial_condition("shapes:spike_center=3", reference_grid);
    EXPECT_EQ(shapes.value(3.0, reference_grid), 1.0);
    EXPECT_THROW(parse_initial_condition("sine:m=2.5", reference_grid), ConfigError);
    EXPECT_THROW(parse_initial_condition("sine:k=2", reference_grid), ConfigError);
    EXPECT_THROW(parse_initial_condition("triangle", reference_grid), ConfigError);
    EXPECT_THROW(parse_initial_condition("shapes:gauss_width=0", reference_grid), ConfigError);
}

}  // namespace
}  // namespace afl
