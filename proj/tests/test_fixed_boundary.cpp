#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "stefan/error.hpp"
#include "stefan/experiments.hpp"
#include "stefan/fixed_boundary.hpp"

namespace stefan {
namespace {

// Gaussian elimination with partial pivoting on the dense form of a tridiagonal system.
std::vector<double> dense_solve(const TridiagonalSystem& sys) {
    const std::size_t n = sys.size();
    std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0) a[i][i - 1] = sys.sub[i];
        a[i][i] = sys.diag[i];
        if (i + 1 < n) a[i][i + 1] = sys.sup[i];
        a[i][n] = sys.rhs[i];
    }
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t r = k + 1; r < n; ++r) {
            if (std::abs(a[r][k]) > std::abs(a[p][k])) p = r;
        }
        std::swap(a[k], a[p]);
        for (std::size_t r = k + 1; r < n; ++r) {
            const double m = a[r][k] / a[k][k];
            for (std::size_t c = k; c <= n; ++c) a[r][c] -= m * a[k][c];
        }
    }
    std::vector<double> x(n);
    for (std::size_t k = n; k-- > 0;) {
        double s = a[k][n];
        for (std::size_t c = k + 1; c < n; ++c) s -= a[k][c] * x[c];
        x[k] = s / a[k][k];
    }
    return x;
}

TEST(StepCoefficients, RhoAndSigmaBySubstitution) {
    const Discretization d = Discretization::make(10, 10, 1.0);
    BoundaryCurve c = testing::line(d, 1.0);
    c[1] = std::sqrt(2.0);
    const StepCoefficients first = step_coefficients(d, c, 1);
    EXPECT_NEAR(first.rho, 0.2, 1e-14);
    // dz/dt = 2 / 0.1 = 20, so sigma_i = xi_i / 4 * 20 * 0.1 = xi_i / 2.
    for (int i = 1; i <= 10; ++i) EXPECT_NEAR(first.sigma[i], 0.5 * d.xi(i), 1e-14);

    c[1] = 1.0;
    c[2] = 1.0;
    const StepCoefficients flat = step_coefficients(d, c, 2);
    EXPECT_NEAR(flat.rho, 0.2, 1e-14);
    for (double s : flat.sigma) EXPECT_EQ(s, 0.0);
}

TEST(AssembleStep, HandBuiltNeumannSystem) {
    const Discretization d = Discretization::make(2, 1, 0.1);
    const ProblemSpec spec = testing::neumann([](double) { return 1.0; });
    BoundaryCurve c{{0.0, 0.1}};
    const TemperatureField f(2, 1);
    const TridiagonalSystem sys = assemble_step(spec, d, c, f, 1);

    // z^{1/2} = 0.005, rho = 0.005 * 2 * 0.25 / 0.1 = 0.025
    // dz/dt = 0.1, sigma_1 = 0.5 / 4 * 0.1 * 0.5 = 0.00625
    const double rho = 0.025;
    const double sigma = 0.00625;
    EXPECT_NEAR(sys.diag[0], -(2.0 + rho), 1e-15);
    EXPECT_NEAR(sys.sup[0], 2.0, 1e-15);
    // -2 dxi (q^1 s^1 + q^0 s^0) = -2 * 0.5 * 0.1
    EXPECT_NEAR(sys.rhs[0], -0.1, 1e-15);
    EXPECT_NEAR(sys.sub[1], 1.0 - sigma, 1e-15);
    EXPECT_NEAR(sys.diag[1], -(2.0 + rho), 1e-15);
    EXPECT_NEAR(sys.sup[1], 1.0 + sigma, 1e-15);
    EXPECT_EQ(sys.rhs[1], 0.0);
    EXPECT_EQ(sys.sub[2], 0.0);
    EXPECT_NE(sys.diag[2], 0.0);
    EXPECT_EQ(sys.rhs[2], 0.0);
}

TEST(AssembleStep, DirichletRowCarriesData) {
    const Discretization d = Discretization::make(4, 2, 1.0);
    const ProblemSpec spec = testing::dirichlet([](double t) { return 3.0 * t; });
    const TemperatureField f(4, 2);
    const TridiagonalSystem sys = assemble_step(spec, d, testing::line(d, 1.0), f, 2);
    EXPECT_EQ(sys.diag[0], 1.0);
    EXPECT_EQ(sys.sup[0], 0.0);
    EXPECT_DOUBLE_EQ(sys.rhs[0], 3.0);
    EXPECT_THROW(assemble_step(spec, d, testing::line(d, 1.0), f, 0), ConfigError);
}

TEST(Thomas, SmallExamples) {
    TridiagonalSystem id(4);
    for (int i = 0; i < 4; ++i) {
        id.diag[i] = 1.0;
        id.rhs[i] = i + 0.5;
    }
    const auto x = thomas_solve(id);
    for (int i = 0; i < 4; ++i) EXPECT_EQ(x[i], i + 0.5);

    TridiagonalSystem two(2);
    two.diag = {2.0, 2.0};
    two.sup[0] = 1.0;
    two.sub[1] = 1.0;
    two.rhs = {3.0, 3.0};
    const auto y = thomas_solve(two);
    EXPECT_NEAR(y[0], 1.0, 1e-15);
    EXPECT_NEAR(y[1], 1.0, 1e-15);
}

TEST(Thomas, MatchesDenseEliminationOnRandomSystems) {
    std::mt19937 rng(20240611);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_int_distribution<int> sizes(2, 60);
    for (int trial = 0; trial < 50; ++trial) {
        TridiagonalSystem sys(static_cast<std::size_t>(sizes(rng)));
        for (std::size_t i = 0; i < sys.size(); ++i) {
            if (i > 0) sys.sub[i] = u(rng);
            if (i + 1 < sys.size()) sys.sup[i] = u(rng);
            const double margin = 0.1 + std::abs(u(rng));
            sys.diag[i] = (u(rng) < 0 ? -1.0 : 1.0) *
                          (std::abs(sys.sub[i]) + std::abs(sys.sup[i]) + margin);
            sys.rhs[i] = 10.0 * u(rng);
        }
        const auto x = thomas_solve(sys);
        const auto ref = dense_solve(sys);
        for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(x[i], ref[i], 1e-10);
    }
}

TEST(Thomas, ReportsZeroPivot) {
    TridiagonalSystem sys(2);
    sys.diag = {1.0, 1.0};
    sys.sup[0] = 1.0;
    sys.sub[1] = 1.0;
    EXPECT_THROW(thomas_solve(sys), SolveError);
}

TEST(SolveFixedBoundary, ZeroFluxGivesZeroField) {
    const Discretization d = Discretization::make(8, 8, 1.0);
    const ProblemSpec spec = testing::neumann([](double) { return 0.0; });
    const TemperatureField f = solve_fixed_boundary(spec, d, testing::line(d, 1.0));
    for (int n = 0; n <= d.M; ++n) {
        for (int i = 0; i <= d.N; ++i) EXPECT_EQ(f.at(i, n), 0.0);
    }
}

TEST(SolveFixedBoundary, InitialAndFrontConditions) {
    const BuiltinProblem p = builtin_example(ExampleId::I);
    const Discretization d = Discretization::make(10, 10, 1.0);
    const TemperatureField f = solve_fixed_boundary(p.spec, d, testing::line(d, 1.0));
    for (int i = 0; i <= d.N; ++i) EXPECT_EQ(f.at(i, 0), 0.0);
    for (int n = 0; n <= d.M; ++n) EXPECT_EQ(f.at(d.N, n), 0.0);
    for (int n = 1; n <= d.M; ++n) EXPECT_DOUBLE_EQ(f.at(0, n), std::exp(d.t(n)) - 1.0);
}

class ExactCurveSolve : public ::testing::TestWithParam<std::pair<ExampleId, double>> {};

TEST_P(ExactCurveSolve, SnapshotErrorAtCoarsestGrid) {
    const auto [id, bound] = GetParam();
    const BuiltinProblem p = builtin_example(id);
    const Discretization d = Discretization::make(10, 10, 1.0);
    const BoundaryCurve c = testing::line(d, 1.0);
    const TemperatureField f = solve_fixed_boundary(p.spec, d, c);
    EXPECT_LE(error_Ekn(f, c, p.exact, d.M, d), bound);
}

TEST_P(ExactCurveSolve, SecondOrderInSpaceAndTime) {
    const BuiltinProblem p = builtin_example(GetParam().first);
    auto err = [&](int n) {
        const Discretization d = Discretization::make(n, n, 1.0);
        const BoundaryCurve c = testing::line(d, 1.0);
        return error_Ekn(solve_fixed_boundary(p.spec, d, c), c, p.exact, d.M, d);
    };
    const double ratio = err(20) / err(40);
    EXPECT_GE(ratio, 3.5);
    EXPECT_LE(ratio, 4.5);
}

TEST_P(ExactCurveSolve, StaysNonnegative) {
    const BuiltinProblem p = builtin_example(GetParam().first);
    const Discretization d = Discretization::make(20, 20, 1.0);
    const TemperatureField f = solve_fixed_boundary(p.spec, d, testing::line(d, 1.0));
    for (int n = 0; n <= d.M; ++n) {
        for (int i = 0; i <= d.N; ++i) EXPECT_GE(f.at(i, n), -1e-12);
    }
}

INSTANTIATE_TEST_SUITE_P(Examples, ExactCurveSolve,
                         ::testing::Values(std::make_pair(ExampleId::II, 5e-3),
                                           std::make_pair(ExampleId::I, 1e-2)));

TEST(Smoothing, AutomaticOnlyForJumpingData) {
    const Discretization d = Discretization::make(10, 10, 1.0);
    EXPECT_EQ(resolved_smoothing_steps(builtin_example(ExampleId::I).spec, d, {}), 0);
    EXPECT_EQ(resolved_smoothing_steps(builtin_example(ExampleId::II).spec, d, {}), 0);
    EXPECT_EQ(resolved_smoothing_steps(builtin_example(ExampleId::III).spec, d, {}), 2);
    EXPECT_EQ(resolved_smoothing_steps(builtin_example(ExampleId::III).spec, d, {5}), 5);
    EXPECT_EQ(resolved_smoothing_steps(builtin_example(ExampleId::III).spec, d, {50}), 10);
}

TEST(Smoothing, ImplicitSubstepRowsBySubstitution) {
    const Discretization d = Discretization::make(4, 4, 1.0);
    const ProblemSpec spec = testing::neumann([](double t) { return 1.0 + t; });
    const std::vector<double> prev{0.4, 0.3, 0.2, 0.1, 0.0};
    const TridiagonalSystem sys = assemble_implicit_substep(spec, d, prev, 0.0, 0.0, 0.5, 1.0);
    // rho' = z_b dxi^2 / h = 1 * 0.0625 / 0.5; sigma_i = xi_i / 4 * 2 * 0.25
    const double rho = 0.125;
    EXPECT_NEAR(sys.diag[2], -(2.0 + rho), 1e-15);
    EXPECT_NEAR(sys.sub[2], 1.0 - 0.0625, 1e-15);
    EXPECT_NEAR(sys.sup[2], 1.0 + 0.0625, 1e-15);
    EXPECT_NEAR(sys.rhs[2], -rho * 0.2, 1e-15);
    EXPECT_NEAR(sys.rhs[0], -rho * 0.4 - 2.0 * 0.25 * 1.5 * 1.0, 1e-15);
}

TEST(Smoothing, RemovesStartupOscillation) {
    // g = 1 with s = c sqrt(t): the transformed field of the exact similarity solution does
    // not change in time, so any jump between the first two levels is startup error.
    const BuiltinProblem p = builtin_example(ExampleId::III, ExampleParams{0.0, 1.0});
    const Discretization d = Discretization::make(40, 40, 1.0);
    const BoundaryCurve c = testing::sample_curve(d, [](double t) { return 1.2 * std::sqrt(t); });
    auto first_jump = [&](int steps) {
        const TemperatureField f = solve_fixed_boundary(p.spec, d, c, {steps});
        double worst = 0.0;
        for (int i = 0; i <= d.N; ++i) worst = std::max(worst, std::abs(f.at(i, 2) - f.at(i, 1)));
        return worst;
    };
    EXPECT_LT(first_jump(2), 0.2 * first_jump(0));
}

}  // namespace
}  // namespace stefan
