#include <gtest/gtest.h>

#include <cmath>

#include "helpers.hpp"
#include "stefan/error.hpp"
#include "stefan/operators.hpp"

namespace stefan {
namespace {

using testing::line;
using testing::max_abs_diff;
using testing::sample_curve;

const Discretization kTwentieth = Discretization::make(20, 20, 1.0);

TEST(OperatorConfig, AlphaRangeAndGamma) {
    EXPECT_EQ(OperatorConfig().alpha(), 0.5);
    EXPECT_THROW(OperatorConfig(1.5), ConfigError);
    EXPECT_THROW(OperatorConfig(-0.1), ConfigError);
    const OperatorConfig g = OperatorConfig::from_gamma(3.0);
    EXPECT_DOUBLE_EQ(g.alpha(), 0.25);
    ASSERT_TRUE(g.gamma_estimate().has_value());
    EXPECT_THROW(OperatorConfig::from_gamma(0.0), ConfigError);
}

TEST(ApplyP, Examples) {
    const Discretization d = Discretization::make(4, 4, 1.0);
    const BoundaryCurve s = line(d, 1.0);
    const BoundaryCurve r = line(d, 3.0);
    EXPECT_EQ(max_abs_diff(apply_P(OperatorConfig(0.0), r, s), s), 0.0);
    EXPECT_EQ(max_abs_diff(apply_P(OperatorConfig(1.0), r, s), r), 0.0);

    BoundaryCurve two{{0.0, 2.0}};
    BoundaryCurve one{{0.0, 1.0}};
    EXPECT_DOUBLE_EQ(apply_P(OperatorConfig(0.5), two, one)[1], 1.5);
}

TEST(ApplyP, AffineInAlpha) {
    const Discretization d = Discretization::make(4, 8, 1.0);
    const BoundaryCurve s = sample_curve(d, [](double t) { return t + 0.3 * t * t; });
    const BoundaryCurve r = sample_curve(d, [](double t) { return 2.0 * std::sin(t); });
    const BoundaryCurve p0 = apply_P(OperatorConfig(0.2), r, s);
    const BoundaryCurve p1 = apply_P(OperatorConfig(0.6), r, s);
    const BoundaryCurve mid = apply_P(OperatorConfig(0.4), r, s);
    for (int n = 0; n <= d.M; ++n) EXPECT_NEAR(mid[n], 0.5 * (p0[n] + p1[n]), 1e-15);
}

TEST(RNeumann, VanishesAtStartAndFixesExactCurve) {
    const BuiltinProblem p = builtin_example(ExampleId::II);
    const BoundaryCurve exact = line(kTwentieth, 1.0);
    const BoundaryCurve r = apply_R_neumann(p.spec, kTwentieth, exact);
    EXPECT_EQ(r[0], 0.0);
    EXPECT_LE(max_abs_diff(r, exact), 5e-3);
}

TEST(RNeumann, CurveBelowExactIsPushedUp) {
    const BuiltinProblem p = builtin_example(ExampleId::II);
    const BoundaryCurve r = apply_R_neumann(p.spec, kTwentieth, line(kTwentieth, 0.5));
    for (int n = 0; n <= kTwentieth.M; ++n) EXPECT_GE(r[n], kTwentieth.t(n) - 5e-3) << n;
}

TEST(RNeumann, ZeroFluxGivesZero) {
    const ProblemSpec spec = testing::neumann([](double) { return 0.0; });
    const BoundaryCurve r = apply_R_direct(spec, kTwentieth, line(kTwentieth, 1.0));
    for (double v : r.values) EXPECT_EQ(v, 0.0);
    const BoundaryCurve rn = apply_R_neumann(spec, kTwentieth, line(kTwentieth, 1.0));
    for (double v : rn.values) EXPECT_EQ(v, 0.0);
}

TEST(RNeumann, RequiresMatchingModeAndConstantBeta) {
    ProblemSpec spec = builtin_example(ExampleId::II).spec;
    EXPECT_THROW(apply_R_dirichlet(spec, kTwentieth, line(kTwentieth, 1.0)), ConfigError);
    spec.beta = ScalarFunction::from_expression("1+x", 'x');
    EXPECT_THROW(apply_R_neumann(spec, kTwentieth, line(kTwentieth, 1.0)), ConfigError);
    EXPECT_NO_THROW(apply_R(spec, kTwentieth, line(kTwentieth, 1.0)));
}

TEST(RNeumann, BetaScalesTheUpdate) {
    ProblemSpec spec = builtin_example(ExampleId::II).spec;
    const BoundaryCurve s = line(kTwentieth, 0.8);
    const BoundaryCurve r1 = apply_R_neumann(spec, kTwentieth, s);
    spec.beta = ScalarFunction::constant(2.0);
    const BoundaryCurve r2 = apply_R_neumann(spec, kTwentieth, s);
    for (int n = 0; n <= kTwentieth.M; ++n) EXPECT_NEAR(r2[n], 0.5 * r1[n], 1e-14);
}

TEST(RDirichlet, ZeroDataGivesZero) {
    const ProblemSpec spec = testing::dirichlet([](double) { return 0.0; });
    for (double v : apply_R_dirichlet(spec, kTwentieth, line(kTwentieth, 1.0)).values) {
        EXPECT_EQ(v, 0.0);
    }
}

TEST(RDirichlet, FixesExactCurve) {
    const BuiltinProblem p = builtin_example(ExampleId::I);
    const BoundaryCurve exact = line(kTwentieth, 1.0);
    EXPECT_LE(max_abs_diff(apply_R_dirichlet(p.spec, kTwentieth, exact), exact), 1e-2);
}

TEST(RDirichlet, ReversalInstance) {
    const BuiltinProblem p = builtin_example(ExampleId::I);
    const BoundaryCurve r1 = apply_R_dirichlet(p.spec, kTwentieth, line(kTwentieth, 0.5));
    const BoundaryCurve r2 = apply_R_dirichlet(p.spec, kTwentieth, line(kTwentieth, 1.0));
    for (int n = 0; n <= kTwentieth.M; ++n) EXPECT_GE(r1[n], r2[n] - 5e-3) << n;
}

TEST(RDirect, FixesExactCurve) {
    const BuiltinProblem p = builtin_example(ExampleId::II);
    const Discretization d = Discretization::make(40, 40, 1.0);
    const BoundaryCurve exact = line(d, 1.0);
    EXPECT_LE(max_abs_diff(apply_R_direct(p.spec, d, exact), exact), 2e-2);
}

TEST(RDirect, HeavierIceMeltsSlower) {
    ProblemSpec spec = builtin_example(ExampleId::II).spec;
    const BoundaryCurve s = line(kTwentieth, 1.0);
    const BoundaryCurve light = apply_R_direct(spec, kTwentieth, s);
    spec.beta = ScalarFunction::from_expression("1+x", 'x');
    const BoundaryCurve heavy = apply_R_direct(spec, kTwentieth, s);
    for (int n = 1; n <= kTwentieth.M; ++n) {
        EXPECT_GT(heavy[n], heavy[n - 1]);
        EXPECT_LE(heavy[n], light[n]);
    }
}

TEST(RDispatch, AutoPicksDivergenceForConstantBeta) {
    const BuiltinProblem p = builtin_example(ExampleId::II);
    const BoundaryCurve s = line(kTwentieth, 0.7);
    EXPECT_EQ(max_abs_diff(apply_R(p.spec, kTwentieth, s), apply_R_neumann(p.spec, kTwentieth, s)),
              0.0);
    EXPECT_EQ(max_abs_diff(apply_R(p.spec, kTwentieth, s, RForm::Direct),
                           apply_R_direct(p.spec, kTwentieth, s)),
              0.0);
}

TEST(Gradients, ExactFieldOnExactCurve) {
    const BuiltinProblem p = builtin_example(ExampleId::II);
    const Discretization d = Discretization::make(40, 40, 1.0);
    const BoundaryCurve s = line(d, 1.0);
    const TemperatureField f = solve_fixed_boundary(p.spec, d, s);
    // U = e^{t-x} - 1: U_x(s,t) = -1, U_x(0,t) = -e^t.
    EXPECT_NEAR(front_gradient(f, s, d, 20), -1.0, 1e-2);
    EXPECT_NEAR(origin_gradient(f, s, d, 20), -std::exp(0.5), 1e-2);
    EXPECT_THROW(front_gradient(f, s, d, 0), Error);
}

TEST(FrontSpeed, ExactForLinearAndSquareRootFronts) {
    const Discretization d = Discretization::make(4, 16, 1.0);
    const BoundaryCurve lin = line(d, 0.7);
    const BoundaryCurve root = sample_curve(d, [](double t) { return 1.3 * std::sqrt(t); });
    for (int n = 1; n <= d.M; ++n) {
        EXPECT_NEAR(front_speed(lin, n, d.dt()), 0.7, 1e-13);
        EXPECT_NEAR(front_speed(root, n, d.dt()), 0.65 / std::sqrt(d.t(n)), 1e-12);
    }
}

TEST(Tolerance, ReversalSlack) {
    EXPECT_DOUBLE_EQ(reversal_tolerance(Discretization::make(10, 20, 1.0)), 5.0 * (0.01 + 0.0025));
}

}  // namespace
}  // namespace stefan
