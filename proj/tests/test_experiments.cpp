#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "helpers.hpp"
#include "stefan/error.hpp"
#include "stefan/experiments.hpp"

namespace stefan {
namespace {

TEST(ErrorEkn, ZeroForSampledExactField) {
    const BuiltinProblem p = builtin_example(ExampleId::I);
    const Discretization d = Discretization::make(10, 10, 1.0);
    const BoundaryCurve c = testing::line(d, 1.0);
    TemperatureField f(10, 10);
    for (int i = 0; i <= 10; ++i) f.at(i, 10) = p.exact->temperature(d.xi(i), 1.0);
    EXPECT_EQ(error_Ekn(f, c, p.exact, 10, d), 0.0);

    const double delta = 0.01;
    for (int i = 0; i <= 10; ++i) f.at(i, 10) += delta;
    EXPECT_NEAR(error_Ekn(f, c, p.exact, 10, d), delta * std::sqrt(0.1 * 11), 1e-15);
}

TEST(ErrorEkn, ByHandOnTwoIntervals) {
    const Discretization d = Discretization::make(2, 1, 1.0);
    const std::optional<ExactSolution> zero =
        ExactSolution{[](double, double) { return 0.0; }, [](double t) { return t; }};
    TemperatureField f(2, 1);
    f.at(0, 1) = 3.0;
    f.at(1, 1) = 4.0;
    // sqrt(0.5 * (9 + 16)) = sqrt(12.5)
    EXPECT_DOUBLE_EQ(error_Ekn(f, BoundaryCurve{{0.0, 1.0}}, zero, 1, d), std::sqrt(12.5));
    EXPECT_THROW(error_Ekn(f, BoundaryCurve{{0.0, 1.0}}, std::nullopt, 1, d), ConfigError);
    EXPECT_THROW(error_Ekn(f, BoundaryCurve{{0.0, 1.0}}, zero, 2, d), ConfigError);
}

TEST(OrderP, Examples) {
    EXPECT_DOUBLE_EQ(order_p(4.0e-3, 1.0e-3), 2.0);
    EXPECT_DOUBLE_EQ(order_p(1.0e-3, 1.0e-3), 0.0);
    const double p = order_p(2.21e-3, 5.35e-4);
    EXPECT_NEAR(p, 2.046, 5e-3);
    EXPECT_THROW(order_p(0.0, 1.0), ConfigError);
}

TEST(StudyConfig, Validation) {
    StudyConfig s;
    EXPECT_NO_THROW(s.validate(1.0));
    s.levels = {0, 2, 1};
    EXPECT_THROW(s.validate(1.0), ConfigError);
    s.levels = {};
    EXPECT_THROW(s.validate(1.0), ConfigError);
    s.levels = {0};
    s.snapshot_time = 1.5;
    EXPECT_THROW(s.validate(1.0), ConfigError);
}

IterationConfig tight() {
    IterationConfig cfg;
    cfg.tol = 1e-11;
    cfg.max_iter = 1000;
    return cfg;
}

class Study : public ::testing::TestWithParam<std::tuple<ExampleId, double, double, double, double>> {};

TEST_P(Study, ChainedOrdersNearTwo) {
    const auto [id, lo, hi, e_lo, e_hi] = GetParam();
    const BuiltinProblem p = builtin_example(id);
    StudyConfig s;
    s.levels = {0, 1, 2};
    const auto rows = refinement_study(p.spec, *p.exact, s, tight());
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_FALSE(rows[0].order.has_value());
    EXPECT_GE(rows[0].error, e_lo);
    EXPECT_LE(rows[0].error, e_hi);
    for (std::size_t k = 1; k < rows.size(); ++k) {
        ASSERT_TRUE(rows[k].order.has_value());
        EXPECT_GE(*rows[k].order, lo);
        EXPECT_LE(*rows[k].order, hi);
        EXPECT_TRUE(rows[k].converged);
    }
}

INSTANTIATE_TEST_SUITE_P(Examples, Study,
                         ::testing::Values(std::make_tuple(ExampleId::II, 1.9, 2.1, 2e-4, 2e-3),
                                           std::make_tuple(ExampleId::I, 1.9, 2.15, 7e-4, 7e-3)));

TEST(Study, SingleLevelHasNoOrder) {
    const BuiltinProblem p = builtin_example(ExampleId::II);
    StudyConfig s;
    s.levels = {1};
    const auto rows = refinement_study(p.spec, *p.exact, s, tight());
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_FALSE(rows[0].order.has_value());
    EXPECT_DOUBLE_EQ(rows[0].dxi, 0.05);

    std::stringstream ss;
    write_study_csv(ss, rows);
    std::string header;
    std::getline(ss, header);
    EXPECT_EQ(header, "level,dxi,error,order,boundary_error,iterations,converged");
}

TEST(Residual, SmallForExampleTwo) {
    const BuiltinProblem p = builtin_example(ExampleId::II);
    const Discretization d = Discretization::make(40, 40, 1.0);
    const IterationReport it = run_iteration(p.spec, d, tight());
    const DiscrepancyReport r = stefan_residual_report(p.spec, d, it.final_curve());
    double worst = 0.0;
    for (double v : r.residual) worst = std::max(worst, std::abs(v));
    EXPECT_LE(worst, 5e-2);
}

class ResidualRefinement : public ::testing::TestWithParam<int> {};

ProblemSpec residual_case(int which) {
    if (which == 0) return builtin_example(ExampleId::III).spec;
    ProblemSpec spec = builtin_example(ExampleId::II).spec;
    spec.beta = ScalarFunction::from_expression("1+x", 'x');
    return spec;
}

TEST_P(ResidualRefinement, DropsUnderRefinement) {
    StudyConfig s;
    s.levels = {0, 1, 2};
    const auto rows = residual_study(residual_case(GetParam()), s, tight());
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[0].max_all, rows[0].max_common);
    EXPECT_GE(rows[0].max_common / rows[2].max_common, 3.0);
    for (const auto& row : rows) EXPECT_TRUE(row.converged);
}

INSTANTIATE_TEST_SUITE_P(NoExactSolution, ResidualRefinement, ::testing::Values(0, 1));

TEST(Residual, StudyCsv) {
    StudyConfig s;
    s.levels = {0, 1};
    const auto rows = residual_study(builtin_example(ExampleId::II).spec, s, tight());
    ASSERT_TRUE(rows[1].ratio.has_value());
    std::stringstream ss;
    write_residual_study_csv(ss, rows);
    std::string header;
    std::getline(ss, header);
    EXPECT_EQ(header, "level,dxi,max_all,max_common,ratio,iterations,converged");
}

}  // namespace
}  // namespace stefan
