#pragma once

#include <cmath>
#include <functional>
#include <string>

#include "stefan/grid.hpp"
#include "stefan/problem.hpp"

namespace stefan::testing {

inline BoundaryCurve sample_curve(const Discretization& disc, const std::function<double(double)>& f) {
    BoundaryCurve c;
    c.values.resize(disc.M + 1);
    for (int n = 0; n <= disc.M; ++n) c[n] = f(disc.t(n));
    return c;
}

inline BoundaryCurve line(const Discretization& disc, double slope) {
    return sample_curve(disc, [slope](double t) { return slope * t; });
}

inline ProblemSpec neumann(std::function<double(double)> q, std::string label = "q") {
    ProblemSpec spec;
    spec.bc = NeumannCondition{ScalarFunction(std::move(q), std::move(label))};
    return spec;
}

inline ProblemSpec dirichlet(std::function<double(double)> g, std::string label = "g") {
    ProblemSpec spec;
    spec.bc = DirichletCondition{ScalarFunction(std::move(g), std::move(label))};
    return spec;
}

inline double max_abs_diff(const BoundaryCurve& a, const BoundaryCurve& b) {
    double worst = 0.0;
    for (std::size_t n = 0; n < a.size(); ++n) worst = std::max(worst, std::abs(a[n] - b[n]));
    return worst;
}

}  // namespace stefan::testing
