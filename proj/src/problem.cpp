#include "stefan/problem.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "stefan/error.hpp"
#include "stefan/expression.hpp"

namespace stefan {

ScalarFunction::ScalarFunction(std::function<double(double)> fn, std::string label)
    : fn_(std::move(fn)), label_(std::move(label)) {}

ScalarFunction ScalarFunction::constant(double value) {
    std::ostringstream os;
    os << value;
    ScalarFunction f([value](double) { return value; }, os.str());
    f.constant_ = value;
    return f;
}

ScalarFunction ScalarFunction::from_expression(std::string_view text, char variable) {
    if (variable != 't' && variable != 'x') {
        throw ConfigError("expression variable must be 't' or 'x'");
    }
    Expression expr = Expression::parse(text);
    if ((variable == 't' && expr.uses_x()) || (variable == 'x' && expr.uses_t())) {
        throw ConfigError("expression \"" + expr.source() + "\" may only depend on '" +
                          std::string(1, variable) + "'");
    }
    const bool depends = variable == 't' ? expr.uses_t() : expr.uses_x();
    if (!depends) {
        return constant(expr.evaluate(0.0, 0.0)).relabel(expr.source());
    }
    std::function<double(double)> fn;
    if (variable == 't') {
        fn = [expr](double v) { return expr.evaluate(v, 0.0); };
    } else {
        fn = [expr](double v) { return expr.evaluate(0.0, v); };
    }
    return ScalarFunction(std::move(fn), expr.source());
}

ScalarFunction ScalarFunction::relabel(std::string label) const {
    ScalarFunction copy = *this;
    copy.label_ = std::move(label);
    return copy;
}

double ProblemSpec::boundary_value(double t) const {
    return std::visit(
        [t](const auto& cond) {
            using T = std::decay_t<decltype(cond)>;
            if constexpr (std::is_same_v<T, DirichletCondition>) {
                return cond.g(t);
            } else {
                return cond.q(t);
            }
        },
        bc);
}

ExampleId parse_example_id(std::string_view text) {
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "i" || lower == "1") return ExampleId::I;
    if (lower == "ii" || lower == "2") return ExampleId::II;
    if (lower == "iii" || lower == "3") return ExampleId::III;
    throw ConfigError("unknown example id '" + std::string(text) + "' (expected i, ii or iii)");
}

std::string to_string(ExampleId id) {
    switch (id) {
        case ExampleId::I: return "i";
        case ExampleId::II: return "ii";
        case ExampleId::III: return "iii";
    }
    return "?";
}

BuiltinProblem builtin_example(ExampleId id, const ExampleParams& params) {
    BuiltinProblem out;
    out.spec.beta = ScalarFunction::constant(1.0);
    out.spec.horizon = 1.0;

    ExactSolution exact{
        [](double x, double t) { return std::exp(t - x) - 1.0; },
        [](double t) { return t; },
    };

    switch (id) {
        case ExampleId::I:
            out.spec.bc = DirichletCondition{
                ScalarFunction([](double t) { return std::exp(t) - 1.0; }, "exp(t) - 1")};
            out.exact = exact;
            break;
        case ExampleId::II:
            out.spec.bc =
                NeumannCondition{ScalarFunction([](double t) { return std::exp(t); }, "exp(t)")};
            out.exact = exact;
            break;
        case ExampleId::III: {
            if (!(params.eps >= 0.0 && params.eps < 1.0)) {
                throw ConfigError("example iii requires eps in [0, 1)");
            }
            if (!(params.omega > 0.0) || !std::isfinite(params.omega)) {
                throw ConfigError("example iii requires omega > 0");
            }
            const double eps = params.eps;
            const double omega = params.omega;
            std::ostringstream label;
            label << "1 - " << eps << "*sin(" << omega << "*t)";
            if (eps == 0.0) {
                out.spec.bc = DirichletCondition{ScalarFunction::constant(1.0)};
            } else {
                out.spec.bc = DirichletCondition{ScalarFunction(
                    [eps, omega](double t) { return 1.0 - eps * std::sin(omega * t); },
                    label.str())};
            }
            break;
        }
    }
    return out;
}

double eval_beta(const ProblemSpec& spec, double x) {
    if (x < 0.0) throw ConfigError("beta evaluated at negative position");
    const double b = spec.beta(x);
    if (!(b > 0.0) || !std::isfinite(b)) {
        std::ostringstream os;
        os << "beta(" << x << ") = " << b << " is not positive";
        throw ConfigError(os.str());
    }
    return b;
}

void validate_spec(const ProblemSpec& spec) {
    if (!(spec.horizon > 0.0) || !std::isfinite(spec.horizon)) {
        throw ConfigError("horizon must be finite and positive");
    }
}

bool sqrt_front_start(const ProblemSpec& spec) {
    const auto* dir = std::get_if<DirichletCondition>(&spec.bc);
    return dir != nullptr && dir->g(0.0) != 0.0;
}

void validate_boundary_data(const ProblemSpec& spec, double dt, int steps) {
    validate_spec(spec);
    for (int n = 0; n <= steps; ++n) {
        const double t = n * dt;
        const double v = spec.boundary_value(t);
        if (!std::isfinite(v)) {
            throw ConfigError("boundary data is not finite at t = " + std::to_string(t));
        }
        if (spec.is_dirichlet() && v < 0.0) {
            throw ConfigError("Dirichlet data g(t) must be nonnegative; g(" + std::to_string(t) +
                              ") = " + std::to_string(v));
        }
        if (spec.is_neumann() && n > 0 && !(v > 0.0)) {
            throw ConfigError("Neumann flux q(t) must be positive; q(" + std::to_string(t) +
                              ") = " + std::to_string(v));
        }
    }
}

}  // namespace stefan
