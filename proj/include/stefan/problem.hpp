#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace stefan {

/// Scalar callable of one variable with a human-readable label.
class ScalarFunction {
public:
    ScalarFunction() = default;
    ScalarFunction(std::function<double(double)> fn, std::string label);

    static ScalarFunction constant(double value);
    /// Builds from an expression string; `variable` names the bound argument ('t' or 'x').
    static ScalarFunction from_expression(std::string_view text, char variable);

    ScalarFunction relabel(std::string label) const;

    double operator()(double v) const { return fn_(v); }
    const std::string& label() const { return label_; }
    /// Set only when the function is known to be constant.
    std::optional<double> constant_value() const { return constant_; }

private:
    std::function<double(double)> fn_ = [](double) { return 0.0; };
    std::string label_ = "0";
    std::optional<double> constant_;
};

/// U(0,t) = g(t), g >= 0.
struct DirichletCondition {
    ScalarFunction g;
};

/// U_x(0,t) = -q(t), q > 0 is the heat flux entering at x = 0.
struct NeumannCondition {
    ScalarFunction q;
};

using BoundaryConditionMode = std::variant<DirichletCondition, NeumannCondition>;

struct ProblemSpec {
    BoundaryConditionMode bc;
    /// Latent heat over diffusivity, as a function of position.
    ScalarFunction beta = ScalarFunction::constant(1.0);
    double horizon = 1.0;

    bool is_dirichlet() const { return std::holds_alternative<DirichletCondition>(bc); }
    bool is_neumann() const { return std::holds_alternative<NeumannCondition>(bc); }
    bool has_constant_beta() const { return beta.constant_value().has_value(); }

    /// Boundary datum at time t: g(t) in Dirichlet mode, q(t) in Neumann mode.
    double boundary_value(double t) const;
};

struct ExactSolution {
    std::function<double(double, double)> temperature;  // (x, t)
    std::function<double(double)> interface;
};

enum class ExampleId { I, II, III };

struct ExampleParams {
    double eps = 0.1;
    double omega = 6.283185307179586;
};

struct BuiltinProblem {
    ProblemSpec spec;
    std::optional<ExactSolution> exact;
};

/// Parses "i", "ii" or "iii" (case-insensitive).
ExampleId parse_example_id(std::string_view text);
std::string to_string(ExampleId id);

/// Benchmarks with beta = 1 and T = 1:
///   i   U(0,t) = e^t - 1
///   ii  U_x(0,t) = -e^t
///   iii U(0,t) = 1 - eps sin(omega t)
/// Examples i and ii share the exact pair U = e^{t-x} - 1, s = t.
BuiltinProblem builtin_example(ExampleId id, const ExampleParams& params = {});

/// Throws ConfigError if beta(x) is not positive.
double eval_beta(const ProblemSpec& spec, double x);

/// Checks horizon > 0 and the sign conditions of g or q at the given times.
void validate_spec(const ProblemSpec& spec);
/// Dirichlet data with g(0) != 0 meets the zero initial state discontinuously; the front
/// then grows like sqrt(t) and the startup needs special handling.
bool sqrt_front_start(const ProblemSpec& spec);

void validate_boundary_data(const ProblemSpec& spec, double dt, int steps);

}  // namespace stefan
