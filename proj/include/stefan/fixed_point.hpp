#pragma once

#include <iosfwd>
#include <optional>
#include <variant>
#include <vector>

#include "stefan/grid.hpp"
#include "stefan/operators.hpp"
#include "stefan/problem.hpp"

namespace stefan {

/// s^n = c t^n.
struct LinearSlope {
    double c = 1.0;
};

/// s^n = int_0^{t^n} q / beta(0); the zero-width-liquid limit of the Neumann R. Neumann only.
struct FluxIntegral {};

struct UserCurve {
    BoundaryCurve curve;
};

using InitialGuess = std::variant<LinearSlope, FluxIntegral, UserCurve>;

struct IterationConfig {
    double tol = 1e-6;
    int max_iter = 200;
    OperatorConfig op{};
    InitialGuess initial = LinearSlope{1.0};
    RForm form = RForm::Auto;
    /// Optional second stop: max_n |Stefan residual| below this value.
    std::optional<double> residual_tol;

    void validate() const;
};

struct IterationReport {
    /// iterates[0] is the initial curve; iterates[k] the result of iteration k.
    std::vector<BoundaryCurve> iterates;
    std::vector<double> deltas;
    /// Nodes floored to admissibility in each iteration.
    std::vector<int> clamped;
    int clamp_events = 0;
    /// sign(s_k - reference) at the node of largest |s_k - reference|; empty without reference.
    std::vector<int> sign_pattern;
    std::vector<int> max_dev_node;
    std::vector<double> max_dev;
    bool converged = false;
    bool residual_satisfied = false;

    int iterations() const { return static_cast<int>(deltas.size()); }
    const BoundaryCurve& final_curve() const { return iterates.back(); }
};

/// Smallest admissible boundary value used when an update is floored.
inline constexpr double kCurveFloor = 1e-12;

BoundaryCurve initial_curve(const ProblemSpec& spec, const Discretization& disc,
                            const InitialGuess& guess);

/// Iterates s <- P^alpha(s) until the sup-norm change drops below tol or max_iter is hit.
IterationReport run_iteration(const ProblemSpec& spec, const Discretization& disc,
                              const IterationConfig& cfg,
                              const std::optional<BoundaryCurve>& reference = std::nullopt);

/// Rows (k, delta, clamped, sign_at_max_dev); sign column empty without a reference.
void write_iterations_csv(std::ostream& os, const IterationReport& report);
/// Rows (k, t, s) for every iterate including k = 0.
void write_iterates_csv(std::ostream& os, const IterationReport& report,
                        const Discretization& disc);

}  // namespace stefan
