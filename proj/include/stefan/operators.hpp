#pragma once

#include <optional>
#include <vector>

#include "stefan/fixed_boundary.hpp"
#include "stefan/grid.hpp"
#include "stefan/problem.hpp"

namespace stefan {

/// Relaxation weight of P^alpha(s) = alpha R(s) + (1 - alpha) s.
class OperatorConfig {
public:
    OperatorConfig() = default;
    /// Throws ConfigError unless alpha lies in [0, 1].
    explicit OperatorConfig(double alpha);
    /// alpha = 1 / (1 + gamma) for a Lipschitz estimate gamma > 0 of R.
    static OperatorConfig from_gamma(double gamma);

    double alpha() const { return alpha_; }
    std::optional<double> gamma_estimate() const { return gamma_; }

private:
    double alpha_ = 0.5;
    std::optional<double> gamma_;
};

/// U_x(s(t^n), t^n) = F_xi(1, t^n) / s^n, second-order one-sided in xi.
double front_gradient(const TemperatureField& field, const BoundaryCurve& curve,
                      const Discretization& disc, int n);

/// U_x(0, t^n) = F_xi(0, t^n) / s^n.
double origin_gradient(const TemperatureField& field, const BoundaryCurve& curve,
                       const Discretization& disc, int n);

/// R(s)(t) = int_0^t q - int_0^{s(t)} U^s dx. Requires Neumann mode and constant beta
/// (beta scales the flux integral).
BoundaryCurve apply_R_neumann(const ProblemSpec& spec, const Discretization& disc,
                              const BoundaryCurve& curve);
BoundaryCurve apply_R_neumann(const ProblemSpec& spec, const Discretization& disc,
                              const BoundaryCurve& curve, const TemperatureField& field);

/// R(s)(t) = -int_0^t U^s_x(0,z) dz - int_0^{s(t)} U^s dx. Dirichlet mode, constant beta.
BoundaryCurve apply_R_dirichlet(const ProblemSpec& spec, const Discretization& disc,
                                const BoundaryCurve& curve);
BoundaryCurve apply_R_dirichlet(const ProblemSpec& spec, const Discretization& disc,
                                const BoundaryCurve& curve, const TemperatureField& field);

/// R(s)(t) = int_0^t -U^s_x(s(z),z) / beta(s(z)) dz. Any mode, any positive beta.
BoundaryCurve apply_R_direct(const ProblemSpec& spec, const Discretization& disc,
                             const BoundaryCurve& curve);
BoundaryCurve apply_R_direct(const ProblemSpec& spec, const Discretization& disc,
                             const BoundaryCurve& curve, const TemperatureField& field);

enum class RForm { Auto, Divergence, Direct };

/// Divergence form when beta is constant, direct form otherwise (Auto).
BoundaryCurve apply_R(const ProblemSpec& spec, const Discretization& disc,
                      const BoundaryCurve& curve, RForm form = RForm::Auto);

BoundaryCurve apply_P(const OperatorConfig& config, const BoundaryCurve& r_of_s,
                      const BoundaryCurve& s);

/// ds/dt at t^n for n >= 1 as (dz/dt) / (2 s) with z = s^2 differenced like boundary_rate.
/// Exact for s = c t and for s = c sqrt(t); falls back to boundary_rate at n = 0.
double front_speed(const BoundaryCurve& curve, int n, double dt);

/// Slack for discrete reversal/sandwich checks: 5 (dxi^2 + dt^2).
double reversal_tolerance(const Discretization& disc);

/// Per-node Stefan residual r^n = beta(s^n) ds/dt + U_x(s^n, t^n); r^0 = 0.
std::vector<double> stefan_residual(const ProblemSpec& spec, const Discretization& disc,
                                    const BoundaryCurve& curve, const TemperatureField& field);

}  // namespace stefan
