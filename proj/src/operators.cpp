#include "stefan/operators.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "stefan/error.hpp"

namespace stefan {

namespace {

constexpr double kDegenerateFront = 1e-14;

void require_front(const BoundaryCurve& curve, int n) {
    if (!(curve[n] >= kDegenerateFront)) {
        throw CurveError("degenerate boundary s^" + std::to_string(n) + " = " +
                         format_double(curve[n]));
    }
}

double require_constant_beta(const ProblemSpec& spec, const char* form) {
    const auto beta = spec.beta.constant_value();
    if (!beta) {
        throw ConfigError(std::string(form) +
                          " form of R needs a constant beta; use the direct form");
    }
    if (!(*beta > 0.0)) throw ConfigError("beta must be positive");
    return *beta;
}

void extrapolate_start(std::vector<double>& v) {
    if (v.size() >= 3) {
        v[0] = 2.0 * v[1] - v[2];
    } else if (v.size() == 2) {
        v[0] = v[1];
    }
}

/// Prefix integrals of F_xi(end, t) / s(t) over the time grid.
///
/// With a sqrt(t) front, F_xi stays bounded as t -> 0 while 1/s does not, so each interval
/// treats z = s^2 as linear: int_a^b dt / s = 2h / (s_a + s_b). For a smooth front the plain
/// trapezoid rule on the quotient is more accurate and is used instead. Either way the t = 0
/// value is extrapolated from t^1, t^2; the stored column at n = 0 is the initial state,
/// not the limit.
std::vector<double> front_weighted_prefix(const ProblemSpec& spec, std::vector<double> numerator,
                                          const BoundaryCurve& curve, double dt) {
    if (!sqrt_front_start(spec)) {
        for (std::size_t n = 1; n < numerator.size(); ++n) {
            if (curve[n] < 1e-14) throw SolveError("front position vanished");
            numerator[n] /= curve[n];
        }
        extrapolate_start(numerator);
        return trapezoid_prefix(numerator, dt);
    }
    extrapolate_start(numerator);
    std::vector<double> out(numerator.size(), 0.0);
    for (std::size_t n = 1; n < numerator.size(); ++n) {
        out[n] = out[n - 1] + dt * (numerator[n - 1] + numerator[n]) / (curve[n - 1] + curve[n]);
    }
    return out;
}

/// s^n * int_0^1 F(xi, t^n) dxi for every n.
std::vector<double> liquid_heat(const TemperatureField& field, const BoundaryCurve& curve,
                                const Discretization& disc) {
    std::vector<double> heat(curve.size(), 0.0);
    for (int n = 0; n <= disc.M; ++n) {
        heat[n] = curve[n] * trapezoid(field.column(n), disc.dxi());
    }
    return heat;
}

}  // namespace

OperatorConfig::OperatorConfig(double alpha) : alpha_(alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw ConfigError("relaxation weight alpha must lie in [0, 1]");
    }
}

OperatorConfig OperatorConfig::from_gamma(double gamma) {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
        throw ConfigError("gamma estimate must be finite and positive");
    }
    OperatorConfig cfg(1.0 / (1.0 + gamma));
    cfg.gamma_ = gamma;
    return cfg;
}

double front_gradient(const TemperatureField& field, const BoundaryCurve& curve,
                      const Discretization& disc, int n) {
    require_front(curve, n);
    return one_sided_deriv(field, n, End::Right, disc.dxi()) / curve[n];
}

double origin_gradient(const TemperatureField& field, const BoundaryCurve& curve,
                       const Discretization& disc, int n) {
    require_front(curve, n);
    return one_sided_deriv(field, n, End::Left, disc.dxi()) / curve[n];
}

BoundaryCurve apply_R_neumann(const ProblemSpec& spec, const Discretization& disc,
                              const BoundaryCurve& curve) {
    require_constant_beta(spec, "Neumann divergence");
    return apply_R_neumann(spec, disc, curve, solve_fixed_boundary(spec, disc, curve));
}

BoundaryCurve apply_R_neumann(const ProblemSpec& spec, const Discretization& disc,
                              const BoundaryCurve& curve, const TemperatureField& field) {
    const auto* neu = std::get_if<NeumannCondition>(&spec.bc);
    if (!neu) throw ConfigError("Neumann form of R applied to a Dirichlet problem");
    const double beta = require_constant_beta(spec, "Neumann divergence");

    std::vector<double> flux(curve.size());
    for (int n = 0; n <= disc.M; ++n) flux[n] = neu->q(disc.t(n));
    const std::vector<double> supplied = trapezoid_prefix(flux, disc.dt());
    const std::vector<double> heat = liquid_heat(field, curve, disc);

    BoundaryCurve out;
    out.values.resize(curve.size());
    for (int n = 0; n <= disc.M; ++n) out[n] = (supplied[n] - heat[n]) / beta;
    out[0] = 0.0;
    return out;
}

BoundaryCurve apply_R_dirichlet(const ProblemSpec& spec, const Discretization& disc,
                                const BoundaryCurve& curve) {
    require_constant_beta(spec, "Dirichlet divergence");
    return apply_R_dirichlet(spec, disc, curve, solve_fixed_boundary(spec, disc, curve));
}

BoundaryCurve apply_R_dirichlet(const ProblemSpec& spec, const Discretization& disc,
                                const BoundaryCurve& curve, const TemperatureField& field) {
    if (!spec.is_dirichlet()) throw ConfigError("Dirichlet form of R applied to a Neumann problem");
    const double beta = require_constant_beta(spec, "Dirichlet divergence");

    std::vector<double> inflow(curve.size(), 0.0);
    for (int n = 1; n <= disc.M; ++n) {
        require_front(curve, n);
        inflow[n] = -one_sided_deriv(field, n, End::Left, disc.dxi());
    }
    const std::vector<double> supplied = front_weighted_prefix(spec, std::move(inflow), curve, disc.dt());
    const std::vector<double> heat = liquid_heat(field, curve, disc);

    BoundaryCurve out;
    out.values.resize(curve.size());
    for (int n = 0; n <= disc.M; ++n) out[n] = (supplied[n] - heat[n]) / beta;
    out[0] = 0.0;
    return out;
}

BoundaryCurve apply_R_direct(const ProblemSpec& spec, const Discretization& disc,
                             const BoundaryCurve& curve) {
    return apply_R_direct(spec, disc, curve, solve_fixed_boundary(spec, disc, curve));
}

BoundaryCurve apply_R_direct(const ProblemSpec& spec, const Discretization& disc,
                             const BoundaryCurve& curve, const TemperatureField& field) {
    std::vector<double> flux(curve.size(), 0.0);
    for (int n = 1; n <= disc.M; ++n) {
        require_front(curve, n);
        flux[n] = -one_sided_deriv(field, n, End::Right, disc.dxi()) / eval_beta(spec, curve[n]);
    }
    BoundaryCurve out;
    out.values = front_weighted_prefix(spec, std::move(flux), curve, disc.dt());
    return out;
}

BoundaryCurve apply_R(const ProblemSpec& spec, const Discretization& disc,
                      const BoundaryCurve& curve, RForm form) {
    const bool divergence =
        form == RForm::Divergence || (form == RForm::Auto && spec.has_constant_beta());
    if (!divergence) return apply_R_direct(spec, disc, curve);
    if (spec.is_neumann()) return apply_R_neumann(spec, disc, curve);
    return apply_R_dirichlet(spec, disc, curve);
}

BoundaryCurve apply_P(const OperatorConfig& config, const BoundaryCurve& r_of_s,
                      const BoundaryCurve& s) {
    if (r_of_s.size() != s.size()) {
        throw ConfigError("apply_P: curves have different lengths");
    }
    const double alpha = config.alpha();
    BoundaryCurve out;
    out.values.resize(s.size());
    for (std::size_t n = 0; n < s.size(); ++n) {
        out[n] = alpha * r_of_s[n] + (1.0 - alpha) * s[n];
    }
    return out;
}

double front_speed(const BoundaryCurve& curve, int n, double dt) {
    if (n == 0) return boundary_rate(curve, 0, dt);
    std::vector<double> z(curve.size());
    for (std::size_t k = 0; k < curve.size(); ++k) z[k] = curve[k] * curve[k];
    return sampled_rate(z, n, dt) / (2.0 * curve[n]);
}

double reversal_tolerance(const Discretization& disc) {
    return 5.0 * (disc.dxi() * disc.dxi() + disc.dt() * disc.dt());
}

}  // namespace stefan

namespace stefan {

std::vector<double> stefan_residual(const ProblemSpec& spec, const Discretization& disc,
                                    const BoundaryCurve& curve, const TemperatureField& field) {
    std::vector<double> r(curve.size(), 0.0);
    for (int n = 1; n <= disc.M; ++n) {
        r[n] = eval_beta(spec, curve[n]) * front_speed(curve, n, disc.dt()) +
               front_gradient(field, curve, disc, n);
    }
    return r;
}

}  // namespace stefan
