#include "stefan/variational.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include "stefan/error.hpp"
#include "stefan/fixed_point.hpp"
#include "stefan/operators.hpp"

namespace stefan {

DiscrepancyReport discrepancy(const ProblemSpec& spec, const Discretization& disc,
                              const BoundaryCurve& curve) {
    return discrepancy(spec, disc, curve, solve_fixed_boundary(spec, disc, curve));
}

DiscrepancyReport discrepancy(const ProblemSpec& spec, const Discretization& disc,
                              const BoundaryCurve& curve, const TemperatureField& field) {
    check_admissible(curve, disc);
    DiscrepancyReport report;
    report.residual = stefan_residual(spec, disc, curve, field);

    std::vector<double> squared(curve.size());
    std::vector<double> front_temp(curve.size());
    for (int n = 0; n <= disc.M; ++n) {
        squared[n] = report.residual[n] * report.residual[n];
        const double u = field.at(disc.N, n);
        front_temp[n] = u * u;
    }
    report.d1 = trapezoid(squared, disc.dt());
    report.d2 = report.d1 + trapezoid(front_temp, disc.dt());
    return report;
}

PerturbationCoefficients perturbation_coefficients(const ProblemSpec& spec,
                                                   const Discretization& disc,
                                                   const BoundaryCurve& curve) {
    return perturbation_coefficients(spec, disc, curve, solve_fixed_boundary(spec, disc, curve));
}

PerturbationCoefficients perturbation_coefficients(const ProblemSpec& spec,
                                                   const Discretization& disc,
                                                   const BoundaryCurve& curve,
                                                   const TemperatureField& field) {
    check_admissible(curve, disc);
    if (disc.M < 2) throw ConfigError("perturbation coefficients need M >= 2");
    const std::size_t size = curve.size();
    PerturbationCoefficients c{std::vector<double>(size), std::vector<double>(size),
                               std::vector<double>(size)};
    for (int n = 1; n <= disc.M; ++n) {
        const double ux = front_gradient(field, curve, disc, n);
        const double rate = boundary_rate(curve, n, disc.dt());
        c.ux[n] = ux;
        c.a[n] = eval_beta(spec, curve[n]) * rate + ux;
        c.b[n] = -ux * rate;
    }
    // s^0 = 0 leaves U_x undefined at t = 0; extrapolate linearly.
    for (auto* v : {&c.a, &c.b, &c.ux}) (*v)[0] = 2.0 * (*v)[1] - (*v)[2];
    return c;
}

std::vector<double> solve_perturbation(const PerturbationCoefficients& coeffs,
                                       const Discretization& disc) {
    const int M = disc.M;
    if (M < 2) throw ConfigError("perturbation solve needs M >= 2");
    const auto expected = static_cast<std::size_t>(M + 1);
    if (coeffs.a.size() != expected || coeffs.b.size() != expected) {
        throw ConfigError("perturbation coefficients do not match the time grid");
    }
    for (std::size_t n = 0; n < expected; ++n) {
        if (!std::isfinite(coeffs.a[n]) || !std::isfinite(coeffs.b[n])) {
            throw SolveError("perturbation coefficients are not finite at node " +
                             std::to_string(n));
        }
    }
    const double dt = disc.dt();
    const double dt2 = dt * dt;
    const auto& a = coeffs.a;
    const auto& b = coeffs.b;

    TridiagonalSystem sys(expected);
    sys.diag[0] = 1.0;
    sys.rhs[0] = 0.0;
    for (int n = 1; n < M; ++n) {
        sys.sub[n] = 1.0;
        sys.diag[n] = b[n] * dt2 - 2.0;
        sys.sup[n] = 1.0;
        sys.rhs[n] = -a[n] * dt2;
    }
    // One-sided natural condition at T with eta_{M-2} eliminated through row M-1.
    sys.sub[M] = -2.0 - b[M - 1] * dt2;
    sys.diag[M] = 2.0 + 2.0 * dt * b[M];
    sys.rhs[M] = a[M - 1] * dt2 - 2.0 * dt * a[M];

    try {
        return thomas_solve(sys);
    } catch (const SolveError& e) {
        throw SolveError(std::string("perturbation system is singular (resonant b); "
                                     "refine the time grid: ") +
                         e.what());
    }
}

std::vector<double> solve_perturbation_first_order(const PerturbationCoefficients& coeffs,
                                                   const Discretization& disc) {
    const auto expected = static_cast<std::size_t>(disc.M + 1);
    if (coeffs.a.size() != expected || coeffs.b.size() != expected) {
        throw ConfigError("perturbation coefficients do not match the time grid");
    }
    const double dt = disc.dt();
    const auto& a = coeffs.a;
    const auto& b = coeffs.b;
    std::vector<double> eta(expected, 0.0);
    for (std::size_t n = 1; n < expected; ++n) {
        const double lead = 1.0 + 0.5 * dt * b[n];
        if (!std::isfinite(a[n]) || !std::isfinite(b[n]) || std::abs(lead) < 1e-12) {
            throw SolveError("first-order perturbation step breaks down at node " +
                             std::to_string(n) + "; refine the time grid");
        }
        eta[n] = ((1.0 - 0.5 * dt * b[n - 1]) * eta[n - 1] - 0.5 * dt * (a[n - 1] + a[n])) / lead;
    }
    return eta;
}

RefinementResult refine_boundary(const ProblemSpec& spec, const Discretization& disc,
                                 const BoundaryCurve& curve, double epsilon,
                                 PerturbationSolver solver) {
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
        throw ConfigError("refinement step epsilon must lie in [0, 1]");
    }
    const TemperatureField field = solve_fixed_boundary(spec, disc, curve);
    RefinementResult out;
    out.before = discrepancy(spec, disc, curve, field);
    const PerturbationCoefficients coeffs = perturbation_coefficients(spec, disc, curve, field);
    out.eta = solver == PerturbationSolver::FirstOrder
                  ? solve_perturbation_first_order(coeffs, disc)
                  : solve_perturbation(coeffs, disc);

    out.refined = curve;
    for (int n = 1; n <= disc.M; ++n) {
        out.refined[n] = curve[n] + epsilon * out.eta[n];
        if (!(out.refined[n] >= kCurveFloor)) {
            out.refined[n] = kCurveFloor;
            ++out.clamped;
        }
    }
    if (out.clamped == disc.M) {
        throw CurveError("refined boundary is inadmissible at every time level");
    }

    // First-order expansion around s:
    //   U_x(s + eps eta) + d/dt(s + eps eta) ~ a + eps (eta' + b eta)
    //   U(s + eps eta) ~ U_x(s) eps eta
    std::vector<double> integrand(curve.size(), 0.0);
    for (int n = 1; n <= disc.M; ++n) {
        const double eta_rate = sampled_rate(out.eta, n, disc.dt());
        const double flux_term = coeffs.a[n] + epsilon * (eta_rate + coeffs.b[n] * out.eta[n]);
        const double temp_term = coeffs.ux[n] * epsilon * out.eta[n];
        integrand[n] = flux_term * flux_term + temp_term * temp_term;
    }
    out.projected_d2 = trapezoid(integrand, disc.dt());
    out.projected_ratio = out.before.d2 > 0.0 ? out.projected_d2 / out.before.d2 : 1.0;
    return out;
}

void write_discrepancy_csv(std::ostream& os, const DiscrepancyReport& report,
                           const Discretization& disc) {
    os << "# d1=" << format_double(report.d1) << ",d2=" << format_double(report.d2) << '\n';
    os << "t,residual\n";
    for (std::size_t n = 0; n < report.residual.size(); ++n) {
        os << format_double(disc.t(static_cast<int>(n))) << ',' << format_double(report.residual[n])
           << '\n';
    }
}

}  // namespace stefan
