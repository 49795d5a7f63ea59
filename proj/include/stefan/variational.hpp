#pragma once

#include <iosfwd>
#include <vector>

#include "stefan/fixed_boundary.hpp"
#include "stefan/grid.hpp"
#include "stefan/problem.hpp"

namespace stefan {

/// Quadratic violation of the Stefan condition along a candidate boundary.
struct DiscrepancyReport {
    /// int_0^T (U_x(s,t) + beta ds/dt)^2 dt
    double d1 = 0.0;
    /// d1 plus int_0^T U(s,t)^2 dt; equal to d1 on the solve boundary itself.
    double d2 = 0.0;
    /// r^n = beta(s^n) ds/dt + U_x(s^n, t^n), r^0 = 0.
    std::vector<double> residual;
};

DiscrepancyReport discrepancy(const ProblemSpec& spec, const Discretization& disc,
                              const BoundaryCurve& curve);
DiscrepancyReport discrepancy(const ProblemSpec& spec, const Discretization& disc,
                              const BoundaryCurve& curve, const TemperatureField& field);

/// Coefficients of the linearized boundary correction eta'' + b eta + a = 0.
/// `a` is the Stefan residual and `b` = U_xx(s,t) = -U_x(s,t) ds/dt, obtained by
/// differentiating U(s(t),t) = 0 along the front and using U_t = U_xx.
struct PerturbationCoefficients {
    std::vector<double> a;
    std::vector<double> b;
    /// U_x(s^n, t^n), kept for the first-order expansion of U(s + eps eta, t).
    std::vector<double> ux;
};

PerturbationCoefficients perturbation_coefficients(const ProblemSpec& spec,
                                                   const Discretization& disc,
                                                   const BoundaryCurve& curve);
PerturbationCoefficients perturbation_coefficients(const ProblemSpec& spec,
                                                   const Discretization& disc,
                                                   const BoundaryCurve& curve,
                                                   const TemperatureField& field);

/// Central differences on the time grid with eta(0) = 0 and the natural condition
/// eta'(T) + a(T) + b(T) eta(T) = 0 (one-sided, second order). Throws SolveError when
/// b makes the system singular.
std::vector<double> solve_perturbation(const PerturbationCoefficients& coeffs,
                                       const Discretization& disc);

/// eta' + b eta + a = 0, eta(0) = 0, by the trapezoidal rule. This eta makes the
/// linearized flux term a + eps (eta' + b eta) equal to (1 - eps) a at every node.
std::vector<double> solve_perturbation_first_order(const PerturbationCoefficients& coeffs,
                                                   const Discretization& disc);

enum class PerturbationSolver {
    /// solve_perturbation_first_order
    FirstOrder,
    /// solve_perturbation (second-order equation with the natural condition at T)
    SecondOrder,
};

struct RefinementResult {
    BoundaryCurve refined;
    std::vector<double> eta;
    DiscrepancyReport before;
    /// D2 of the refined curve from the first-order expansion around s (no re-solve).
    double projected_d2 = 0.0;
    double projected_ratio = 1.0;
    int clamped = 0;
};

/// One step s + eps * eta with eps in [0, 1].
RefinementResult refine_boundary(const ProblemSpec& spec, const Discretization& disc,
                                 const BoundaryCurve& curve, double epsilon,
                                 PerturbationSolver solver = PerturbationSolver::FirstOrder);

/// Header line "# d1=...,d2=..." then (t, residual) rows.
void write_discrepancy_csv(std::ostream& os, const DiscrepancyReport& report,
                           const Discretization& disc);

}  // namespace stefan
