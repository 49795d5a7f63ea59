#pragma once

#include <span>
#include <vector>

#include "stefan/grid.hpp"
#include "stefan/problem.hpp"

namespace stefan {

/// Crank-Nicolson coefficients of step n in z = s^2 form:
///   rho     = z^{n-1/2} * 2 dxi^2 / dt
///   sigma_i = xi_i / 4 * (dz/dt)^n * dxi
struct StepCoefficients {
    double rho = 0.0;
    std::vector<double> sigma;  // indexed by i = 0..N; sigma[0] = 0
};

StepCoefficients step_coefficients(const Discretization& disc, const BoundaryCurve& curve, int n);

/// Banded (N+1)x(N+1) system. sub[0] and sup[N] are unused and kept at zero.
struct TridiagonalSystem {
    std::vector<double> sub;
    std::vector<double> diag;
    std::vector<double> sup;
    std::vector<double> rhs;

    explicit TridiagonalSystem(std::size_t size = 0)
        : sub(size, 0.0), diag(size, 0.0), sup(size, 0.0), rhs(size, 0.0) {}

    std::size_t size() const { return diag.size(); }
};

/// Builds L^n f^n = R^n f^{n-1} + E^n for time level n, reading column n-1 of `field`.
TridiagonalSystem assemble_step(const ProblemSpec& spec, const Discretization& disc,
                                const BoundaryCurve& curve, const TemperatureField& field, int n);

/// Thomas algorithm without pivoting. Throws SolveError on a vanishing pivot.
std::vector<double> thomas_solve(const TridiagonalSystem& sys);

/// One backward-Euler step from `prev` (time t_a, front s_a) to time t_b (front s_b).
TridiagonalSystem assemble_implicit_substep(const ProblemSpec& spec, const Discretization& disc,
                                            std::span<const double> prev, double t_a, double s_a,
                                            double t_b, double s_b);

struct FixedBoundaryOptions {
    /// Leading Crank-Nicolson steps replaced by two backward-Euler half steps each.
    /// Negative selects automatically: 2 when Dirichlet data are incompatible with the
    /// zero initial state (g(0) != 0), otherwise 0.
    int smoothing_steps = -1;
};

int resolved_smoothing_steps(const ProblemSpec& spec, const Discretization& disc,
                             const FixedBoundaryOptions& options);

/// Solves the heat problem on the given (non-free) boundary in xi = x/s(t) coordinates.
TemperatureField solve_fixed_boundary(const ProblemSpec& spec, const Discretization& disc,
                                      const BoundaryCurve& curve,
                                      const FixedBoundaryOptions& options = {});

}  // namespace stefan
