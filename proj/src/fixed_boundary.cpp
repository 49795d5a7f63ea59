#include "stefan/fixed_boundary.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "stefan/error.hpp"

namespace stefan {

StepCoefficients step_coefficients(const Discretization& disc, const BoundaryCurve& curve, int n) {
    const double dxi = disc.dxi();
    const double dt = disc.dt();
    const double z_now = curve[n] * curve[n];
    const double z_prev = curve[n - 1] * curve[n - 1];
    const double z_half = 0.5 * (z_now + z_prev);
    const double dz_dt = (z_now - z_prev) / dt;

    StepCoefficients c;
    c.rho = z_half * 2.0 * dxi * dxi / dt;
    c.sigma.resize(static_cast<std::size_t>(disc.N + 1));
    for (int i = 0; i <= disc.N; ++i) {
        c.sigma[i] = disc.xi(i) / 4.0 * dz_dt * dxi;
    }
    c.sigma[0] = 0.0;
    return c;
}

TridiagonalSystem assemble_step(const ProblemSpec& spec, const Discretization& disc,
                                const BoundaryCurve& curve, const TemperatureField& field, int n) {
    if (n < 1 || n > disc.M) {
        throw ConfigError("time level " + std::to_string(n) + " outside 1.." +
                          std::to_string(disc.M));
    }
    if (!(curve[n] > 0.0)) {
        throw CurveError("boundary must be positive at step " + std::to_string(n));
    }
    const int N = disc.N;
    const StepCoefficients c = step_coefficients(disc, curve, n);
    const auto prev = field.column(n - 1);
    TridiagonalSystem sys(static_cast<std::size_t>(N + 1));

    for (int i = 1; i < N; ++i) {
        const double sg = c.sigma[i];
        sys.sub[i] = 1.0 - sg;
        sys.diag[i] = -(2.0 + c.rho);
        sys.sup[i] = 1.0 + sg;
        sys.rhs[i] = -(1.0 - sg) * prev[i - 1] + (2.0 - c.rho) * prev[i] - (1.0 + sg) * prev[i + 1];
    }

    // Melting front: F_N = 0.
    sys.diag[N] = -(2.0 + c.rho);
    sys.rhs[N] = 0.0;

    const double t_now = disc.t(n);
    const double t_prev = disc.t(n - 1);
    if (const auto* neu = std::get_if<NeumannCondition>(&spec.bc)) {
        // Ghost node from F_xi(0,t) = -s(t) q(t).
        const double flux = neu->q(t_now) * curve[n] + neu->q(t_prev) * curve[n - 1];
        sys.diag[0] = -(2.0 + c.rho);
        sys.sup[0] = 2.0;
        sys.rhs[0] = (2.0 - c.rho) * prev[0] - 2.0 * prev[1] - 2.0 * disc.dxi() * flux;
    } else {
        const auto& dir = std::get<DirichletCondition>(spec.bc);
        sys.diag[0] = 1.0;
        sys.sup[0] = 0.0;
        sys.rhs[0] = dir.g(t_now);
    }
    return sys;
}

std::vector<double> thomas_solve(const TridiagonalSystem& sys) {
    const std::size_t size = sys.size();
    if (size == 0) return {};
    double scale = 0.0;
    for (std::size_t i = 0; i < size; ++i) {
        scale = std::max({scale, std::abs(sys.sub[i]), std::abs(sys.diag[i]), std::abs(sys.sup[i])});
    }
    const double tiny = 1e-14 * scale;

    std::vector<double> c_prime(size, 0.0);
    std::vector<double> d_prime(size, 0.0);
    double pivot = sys.diag[0];
    if (!(std::abs(pivot) > tiny)) throw SolveError("zero pivot in tridiagonal solve at row 0");
    c_prime[0] = sys.sup[0] / pivot;
    d_prime[0] = sys.rhs[0] / pivot;
    for (std::size_t i = 1; i < size; ++i) {
        pivot = sys.diag[i] - sys.sub[i] * c_prime[i - 1];
        if (!(std::abs(pivot) > tiny) || !std::isfinite(pivot)) {
            throw SolveError("zero pivot in tridiagonal solve at row " + std::to_string(i));
        }
        c_prime[i] = sys.sup[i] / pivot;
        d_prime[i] = (sys.rhs[i] - sys.sub[i] * d_prime[i - 1]) / pivot;
    }
    std::vector<double> x(size);
    x[size - 1] = d_prime[size - 1];
    for (std::size_t i = size - 1; i-- > 0;) {
        x[i] = d_prime[i] - c_prime[i] * x[i + 1];
    }
    return x;
}

TridiagonalSystem assemble_implicit_substep(const ProblemSpec& spec, const Discretization& disc,
                                            std::span<const double> prev, double t_a, double s_a,
                                            double t_b, double s_b) {
    if (!(s_b > 0.0)) throw CurveError("boundary must be positive at the end of a substep");
    const int N = disc.N;
    const double dxi = disc.dxi();
    const double h = t_b - t_a;
    const double z_a = s_a * s_a;
    const double z_b = s_b * s_b;
    const double rho = z_b * dxi * dxi / h;
    const double dz_dt = (z_b - z_a) / h;

    TridiagonalSystem sys(static_cast<std::size_t>(N + 1));
    for (int i = 1; i < N; ++i) {
        const double sg = disc.xi(i) / 4.0 * dz_dt * dxi;
        sys.sub[i] = 1.0 - sg;
        sys.diag[i] = -(2.0 + rho);
        sys.sup[i] = 1.0 + sg;
        sys.rhs[i] = -rho * prev[i];
    }
    sys.diag[N] = -(2.0 + rho);
    sys.rhs[N] = 0.0;
    if (const auto* neu = std::get_if<NeumannCondition>(&spec.bc)) {
        sys.diag[0] = -(2.0 + rho);
        sys.sup[0] = 2.0;
        sys.rhs[0] = -rho * prev[0] - 2.0 * dxi * neu->q(t_b) * s_b;
    } else {
        sys.diag[0] = 1.0;
        sys.rhs[0] = std::get<DirichletCondition>(spec.bc).g(t_b);
    }
    return sys;
}

int resolved_smoothing_steps(const ProblemSpec& spec, const Discretization& disc,
                             const FixedBoundaryOptions& options) {
    int steps = options.smoothing_steps;
    if (steps < 0) steps = sqrt_front_start(spec) ? 2 : 0;
    return std::min(steps, disc.M);
}

TemperatureField solve_fixed_boundary(const ProblemSpec& spec, const Discretization& disc,
                                      const BoundaryCurve& curve,
                                      const FixedBoundaryOptions& options) {
    check_admissible(curve, disc);
    TemperatureField field(disc.N, disc.M);
    const int smoothing = resolved_smoothing_steps(spec, disc, options);
    for (int n = 1; n <= disc.M; ++n) {
        std::vector<double> f;
        try {
            if (n <= smoothing) {
                const double t_a = disc.t(n - 1);
                const double t_b = disc.t(n);
                const double t_mid = 0.5 * (t_a + t_b);
                const double s_mid =
                    std::sqrt(0.5 * (curve[n - 1] * curve[n - 1] + curve[n] * curve[n]));
                const auto half = thomas_solve(assemble_implicit_substep(
                    spec, disc, field.column(n - 1), t_a, curve[n - 1], t_mid, s_mid));
                f = thomas_solve(
                    assemble_implicit_substep(spec, disc, half, t_mid, s_mid, t_b, curve[n]));
            } else {
                f = thomas_solve(assemble_step(spec, disc, curve, field, n));
            }
        } catch (const SolveError& e) {
            throw SolveError("fixed-boundary step " + std::to_string(n) + ": " + e.what());
        }
        auto col = field.column(n);
        std::copy(f.begin(), f.end(), col.begin());
        col[disc.N] = 0.0;
    }
    return field;
}

}  // namespace stefan
