#include "stefan/fixed_point.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "stefan/error.hpp"
#include "stefan/fixed_boundary.hpp"

namespace stefan {

void IterationConfig::validate() const {
    if (!(tol > 0.0)) throw ConfigError("iteration tolerance must be positive");
    if (max_iter < 1) throw ConfigError("max_iter must be at least 1");
    if (residual_tol && !(*residual_tol > 0.0)) {
        throw ConfigError("residual tolerance must be positive");
    }
}

BoundaryCurve initial_curve(const ProblemSpec& spec, const Discretization& disc,
                            const InitialGuess& guess) {
    BoundaryCurve curve;
    curve.values.resize(static_cast<std::size_t>(disc.M + 1));
    if (const auto* lin = std::get_if<LinearSlope>(&guess)) {
        if (!(lin->c > 0.0)) throw ConfigError("linear initial slope must be positive");
        for (int n = 0; n <= disc.M; ++n) curve[n] = lin->c * disc.t(n);
    } else if (std::holds_alternative<FluxIntegral>(guess)) {
        const auto* neu = std::get_if<NeumannCondition>(&spec.bc);
        if (!neu) throw ConfigError("flux-integral initial guess needs a Neumann problem");
        const double beta0 = eval_beta(spec, 0.0);
        std::vector<double> rate(curve.size());
        for (int n = 0; n <= disc.M; ++n) rate[n] = neu->q(disc.t(n)) / beta0;
        curve.values = trapezoid_prefix(rate, disc.dt());
    } else {
        curve = std::get<UserCurve>(guess).curve;
    }
    check_admissible(curve, disc);
    return curve;
}

namespace {

int floor_curve(BoundaryCurve& curve) {
    int clamped = 0;
    curve[0] = 0.0;
    for (std::size_t n = 1; n < curve.size(); ++n) {
        if (!std::isfinite(curve[n])) throw SolveError("boundary update is not finite");
        if (curve[n] < kCurveFloor) {
            curve[n] = kCurveFloor;
            ++clamped;
        }
    }
    return clamped;
}

double sup_distance(const BoundaryCurve& a, const BoundaryCurve& b) {
    double d = 0.0;
    for (std::size_t n = 0; n < a.size(); ++n) d = std::max(d, std::abs(a[n] - b[n]));
    return d;
}

}  // namespace

IterationReport run_iteration(const ProblemSpec& spec, const Discretization& disc,
                              const IterationConfig& cfg,
                              const std::optional<BoundaryCurve>& reference) {
    cfg.validate();
    validate_boundary_data(spec, disc.dt(), disc.M);
    if (reference && reference->size() != static_cast<std::size_t>(disc.M + 1)) {
        throw ConfigError("reference curve length does not match the time grid");
    }

    IterationReport report;
    report.iterates.push_back(initial_curve(spec, disc, cfg.initial));

    for (int k = 1; k <= cfg.max_iter; ++k) {
        const BoundaryCurve& current = report.iterates.back();
        BoundaryCurve next;
        try {
            next = apply_P(cfg.op, apply_R(spec, disc, current, cfg.form), current);
        } catch (const Error& e) {
            throw SolveError("iteration " + std::to_string(k) + ": " + e.what());
        }
        const int clamped = floor_curve(next);
        report.clamped.push_back(clamped);
        report.clamp_events += clamped;
        report.deltas.push_back(sup_distance(next, current));

        if (reference) {
            int node = 0;
            double worst = 0.0;
            for (std::size_t n = 0; n < next.size(); ++n) {
                const double dev = next[n] - (*reference)[n];
                if (std::abs(dev) > std::abs(worst)) {
                    worst = dev;
                    node = static_cast<int>(n);
                }
            }
            report.sign_pattern.push_back(worst > 0.0 ? 1 : (worst < 0.0 ? -1 : 0));
            report.max_dev_node.push_back(node);
            report.max_dev.push_back(std::abs(worst));
        }
        report.iterates.push_back(std::move(next));

        if (report.deltas.back() < cfg.tol) {
            report.converged = true;
            break;
        }
        if (cfg.residual_tol) {
            const BoundaryCurve& latest = report.iterates.back();
            const auto field = solve_fixed_boundary(spec, disc, latest);
            const auto r = stefan_residual(spec, disc, latest, field);
            double worst = 0.0;
            for (double v : r) worst = std::max(worst, std::abs(v));
            if (worst < *cfg.residual_tol) {
                report.residual_satisfied = true;
                break;
            }
        }
    }
    return report;
}

void write_iterations_csv(std::ostream& os, const IterationReport& report) {
    os << "k,delta,clamped,sign_at_max_dev\n";
    for (int k = 0; k < report.iterations(); ++k) {
        os << (k + 1) << ',' << format_double(report.deltas[k]) << ',' << report.clamped[k] << ',';
        if (static_cast<std::size_t>(k) < report.sign_pattern.size()) {
            os << report.sign_pattern[k];
        }
        os << '\n';
    }
}

void write_iterates_csv(std::ostream& os, const IterationReport& report,
                        const Discretization& disc) {
    os << "k,t,s\n";
    for (std::size_t k = 0; k < report.iterates.size(); ++k) {
        const auto& curve = report.iterates[k];
        for (std::size_t n = 0; n < curve.size(); ++n) {
            os << k << ',' << format_double(disc.t(static_cast<int>(n))) << ','
               << format_double(curve[n]) << '\n';
        }
    }
}

}  // namespace stefan
