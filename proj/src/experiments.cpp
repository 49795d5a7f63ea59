#include "stefan/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <ostream>

#include "stefan/error.hpp"

namespace stefan {

double error_Ekn(const TemperatureField& field, const BoundaryCurve& curve,
                 const std::optional<ExactSolution>& exact, int n, const Discretization& disc) {
    if (!exact) throw ConfigError("snapshot error needs an exact solution");
    if (n < 0 || n > disc.M) throw ConfigError("snapshot index out of range");
    const double t = disc.t(n);
    double sum = 0.0;
    for (int i = 0; i <= disc.N; ++i) {
        const double diff = field.at(i, n) - exact->temperature(curve[n] * disc.xi(i), t);
        sum += diff * diff;
    }
    return std::sqrt(disc.dxi() * sum);
}

double order_p(double e_coarse, double e_fine) {
    if (!(e_coarse > 0.0) || !(e_fine > 0.0)) {
        throw ConfigError("order of accuracy needs positive errors");
    }
    return std::log2(e_coarse / e_fine);
}

void StudyConfig::validate(double horizon) const {
    if (levels.empty()) throw ConfigError("refinement study needs at least one level");
    for (std::size_t k = 1; k < levels.size(); ++k) {
        if (levels[k] <= levels[k - 1]) {
            throw ConfigError("refinement levels must be strictly increasing");
        }
    }
    if (levels.front() < 0) throw ConfigError("refinement levels must be nonnegative");
    if (!(base_dxi > 0.0 && base_dxi <= 0.5)) throw ConfigError("base dxi must be in (0, 1/2]");
    if (!(snapshot_time > 0.0 && snapshot_time <= horizon)) {
        throw ConfigError("snapshot time must lie in (0, T]");
    }
}

namespace {

StudyRow run_level(const ProblemSpec& spec, const ExactSolution& exact, const StudyConfig& study,
                   const IterationConfig& iter_cfg, int level) {
    const double dxi = study.base_dxi * std::ldexp(1.0, -level);
    const Discretization disc = Discretization::from_steps(dxi, dxi, spec.horizon);
    const IterationReport report = run_iteration(spec, disc, iter_cfg);
    const BoundaryCurve& curve = report.final_curve();
    const TemperatureField field = solve_fixed_boundary(spec, disc, curve);

    StudyRow row;
    row.level = level;
    row.dxi = disc.dxi();
    row.error = error_Ekn(field, curve, exact, disc.time_index(study.snapshot_time), disc);
    row.iterations = report.iterations();
    row.converged = report.converged;
    for (int n = 0; n <= disc.M; ++n) {
        row.boundary_error =
            std::max(row.boundary_error, std::abs(curve[n] - exact.interface(disc.t(n))));
    }
    return row;
}

}  // namespace

std::vector<StudyRow> refinement_study(const ProblemSpec& spec, const ExactSolution& exact,
                                       const StudyConfig& study, const IterationConfig& iter_cfg) {
    study.validate(spec.horizon);
    iter_cfg.validate();

    std::vector<std::future<StudyRow>> pending;
    pending.reserve(study.levels.size());
    for (int level : study.levels) {
        pending.push_back(std::async(std::launch::async, run_level, std::cref(spec),
                                     std::cref(exact), std::cref(study), std::cref(iter_cfg),
                                     level));
    }
    std::vector<StudyRow> rows;
    rows.reserve(pending.size());
    for (auto& f : pending) rows.push_back(f.get());

    for (std::size_t k = 1; k < rows.size(); ++k) {
        if (rows[k - 1].error > 0.0 && rows[k].error > 0.0) {
            // Consecutive levels may skip; scale by the actual refinement ratio.
            rows[k].order = std::log(rows[k - 1].error / rows[k].error) /
                            std::log(rows[k - 1].dxi / rows[k].dxi);
        }
    }
    return rows;
}

DiscrepancyReport stefan_residual_report(const ProblemSpec& spec, const Discretization& disc,
                                         const BoundaryCurve& curve) {
    return discrepancy(spec, disc, curve);
}

std::vector<ResidualRow> residual_study(const ProblemSpec& spec, const StudyConfig& study,
                                        const IterationConfig& iter_cfg) {
    study.validate(spec.horizon);
    iter_cfg.validate();
    const int base = study.levels.front();
    const Discretization coarse =
        Discretization::from_steps(study.base_dxi * std::ldexp(1.0, -base),
                                   study.base_dxi * std::ldexp(1.0, -base), spec.horizon);

    auto run = [&](int level) {
        const double dxi = study.base_dxi * std::ldexp(1.0, -level);
        const Discretization disc = Discretization::from_steps(dxi, dxi, spec.horizon);
        const IterationReport report = run_iteration(spec, disc, iter_cfg);
        const DiscrepancyReport rep = discrepancy(spec, disc, report.final_curve());

        ResidualRow row;
        row.level = level;
        row.dxi = disc.dxi();
        row.iterations = report.iterations();
        row.converged = report.converged || report.residual_satisfied;
        for (int n = 1; n <= disc.M; ++n) {
            row.max_all = std::max(row.max_all, std::abs(rep.residual[n]));
        }
        const int stride = 1 << (level - base);
        for (int k = 1; k <= coarse.M; ++k) {
            row.max_common = std::max(row.max_common, std::abs(rep.residual[k * stride]));
        }
        return row;
    };

    std::vector<std::future<ResidualRow>> pending;
    for (int level : study.levels) pending.push_back(std::async(std::launch::async, run, level));
    std::vector<ResidualRow> rows;
    for (auto& f : pending) rows.push_back(f.get());
    for (std::size_t k = 1; k < rows.size(); ++k) {
        if (rows[k].max_common > 0.0) rows[k].ratio = rows[k - 1].max_common / rows[k].max_common;
    }
    return rows;
}

void write_study_csv(std::ostream& os, const std::vector<StudyRow>& rows) {
    os << "level,dxi,error,order,boundary_error,iterations,converged\n";
    for (const auto& row : rows) {
        os << row.level << ',' << format_double(row.dxi) << ',' << format_double(row.error) << ',';
        if (row.order) os << format_double(*row.order);
        os << ',' << format_double(row.boundary_error) << ',' << row.iterations << ','
           << (row.converged ? 1 : 0) << '\n';
    }
}

}  // namespace stefan

namespace stefan {

void write_residual_study_csv(std::ostream& os, const std::vector<ResidualRow>& rows) {
    os << "level,dxi,max_all,max_common,ratio,iterations,converged\n";
    for (const auto& row : rows) {
        os << row.level << ',' << format_double(row.dxi) << ',' << format_double(row.max_all) << ','
           << format_double(row.max_common) << ',';
        if (row.ratio) os << format_double(*row.ratio);
        os << ',' << row.iterations << ',' << (row.converged ? 1 : 0) << '\n';
    }
}

}  // namespace stefan
