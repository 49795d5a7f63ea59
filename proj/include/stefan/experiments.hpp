#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "stefan/fixed_point.hpp"
#include "stefan/grid.hpp"
#include "stefan/problem.hpp"
#include "stefan/variational.hpp"

namespace stefan {

/// Snapshot error in transformed coordinates:
///   E = ( dxi * sum_{i=0}^{N} (F(xi_i, t^n) - T(s^n xi_i, t^n))^2 )^{1/2}
double error_Ekn(const TemperatureField& field, const BoundaryCurve& curve,
                 const std::optional<ExactSolution>& exact, int n, const Discretization& disc);

/// log2(e_coarse / e_fine) for a refinement factor of two.
double order_p(double e_coarse, double e_fine);

/// Levels k give dxi_k = base_dxi 2^{-k} with dt = dxi.
struct StudyConfig {
    std::vector<int> levels{0, 1, 2, 3, 4};
    double base_dxi = 0.1;
    double snapshot_time = 1.0;

    void validate(double horizon) const;
};

struct StudyRow {
    int level = 0;
    double dxi = 0.0;
    double error = 0.0;
    std::optional<double> order;
    /// max_n |s^n - s_exact(t^n)| of the converged boundary.
    double boundary_error = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Runs the full fixed-point solve on every level (levels in parallel) and chains orders.
std::vector<StudyRow> refinement_study(const ProblemSpec& spec, const ExactSolution& exact,
                                       const StudyConfig& study, const IterationConfig& iter_cfg);

DiscrepancyReport stefan_residual_report(const ProblemSpec& spec, const Discretization& disc,
                                         const BoundaryCurve& curve);

struct ResidualRow {
    int level = 0;
    double dxi = 0.0;
    /// max |r^n| over every node n >= 1 of this level.
    double max_all = 0.0;
    /// max |r^n| over the nodes t = k dt_0, k >= 1, of the coarsest level in the study.
    double max_common = 0.0;
    /// max_common of the previous level divided by this one.
    std::optional<double> ratio;
    int iterations = 0;
    bool converged = false;
};

/// Stefan residual under refinement for problems without an exact solution. The shared
/// coarse nodes make the levels comparable at fixed physical times; with Dirichlet data
/// g(0) != 0 the first step is a fixed fraction of the startup layer on every grid, so the
/// all-node maximum does not decrease there.
std::vector<ResidualRow> residual_study(const ProblemSpec& spec, const StudyConfig& study,
                                        const IterationConfig& iter_cfg);

void write_study_csv(std::ostream& os, const std::vector<StudyRow>& rows);
void write_residual_study_csv(std::ostream& os, const std::vector<ResidualRow>& rows);

}  // namespace stefan
