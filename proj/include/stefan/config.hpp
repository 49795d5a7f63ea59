#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "stefan/fixed_point.hpp"
#include "stefan/problem.hpp"

namespace stefan {

/// A problem plus run parameters, as loaded from a JSON description:
///
///   { "example": "i|ii|iii" | null, "dirichlet_g": expr, "neumann_q": expr,
///     "beta": expr, "horizon": number, "dxi": number, "dt": number,
///     "alpha": number, "tol": number, "max_iter": int,
///     "initial": { "kind": "linear|flux|file", "c": number, "path": string },
///     "eps": number, "omega": number }
///
/// Exactly one of "example", "dirichlet_g", "neumann_q" selects the problem.
struct RunConfig {
    ProblemSpec spec;
    std::optional<ExactSolution> exact;
    std::optional<ExampleId> example;
    double dxi = 0.05;
    std::optional<double> dt;
    IterationConfig iteration;

    /// dt defaults to dxi.
    Discretization discretization() const;
};

/// Throws ConfigError on any schema or value problem.
RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::string& path);

/// Builds a ProblemSpec from expression strings; exactly one of g or q must be given.
ProblemSpec spec_from_expressions(const std::optional<std::string>& dirichlet_g,
                                  const std::optional<std::string>& neumann_q,
                                  const std::string& beta, double horizon);

/// Default initial guess: slope 1 for the benchmarks, flux integral for other Neumann problems.
InitialGuess default_initial_guess(const ProblemSpec& spec, bool benchmark);

}  // namespace stefan
