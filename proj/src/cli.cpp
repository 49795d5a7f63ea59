#include "stefan/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "stefan/config.hpp"
#include "stefan/error.hpp"
#include "stefan/experiments.hpp"
#include "stefan/fixed_point.hpp"
#include "stefan/svg.hpp"
#include "stefan/variational.hpp"

namespace stefan {

namespace {

namespace fs = std::filesystem;

struct Options {
    std::string config_path;
    std::string example;
    double eps = ExampleParams{}.eps;
    double omega = ExampleParams{}.omega;
    std::string dirichlet_g;
    std::string neumann_q;
    std::string beta = "1";
    double horizon = 1.0;
    double dxi = 0.05;
    double dt = 0.0;
    double alpha = 0.5;
    double gamma = 0.0;
    double tol = 1e-6;
    int max_iter = 200;
    std::string initial;
    double slope = 1.0;
    std::string initial_path;
    std::string out_dir = ".";
    bool plot = false;
    bool dump_iterates = false;

    int levels = 5;
    double snapshot = 1.0;
    std::vector<double> alphas{1.0, 0.5};
    double epsilon = 0.05;
    std::string perturbation = "first";
};

struct Flags {
    CLI::App* sub = nullptr;
    bool given(const std::string& name) const { return sub->count(name) > 0; }
};

void add_common(CLI::App* sub, Options& o) {
    sub->add_option("--config", o.config_path, "JSON problem/run description");
    sub->add_option("--example", o.example, "built-in benchmark: i, ii or iii");
    sub->add_option("--eps", o.eps, "example iii amplitude");
    sub->add_option("--omega", o.omega, "example iii angular frequency");
    sub->add_option("--dirichlet-g", o.dirichlet_g, "expression for U(0,t)");
    sub->add_option("--neumann-q", o.neumann_q, "expression for the inflow flux q(t)");
    sub->add_option("--beta", o.beta, "expression for beta(x)");
    sub->add_option("--horizon", o.horizon, "final time T");
    sub->add_option("--dxi", o.dxi, "spatial step on the immobilized strip");
    sub->add_option("--dt", o.dt, "time step (default: dxi)");
    sub->add_option("--alpha", o.alpha, "relaxation weight in [0,1]");
    sub->add_option("--gamma", o.gamma, "Lipschitz estimate of R; sets alpha = 1/(1+gamma)");
    sub->add_option("--tol", o.tol, "sup-norm stopping tolerance");
    sub->add_option("--max-iter", o.max_iter, "iteration cap");
    sub->add_option("--initial", o.initial, "initial guess: linear, flux or file")
        ->check(CLI::IsMember({"linear", "flux", "file"}));
    sub->add_option("--slope", o.slope, "slope c of the linear initial guess");
    sub->add_option("--initial-path", o.initial_path, "boundary CSV for --initial file");
    sub->add_option("--out", o.out_dir, "output directory");
    sub->add_flag("--plot", o.plot, "also write SVG charts");
}

RunConfig build_config(const Options& o, const Flags& f) {
    RunConfig cfg;
    bool have_problem = false;
    if (!o.config_path.empty()) {
        cfg = load_run_config(o.config_path);
        have_problem = true;
    }
    const bool cli_problem = f.given("--example") || f.given("--dirichlet-g") || f.given("--neumann-q");
    if (cli_problem) {
        const int chosen = f.given("--example") + f.given("--dirichlet-g") + f.given("--neumann-q");
        if (chosen != 1) {
            throw ConfigError("choose one of --example, --dirichlet-g, --neumann-q");
        }
        cfg.example.reset();
        cfg.exact.reset();
        if (f.given("--example")) {
            cfg.example = parse_example_id(o.example);
            BuiltinProblem built = builtin_example(*cfg.example, ExampleParams{o.eps, o.omega});
            cfg.spec = built.spec;
            cfg.exact = built.exact;
        } else {
            std::optional<std::string> g, q;
            if (f.given("--dirichlet-g")) g = o.dirichlet_g;
            if (f.given("--neumann-q")) q = o.neumann_q;
            cfg.spec = spec_from_expressions(g, q, o.beta, o.horizon);
        }
        cfg.iteration.initial = default_initial_guess(cfg.spec, cfg.example.has_value());
        have_problem = true;
    }
    if (!have_problem) throw ConfigError("no problem given; use --example, --config or an expression");

    if (f.given("--beta")) {
        cfg.spec.beta = ScalarFunction::from_expression(o.beta, 'x');
        if (cfg.spec.beta.constant_value() != 1.0) cfg.exact.reset();
    }
    if (f.given("--horizon")) cfg.spec.horizon = o.horizon;
    validate_spec(cfg.spec);
    if (f.given("--dxi")) cfg.dxi = o.dxi;
    if (f.given("--dt")) cfg.dt = o.dt;
    if (f.given("--alpha")) cfg.iteration.op = OperatorConfig(o.alpha);
    if (f.given("--gamma")) cfg.iteration.op = OperatorConfig::from_gamma(o.gamma);
    if (f.given("--tol")) cfg.iteration.tol = o.tol;
    if (f.given("--max-iter")) cfg.iteration.max_iter = o.max_iter;
    if (f.given("--initial")) {
        if (o.initial == "linear") {
            cfg.iteration.initial = LinearSlope{o.slope};
        } else if (o.initial == "flux") {
            cfg.iteration.initial = FluxIntegral{};
        } else {
            if (o.initial_path.empty()) throw ConfigError("--initial file needs --initial-path");
            cfg.iteration.initial = UserCurve{read_curve_csv_file(o.initial_path)};
        }
    } else if (f.given("--slope")) {
        cfg.iteration.initial = LinearSlope{o.slope};
    }
    cfg.iteration.validate();
    return cfg;
}

std::ofstream open_output(const Options& o, const std::string& name) {
    fs::create_directories(o.out_dir);
    const fs::path path = fs::path(o.out_dir) / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path.string() + "'");
    return out;
}

void write_svg(const Options& o, const std::string& name, const std::vector<Series>& series,
               const ChartOptions& chart) {
    fs::create_directories(o.out_dir);
    write_text_file((fs::path(o.out_dir) / name).string(), render_line_chart(series, chart));
}

std::vector<double> time_axis(const Discretization& disc) {
    std::vector<double> t(static_cast<std::size_t>(disc.M + 1));
    for (int n = 0; n <= disc.M; ++n) t[n] = disc.t(n);
    return t;
}

Series delta_series(const std::string& label, const IterationReport& report) {
    Series s{label, {}, {}};
    for (int k = 0; k < report.iterations(); ++k) {
        s.x.push_back(k + 1);
        s.y.push_back(report.deltas[k]);
    }
    return s;
}

std::optional<BoundaryCurve> exact_curve(const RunConfig& cfg, const Discretization& disc) {
    if (!cfg.exact) return std::nullopt;
    BoundaryCurve curve;
    curve.values.resize(static_cast<std::size_t>(disc.M + 1));
    for (int n = 0; n <= disc.M; ++n) curve[n] = cfg.exact->interface(disc.t(n));
    return curve;
}

int run_solve(const Options& o, const Flags& f) {
    const RunConfig cfg = build_config(o, f);
    const Discretization disc = cfg.discretization();
    const auto reference = exact_curve(cfg, disc);
    const IterationReport report = run_iteration(cfg.spec, disc, cfg.iteration, reference);
    const BoundaryCurve& curve = report.final_curve();
    const TemperatureField field = solve_fixed_boundary(cfg.spec, disc, curve);

    {
        auto out = open_output(o, "boundary.csv");
        write_curve_csv(out, curve, disc);
    }
    {
        auto out = open_output(o, "field.csv");
        write_field_csv(out, field, disc);
    }
    {
        auto out = open_output(o, "iterations.csv");
        write_iterations_csv(out, report);
    }
    if (o.dump_iterates) {
        auto out = open_output(o, "iterates.csv");
        write_iterates_csv(out, report, disc);
    }

    std::cout << "iterations: " << report.iterations()
              << "  last delta: " << format_double(report.deltas.back())
              << "  converged: " << (report.converged ? "yes" : "no") << '\n';
    if (reference) {
        double worst = 0.0;
        for (int n = 0; n <= disc.M; ++n) worst = std::max(worst, std::abs(curve[n] - (*reference)[n]));
        std::cout << "max |s - s_exact|: " << format_double(worst) << '\n';
        std::cout << "E at t=T: "
                  << format_double(error_Ekn(field, curve, cfg.exact, disc.M, disc)) << '\n';
    }
    if (report.clamp_events > 0) {
        std::cout << "boundary floored at " << report.clamp_events << " node(s)\n";
    }

    if (o.plot) {
        const auto t = time_axis(disc);
        std::vector<Series> series{{"computed s(t)", t, curve.values}};
        if (reference) series.push_back({"exact s(t)", t, reference->values});
        write_svg(o, "boundary.svg", series, {"Boundary", "t", "s", false, false});
        write_svg(o, "iterations.svg", {delta_series("sup-norm change", report)},
                  {"Change per iteration", "iteration", "delta", false, true});
    }
    return report.converged || report.residual_satisfied ? kExitOk : kExitNotConverged;
}

int run_study(const Options& o, const Flags& f) {
    Options local = o;
    Flags flags = f;
    RunConfig cfg = build_config(local, flags);
    if (!cfg.exact) throw ConfigError("study needs a problem with an exact solution (examples i, ii)");
    if (!f.given("--tol") && o.config_path.empty()) cfg.iteration.tol = 1e-11;
    if (!f.given("--max-iter") && o.config_path.empty()) cfg.iteration.max_iter = 1000;
    if (o.levels < 1) throw ConfigError("--levels must be at least 1");

    StudyConfig study;
    study.levels.clear();
    for (int k = 0; k < o.levels; ++k) study.levels.push_back(k);
    study.snapshot_time = o.snapshot;
    const auto rows = refinement_study(cfg.spec, *cfg.exact, study, cfg.iteration);
    {
        auto out = open_output(o, "study.csv");
        write_study_csv(out, rows);
    }
    bool all_converged = true;
    std::cout << "dxi            E            p\n";
    for (const auto& row : rows) {
        std::cout << format_double(row.dxi) << "  " << format_double(row.error) << "  "
                  << (row.order ? format_double(*row.order) : std::string("-"))
                  << (row.converged ? "" : "  (not converged)") << '\n';
        all_converged = all_converged && row.converged;
    }
    if (o.plot) {
        Series s{"E at t=" + format_double(o.snapshot), {}, {}};
        for (const auto& row : rows) {
            s.x.push_back(row.dxi);
            s.y.push_back(row.error);
        }
        write_svg(o, "study.svg", {s}, {"Refinement study", "dxi", "E", true, true});
    }
    return all_converged ? kExitOk : kExitNotConverged;
}

int run_operators(const Options& o, const Flags& f) {
    const RunConfig cfg = build_config(o, f);
    const Discretization disc = cfg.discretization();
    const auto reference = exact_curve(cfg, disc);

    auto out = open_output(o, "operators.csv");
    out << "alpha,k,delta,clamped,sign_at_max_dev,max_dev\n";
    auto dump = open_output(o, "operators_iterates.csv");
    dump << "alpha,k,t,s\n";
    std::vector<Series> series;
    for (double alpha : o.alphas) {
        IterationConfig it = cfg.iteration;
        it.op = OperatorConfig(alpha);
        IterationReport report;
        try {
            report = run_iteration(cfg.spec, disc, it, reference);
        } catch (const SolveError& e) {
            std::cout << "alpha=" << alpha << ": " << e.what() << '\n';
            continue;
        }
        for (int k = 0; k < report.iterations(); ++k) {
            out << format_double(alpha) << ',' << (k + 1) << ',' << format_double(report.deltas[k])
                << ',' << report.clamped[k] << ',';
            if (reference) {
                out << report.sign_pattern[k] << ',' << format_double(report.max_dev[k]);
            } else {
                out << ',';
            }
            out << '\n';
        }
        for (std::size_t k = 0; k < report.iterates.size(); ++k) {
            for (int n = 0; n <= disc.M; ++n) {
                dump << format_double(alpha) << ',' << k << ',' << format_double(disc.t(n)) << ','
                     << format_double(report.iterates[k][n]) << '\n';
            }
        }
        std::cout << "alpha=" << alpha << ": " << report.iterations() << " iterations, "
                  << (report.converged ? "converged" : "not converged") << '\n';
        series.push_back(delta_series("alpha=" + format_double(alpha), report));
    }
    if (o.plot) {
        write_svg(o, "operators.svg", series,
                  {"Change per iteration", "iteration", "delta", false, true});
    }
    return kExitOk;
}

int run_refine(const Options& o, const Flags& f) {
    const RunConfig cfg = build_config(o, f);
    const Discretization disc = cfg.discretization();
    const BoundaryCurve curve = initial_curve(cfg.spec, disc, cfg.iteration.initial);
    const RefinementResult result =
        refine_boundary(cfg.spec, disc, curve, o.epsilon,
                        o.perturbation == "second" ? PerturbationSolver::SecondOrder
                                                   : PerturbationSolver::FirstOrder);
    const DiscrepancyReport after = discrepancy(cfg.spec, disc, result.refined);

    auto out = open_output(o, "refine.csv");
    out << "# epsilon=" << format_double(o.epsilon) << ",d2_before=" << format_double(result.before.d2)
        << ",d2_projected=" << format_double(result.projected_d2)
        << ",ratio=" << format_double(result.projected_ratio)
        << ",d1_resolved=" << format_double(after.d1) << '\n';
    out << "t,s,eta,s_refined\n";
    for (int n = 0; n <= disc.M; ++n) {
        out << format_double(disc.t(n)) << ',' << format_double(curve[n]) << ','
            << format_double(result.eta[n]) << ',' << format_double(result.refined[n]) << '\n';
    }
    std::cout << "D2 before: " << format_double(result.before.d2)
              << "  projected: " << format_double(result.projected_d2)
              << "  ratio: " << format_double(result.projected_ratio)
              << "  (1-2eps = " << format_double(1.0 - 2.0 * o.epsilon) << ")\n";
    std::cout << "D1 after re-solve: " << format_double(after.d1) << '\n';
    if (o.plot) {
        const auto t = time_axis(disc);
        write_svg(o, "refine.svg",
                  {{"s", t, curve.values}, {"refined", t, result.refined.values}},
                  {"Linearized refinement", "t", "s", false, false});
    }
    return kExitOk;
}

int run_residual_study(const Options& o, const Flags& f) {
    RunConfig cfg = build_config(o, f);
    if (!f.given("--tol") && o.config_path.empty()) cfg.iteration.tol = 1e-11;
    if (!f.given("--max-iter") && o.config_path.empty()) cfg.iteration.max_iter = 1000;
    StudyConfig study;
    study.levels.clear();
    for (int k = 0; k < o.levels; ++k) study.levels.push_back(k);
    const auto rows = residual_study(cfg.spec, study, cfg.iteration);
    {
        auto out = open_output(o, "residual_study.csv");
        write_residual_study_csv(out, rows);
    }
    bool all_converged = true;
    std::cout << "dxi            max|r| (all)    max|r| (coarse nodes)    ratio\n";
    for (const auto& row : rows) {
        std::cout << format_double(row.dxi) << "  " << format_double(row.max_all) << "  "
                  << format_double(row.max_common) << "  "
                  << (row.ratio ? format_double(*row.ratio) : std::string("-"))
                  << (row.converged ? "" : "  (not converged)") << '\n';
        all_converged = all_converged && row.converged;
    }
    return all_converged ? kExitOk : kExitNotConverged;
}

int run_residual(const Options& o, const Flags& f) {
    if (f.given("--levels")) {
        if (o.levels < 1) throw ConfigError("--levels must be at least 1");
        return run_residual_study(o, f);
    }
    const RunConfig cfg = build_config(o, f);
    const Discretization disc = cfg.discretization();
    const IterationReport report = run_iteration(cfg.spec, disc, cfg.iteration);
    const DiscrepancyReport rep = stefan_residual_report(cfg.spec, disc, report.final_curve());
    {
        auto out = open_output(o, "residual.csv");
        write_discrepancy_csv(out, rep, disc);
    }
    double worst = 0.0;
    for (double r : rep.residual) worst = std::max(worst, std::abs(r));
    std::cout << "iterations: " << report.iterations() << "  D1: " << format_double(rep.d1)
              << "  max |residual|: " << format_double(worst) << '\n';
    if (o.plot) {
        write_svg(o, "residual.svg", {{"Stefan residual", time_axis(disc), rep.residual}},
                  {"Stefan residual", "t", "r", false, false});
    }
    return report.converged || report.residual_satisfied ? kExitOk : kExitNotConverged;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"Stefan problem solver: boundary-updating fixed point with relaxation"};
    app.require_subcommand(1);
    Options o;

    CLI::App* solve = app.add_subcommand("solve", "one fixed-point run");
    CLI::App* study = app.add_subcommand("study", "refinement study against the exact solution");
    CLI::App* ops = app.add_subcommand("operators", "compare relaxation weights");
    CLI::App* refine = app.add_subcommand("refine", "one linearized variational refinement");
    CLI::App* residual = app.add_subcommand("residual", "Stefan residual of a converged run");
    for (CLI::App* sub : {solve, study, ops, refine, residual}) add_common(sub, o);
    solve->add_flag("--dump-iterates", o.dump_iterates, "write every iterate to iterates.csv");
    study->add_option("--levels", o.levels, "number of levels; dxi_k = 0.1 * 2^-k");
    study->add_option("--snapshot", o.snapshot, "time of the error snapshot");
    residual->add_option("--levels", o.levels, "run a refinement study over this many levels");
    ops->add_option("--alphas", o.alphas, "comma-separated relaxation weights")->delimiter(',');
    refine->add_option("--epsilon", o.epsilon, "refinement step in [0,1]");
    refine->add_option("--perturbation", o.perturbation,
                       "correction equation: first (eta' + b eta + a = 0) or second (eta'' + b eta + a = 0)")
        ->check(CLI::IsMember({"first", "second"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        for (CLI::App* sub : app.get_subcommands()) {
            const Flags flags{sub};
            if (sub == solve) return run_solve(o, flags);
            if (sub == study) return run_study(o, flags);
            if (sub == ops) return run_operators(o, flags);
            if (sub == refine) return run_refine(o, flags);
            if (sub == residual) return run_residual(o, flags);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const CurveError& e) {
        std::cerr << "boundary error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const SolveError& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        return kExitNotConverged;
    }
    return kExitConfig;
}

}  // namespace stefan
