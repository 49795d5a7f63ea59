#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>

#include "stefan/error.hpp"
#include "stefan/experiments.hpp"
#include "stefan/fixed_boundary.hpp"
#include "stefan/fixed_point.hpp"
#include "stefan/operators.hpp"
#include "stefan/variational.hpp"

namespace py = pybind11;
using namespace stefan;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Array to_array(const std::vector<double>& v) { return Array(static_cast<py::ssize_t>(v.size()), v.data()); }

BoundaryCurve to_curve(const Array& a) {
    if (a.ndim() != 1) throw ConfigError("boundary curve must be a 1-D array");
    return BoundaryCurve{std::vector<double>(a.data(), a.data() + a.size())};
}

// Rows are time levels, columns are xi nodes: field[n, i] = F(xi_i, t^n).
Array field_to_array(const TemperatureField& f) {
    Array out({f.M() + 1, f.N() + 1});
    auto view = out.mutable_unchecked<2>();
    for (int n = 0; n <= f.M(); ++n) {
        for (int i = 0; i <= f.N(); ++i) view(n, i) = f.at(i, n);
    }
    return out;
}

TemperatureField array_to_field(const Array& a, const Discretization& d) {
    if (a.ndim() != 2 || a.shape(0) != d.M + 1 || a.shape(1) != d.N + 1) {
        throw ConfigError("field must have shape (M+1, N+1)");
    }
    TemperatureField f(d.N, d.M);
    auto view = a.unchecked<2>();
    for (int n = 0; n <= d.M; ++n) {
        for (int i = 0; i <= d.N; ++i) f.at(i, n) = view(n, i);
    }
    return f;
}

ScalarFunction make_function(const py::object& obj, char variable) {
    if (py::isinstance<py::str>(obj)) {
        return ScalarFunction::from_expression(obj.cast<std::string>(), variable);
    }
    if (py::isinstance<py::float_>(obj) || py::isinstance<py::int_>(obj)) {
        return ScalarFunction::constant(obj.cast<double>());
    }
    if (PyCallable_Check(obj.ptr())) {
        auto fn = obj.cast<std::function<double(double)>>();
        return ScalarFunction(std::move(fn), py::repr(obj).cast<std::string>());
    }
    throw ConfigError("expected an expression string, a number or a callable");
}

RForm parse_form(const std::string& s) {
    if (s == "auto") return RForm::Auto;
    if (s == "divergence") return RForm::Divergence;
    if (s == "direct") return RForm::Direct;
    throw ConfigError("form must be 'auto', 'divergence' or 'direct'");
}

InitialGuess parse_initial(const py::object& initial, double slope) {
    if (initial.is_none()) return LinearSlope{slope};
    if (py::isinstance<py::str>(initial)) {
        const auto kind = initial.cast<std::string>();
        if (kind == "linear") return LinearSlope{slope};
        if (kind == "flux") return FluxIntegral{};
        throw ConfigError("initial must be 'linear', 'flux' or an array");
    }
    return UserCurve{to_curve(initial.cast<Array>())};
}

IterationConfig make_iteration(double alpha, double tol, int max_iter, const py::object& initial,
                               double slope, const std::string& form,
                               std::optional<double> residual_tol) {
    IterationConfig cfg;
    cfg.op = OperatorConfig(alpha);
    cfg.tol = tol;
    cfg.max_iter = max_iter;
    cfg.initial = parse_initial(initial, slope);
    cfg.form = parse_form(form);
    cfg.residual_tol = residual_tol;
    return cfg;
}

py::dict discrepancy_dict(const DiscrepancyReport& r) {
    py::dict d;
    d["d1"] = r.d1;
    d["d2"] = r.d2;
    d["residual"] = to_array(r.residual);
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Stefan problem solver: front-fixing discretization and boundary fixed-point iteration";

    auto base = py::register_exception<Error>(m, "StefanError", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<CurveError>(m, "CurveError", base.ptr());
    py::register_exception<SolveError>(m, "SolveError", base.ptr());

    py::class_<ProblemSpec>(m, "ProblemSpec")
        .def_static(
            "dirichlet",
            [](const py::object& g, const py::object& beta, double horizon) {
                ProblemSpec s;
                s.bc = DirichletCondition{make_function(g, 't')};
                s.beta = make_function(beta, 'x');
                s.horizon = horizon;
                validate_spec(s);
                return s;
            },
            py::arg("g"), py::arg("beta") = 1.0, py::arg("horizon") = 1.0,
            "U(0,t) = g(t); g may be an expression in t, a number or a callable")
        .def_static(
            "neumann",
            [](const py::object& q, const py::object& beta, double horizon) {
                ProblemSpec s;
                s.bc = NeumannCondition{make_function(q, 't')};
                s.beta = make_function(beta, 'x');
                s.horizon = horizon;
                validate_spec(s);
                return s;
            },
            py::arg("q"), py::arg("beta") = 1.0, py::arg("horizon") = 1.0,
            "U_x(0,t) = -q(t)")
        .def_property_readonly("is_dirichlet", &ProblemSpec::is_dirichlet)
        .def_property_readonly("is_neumann", &ProblemSpec::is_neumann)
        .def_property_readonly("horizon", [](const ProblemSpec& s) { return s.horizon; })
        .def("boundary_value", &ProblemSpec::boundary_value, py::arg("t"))
        .def("beta", [](const ProblemSpec& s, double x) { return eval_beta(s, x); }, py::arg("x"))
        .def("__repr__", [](const ProblemSpec& s) {
            const std::string mode = s.is_dirichlet() ? "dirichlet g=" : "neumann q=";
            const std::string label = s.is_dirichlet()
                                          ? std::get<DirichletCondition>(s.bc).g.label()
                                          : std::get<NeumannCondition>(s.bc).q.label();
            return "<ProblemSpec " + mode + label + " beta=" + s.beta.label() +
                   " T=" + format_double(s.horizon) + ">";
        });

    py::class_<ExactSolution>(m, "ExactSolution")
        .def("temperature", [](const ExactSolution& e, double x, double t) { return e.temperature(x, t); },
             py::arg("x"), py::arg("t"))
        .def("interface", [](const ExactSolution& e, double t) { return e.interface(t); }, py::arg("t"));

    m.def(
        "builtin_example",
        [](const std::string& id, double eps, double omega) {
            BuiltinProblem p = builtin_example(parse_example_id(id), ExampleParams{eps, omega});
            return py::make_tuple(p.spec, p.exact ? py::cast(*p.exact) : py::none());
        },
        py::arg("id"), py::arg("eps") = ExampleParams{}.eps, py::arg("omega") = ExampleParams{}.omega,
        "Returns (spec, exact) for benchmark 'i', 'ii' or 'iii'; exact is None for 'iii'.");

    py::class_<Discretization>(m, "Discretization")
        .def(py::init(&Discretization::make), py::arg("N"), py::arg("M"), py::arg("T") = 1.0)
        .def_static("from_steps", &Discretization::from_steps, py::arg("dxi"), py::arg("dt"),
                    py::arg("T") = 1.0)
        .def_readonly("N", &Discretization::N)
        .def_readonly("M", &Discretization::M)
        .def_readonly("T", &Discretization::T)
        .def_property_readonly("dxi", &Discretization::dxi)
        .def_property_readonly("dt", &Discretization::dt)
        .def_property_readonly("xi", [](const Discretization& d) {
            std::vector<double> v(d.N + 1);
            for (int i = 0; i <= d.N; ++i) v[i] = d.xi(i);
            return to_array(v);
        })
        .def_property_readonly("t", [](const Discretization& d) {
            std::vector<double> v(d.M + 1);
            for (int n = 0; n <= d.M; ++n) v[n] = d.t(n);
            return to_array(v);
        })
        .def("__repr__", [](const Discretization& d) {
            return "<Discretization N=" + std::to_string(d.N) + " M=" + std::to_string(d.M) +
                   " T=" + format_double(d.T) + ">";
        });

    m.def(
        "solve_fixed_boundary",
        [](const ProblemSpec& spec, const Discretization& disc, const Array& curve, int smoothing) {
            return field_to_array(
                solve_fixed_boundary(spec, disc, to_curve(curve), FixedBoundaryOptions{smoothing}));
        },
        py::arg("spec"), py::arg("disc"), py::arg("curve"), py::arg("smoothing_steps") = -1,
        "Transformed temperature F[n, i] on the given boundary.");

    m.def(
        "apply_R",
        [](const ProblemSpec& spec, const Discretization& disc, const Array& curve,
           const std::string& form) {
            return to_array(apply_R(spec, disc, to_curve(curve), parse_form(form)).values);
        },
        py::arg("spec"), py::arg("disc"), py::arg("curve"), py::arg("form") = "auto");

    m.def(
        "apply_P",
        [](double alpha, const Array& r, const Array& s) {
            return to_array(apply_P(OperatorConfig(alpha), to_curve(r), to_curve(s)).values);
        },
        py::arg("alpha"), py::arg("r_of_s"), py::arg("s"));

    m.def(
        "run_iteration",
        [](const ProblemSpec& spec, const Discretization& disc, double alpha, double tol,
           int max_iter, const py::object& initial, double slope, const std::string& form,
           std::optional<double> residual_tol, const py::object& reference) {
            const IterationConfig cfg =
                make_iteration(alpha, tol, max_iter, initial, slope, form, residual_tol);
            std::optional<BoundaryCurve> ref;
            if (!reference.is_none()) ref = to_curve(reference.cast<Array>());
            IterationReport r;
            {
                py::gil_scoped_release release;
                r = run_iteration(spec, disc, cfg, ref);
            }
            py::dict out;
            out["curve"] = to_array(r.final_curve().values);
            py::list iterates;
            for (const auto& c : r.iterates) iterates.append(to_array(c.values));
            out["iterates"] = iterates;
            out["deltas"] = to_array(r.deltas);
            out["clamped"] = r.clamped;
            out["sign_pattern"] = r.sign_pattern;
            out["converged"] = r.converged;
            out["residual_satisfied"] = r.residual_satisfied;
            out["iterations"] = r.iterations();
            return out;
        },
        py::arg("spec"), py::arg("disc"), py::arg("alpha") = 0.5, py::arg("tol") = 1e-6,
        py::arg("max_iter") = 200, py::arg("initial") = py::none(), py::arg("slope") = 1.0,
        py::arg("form") = "auto", py::arg("residual_tol") = py::none(),
        py::arg("reference") = py::none(),
        "Relaxed fixed-point iteration s <- alpha R(s) + (1 - alpha) s.");

    m.def(
        "discrepancy",
        [](const ProblemSpec& spec, const Discretization& disc, const Array& curve) {
            return discrepancy_dict(discrepancy(spec, disc, to_curve(curve)));
        },
        py::arg("spec"), py::arg("disc"), py::arg("curve"));

    m.def(
        "refine_boundary",
        [](const ProblemSpec& spec, const Discretization& disc, const Array& curve, double epsilon,
           const std::string& perturbation) {
            if (perturbation != "first" && perturbation != "second") {
                throw ConfigError("perturbation must be 'first' or 'second'");
            }
            const RefinementResult r =
                refine_boundary(spec, disc, to_curve(curve), epsilon,
                                perturbation == "first" ? PerturbationSolver::FirstOrder
                                                        : PerturbationSolver::SecondOrder);
            py::dict out;
            out["refined"] = to_array(r.refined.values);
            out["eta"] = to_array(r.eta);
            out["before"] = discrepancy_dict(r.before);
            out["projected_d2"] = r.projected_d2;
            out["projected_ratio"] = r.projected_ratio;
            out["clamped"] = r.clamped;
            return out;
        },
        py::arg("spec"), py::arg("disc"), py::arg("curve"), py::arg("epsilon"),
        py::arg("perturbation") = "first");

    m.def(
        "error_Ekn",
        [](const Array& field, const Array& curve, const ExactSolution& exact, int n,
           const Discretization& disc) {
            return error_Ekn(array_to_field(field, disc), to_curve(curve), exact, n, disc);
        },
        py::arg("field"), py::arg("curve"), py::arg("exact"), py::arg("n"), py::arg("disc"));

    m.def("order_p", &order_p, py::arg("e_coarse"), py::arg("e_fine"));

    m.def(
        "refinement_study",
        [](const ProblemSpec& spec, const ExactSolution& exact, std::vector<int> levels,
           double base_dxi, double snapshot_time, double tol, int max_iter, double alpha) {
            StudyConfig study{std::move(levels), base_dxi, snapshot_time};
            IterationConfig cfg;
            cfg.tol = tol;
            cfg.max_iter = max_iter;
            cfg.op = OperatorConfig(alpha);
            std::vector<StudyRow> rows;
            {
                py::gil_scoped_release release;
                rows = refinement_study(spec, exact, study, cfg);
            }
            py::list out;
            for (const auto& r : rows) {
                py::dict d;
                d["level"] = r.level;
                d["dxi"] = r.dxi;
                d["error"] = r.error;
                d["order"] = r.order ? py::cast(*r.order) : py::none();
                d["boundary_error"] = r.boundary_error;
                d["iterations"] = r.iterations;
                d["converged"] = r.converged;
                out.append(d);
            }
            return out;
        },
        py::arg("spec"), py::arg("exact"), py::arg("levels") = std::vector<int>{0, 1, 2, 3, 4},
        py::arg("base_dxi") = 0.1, py::arg("snapshot_time") = 1.0, py::arg("tol") = 1e-11,
        py::arg("max_iter") = 1000, py::arg("alpha") = 0.5);

    m.def(
        "residual_study",
        [](const ProblemSpec& spec, std::vector<int> levels, double base_dxi, double tol,
           int max_iter, double alpha) {
            StudyConfig study{std::move(levels), base_dxi, spec.horizon};
            IterationConfig cfg;
            cfg.tol = tol;
            cfg.max_iter = max_iter;
            cfg.op = OperatorConfig(alpha);
            std::vector<ResidualRow> rows;
            {
                py::gil_scoped_release release;
                rows = residual_study(spec, study, cfg);
            }
            py::list out;
            for (const auto& r : rows) {
                py::dict d;
                d["level"] = r.level;
                d["dxi"] = r.dxi;
                d["max_all"] = r.max_all;
                d["max_common"] = r.max_common;
                d["ratio"] = r.ratio ? py::cast(*r.ratio) : py::none();
                d["converged"] = r.converged;
                out.append(d);
            }
            return out;
        },
        py::arg("spec"), py::arg("levels") = std::vector<int>{0, 1, 2}, py::arg("base_dxi") = 0.1,
        py::arg("tol") = 1e-11, py::arg("max_iter") = 1000, py::arg("alpha") = 0.5);
}
