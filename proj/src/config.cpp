#include "stefan/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "stefan/error.hpp"

namespace stefan {

using nlohmann::json;

Discretization RunConfig::discretization() const {
    return Discretization::from_steps(dxi, dt.value_or(dxi), spec.horizon);
}

ProblemSpec spec_from_expressions(const std::optional<std::string>& dirichlet_g,
                                  const std::optional<std::string>& neumann_q,
                                  const std::string& beta, double horizon) {
    if (dirichlet_g.has_value() == neumann_q.has_value()) {
        throw ConfigError("give exactly one of a Dirichlet g(t) or a Neumann q(t)");
    }
    ProblemSpec spec;
    if (dirichlet_g) {
        spec.bc = DirichletCondition{ScalarFunction::from_expression(*dirichlet_g, 't')};
    } else {
        spec.bc = NeumannCondition{ScalarFunction::from_expression(*neumann_q, 't')};
    }
    spec.beta = ScalarFunction::from_expression(beta, 'x');
    spec.horizon = horizon;
    validate_spec(spec);
    return spec;
}

InitialGuess default_initial_guess(const ProblemSpec& spec, bool benchmark) {
    if (!benchmark && spec.is_neumann()) return FluxIntegral{};
    return LinearSlope{1.0};
}

namespace {

template <typename T>
std::optional<T> optional_field(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config field '") + key + "': " + e.what());
    }
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("invalid JSON config: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");

    static const char* known[] = {"example", "dirichlet_g", "neumann_q", "beta", "horizon",
                                  "dxi",     "dt",          "alpha",     "tol",  "max_iter",
                                  "initial", "eps",         "omega"};
    for (const auto& item : j.items()) {
        bool ok = false;
        for (const char* k : known) ok = ok || item.key() == k;
        if (!ok) throw ConfigError("unknown config field '" + item.key() + "'");
    }

    RunConfig cfg;
    const auto example = optional_field<std::string>(j, "example");
    const auto g = optional_field<std::string>(j, "dirichlet_g");
    const auto q = optional_field<std::string>(j, "neumann_q");
    const auto beta = optional_field<std::string>(j, "beta").value_or("1");
    const double horizon = optional_field<double>(j, "horizon").value_or(1.0);

    if (example) {
        if (g || q) throw ConfigError("'example' cannot be combined with dirichlet_g/neumann_q");
        cfg.example = parse_example_id(*example);
        ExampleParams params;
        params.eps = optional_field<double>(j, "eps").value_or(params.eps);
        params.omega = optional_field<double>(j, "omega").value_or(params.omega);
        BuiltinProblem built = builtin_example(*cfg.example, params);
        cfg.spec = built.spec;
        cfg.exact = built.exact;
        if (j.contains("beta")) cfg.spec.beta = ScalarFunction::from_expression(beta, 'x');
        // The attached exact pair only holds for beta = 1.
        if (j.contains("beta") && cfg.spec.beta.constant_value() != 1.0) cfg.exact.reset();
        cfg.spec.horizon = horizon;
        validate_spec(cfg.spec);
    } else {
        cfg.spec = spec_from_expressions(g, q, beta, horizon);
    }

    cfg.dxi = optional_field<double>(j, "dxi").value_or(cfg.dxi);
    cfg.dt = optional_field<double>(j, "dt");
    cfg.iteration.op = OperatorConfig(optional_field<double>(j, "alpha").value_or(0.5));
    cfg.iteration.tol = optional_field<double>(j, "tol").value_or(1e-6);
    cfg.iteration.max_iter = optional_field<int>(j, "max_iter").value_or(200);
    cfg.iteration.initial = default_initial_guess(cfg.spec, cfg.example.has_value());

    if (j.contains("initial") && !j.at("initial").is_null()) {
        const json& init = j.at("initial");
        if (!init.is_object()) throw ConfigError("'initial' must be an object");
        const auto kind = optional_field<std::string>(init, "kind").value_or("linear");
        if (kind == "linear") {
            cfg.iteration.initial = LinearSlope{optional_field<double>(init, "c").value_or(1.0)};
        } else if (kind == "flux") {
            cfg.iteration.initial = FluxIntegral{};
        } else if (kind == "file") {
            const auto path = optional_field<std::string>(init, "path");
            if (!path) throw ConfigError("initial kind 'file' needs a 'path'");
            cfg.iteration.initial = UserCurve{read_curve_csv_file(*path)};
        } else {
            throw ConfigError("unknown initial kind '" + kind + "'");
        }
    }
    cfg.iteration.validate();
    cfg.discretization();
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_run_config(buf.str());
}

}  // namespace stefan
