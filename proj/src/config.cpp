#include "vixopt/config.hpp"

#include <fstream>

#include "vixopt/errors.hpp"

namespace vixopt {

namespace {

using nlohmann::json;

double number(const json& obj, const char* key) {
    if (!obj.contains(key)) throw ConfigError(std::string("missing field \"") + key + "\"");
    const auto& v = obj.at(key);
    if (!v.is_number()) throw ConfigError(std::string("field \"") + key + "\" must be a number");
    return v.get<double>();
}

double number_or(const json& obj, const char* key, double fallback) {
    return obj.contains(key) ? number(obj, key) : fallback;
}

std::vector<ModelTerm> parse_terms(const json& doc, const char* key) {
    std::vector<ModelTerm> out;
    if (!doc.contains(key)) return out;
    const auto& arr = doc.at(key);
    if (!arr.is_array()) throw ConfigError(std::string("\"") + key + "\" must be an array");
    for (const auto& t : arr) {
        if (!t.is_object()) throw ConfigError(std::string("entries of \"") + key + "\" must be objects");
        out.push_back({number(t, "weight"), number(t, "power")});
    }
    return out;
}

const json& section(const json& doc, const char* key) {
    if (!doc.contains(key) || !doc.at(key).is_object()) {
        throw ConfigError(std::string("missing object \"") + key + "\"");
    }
    return doc.at(key);
}

OptionSpec parse_contract(const json& c) {
    OptionSpec o;
    o.strike = number(c, "strike");
    o.maturity = number(c, "maturity");
    o.rate = number(c, "rate");
    const std::string kind = c.value("kind", std::string("call"));
    if (kind == "call") {
        o.kind = OptionKind::Call;
    } else if (kind == "put") {
        o.kind = OptionKind::Put;
    } else {
        throw ConfigError("contract kind must be \"call\" or \"put\"");
    }
    o.validate();
    return o;
}

SolverConfig parse_solver(const json& doc) {
    SolverConfig s;
    if (!doc.contains("solver")) return s;
    const auto& j = doc.at("solver");
    s.n_steps = static_cast<int>(number_or(j, "n_steps", s.n_steps));
    s.inner_tol = number_or(j, "inner_tol", s.inner_tol);
    s.max_inner_iters = static_cast<int>(number_or(j, "max_inner_iters", s.max_inner_iters));
    const std::string rule = j.value("time_rule", std::string("trapezoid"));
    if (rule == "trapezoid") {
        s.rule = TimeRule::Trapezoid;
    } else if (rule == "right_endpoint") {
        s.rule = TimeRule::RightEndpoint;
    } else {
        throw ConfigError("solver time_rule must be \"trapezoid\" or \"right_endpoint\"");
    }
    try {
        s.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return s;
}

QuadratureConfig parse_quadrature(const json& doc) {
    QuadratureConfig q;
    if (!doc.contains("quadrature")) return q;
    const auto& j = doc.at("quadrature");
    q.rel_tol = number_or(j, "rel_tol", q.rel_tol);
    q.abs_tol = number_or(j, "abs_tol", q.abs_tol);
    q.max_subdivisions = static_cast<int>(number_or(j, "max_subdivisions", q.max_subdivisions));
    q.tail_mass_cut = number_or(j, "tail_mass_cut", q.tail_mass_cut);
    const std::string method = j.value("method", std::string("series"));
    if (method == "series") {
        q.method = QuadratureMethod::Series;
    } else if (method == "adaptive") {
        q.method = QuadratureMethod::Adaptive;
    } else {
        throw ConfigError("quadrature method must be \"series\" or \"adaptive\"");
    }
    try {
        q.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return q;
}

}  // namespace

ModelSpec parse_model(const json& m) {
    const std::string cls = m.value("class", std::string());
    const auto terms = parse_terms(m, "terms");
    const auto terms_a2 = parse_terms(m, "terms_a2");
    if (cls == "A1") {
        if (!terms_a2.empty()) throw ConfigError("A1 model takes only \"terms\"");
        return ModelSpec::a1(terms);
    }
    if (cls == "A2") {
        if (!terms_a2.empty()) throw ConfigError("A2 model takes only \"terms\"");
        return ModelSpec::a2(terms);
    }
    if (cls == "mixture") return ModelSpec::mixture(terms, terms_a2);
    throw ConfigError("model class must be \"A1\", \"A2\" or \"mixture\"");
}

RunConfig parse_config(const json& doc) {
    if (!doc.is_object()) throw ConfigError("configuration must be a JSON object");
    const auto& cir = section(doc, "cir");
    RunConfig cfg{
        doc.value("name", std::string()),
        parse_model(section(doc, "model")),
        CirParams(number(cir, "alpha"), number(cir, "beta"), number(cir, "kappa")),
        parse_contract(section(doc, "contract")),
        parse_solver(doc),
        parse_quadrature(doc),
        std::nullopt,
        std::nullopt,
        {},
        "csv",
    };
    if (doc.contains("state")) cfg.state = number(doc, "state");
    if (doc.contains("vix0")) cfg.vix0 = number(doc, "vix0");
    if (doc.contains("output")) {
        const auto& o = doc.at("output");
        cfg.output_path = o.value("path", std::string());
        cfg.output_format = o.value("format", std::string("csv"));
        if (cfg.output_format != "csv" && cfg.output_format != "json") {
            throw ConfigError("output format must be \"csv\" or \"json\"");
        }
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open configuration file " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("malformed JSON in " + path + ": " + e.what());
    }
    return parse_config(doc);
}

}  // namespace vixopt
