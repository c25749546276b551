#include "vixopt/commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "vixopt/black.hpp"
#include "vixopt/config.hpp"
#include "vixopt/errors.hpp"
#include "vixopt/monte_carlo.hpp"

namespace vixopt {

namespace {

using nlohmann::json;

// Rows of numbers (or short labels) with optional metadata, written as CSV or JSON.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<json>> rows;
    json metadata = json::object();
};

std::string csv_cell(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_null()) return "nan";
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v.get<double>());
    return buf;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

void write_table(const Table& t, const std::string& format, const std::string& command, const RunConfig& cfg,
                 std::ostream& os) {
    if (format == "json") {
        json doc;
        doc["command"] = command;
        doc["config"] = cfg.name;
        doc["columns"] = t.columns;
        doc["rows"] = t.rows;
        doc["metadata"] = t.metadata;
        os << doc.dump(2) << '\n';
        return;
    }
    for (auto it = t.metadata.begin(); it != t.metadata.end(); ++it) {
        os << "# " << it.key() << '=' << (it.value().is_string() ? it.value().get<std::string>() : it.value().dump())
           << '\n';
    }
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_cell(row[i]);
        os << '\n';
    }
}

double require_state(const CommandOptions& opts, const RunConfig& cfg) {
    if (opts.state) return *opts.state;
    if (cfg.state) return *cfg.state;
    throw ConfigError("no state: give --state or a \"state\" field in the configuration");
}

Table cmd_futures(const CommandOptions& opts, const RunConfig& cfg) {
    std::vector<double> grid = opts.t_grid;
    if (grid.empty()) grid = {0.0, 0.1, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0};
    struct Start {
        std::string label;
        double state;
    };
    std::vector<Start> starts;
    const bool mixture = cfg.model.model_class() == ModelClass::Mixture;
    if (mixture && cfg.vix0 && !opts.state) {
        std::vector<Branch> branches;
        if (opts.branch) {
            branches = {*opts.branch};
        } else {
            if (!cfg.model.a1_terms().empty()) branches.push_back(Branch::Lower);
            if (!cfg.model.a2_terms().empty()) branches.push_back(Branch::Upper);
        }
        for (Branch b : branches) {
            starts.push_back({b == Branch::Lower ? "lower" : "upper", cfg.model.mixture_inverse(*cfg.vix0, b)});
        }
    } else {
        starts.push_back({"", require_state(opts, cfg)});
    }
    Table t;
    t.columns = {"T", "F_quadrature", "F_taylor", "rel_gap"};
    if (mixture) t.columns.insert(t.columns.begin(), {"branch", "y0"});
    for (const auto& s : starts) {
        for (double T : grid) {
            const double fq = futures_price(cfg.model, cfg.cir, T, s.state, cfg.quadrature);
            const double ft = T > 0.0 ? futures_taylor(cfg.model, cfg.cir, T, s.state) : fq;
            std::vector<json> row = {T, fq, ft, std::abs(ft - fq) / fq};
            if (mixture) row.insert(row.begin(), {s.label.empty() ? json("factor") : json(s.label), s.state});
            t.rows.push_back(std::move(row));
        }
    }
    return t;
}

void boundary_metadata(const Boundary& b, Table& t) {
    t.metadata["coordinate"] = b.coordinate;
    t.metadata["max_clip"] = b.max_clip;
    t.metadata["diagnostics"] = b.diagnostics;
}

void write_boundary(const Boundary& b, const std::string& format, const RunConfig& cfg, std::ostream& os) {
    if (format == "json") {
        json doc;
        doc["command"] = "boundary";
        doc["config"] = cfg.name;
        doc["coordinate"] = b.coordinate;
        doc["t"] = b.times;
        if (b.has_lower) doc["b_lower"] = b.lower;
        if (b.has_upper) doc["b_upper"] = b.upper;
        doc["max_clip"] = b.max_clip;
        doc["diagnostics"] = b.diagnostics;
        os << doc.dump(2) << '\n';
        return;
    }
    b.write_csv(os);
}

Table cmd_price(const CommandOptions& opts, const RunConfig& cfg, const PricingProblem& prob, const Boundary& b) {
    std::vector<double> grid = opts.state_grid;
    if (grid.empty()) grid = {require_state(opts, cfg)};
    const double t = opts.t.value_or(0.0);
    Table tab;
    tab.columns = {"state", "european", "american", "intrinsic"};
    std::vector<double> am;
    for (double s : grid) {
        const double e = european_price(prob, t, s, cfg.quadrature);
        const double a = american_price(prob, b, t, s, cfg.quadrature);
        am.push_back(a);
        tab.rows.push_back({s, e, a, prob.payoff(s)});
    }
    boundary_metadata(b, tab);
    tab.metadata["t"] = t;
    bool sorted = grid.size() >= 3;
    for (std::size_t i = 1; i < grid.size(); ++i) sorted = sorted && grid[i] > grid[i - 1];
    if (sorted) {
        const auto w = convexity_witness(grid, am, 1e-9);
        if (w) {
            tab.metadata["convexity_witness"] = json::array({w->x1, w->x2, w->x3});
            tab.metadata["convexity_excess"] = w->excess;
        } else {
            tab.metadata["convexity_witness"] = "none";
        }
    }
    return tab;
}

Table cmd_skew(const CommandOptions& opts, const RunConfig& cfg) {
    std::vector<double> grid = opts.moneyness_grid;
    if (grid.empty()) {
        for (int i = -6; i <= 6; ++i) grid.push_back(0.05 * i);
    }
    const double T = opts.t.value_or(cfg.contract.maturity);
    const double state = require_state(opts, cfg);
    const auto curve = skew_curve(cfg.model, cfg.cir, T, cfg.contract.rate, state, grid, cfg.quadrature);
    Table tab;
    tab.columns = {"moneyness", "implied_vol"};
    json errors = json::array();
    for (const auto& p : curve) {
        tab.rows.push_back({p.moneyness, p.ok ? number_or_null(p.implied_vol) : json(nullptr)});
        if (!p.ok) errors.push_back({{"moneyness", p.moneyness}, {"error", p.error}});
    }
    tab.metadata["maturity"] = T;
    tab.metadata["slope"] = number_or_null(skew_slope(curve));
    tab.metadata["failed_points"] = errors;
    return tab;
}

Table cmd_mc_check(const CommandOptions& opts, const RunConfig& cfg, double& z_out) {
    const double state = require_state(opts, cfg);
    double analytic = 0.0;
    McEstimate est;
    double bias = 0.0;
    if (opts.target == "european") {
        const double t = opts.t.value_or(0.0);
        analytic = european_price(cfg.model, cfg.cir, cfg.contract, t, state, cfg.quadrature);
        est = mc_european(cfg.model, cfg.cir, cfg.contract, t, state, opts.n, opts.seed);
    } else if (opts.target == "futures") {
        const double T = opts.t.value_or(cfg.contract.maturity);
        analytic = futures_price(cfg.model, cfg.cir, T, state, cfg.quadrature);
        est = mc_futures(cfg.model, cfg.cir, T, state, opts.n, opts.seed);
    } else if (opts.target == "american") {
        const PricingProblem prob(cfg.model, cfg.cir, cfg.contract);
        const Boundary b = solve_boundary(prob, cfg.solver, cfg.quadrature);
        const double t = opts.t.value_or(0.0);
        analytic = american_price(prob, b, t, state, cfg.quadrature);
        const auto rep = mc_american_policy(prob, b, t, state, opts.n, opts.mc_steps, opts.seed);
        est = rep.estimate;
        bias = rep.bias_indicator;
    } else {
        throw ConfigError("mc-check target must be european, futures or american");
    }
    const double diff = analytic - est.mean;
    double z = 0.0;
    if (est.std_error > 0.0) {
        z = diff / est.std_error;
    } else if (diff != 0.0) {
        z = std::copysign(std::numeric_limits<double>::infinity(), diff);
    }
    z_out = z;
    Table tab;
    tab.columns = {"target", "analytic", "mc_mean", "std_error", "z", "bias_indicator", "n_paths", "seed"};
    tab.rows.push_back({opts.target, analytic, est.mean, est.std_error, number_or_null(z), bias,
                        static_cast<long long>(est.n_paths), std::to_string(est.seed)});
    return tab;
}

int report(std::ostream& err, int code, const std::string& kind, const std::string& msg, double time = NAN,
           double residual = NAN) {
    json e{{"error", msg}, {"kind", kind}, {"exit_code", code}};
    if (std::isfinite(time)) e["time"] = time;
    if (std::isfinite(residual)) e["residual"] = residual;
    err << e.dump() << '\n';
    return code;
}

}  // namespace

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.find_first_not_of(" \t") == std::string::npos) continue;
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw ConfigError("not a number in grid: \"" + item + "\"");
        }
        if (item.find_first_not_of(" \t", used) != std::string::npos) {
            throw ConfigError("not a number in grid: \"" + item + "\"");
        }
        out.push_back(v);
    }
    return out;
}

int run_command(const std::string& command, const CommandOptions& opts, std::ostream& out, std::ostream& err) {
    try {
        const RunConfig cfg = load_config(opts.config_path);
        const std::string format = opts.format.empty() ? cfg.output_format : opts.format;
        if (format != "csv" && format != "json") throw ConfigError("format must be csv or json");
        const std::string path = !opts.out.empty() ? opts.out : cfg.output_path;
        std::ofstream file;
        if (!path.empty()) {
            file.open(path);
            if (!file) throw ConfigError("cannot write " + path);
        }
        std::ostream& os = path.empty() ? out : file;

        int code = kExitOk;
        if (command == "futures") {
            write_table(cmd_futures(opts, cfg), format, command, cfg, os);
        } else if (command == "boundary" || command == "price") {
            const PricingProblem prob(cfg.model, cfg.cir, cfg.contract);
            const Boundary b = solve_boundary(prob, cfg.solver, cfg.quadrature);
            if (command == "boundary") {
                write_boundary(b, format, cfg, os);
            } else {
                write_table(cmd_price(opts, cfg, prob, b), format, command, cfg, os);
            }
        } else if (command == "skew") {
            write_table(cmd_skew(opts, cfg), format, command, cfg, os);
        } else if (command == "mc-check") {
            double z = 0.0;
            write_table(cmd_mc_check(opts, cfg, z), format, command, cfg, os);
            if (!(std::abs(z) <= 4.0)) code = kExitVerification;
        } else {
            throw ConfigError("unknown command " + command);
        }
        return code;
    } catch (const ConfigError& e) {
        return report(err, kExitConfig, "config", e.what());
    } catch (const ModelError& e) {
        return report(err, kExitConfig, "model", e.what());
    } catch (const SolverError& e) {
        return report(err, kExitSolver, "solver", e.what(), e.time(), e.residual());
    } catch (const QuadratureError& e) {
        return report(err, kExitSolver, "quadrature", e.what());
    } catch (const std::invalid_argument& e) {
        return report(err, kExitConfig, "argument", e.what());
    } catch (const std::exception& e) {
        return report(err, kExitSolver, "runtime", e.what());
    }
}

}  // namespace vixopt
