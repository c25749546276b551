// Command-line front end for the VIX option engine.
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "vixopt/commands.hpp"
#include "vixopt/errors.hpp"

namespace {

struct RawArgs {
    std::string t_grid, state_grid, moneyness_grid, branch;
    double t = 0.0, state = 0.0;
};

void add_common(CLI::App* sub, vixopt::CommandOptions& o) {
    sub->add_option("--config", o.config_path, "JSON configuration file")->required();
    sub->add_option("--out", o.out, "output file (default: stdout)");
    sub->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--seed", o.seed, "random seed (Monte Carlo checks)");
}

bool given(CLI::App* sub, const std::string& name) {
    const CLI::Option* opt = sub->get_option_no_throw(name);
    return opt != nullptr && opt->count() > 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"VIX option pricing under CIR-driven variance models"};
    app.require_subcommand(1);
    vixopt::CommandOptions o;
    RawArgs raw;

    auto* futures = app.add_subcommand("futures", "futures curve by quadrature and Taylor expansion");
    add_common(futures, o);
    futures->add_option("--t-grid", raw.t_grid, "comma-separated maturities");
    futures->add_option("--state", raw.state, "initial state (overrides the config)");
    futures->add_option("--branch", raw.branch, "lower or upper (mixture vix0 start)")
        ->check(CLI::IsMember({"lower", "upper"}));

    auto* boundary = app.add_subcommand("boundary", "early exercise boundary");
    add_common(boundary, o);

    auto* price = app.add_subcommand("price", "European and American prices");
    add_common(price, o);
    price->add_option("--state", raw.state, "state to price at");
    price->add_option("--state-grid", raw.state_grid, "comma-separated states");
    price->add_option("--t", raw.t, "valuation time");

    auto* skew = app.add_subcommand("skew", "Black implied volatility skew");
    add_common(skew, o);
    skew->add_option("--moneyness-grid", raw.moneyness_grid, "comma-separated log-moneyness values");
    skew->add_option("--t", raw.t, "option maturity (default: contract maturity)");
    skew->add_option("--state", raw.state, "state");

    auto* mc = app.add_subcommand("mc-check", "compare a quadrature value to Monte Carlo");
    add_common(mc, o);
    mc->add_option("--target", o.target, "european, futures or american")
        ->check(CLI::IsMember({"european", "futures", "american"}));
    mc->add_option("--n", o.n, "number of paths")->check(CLI::Range(std::size_t{1000}, std::size_t{1} << 40));
    mc->add_option("--steps", o.mc_steps, "time steps for the American policy")->check(CLI::Range(50, 1000000));
    mc->add_option("--t", raw.t, "valuation time or maturity");
    mc->add_option("--state", raw.state, "state");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : vixopt::kExitConfig;
    }

    CLI::App* sub = app.get_subcommands().front();
    try {
        if (!raw.t_grid.empty()) o.t_grid = vixopt::parse_grid(raw.t_grid);
        if (!raw.state_grid.empty()) o.state_grid = vixopt::parse_grid(raw.state_grid);
        if (!raw.moneyness_grid.empty()) o.moneyness_grid = vixopt::parse_grid(raw.moneyness_grid);
    } catch (const vixopt::ConfigError& e) {
        std::cerr << "{\"error\":\"" << e.what() << "\",\"kind\":\"argument\",\"exit_code\":2}\n";
        return vixopt::kExitConfig;
    }
    if (given(sub, "--state")) o.state = raw.state;
    if (given(sub, "--t")) o.t = raw.t;
    if (!raw.branch.empty()) o.branch = raw.branch == "lower" ? vixopt::Branch::Lower : vixopt::Branch::Upper;

    return vixopt::run_command(sub->get_name(), o, std::cout, std::cerr);
}
