// bertrand: threshold curves, equilibrium checks and deviation-profit tables
// for the classical and entangled capacity-constrained price duopoly.
//
// Exit codes: 0 success, 1 oracle/closed-form disagreement or failed
// self-check, 2 invalid input or unwritable output.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "bertrand/analysis.hpp"
#include "bertrand/market.hpp"
#include "bertrand/oracle.hpp"
#include "bertrand/quantum.hpp"
#include "bertrand/reporting.hpp"
#include "bertrand/self_check.hpp"

namespace {

using namespace bertrand;

constexpr int kExitDisagree = 1;
constexpr int kExitInvalid = 2;

struct Common {
    double a = 1.0;
    double k = 0.0;
    std::string rule = "proportional";
    std::optional<double> gamma;
    std::size_t grid_n = 0;
    double epsilon = 1e-9;
    std::string format = "csv";
    std::string output;
};

void emit(const Common& c, const std::string& text) {
    if (c.output.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(c.output, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open output file: " + c.output);
    f << text;
    if (!f) throw std::runtime_error("failed writing output file: " + c.output);
}

void add_market(CLI::App* cmd, Common& c) {
    cmd->add_option("--a", c.a, "demand intercept a")->capture_default_str();
    cmd->add_option("--k", c.k, "per-firm capacity k")->required();
    cmd->add_option("--rule", c.rule, "rationing rule")
        ->check(CLI::IsMember({"proportional", "efficient"}))
        ->capture_default_str();
}

void add_output(CLI::App* cmd, Common& c) {
    cmd->add_option("--format", c.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    cmd->add_option("--output", c.output, "write to PATH instead of stdout");
}

int run_sweep(const Common& c, double gmin, double gmax, std::size_t steps) {
    const auto result = threshold_sweep(c.a, gmin, gmax, steps);
    std::ostringstream os;
    if (c.format == "json")
        os << to_json(result).dump(2) << '\n';
    else
        write_csv(os, result);
    emit(c, os.str());
    return 0;
}

int run_analyze(Common c, bool oracle) {
    const MarketParams m(c.a, c.k);
    const auto an = analyze(m, parse_rationing(c.rule), c.gamma, oracle, c.grid_n, c.epsilon);
    std::cerr << summary(an);
    emit(c, to_json(an).dump(2) + "\n");
    return an.ok() ? 0 : kExitDisagree;
}

int run_deviation(const Common& c, std::optional<double> x_min, std::optional<double> x_max,
                  std::size_t steps) {
    const MarketParams m(c.a, c.k);
    const double gamma = c.gamma.value_or(0.0);
    const auto dom = deviation_domain(m, gamma);
    const auto rows = deviation_profile(m, parse_rationing(c.rule), gamma, x_min.value_or(dom.lo),
                                        x_max.value_or(dom.hi), steps);
    std::ostringstream os;
    if (c.format == "json")
        os << to_json(rows).dump(2) << '\n';
    else
        write_csv(os, rows);
    emit(c, os.str());
    return 0;
}

int run_find(const Common& c) {
    const MarketParams m(c.a, c.k);
    m.require_feasible();
    const auto grid = c.gamma ? quantum_grid(m, *c.gamma, c.grid_n) : classical_grid(m, c.grid_n);
    const auto eqs = find_all_pure_equilibria(m, parse_rationing(c.rule), c.gamma, grid, c.epsilon);
    std::ostringstream os;
    if (c.format == "json") {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& e : eqs)
            arr.push_back({{"x1", e.x1}, {"x2", e.x2}, {"payoff1", e.payoff1}, {"payoff2", e.payoff2}});
        os << nlohmann::json{{"equilibria", arr}, {"grid_n", c.grid_n}, {"epsilon", c.epsilon}}.dump(2)
           << '\n';
    } else {
        os << "x1,x2,payoff1,payoff2\n";
        for (const auto& e : eqs)
            os << format_number(e.x1) << ',' << format_number(e.x2) << ','
               << format_number(e.payoff1) << ',' << format_number(e.payoff2) << '\n';
    }
    emit(c, os.str());
    return 0;
}

int run_self_checks() {
    int failures = 0;
    for (const auto& r : bertrand::run_self_check()) {
        std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << " (" << r.detail << ")\n";
        if (!r.passed) ++failures;
    }
    std::cout << (failures == 0 ? "all checks passed" : std::to_string(failures) + " check(s) failed")
              << '\n';
    return failures == 0 ? 0 : kExitDisagree;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Equilibrium existence in the classical and entangled Bertrand-Edgeworth duopoly"};
    app.set_version_flag("--version", std::string(bertrand::kToolVersion));
    app.require_subcommand(1);

    Common sweep_opts;
    double gamma_min = 0.0, gamma_max = 5.0;
    std::size_t sweep_steps = 501;
    auto* sweep = app.add_subcommand("threshold-sweep", "k(gamma) curve with the a/4 and a/3 reference lines");
    sweep->add_option("--a", sweep_opts.a, "demand intercept a")->capture_default_str();
    sweep->add_option("--gamma-min", gamma_min)->capture_default_str();
    sweep->add_option("--gamma-max", gamma_max)->capture_default_str();
    sweep->add_option("--steps", sweep_steps)->capture_default_str();
    add_output(sweep, sweep_opts);

    Common analyze_opts;
    analyze_opts.grid_n = 2001;
    analyze_opts.format = "json";
    bool use_oracle = false;
    auto* an = app.add_subcommand("analyze", "closed-form existence verdict, optionally confirmed by grid search");
    add_market(an, analyze_opts);
    an->add_option("--gamma", analyze_opts.gamma, "entanglement; omit for the classical game");
    an->add_flag("--oracle", use_oracle, "confirm with a brute-force best-response search");
    an->add_option("--grid-n", analyze_opts.grid_n)->capture_default_str();
    an->add_option("--epsilon", analyze_opts.epsilon)->capture_default_str();
    an->add_option("--output", analyze_opts.output, "write JSON to PATH instead of stdout");

    Common dev_opts;
    std::optional<double> x_min, x_max;
    std::size_t dev_steps = 201;
    auto* dev = app.add_subcommand("deviation-profile", "firm 1's profit while the rival stays at the CE action");
    add_market(dev, dev_opts);
    dev->add_option("--gamma", dev_opts.gamma, "entanglement (default 0)");
    dev->add_option("--x-min", x_min, "first action (default: CE action)");
    dev->add_option("--x-max", x_max, "last action (default: action inducing price a)");
    dev->add_option("--steps", dev_steps)->capture_default_str();
    add_output(dev, dev_opts);

    Common find_opts;
    find_opts.grid_n = 401;
    auto* find = app.add_subcommand("find-equilibria", "all pure equilibria of the grid game");
    add_market(find, find_opts);
    find->add_option("--gamma", find_opts.gamma, "entanglement; omit for the classical game");
    find->add_option("--grid-n", find_opts.grid_n)->capture_default_str();
    find->add_option("--epsilon", find_opts.epsilon)->capture_default_str();
    add_output(find, find_opts);

    auto* self = app.add_subcommand("self-check", "run the sampled invariant suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*sweep) return run_sweep(sweep_opts, gamma_min, gamma_max, sweep_steps);
        if (*an) return run_analyze(analyze_opts, use_oracle);
        if (*dev) return run_deviation(dev_opts, x_min, x_max, dev_steps);
        if (*find) return run_find(find_opts);
        if (*self) return run_self_checks();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalid;
    }
    return kExitInvalid;
}
