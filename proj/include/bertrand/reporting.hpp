// Tabular output for the command-line tool: the k(gamma) threshold curve,
// deviation-profit curves and equilibrium reports, as CSV or JSON.
//
// CSV: header row, comma delimiter, '.' decimal point, LF line endings, every
// number printed with 12 significant digits so output is byte-reproducible.
#pragma once

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "bertrand/classical.hpp"
#include "bertrand/entangled_prices.hpp"
#include "bertrand/market.hpp"
#include "bertrand/quantum.hpp"
#include "bertrand/report.hpp"

namespace bertrand {

inline constexpr const char* kToolVersion = "1.0.0";

enum class OutputFormat { Csv, Json };

inline std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

struct SweepRow {
    double gamma;
    double k_threshold;
    double classical_proportional_threshold;
    double efficient_threshold;
};

struct SweepResult {
    double a;
    double gamma_min;
    double gamma_max;
    std::size_t steps;
    std::vector<SweepRow> rows;
};

/// k(gamma) on `steps` evenly spaced points of [gamma_min, gamma_max], with the
/// classical references a/4 and a/3.
inline SweepResult threshold_sweep(double a, double gamma_min, double gamma_max,
                                   std::size_t steps) {
    if (!(std::isfinite(a) && a > 0.0)) throw std::invalid_argument("a must be positive");
    if (!(std::isfinite(gamma_min) && gamma_min >= 0.0))
        throw std::invalid_argument("gamma-min must be finite and >= 0");
    if (!(std::isfinite(gamma_max) && gamma_max > gamma_min))
        throw std::invalid_argument("gamma-max must exceed gamma-min");
    if (steps < 2) throw std::invalid_argument("steps must be at least 2");

    SweepResult out{a, gamma_min, gamma_max, steps, {}};
    out.rows.reserve(steps);
    const double step = (gamma_max - gamma_min) / static_cast<double>(steps - 1);
    for (std::size_t j = 0; j < steps; ++j) {
        const double g = j + 1 == steps ? gamma_max : gamma_min + static_cast<double>(j) * step;
        out.rows.push_back({g, quantum_threshold(a, g),
                            classical_threshold(Rationing::Proportional, a),
                            classical_threshold(Rationing::Efficient, a)});
    }
    return out;
}

inline void write_csv(std::ostream& os, const SweepResult& r) {
    os << "gamma,k_threshold,classical_proportional_threshold,efficient_threshold\n";
    for (const auto& row : r.rows)
        os << format_number(row.gamma) << ',' << format_number(row.k_threshold) << ','
           << format_number(row.classical_proportional_threshold) << ','
           << format_number(row.efficient_threshold) << '\n';
}

inline nlohmann::json to_json(const SweepResult& r) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : r.rows)
        rows.push_back({{"gamma", row.gamma},
                        {"k_threshold", row.k_threshold},
                        {"classical_proportional_threshold", row.classical_proportional_threshold},
                        {"efficient_threshold", row.efficient_threshold}});
    return {{"metadata",
             {{"a", r.a},
              {"gamma_min", r.gamma_min},
              {"gamma_max", r.gamma_max},
              {"steps", r.steps},
              {"tool_version", kToolVersion}}},
            {"rows", std::move(rows)}};
}

/// One point of a deviation curve. `share` and `payoff` come from the closed
/// form and are empty outside its domain [x^, x_max); `payoff_from_kernel` is
/// always the general profit kernel on induced prices.
struct DeviationRow {
    double x;
    double induced_price;
    std::optional<double> share;
    std::optional<double> payoff;
    double payoff_from_kernel;
};

/// Deviation profit of firm 1 over `steps` actions in [x_min, x_max] with the
/// rival at x^. For gamma = 0 the actions are prices.
inline std::vector<DeviationRow> deviation_profile(const MarketParams& m, Rationing rule,
                                                   double gamma, double x_min, double x_max,
                                                   std::size_t steps) {
    m.require_feasible();
    require_valid_gamma(gamma);
    if (!(std::isfinite(x_min) && std::isfinite(x_max) && x_min < x_max))
        throw std::invalid_argument("deviation range requires x-min < x-max");
    if (steps < 2) throw std::invalid_argument("steps must be at least 2");

    const double x_hat = equilibrium_action(m, gamma);
    std::vector<DeviationRow> rows;
    rows.reserve(steps);
    const double step = (x_max - x_min) / static_cast<double>(steps - 1);
    for (std::size_t j = 0; j < steps; ++j) {
        const double x = j + 1 == steps ? x_max : x_min + static_cast<double>(j) * step;
        const PriceProfile prices = induced_prices({x, x_hat, gamma});
        DeviationRow row{x, prices.p1, std::nullopt, std::nullopt,
                         profit(m, rule, prices, Firm::First)};
        if (x == x_hat) row.induced_price = m.ce_price();
        try {
            const auto d = deviation_point(m, rule, gamma, x);
            row.share = d.share;
            row.payoff = d.value;
        } catch (const std::domain_error&) {
        }
        rows.push_back(row);
    }
    return rows;
}

inline void write_csv(std::ostream& os, const std::vector<DeviationRow>& rows) {
    os << "x,induced_price,share,payoff,payoff_from_kernel\n";
    const auto opt = [](const std::optional<double>& v) { return format_number(v.value_or(NAN)); };
    for (const auto& r : rows)
        os << format_number(r.x) << ',' << format_number(r.induced_price) << ',' << opt(r.share)
           << ',' << opt(r.payoff) << ',' << format_number(r.payoff_from_kernel) << '\n';
}

inline nlohmann::json to_json(const std::vector<DeviationRow>& rows) {
    const auto opt = [](const std::optional<double>& v) -> nlohmann::json {
        return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
    };
    nlohmann::json out = nlohmann::json::array();
    for (const auto& r : rows)
        out.push_back({{"x", r.x},
                       {"induced_price", r.induced_price},
                       {"share", opt(r.share)},
                       {"payoff", opt(r.payoff)},
                       {"payoff_from_kernel", r.payoff_from_kernel}});
    return out;
}

inline nlohmann::json to_json(const EquilibriumReport& r) {
    nlohmann::json j;
    j["verdict"] = std::string(to_string(r.verdict));
    if (const auto* p = std::get_if<PriceProfile>(&r.candidate))
        j["candidate"] = {{"kind", "prices"}, {"p1", p->p1}, {"p2", p->p2}};
    else if (const auto* q = std::get_if<QuantumProfile>(&r.candidate))
        j["candidate"] = {{"kind", "quantum"}, {"x1", q->x1}, {"x2", q->x2}, {"gamma", q->gamma}};
    j["threshold"] = r.threshold ? nlohmann::json(*r.threshold) : nlohmann::json(nullptr);
    j["worst_deviation"] = {{"action", r.worst_deviation.action},
                            {"gain", r.worst_deviation.gain}};
    j["epsilon"] = r.epsilon;
    j["derivative_at_candidate"] = r.derivative_at_candidate
                                       ? nlohmann::json(*r.derivative_at_candidate)
                                       : nlohmann::json(nullptr);
    return j;
}

}  // namespace bertrand
