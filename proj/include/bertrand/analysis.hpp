// Closed-form verdict paired with an optional brute-force confirmation.
#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"

#include "bertrand/classical.hpp"
#include "bertrand/market.hpp"
#include "bertrand/oracle.hpp"
#include "bertrand/quantum.hpp"
#include "bertrand/report.hpp"
#include "bertrand/reporting.hpp"

namespace bertrand {

enum class Agreement { NotChecked, Agree, Disagree, WithinMargin };

inline std::string_view to_string(Agreement a) noexcept {
    switch (a) {
    case Agreement::NotChecked: return "not_checked";
    case Agreement::Agree: return "agree";
    case Agreement::Disagree: return "disagree";
    case Agreement::WithinMargin: return "within_margin";
    }
    return "unknown";
}

struct Analysis {
    double a;
    double k;
    Rationing rule;
    std::optional<double> gamma;
    double ce_price;
    double ce_action;
    EquilibriumReport closed_form;
    std::optional<EquilibriumReport> oracle;
    double margin = 0.0;
    Agreement agreement = Agreement::NotChecked;

    /// Only a disagreement outside the margin band counts as failure.
    bool ok() const noexcept { return agreement != Agreement::Disagree; }
};

inline Analysis analyze(const MarketParams& m, Rationing rule, std::optional<double> gamma,
                        bool with_oracle, std::size_t grid_n, double epsilon) {
    m.require_feasible();
    Analysis out{m.a(),
                 m.k(),
                 rule,
                 gamma,
                 m.ce_price(),
                 gamma ? equilibrium_action(m, *gamma) : m.ce_price(),
                 gamma ? quantum_equilibrium_exists(m, *gamma, rule)
                       : classical_equilibrium_exists(m, rule),
                 std::nullopt};
    if (!with_oracle) return out;

    if (gamma) {
        const auto grid = quantum_grid(m, *gamma, grid_n);
        out.oracle = verify_equilibrium(m, rule, QuantumProfile{out.ce_action, out.ce_action, *gamma},
                                        grid, epsilon);
        out.margin = margin_band(grid, *gamma);
    } else {
        const auto grid = classical_grid(m, grid_n);
        out.oracle = verify_equilibrium(m, rule, PriceProfile{out.ce_price, out.ce_price}, grid,
                                        epsilon);
        out.margin = margin_band(grid);
    }
    if (out.oracle->verdict == out.closed_form.verdict)
        out.agreement = Agreement::Agree;
    else if (std::abs(m.k() - *out.closed_form.threshold) < out.margin)
        out.agreement = Agreement::WithinMargin;
    else
        out.agreement = Agreement::Disagree;
    return out;
}

inline nlohmann::json to_json(const Analysis& an) {
    nlohmann::json j;
    j["a"] = an.a;
    j["k"] = an.k;
    j["rule"] = std::string(to_string(an.rule));
    j["gamma"] = an.gamma ? nlohmann::json(*an.gamma) : nlohmann::json(nullptr);
    j["ce_price"] = an.ce_price;
    j["ce_action"] = an.ce_action;
    j["closed_form"] = to_json(an.closed_form);
    j["oracle"] = an.oracle ? to_json(*an.oracle) : nlohmann::json(nullptr);
    j["margin"] = an.margin;
    j["agreement"] = std::string(to_string(an.agreement));
    return j;
}

inline std::string summary(const Analysis& an) {
    std::string s;
    s += "model: " + std::string(an.gamma ? "quantum" : "classical") + ", " +
         std::string(to_string(an.rule)) + " rationing\n";
    s += "a = " + format_number(an.a) + ", k = " + format_number(an.k);
    if (an.gamma) s += ", gamma = " + format_number(*an.gamma);
    s += "\nCE price = " + format_number(an.ce_price) + ", CE action = " + format_number(an.ce_action);
    s += "\nthreshold = " + format_number(*an.closed_form.threshold) +
         ", deviation slope at candidate = " + format_number(*an.closed_form.derivative_at_candidate);
    s += "\nclosed form: " + std::string(to_string(an.closed_form.verdict));
    if (an.oracle) {
        s += "\noracle: " + std::string(to_string(an.oracle->verdict)) +
             " (best gain " + format_number(an.oracle->worst_deviation.gain) + " at action " +
             format_number(an.oracle->worst_deviation.action) + ")";
        s += "\nagreement: " + std::string(to_string(an.agreement));
    }
    s += '\n';
    return s;
}

}  // namespace bertrand
