// Closed-form existence analysis for the classical price game.
//
// With the rival at the competitive price p^ = a - 2k, the rival sells exactly
// k, so a firm raising its price to p in [p^, a) earns
//   proportional: p(a - p)/2
//   efficient:    p(a - p - k), floored at 0 once p >= a - k
// Both are concave, so the symmetric profile (p^, p^) is an equilibrium iff
// the right-derivative at p^ is nonpositive: k <= a/4 resp. k <= a/3.
#pragma once

#include <stdexcept>

#include "bertrand/market.hpp"
#include "bertrand/report.hpp"

namespace bertrand {

struct DeviationProfit {
    double price;
    double value;
    double derivative;
};

/// Profit and its slope for a firm pricing at p in [p^, a) against a rival at p^.
inline DeviationProfit deviation_profit(const MarketParams& m, Rationing rule, double p) {
    m.require_feasible();
    const double a = m.a();
    if (!(p >= m.ce_price() && p < a))
        throw std::domain_error("deviation price must lie in [a - 2k, a)");
    switch (rule) {
    case Rationing::Proportional:
        return {p, p * (a - p) / 2.0, (a - 2.0 * p) / 2.0};
    case Rationing::Efficient:
        // Above a - k the rival's k units exhaust demand and the residual is zero.
        if (p >= a - m.k()) return {p, 0.0, 0.0};
        return {p, p * (a - p - m.k()), a - m.k() - 2.0 * p};
    }
    throw std::logic_error("unreachable rationing rule");
}

/// Largest capacity for which (p^, p^) is an equilibrium.
inline double classical_threshold(Rationing rule, double a) {
    if (!(a > 0.0)) throw std::invalid_argument("demand intercept a must be positive");
    return rule == Rationing::Proportional ? a / 4.0 : a / 3.0;
}

/// Unconstrained maximiser of the deviation profit: a/2 or (a - k)/2.
inline double classical_deviation_argmax(const MarketParams& m, Rationing rule) noexcept {
    return rule == Rationing::Proportional ? m.a() / 2.0 : (m.a() - m.k()) / 2.0;
}

inline EquilibriumReport classical_equilibrium_exists(const MarketParams& m, Rationing rule) {
    m.require_feasible();
    const double p_hat = m.ce_price();
    const double threshold = classical_threshold(rule, m.a());

    EquilibriumReport report;
    report.candidate = PriceProfile{p_hat, p_hat};
    report.threshold = threshold;
    report.derivative_at_candidate = deviation_profit(m, rule, p_hat).derivative;
    report.epsilon = 0.0;

    if (m.k() <= threshold) {
        report.verdict = Verdict::Exists;
        report.worst_deviation = {p_hat, 0.0};
    } else {
        const double best = classical_deviation_argmax(m, rule);
        report.verdict = Verdict::NotExists;
        report.worst_deviation = {best, deviation_profit(m, rule, best).value - p_hat * m.k()};
    }
    return report;
}

}  // namespace bertrand
