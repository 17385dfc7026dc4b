// Quantum (entangled) price game.
//
// Each firm picks an action x; prices follow the entangled mapping in
// entangled_prices.hpp. The symmetric candidate is x^ = p^ e^{-gamma}, which
// maps to (p^, p^). Against a rival fixed at x^, raising x also raises the
// rival's price, so the deviating firm's proportional share
//   g(x) = 1 - k / (a - x^ cosh(gamma) - x sinh(gamma))
// shrinks as it raises its own price. The right-derivative of the deviation
// profit at x^ is k(cosh(gamma) + e^gamma) - a e^gamma / 2, which gives the
// existence threshold k(gamma) = a e^gamma / (2(cosh(gamma) + e^gamma)),
// equivalently a / (3 + e^{-2 gamma}).
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>

#include "bertrand/entangled_prices.hpp"
#include "bertrand/market.hpp"
#include "bertrand/report.hpp"

namespace bertrand {

/// Beyond this gamma, e^{-2 gamma} underflows and k(gamma) is a/3 to the last bit.
inline constexpr double kGammaSaturation = 700.0 / 2.0;

/// x^ = (a - 2k) e^{-gamma}.
inline double equilibrium_action(const MarketParams& m, double gamma) {
    m.require_feasible();
    require_valid_gamma(gamma);
    return m.ce_price() * std::exp(-gamma);
}

/// Actions whose induced price lies in [p^, a) with the rival held at x^.
/// `hi` is exclusive.
struct ActionInterval {
    double lo;
    double hi;
};

inline ActionInterval deviation_domain(const MarketParams& m, double gamma) {
    const double x_hat = equilibrium_action(m, gamma);
    return {x_hat, (m.a() - x_hat * std::sinh(gamma)) / std::cosh(gamma)};
}

/// Action that induces price p for the deviating firm when the rival plays x^.
inline double action_for_price(const MarketParams& m, double gamma, double p) {
    const double x_hat = equilibrium_action(m, gamma);
    return (p - x_hat * std::sinh(gamma)) / std::cosh(gamma);
}

struct QuantumDeviation {
    double x;
    double induced_price;
    double share;
    double value;
};

namespace detail {

inline void require_in_domain(const MarketParams& m, double gamma, double x, double x_hat) {
    const double p = x * std::cosh(gamma) + x_hat * std::sinh(gamma);
    if (!(x >= x_hat && p < m.a()))
        throw std::domain_error("deviation action must induce a price in [a - 2k, a)");
}

// a - x^ cosh(gamma) - x sinh(gamma): demand at the rival's induced price.
inline double rival_demand(const MarketParams& m, double gamma, double x, double x_hat) {
    return m.a() - x_hat * std::cosh(gamma) - x * std::sinh(gamma);
}

}  // namespace detail

/// Proportional-rationing deviation profit pi(p~(x)) g(x) against a rival at x^.
///
/// At x = x^ the prices tie and the firm takes half of D(p^), i.e. exactly k;
/// g(x^) = 1/2 so the payoff is continuous there and right-derivatives are
/// well defined. The share is floored at 0 once the rival's induced price
/// leaves less than k of demand.
inline QuantumDeviation quantum_deviation(const MarketParams& m, double gamma, double x) {
    const double x_hat = equilibrium_action(m, gamma);
    detail::require_in_domain(m, gamma, x, x_hat);
    if (x == x_hat) {
        const double p_hat = m.ce_price();
        return {x, p_hat, 0.5, p_hat * m.k()};
    }
    const double p = x * std::cosh(gamma) + x_hat * std::sinh(gamma);
    const double share = std::max(0.0, 1.0 - m.k() / detail::rival_demand(m, gamma, x, x_hat));
    return {x, p, share, p * (m.a() - p) * share};
}

/// Residual demand D(p~(x)) g(x) of the deviating firm. At x^ this is half of
/// D(p^) = 2k, returned as k without the rounding of a - (a - 2k).
inline double quantum_residual(const MarketParams& m, double gamma, double x) {
    const auto d = quantum_deviation(m, gamma, x);
    if (x == equilibrium_action(m, gamma)) return m.k();
    return demand(m, d.induced_price) * d.share;
}

/// Efficient-rationing counterpart: the residual D(p~) - k ignores the rival's
/// price, so entanglement only rescales the action axis.
inline QuantumDeviation efficient_quantum_deviation(const MarketParams& m, double gamma, double x) {
    const double x_hat = equilibrium_action(m, gamma);
    detail::require_in_domain(m, gamma, x, x_hat);
    if (x == x_hat) {
        const double p_hat = m.ce_price();
        return {x, p_hat, 0.5, p_hat * m.k()};
    }
    const double p = x * std::cosh(gamma) + x_hat * std::sinh(gamma);
    const double d = m.a() - p;
    const double residual = std::max(0.0, d - m.k());
    return {x, p, residual / d, p * residual};
}

inline QuantumDeviation deviation_point(const MarketParams& m, Rationing rule, double gamma,
                                        double x) {
    return rule == Rationing::Proportional ? quantum_deviation(m, gamma, x)
                                           : efficient_quantum_deviation(m, gamma, x);
}

/// Analytic first derivative of quantum_deviation().value for x > x^ while g > 0.
inline double quantum_deviation_derivative(const MarketParams& m, double gamma, double x) {
    const double x_hat = equilibrium_action(m, gamma);
    const double c = std::cosh(gamma);
    const double s = std::sinh(gamma);
    const double p = x * c + x_hat * s;
    const double dr = detail::rival_demand(m, gamma, x, x_hat);
    const double g = 1.0 - m.k() / dr;
    const double dg = -m.k() * s / (dr * dr);
    const double pi = p * (m.a() - p);
    const double dpi = m.a() - 2.0 * p;
    return pi * dg + c * dpi * g;
}

/// Analytic second derivative of quantum_deviation().value for x > x^ while g > 0.
inline double quantum_deviation_second_derivative(const MarketParams& m, double gamma, double x) {
    const double x_hat = equilibrium_action(m, gamma);
    const double c = std::cosh(gamma);
    const double s = std::sinh(gamma);
    const double p = x * c + x_hat * s;
    const double dr = detail::rival_demand(m, gamma, x, x_hat);
    const double g = 1.0 - m.k() / dr;
    const double dg = -m.k() * s / (dr * dr);
    const double ddg = -2.0 * m.k() * s * s / (dr * dr * dr);
    const double pi = p * (m.a() - p);
    const double dpi = m.a() - 2.0 * p;
    return pi * ddg + 2.0 * c * dpi * dg + c * c * (-2.0) * g;
}

/// k(gamma) = a / (3 + e^{-2 gamma}); saturates to a/3 for very large gamma.
inline double quantum_threshold(double a, double gamma) {
    if (!(a > 0.0)) throw std::invalid_argument("demand intercept a must be positive");
    require_valid_gamma(gamma);
    if (gamma > kGammaSaturation) return a / 3.0;
    return a / (3.0 + std::exp(-2.0 * gamma));
}

/// The unsimplified form a e^gamma / (2(cosh gamma + e^gamma)); overflows past gamma ~ 709.
inline double quantum_threshold_unsimplified(double a, double gamma) {
    const double e = std::exp(gamma);
    return a * e / (2.0 * (std::cosh(gamma) + e));
}

/// Right-derivative of the proportional deviation profit at x^:
/// k(cosh gamma + e^gamma) - a e^gamma / 2, evaluated as e^gamma (k(3 + e^{-2 gamma}) - a) / 2.
inline double quantum_slope_at_equilibrium(const MarketParams& m, double gamma) {
    m.require_feasible();
    require_valid_gamma(gamma);
    return 0.5 * std::exp(gamma) * (m.k() * (3.0 + std::exp(-2.0 * gamma)) - m.a());
}

namespace detail {

// Golden-section maximisation of a unimodal function on [lo, hi].
template <class F>
double golden_section_argmax(F&& f, double lo, double hi, int iterations = 200) {
    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - ratio * (hi - lo);
    double x2 = lo + ratio * (hi - lo);
    double f1 = f(x1);
    double f2 = f(x2);
    for (int i = 0; i < iterations && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++i) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = f(x1);
        }
    }
    return f1 < f2 ? x2 : x1;
}

}  // namespace detail

/// Closed-form existence verdict for the symmetric candidate (x^, x^).
///
/// Proportional: exists iff k <= k(gamma). Efficient: the residual demand does
/// not depend on the rival's price, so the classical bound k <= a/3 carries
/// over unchanged. A negative verdict carries the profit-maximising deviation
/// (the deviation profit is unimodal on its domain).
inline EquilibriumReport quantum_equilibrium_exists(const MarketParams& m, double gamma,
                                                    Rationing rule = Rationing::Proportional) {
    m.require_feasible();
    const double x_hat = equilibrium_action(m, gamma);
    const double p_hat = m.ce_price();

    EquilibriumReport report;
    report.candidate = QuantumProfile{x_hat, x_hat, gamma};
    report.epsilon = 0.0;
    if (rule == Rationing::Proportional) {
        report.threshold = quantum_threshold(m.a(), gamma);
        report.derivative_at_candidate = quantum_slope_at_equilibrium(m, gamma);
    } else {
        report.threshold = m.a() / 3.0;
        report.derivative_at_candidate = std::cosh(gamma) * (m.a() - m.k() - 2.0 * p_hat);
    }

    if (m.k() <= *report.threshold) {
        report.verdict = Verdict::Exists;
        report.worst_deviation = {x_hat, 0.0};
        return report;
    }

    const auto domain = deviation_domain(m, gamma);
    double best;
    if (rule == Rationing::Proportional) {
        const double hi = std::nextafter(domain.hi, domain.lo);
        best = detail::golden_section_argmax(
            [&](double x) { return quantum_deviation(m, gamma, x).value; }, domain.lo, hi);
    } else {
        best = action_for_price(m, gamma, (m.a() - m.k()) / 2.0);
    }
    report.verdict = Verdict::NotExists;
    report.worst_deviation = {best, deviation_point(m, rule, gamma, best).value - p_hat * m.k()};
    return report;
}

/// Result of a finite-difference sweep over part of the deviation domain.
struct RegionCheck {
    double max_value = -std::numeric_limits<double>::infinity();
    std::size_t evaluated = 0;
    bool vacuous = false;
    double x_lo = 0.0;
    double x_hi = 0.0;

    bool holds(double tolerance) const noexcept { return vacuous || max_value <= tolerance; }
};

namespace detail {

// Midpoints of `samples` equal cells covering [x_lo, x_hi); the step is
// shrunk near the domain ends so stencils never leave [x^, x_max).
template <class Stencil>
RegionCheck sweep_region(const MarketParams& m, double gamma, double price_lo, double price_hi,
                         std::size_t samples, double relative_step, Stencil&& stencil) {
    if (samples == 0) throw std::invalid_argument("sample count must be positive");
    RegionCheck out;
    if (!(price_lo < price_hi)) {
        out.vacuous = true;
        return out;
    }
    const auto domain = deviation_domain(m, gamma);
    out.x_lo = std::max(domain.lo, action_for_price(m, gamma, price_lo));
    out.x_hi = std::min(domain.hi, action_for_price(m, gamma, price_hi));
    const double cell = (out.x_hi - out.x_lo) / static_cast<double>(samples);
    for (std::size_t j = 0; j < samples; ++j) {
        const double x = out.x_lo + (static_cast<double>(j) + 0.5) * cell;
        double h = relative_step * std::max(1.0, std::abs(x));
        h = std::min({h, (x - domain.lo) / 2.0, (domain.hi - x) / 2.0});
        const auto f = [&](double t) { return quantum_deviation(m, gamma, t).value; };
        out.max_value = std::max(out.max_value, stencil(f, x, h));
        ++out.evaluated;
    }
    return out;
}

}  // namespace detail

/// Largest central-difference slope of the deviation profit where p~ in [a/2, a).
/// The profit should be nonincreasing there.
inline RegionCheck sign_check_high_region(const MarketParams& m, double gamma,
                                          std::size_t samples) {
    const double lo = std::max(m.a() / 2.0, m.ce_price());
    return detail::sweep_region(m, gamma, lo, m.a(), samples, 1e-6,
                                [](auto&& f, double x, double h) {
                                    return (f(x + h) - f(x - h)) / (2.0 * h);
                                });
}

/// Largest second central difference (per h^2) where p~ in [p^, a/2).
/// Vacuous unless p^ < a/2, i.e. k > a/4.
inline RegionCheck concavity_check_low_region(const MarketParams& m, double gamma,
                                              std::size_t samples) {
    return detail::sweep_region(m, gamma, m.ce_price(), m.a() / 2.0, samples, 1e-4,
                                [](auto&& f, double x, double h) {
                                    return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
                                });
}

}  // namespace bertrand
