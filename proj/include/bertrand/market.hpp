// Payoff kernel for the capacity-constrained price duopoly: linear demand,
// residual demand under proportional or efficient rationing, and profit.
//
// Every function here is pure; other modules evaluate payoffs only through
// profit() so that closed forms can be cross-checked against one kernel.
#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

namespace bertrand {

/// Thrown when k >= a/2, i.e. the competitive price a - 2k is not positive.
class InfeasibleMarket : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

enum class Rationing { Proportional, Efficient };

enum class Firm { First, Second };

inline constexpr Firm other(Firm f) noexcept {
    return f == Firm::First ? Firm::Second : Firm::First;
}

inline std::string_view to_string(Rationing r) noexcept {
    return r == Rationing::Proportional ? "proportional" : "efficient";
}

inline Rationing parse_rationing(std::string_view s) {
    if (s == "proportional") return Rationing::Proportional;
    if (s == "efficient") return Rationing::Efficient;
    throw std::invalid_argument("unknown rationing rule: " + std::string(s));
}

/// Demand intercept a and per-firm capacity k. Both must be positive and finite.
class MarketParams {
public:
    MarketParams(double a, double k) : a_(a), k_(k) {
        if (!(std::isfinite(a) && a > 0.0))
            throw std::invalid_argument("demand intercept a must be positive and finite");
        if (!(std::isfinite(k) && k > 0.0))
            throw std::invalid_argument("capacity k must be positive and finite");
    }

    double a() const noexcept { return a_; }
    double k() const noexcept { return k_; }

    /// Total capacity falls short of demand at price zero by a margin: k < a/2.
    bool feasible() const noexcept { return k_ < a_ / 2.0; }

    /// Competitive-equilibrium price a - 2k: total capacity meets demand exactly.
    double ce_price() const noexcept { return a_ - 2.0 * k_; }

    void require_feasible() const {
        if (!feasible())
            throw InfeasibleMarket("infeasible market: need k < a/2 (a=" + std::to_string(a_) +
                                   ", k=" + std::to_string(k_) + ")");
    }

private:
    double a_;
    double k_;
};

struct PriceProfile {
    double p1;
    double p2;

    double own(Firm f) const noexcept { return f == Firm::First ? p1 : p2; }
    double rival(Firm f) const noexcept { return own(other(f)); }
    PriceProfile swapped() const noexcept { return {p2, p1}; }
};

/// D(p) = max(0, a - p). Linear (and above a) for negative prices.
inline double demand(const MarketParams& m, double p) noexcept {
    return std::max(0.0, m.a() - p);
}

/// Demand left for `firm` given both posted prices. Ties split demand evenly;
/// the cheaper firm faces full demand and is capped by capacity in profit().
inline double residual_demand(const MarketParams& m, Rationing rule, const PriceProfile& prices,
                              Firm firm) noexcept {
    const double own = prices.own(firm);
    const double rival = prices.rival(firm);
    const double d_own = demand(m, own);
    if (own < rival) return d_own;
    if (own == rival) return d_own / 2.0;

    switch (rule) {
    case Rationing::Proportional: {
        const double d_rival = demand(m, rival);
        // Nobody is left to ration when the cheaper price already clears demand.
        if (d_rival <= 0.0) return 0.0;
        return std::max(0.0, d_own * (1.0 - m.k() / d_rival));
    }
    case Rationing::Efficient:
        return std::max(0.0, d_own - m.k());
    }
    return 0.0;
}

/// p_i * min{k, R_i}; production is costless.
inline double profit(const MarketParams& m, Rationing rule, const PriceProfile& prices,
                     Firm firm) noexcept {
    return prices.own(firm) * std::min(m.k(), residual_demand(m, rule, prices, firm));
}

}  // namespace bertrand
