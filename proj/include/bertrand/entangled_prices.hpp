// Entangled price mapping: both firms' quantum actions feed into each price.
#pragma once

#include <cmath>
#include <stdexcept>

#include "bertrand/market.hpp"

namespace bertrand {

/// Quantum actions (price units) and the entanglement measure gamma >= 0.
struct QuantumProfile {
    double x1;
    double x2;
    double gamma;

    double own(Firm f) const noexcept { return f == Firm::First ? x1 : x2; }
};

inline void require_valid_gamma(double gamma) {
    if (!(std::isfinite(gamma) && gamma >= 0.0))
        throw std::invalid_argument("entanglement gamma must be finite and >= 0");
}

/// p1 = x1 cosh(g) + x2 sinh(g), p2 = x2 cosh(g) + x1 sinh(g). gamma = 0 is the identity.
inline PriceProfile induced_prices(const QuantumProfile& q) {
    require_valid_gamma(q.gamma);
    const double c = std::cosh(q.gamma);
    const double s = std::sinh(q.gamma);
    return {q.x1 * c + q.x2 * s, q.x2 * c + q.x1 * s};
}

}  // namespace bertrand
