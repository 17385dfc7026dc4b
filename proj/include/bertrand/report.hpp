#pragma once

#include <optional>
#include <string_view>
#include <variant>

#include "bertrand/entangled_prices.hpp"
#include "bertrand/market.hpp"

namespace bertrand {

enum class Verdict { Exists, NotExists };

inline std::string_view to_string(Verdict v) noexcept {
    return v == Verdict::Exists ? "exists" : "not_exists";
}

/// A unilateral deviation and how much it gains over the candidate payoff.
struct Deviation {
    double action = 0.0;
    double gain = 0.0;
};

/// Outcome of an existence analysis, closed-form or brute force.
///
/// Invariant: verdict == Exists implies worst_deviation.gain <= epsilon, and
/// NotExists implies worst_deviation.gain > epsilon. Closed-form reports use
/// epsilon = 0 and carry the analytic deviation derivative at the candidate.
struct EquilibriumReport {
    Verdict verdict = Verdict::NotExists;
    std::variant<PriceProfile, QuantumProfile> candidate;
    std::optional<double> threshold;
    Deviation worst_deviation;
    double epsilon = 0.0;
    std::optional<double> derivative_at_candidate;

    bool exists() const noexcept { return verdict == Verdict::Exists; }
};

}  // namespace bertrand
