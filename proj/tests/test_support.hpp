// Test-only oracles. Nothing here calls the library's closed forms.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <vector>

namespace bertrand::testing {

/// Residual demand of the high-price firm from a population of discrete
/// consumers with reservation values spread uniformly over [0, a], so the
/// mass willing to pay p is a - p. The low-price firm sells k units,
/// serving willing consumers either in random arrival order (proportional)
/// or highest valuation first (efficient). Returns the mass of unserved
/// consumers still willing to pay p_high.
inline double simulate_residual(double a, double k, double p_high, double p_low,
                                std::size_t consumers, bool efficient, std::uint64_t seed) {
    const double weight = a / static_cast<double>(consumers);
    std::vector<double> willing;
    for (std::size_t m = 0; m < consumers; ++m) {
        const double v = (static_cast<double>(m) + 0.5) * weight;
        if (v >= p_low) willing.push_back(v);
    }
    if (efficient) {
        std::sort(willing.begin(), willing.end(), std::greater<>());
    } else {
        std::mt19937_64 rng(seed);
        std::shuffle(willing.begin(), willing.end(), rng);
    }
    const auto served = std::min(willing.size(), static_cast<std::size_t>(std::llround(k / weight)));
    double residual = 0.0;
    for (std::size_t i = served; i < willing.size(); ++i)
        if (willing[i] >= p_high) residual += weight;
    return residual;
}

/// Central first difference.
template <class F>
double central_diff(F&& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

/// Second central difference per h^2.
template <class F>
double second_diff(F&& f, double x, double h) {
    return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
}

struct Rng {
    std::mt19937_64 engine;
    explicit Rng(std::uint64_t seed) : engine(seed) {}
    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(engine);
    }
};

}  // namespace bertrand::testing
