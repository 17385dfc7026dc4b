// Sampled invariant suite behind `bertrand self-check`.
//
// Each check draws from a fixed-seed generator so repeated runs print the
// same numbers.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "bertrand/classical.hpp"
#include "bertrand/market.hpp"
#include "bertrand/oracle.hpp"
#include "bertrand/quantum.hpp"
#include "bertrand/reporting.hpp"

namespace bertrand {

struct CheckResult {
    std::string name;
    bool passed;
    std::string detail;
};

namespace detail {

class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : rng_(seed) {}
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    /// Feasible (a, k): a in [0.5, 2], k in (0, a/2).
    MarketParams market() {
        const double a = uniform(0.5, 2.0);
        return {a, uniform(1e-3 * a, 0.499 * a)};
    }

private:
    std::mt19937_64 rng_;
};

inline CheckResult check(std::string name, double worst, double tol) {
    return {std::move(name), worst <= tol,
            "worst " + format_number(worst) + " vs tolerance " + format_number(tol)};
}

inline CheckResult check_count(std::string name, int failures, int total) {
    return {std::move(name), failures == 0,
            std::to_string(total - failures) + "/" + std::to_string(total) + " samples agree"};
}

}  // namespace detail

inline std::vector<CheckResult> run_self_check(std::uint64_t seed = 20240601) {
    using detail::check;
    using detail::check_count;
    detail::Sampler rng(seed);
    std::vector<CheckResult> out;
    constexpr Rationing kRules[] = {Rationing::Proportional, Rationing::Efficient};

    {
        double worst = 0.0;
        for (int s = 0; s < 2000; ++s) {
            const auto m = rng.market();
            const PriceProfile p{rng.uniform(-0.2, 1.2) * m.a(), rng.uniform(-0.2, 1.2) * m.a()};
            for (auto rule : kRules)
                worst = std::max(worst, std::abs(residual_demand(m, rule, p, Firm::First) -
                                                 residual_demand(m, rule, p.swapped(), Firm::Second)));
        }
        out.push_back(check("residual demand symmetric under firm swap", worst, 0.0));
    }
    {
        int bad = 0;
        for (int s = 0; s < 2000; ++s) {
            const auto m = rng.market();
            const double pj = rng.uniform(0.0, m.a() - m.k());
            const double pi = rng.uniform(pj, m.a());
            if (!(pi > pj)) continue;
            const PriceProfile p{pi, pj};
            if (residual_demand(m, Rationing::Efficient, p, Firm::First) >
                residual_demand(m, Rationing::Proportional, p, Firm::First) + 1e-15)
                ++bad;
        }
        out.push_back(check_count("efficient residual <= proportional residual", bad, 2000));
    }
    {
        double worst = 0.0;
        for (int s = 0; s < 500; ++s) {
            const auto m = rng.market();
            const double p_hat = m.ce_price();
            const double analytic = deviation_profit(m, Rationing::Proportional, p_hat).derivative;
            worst = std::max(worst, std::abs(analytic - 0.5 * (4.0 * m.k() - m.a())));
            const double h = 1e-6;
            const double x = p_hat + 2.0 * h;
            const double fd = (deviation_profit(m, Rationing::Proportional, x + h).value -
                               deviation_profit(m, Rationing::Proportional, x - h).value) /
                              (2.0 * h);
            const double exact = deviation_profit(m, Rationing::Proportional, x).derivative;
            worst = std::max(worst, std::abs(fd - exact) / std::max(1.0, std::abs(exact)));
        }
        out.push_back(check("classical slope at p^ equals (4k - a)/2", worst, 1e-6));
    }
    {
        double worst = 0.0;
        for (int s = 0; s < 500; ++s) {
            const auto m = rng.market();
            for (auto rule : kRules) {
                const double p = rng.uniform(m.ce_price(), m.a());
                const double kernel = profit(m, rule, {p, m.ce_price()}, Firm::First);
                worst = std::max(worst, std::abs(deviation_profit(m, rule, p).value - kernel));
            }
        }
        out.push_back(check("classical deviation profit matches kernel", worst, 1e-12));
    }
    {
        double worst = 0.0;
        for (int s = 0; s < 2000; ++s) {
            const auto m = rng.market();
            const double x1 = rng.uniform(-0.2, 1.2) * m.a();
            const double x2 = rng.uniform(-0.2, 1.2) * m.a();
            const auto q = induced_prices({x1, x2, 0.0});
            for (auto rule : kRules)
                worst = std::max(worst, std::abs(profit(m, rule, q, Firm::First) -
                                                 profit(m, rule, {x1, x2}, Firm::First)));
        }
        out.push_back(check("gamma = 0 recovers classical payoffs", worst, 1e-12));
    }
    {
        double worst = 0.0;
        for (int s = 0; s < 500; ++s) {
            const auto m = rng.market();
            const double gamma = rng.uniform(0.0, 5.0);
            const auto dom = deviation_domain(m, gamma);
            const double x = rng.uniform(dom.lo, dom.hi);
            const double x_hat = dom.lo;
            const auto prices = induced_prices({x, x_hat, gamma});
            if (demand(m, prices.p2) <= m.k() || !(prices.p1 > prices.p2)) continue;
            const double kernel = profit(m, Rationing::Proportional, prices, Firm::First);
            const double closed = quantum_deviation(m, gamma, x).value;
            worst = std::max(worst, std::abs(closed - kernel) / std::max(1e-12, std::abs(kernel)));
        }
        out.push_back(check("quantum deviation profit matches kernel on induced prices", worst, 1e-9));
    }
    {
        const double a = 1.0;
        bool ok = quantum_threshold(a, 0.0) == a / 4.0 &&
                  std::abs(quantum_threshold(a, 20.0) - a / 3.0) < 1e-8;
        double prev = quantum_threshold(a, 0.0);
        for (int j = 1; j <= 500; ++j) {
            const double k = quantum_threshold(a, 5.0 * j / 500.0);
            ok = ok && k > prev && k < a / 3.0;
            prev = k;
        }
        out.push_back({"k(gamma): k(0) = a/4, increasing, below and converging to a/3", ok,
                       "k(5) = " + format_number(prev)});
    }
    {
        double worst = 0.0;
        for (int s = 0; s < 500; ++s) {
            const auto m = rng.market();
            const double gamma = rng.uniform(0.0, 5.0);
            const double x_hat = equilibrium_action(m, gamma);
            const double h = 1e-7 * std::max(1.0, x_hat);
            const double fd = (quantum_deviation(m, gamma, x_hat + h).value -
                               quantum_deviation(m, gamma, x_hat).value) /
                              h;
            const double slope = quantum_slope_at_equilibrium(m, gamma);
            const double second = std::abs(quantum_deviation_second_derivative(m, gamma, x_hat));
            worst = std::max(worst, (std::abs(fd - slope) - second * h) /
                                        std::max(1.0, std::abs(slope)));
        }
        out.push_back(check("quantum slope at x^ matches one-sided difference", worst, 1e-5));
    }
    {
        int bad = 0;
        int total = 0;
        for (int s = 0; s < 500; ++s) {
            const auto m = rng.market();
            const double gamma = rng.uniform(0.0, 5.0);
            const double kg = quantum_threshold(m.a(), gamma);
            if (std::abs(m.k() - kg) < 1e-9) continue;
            ++total;
            const double slope = quantum_slope_at_equilibrium(m, gamma);
            if ((slope > 0.0) != (m.k() > kg)) ++bad;
        }
        out.push_back(check_count("sign of slope at x^ equals sign of k - k(gamma)", bad, total));
    }
    {
        double worst_first = -1.0;
        double worst_second = -1.0;
        for (int s = 0; s < 20; ++s) {
            const auto m = rng.market();
            const double gamma = rng.uniform(0.0, 5.0);
            worst_first = std::max(worst_first, sign_check_high_region(m, gamma, 100).max_value);
            const auto low = concavity_check_low_region(m, gamma, 100);
            if (!low.vacuous) worst_second = std::max(worst_second, low.max_value);
        }
        out.push_back(check("deviation profit nonincreasing where price >= a/2", worst_first, 1e-6));
        out.push_back(check("deviation profit concave where price in [p^, a/2)", worst_second, 1e-5));
    }
    {
        int bad = 0;
        int total = 0;
        for (int s = 0; s < 40; ++s) {
            const auto m = rng.market();
            const double gamma = s % 2 == 0 ? 0.0 : rng.uniform(0.0, 5.0);
            for (auto rule : kRules) {
                const auto grid = quantum_grid(m, gamma, 1001);
                const double threshold = rule == Rationing::Proportional
                                             ? quantum_threshold(m.a(), gamma)
                                             : m.a() / 3.0;
                if (std::abs(m.k() - threshold) < margin_band(grid, gamma)) continue;
                const double x_hat = equilibrium_action(m, gamma);
                const auto rep = verify_equilibrium(m, rule, QuantumProfile{x_hat, x_hat, gamma},
                                                    grid, 1e-9 * m.a() * m.a());
                ++total;
                if (rep.exists() != (m.k() <= threshold)) ++bad;
            }
        }
        out.push_back(check_count("oracle verdict at CE matches closed-form threshold", bad, total));
    }
    {
        int bad = 0;
        int total = 0;
        for (double k : {0.2, 0.3, 0.35}) {
            const MarketParams m(1.0, k);
            for (auto rule : kRules) {
                for (double gamma : {0.0, 1.0}) {
                    const auto grid = quantum_grid(m, gamma, 201);
                    const auto eqs = find_all_pure_equilibria(m, rule, gamma, grid, 1e-9);
                    const double x_hat = equilibrium_action(m, gamma);
                    ++total;
                    const bool only_ce =
                        eqs.size() == 1 && eqs[0].x1 == x_hat && eqs[0].x2 == x_hat;
                    if (!eqs.empty() && !only_ce) ++bad;
                }
            }
        }
        out.push_back(check_count("every pure equilibrium found is the CE profile", bad, total));
    }
    {
        int bad = 0;
        for (int s = 0; s < 50; ++s) {
            const auto m = rng.market();
            const double gamma = rng.uniform(0.0, 5.0);
            for (auto rule : kRules)
                if (!undercut_check(m, rule, gamma, quantum_grid(m, gamma, 401)).holds) ++bad;
        }
        out.push_back(check_count("undercutting the CE action never pays", bad, 100));
    }
    return out;
}

}  // namespace bertrand
