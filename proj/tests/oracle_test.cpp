#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "bertrand/classical.hpp"
#include "bertrand/market.hpp"
#include "bertrand/oracle.hpp"
#include "bertrand/quantum.hpp"
#include "test_support.hpp"

namespace {

using namespace bertrand;
using bertrand::testing::Rng;

constexpr Rationing kRules[] = {Rationing::Proportional, Rationing::Efficient};

TEST(GridSpec, PointsAndInjection) {
    GridSpec g(0.0, 1.0, 5);
    EXPECT_EQ(g.points(), (std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0}));
    g.inject(0.3).inject(0.5).inject(2.0);
    EXPECT_EQ(g.points(), (std::vector<double>{0.0, 0.25, 0.3, 0.5, 0.75, 1.0}));
    EXPECT_THROW(GridSpec(1.0, 1.0, 5), std::invalid_argument);
    EXPECT_THROW(GridSpec(0.0, 1.0, 1), std::invalid_argument);
}

TEST(BestResponse, TiesGoToLowestAction) {
    const std::vector<double> pts{0.0, 0.25, 0.5, 0.75, 1.0};
    const auto flat = [](double x, double) { return x < 0.3 ? 0.0 : 1.0; };
    const auto br = best_response(flat, 0.0, std::span<const double>(pts));
    EXPECT_EQ(br.action, 0.5);
    EXPECT_EQ(br.payoff, 1.0);
}

BestResponse classical_br(double k, Rationing rule) {
    const MarketParams m(1.0, k);
    const DuopolyGame game(m, rule);
    auto grid = classical_grid(m, 2001);
    grid.inject(m.ce_price());
    return best_response([&](double x, double opp) { return game.payoff(Firm::First, x, opp); },
                         m.ce_price(), grid);
}

TEST(BestResponse, ClassicalExamples) {
    const auto below = classical_br(0.2, Rationing::Proportional);
    EXPECT_DOUBLE_EQ(below.action, 0.6);
    EXPECT_NEAR(below.payoff, 0.6 * 0.2, 1e-15);

    const auto above = classical_br(0.3, Rationing::Proportional);
    EXPECT_DOUBLE_EQ(above.action, 0.5);
    EXPECT_GT(above.payoff, 0.4 * 0.3);

    const auto efficient = classical_br(0.3, Rationing::Efficient);
    EXPECT_NEAR(efficient.action, 0.4, 1e-15);
    EXPECT_NEAR(efficient.payoff, 0.4 * 0.3, 1e-15);
}

TEST(VerifyEquilibrium, Examples) {
    const MarketParams m1(1.0, 0.24);
    EXPECT_TRUE(verify_equilibrium(m1, Rationing::Proportional, PriceProfile{0.52, 0.52},
                                   classical_grid(m1, 2001), 1e-9)
                    .exists());

    for (auto [k, expect] : {std::pair{0.3, true}, std::pair{0.33, false}}) {
        const MarketParams m(1.0, k);
        const double x_hat = m.ce_price() * std::exp(-1.0);
        const auto r = verify_equilibrium(m, Rationing::Proportional, QuantumProfile{x_hat, x_hat, 1.0},
                                          quantum_grid(m, 1.0, 2001), 1e-9);
        EXPECT_EQ(r.exists(), expect) << k;
        EXPECT_EQ(r.worst_deviation.gain <= r.epsilon, expect);
        EXPECT_TRUE(std::holds_alternative<QuantumProfile>(r.candidate));
    }
}

TEST(VerifyEquilibrium, RejectsCandidateOutsideGrid) {
    const MarketParams m(1.0, 0.2);
    EXPECT_THROW(verify_equilibrium(m, Rationing::Proportional, PriceProfile{1.5, 0.6},
                                    classical_grid(m, 101), 1e-9),
                 std::invalid_argument);
}

TEST(VerifyEquilibrium, NonCeProfileIsRejected) {
    const MarketParams m(1.0, 0.2);
    for (double p : {0.5, 0.7}) {
        const auto r = verify_equilibrium(m, Rationing::Proportional, PriceProfile{p, p},
                                          classical_grid(m, 1001), 1e-9);
        EXPECT_FALSE(r.exists()) << p;
    }
}

TEST(VerifyEquilibrium, AgreesWithClassicalThreshold) {
    Rng rng(41);
    int compared = 0;
    for (int s = 0; s < 200; ++s) {
        const double a = rng.uniform(0.5, 2.0);
        const MarketParams m(a, rng.uniform(0.001, 0.499) * a);
        const auto grid = classical_grid(m, 2001);
        for (auto rule : kRules) {
            const double threshold = classical_threshold(rule, a);
            if (std::abs(m.k() - threshold) < margin_band(grid)) continue;
            const auto r = verify_equilibrium(m, rule, PriceProfile{m.ce_price(), m.ce_price()}, grid,
                                              1e-9 * a * a);
            EXPECT_EQ(r.exists(), m.k() <= threshold) << "a=" << a << " k=" << m.k();
            ++compared;
        }
    }
    EXPECT_GT(compared, 350);
}

TEST(VerifyEquilibrium, AgreesWithQuantumThreshold) {
    Rng rng(42);
    int compared = 0;
    for (int s = 0; s < 200; ++s) {
        const double a = rng.uniform(0.5, 2.0);
        const MarketParams m(a, rng.uniform(0.001, 0.499) * a);
        const double g = rng.uniform(0.0, 5.0);
        const auto grid = quantum_grid(m, g, 2001);
        const double threshold = quantum_threshold(a, g);
        if (std::abs(m.k() - threshold) < margin_band(grid, g)) continue;
        const double x_hat = equilibrium_action(m, g);
        const auto r = verify_equilibrium(m, Rationing::Proportional, QuantumProfile{x_hat, x_hat, g},
                                          grid, 1e-9 * a * a);
        EXPECT_EQ(r.exists(), m.k() <= threshold) << "a=" << a << " k=" << m.k() << " g=" << g;
        ++compared;
    }
    EXPECT_GT(compared, 180);
}

TEST(VerifyEquilibrium, QuantumEfficientKeepsClassicalBound) {
    Rng rng(43);
    for (int s = 0; s < 100; ++s) {
        const double a = rng.uniform(0.5, 2.0);
        const MarketParams m(a, rng.uniform(0.001, 0.499) * a);
        const double g = rng.uniform(0.0, 5.0);
        const auto grid = quantum_grid(m, g, 2001);
        if (std::abs(m.k() - a / 3.0) < margin_band(grid, g)) continue;
        const double x_hat = equilibrium_action(m, g);
        const auto r = verify_equilibrium(m, Rationing::Efficient, QuantumProfile{x_hat, x_hat, g},
                                          grid, 1e-9 * a * a);
        EXPECT_EQ(r.exists(), m.k() <= a / 3.0) << "a=" << a << " k=" << m.k() << " g=" << g;
    }
}

TEST(VerifyEquilibrium, RefiningTheGridKeepsVerdicts) {
    Rng rng(44);
    for (int s = 0; s < 60; ++s) {
        const double a = rng.uniform(0.5, 2.0);
        const MarketParams m(a, rng.uniform(0.001, 0.499) * a);
        const double g = s % 3 == 0 ? 0.0 : rng.uniform(0.0, 5.0);
        const auto coarse = quantum_grid(m, g, 1001);
        const auto fine = quantum_grid(m, g, 2001);
        if (std::abs(m.k() - quantum_threshold(a, g)) < margin_band(coarse, g)) continue;
        const double x_hat = equilibrium_action(m, g);
        const QuantumProfile c{x_hat, x_hat, g};
        EXPECT_EQ(verify_equilibrium(m, Rationing::Proportional, c, coarse, 1e-9).verdict,
                  verify_equilibrium(m, Rationing::Proportional, c, fine, 1e-9).verdict);
    }
}

TEST(FindAllPureEquilibria, ClassicalExamples) {
    {
        const MarketParams m(1.0, 0.2);
        const auto eqs = find_all_pure_equilibria(m, Rationing::Proportional, std::nullopt,
                                                  classical_grid(m, 401), 1e-9);
        ASSERT_EQ(eqs.size(), 1u);
        EXPECT_DOUBLE_EQ(eqs[0].x1, 0.6);
        EXPECT_DOUBLE_EQ(eqs[0].x2, 0.6);
    }
    {
        const MarketParams m(1.0, 0.3);
        EXPECT_TRUE(find_all_pure_equilibria(m, Rationing::Proportional, std::nullopt,
                                             classical_grid(m, 401), 1e-9)
                        .empty());
        const auto eqs = find_all_pure_equilibria(m, Rationing::Efficient, std::nullopt,
                                                  classical_grid(m, 401), 1e-9);
        ASSERT_EQ(eqs.size(), 1u);
        EXPECT_NEAR(eqs[0].x1, 0.4, 1e-15);
        EXPECT_NEAR(eqs[0].x2, 0.4, 1e-15);
    }
}

TEST(FindAllPureEquilibria, RespectsGridCap) {
    const MarketParams m(1.0, 0.2);
    EXPECT_THROW(find_all_pure_equilibria(m, Rationing::Proportional, std::nullopt,
                                          classical_grid(m, 802), 1e-9),
                 std::length_error);
    EXPECT_NO_THROW(find_all_pure_equilibria(m, Rationing::Proportional, std::nullopt,
                                             classical_grid(m, 101), 1e-9, 101));
}

TEST(FindAllPureEquilibria, OnlyCeProfileEverSurvives) {
    Rng rng(45);
    for (int s = 0; s < 12; ++s) {
        const double a = rng.uniform(0.5, 2.0);
        const MarketParams m(a, rng.uniform(0.05, 0.45) * a);
        const double g = rng.uniform(0.0, 2.0);
        for (auto rule : kRules) {
            const auto eqs = find_all_pure_equilibria(m, rule, g, quantum_grid(m, g, 151), 1e-9 * a * a);
            if (eqs.empty()) continue;
            ASSERT_EQ(eqs.size(), 1u);
            const double x_hat = equilibrium_action(m, g);
            EXPECT_EQ(eqs[0].x1, x_hat);
            EXPECT_EQ(eqs[0].x2, x_hat);
        }
    }
}

TEST(UndercutCheck, NeverProfitable) {
    const MarketParams m(1.0, 0.24);
    const auto classical = undercut_check(m, Rationing::Proportional, std::nullopt,
                                          classical_grid(m, 1001));
    EXPECT_TRUE(classical.holds);
    EXPECT_NEAR(classical.ce_payoff, 0.1248, 1e-15);
    EXPECT_LE(classical.max_payoff, 0.1248);
    EXPECT_GT(classical.evaluated, 500u);

    const auto quantum = undercut_check(m, Rationing::Proportional, 1.0, quantum_grid(m, 1.0, 1001));
    EXPECT_TRUE(quantum.holds);
    EXPECT_LE(quantum.max_payoff, 0.1248 + 1e-12);

    // Undercutting all the way to zero earns nothing.
    EXPECT_EQ(DuopolyGame(m, Rationing::Proportional).payoff(Firm::First, 0.0, m.ce_price()), 0.0);
}

TEST(DuopolyGame, TieBandSnapsNearlyEqualPrices) {
    const MarketParams m(1.0, 0.24);
    const DuopolyGame game(m, Rationing::Proportional);
    const double p = 0.52;
    EXPECT_EQ(game.payoff(Firm::First, p, p + 1e-15), game.payoff(Firm::First, p, p));
    EXPECT_NE(game.payoff(Firm::First, p + 1e-6, p), game.payoff(Firm::First, p, p));
}

}  // namespace
