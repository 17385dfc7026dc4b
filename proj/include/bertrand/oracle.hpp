// Brute-force equilibrium oracle.
//
// Strategy spaces are discretised on uniform grids and every payoff is
// evaluated through the general kernel (profit() on induced prices). Nothing
// here calls the closed forms of classical.hpp or quantum.hpp, so the oracle
// can be used to check them.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <stdexcept>
#include <vector>

#include "bertrand/entangled_prices.hpp"
#include "bertrand/market.hpp"
#include "bertrand/report.hpp"

namespace bertrand {

/// Uniform grid lo + j (hi - lo)/(n - 1), j = 0..n-1, plus exact injected points.
class GridSpec {
public:
    GridSpec(double lo, double hi, std::size_t n) : lo_(lo), hi_(hi), n_(n) {
        if (!(std::isfinite(lo) && std::isfinite(hi) && lo < hi))
            throw std::invalid_argument("grid requires finite lo < hi");
        if (n < 2) throw std::invalid_argument("grid requires at least 2 points");
    }

    double lo() const noexcept { return lo_; }
    double hi() const noexcept { return hi_; }
    std::size_t n() const noexcept { return n_; }
    double step() const noexcept { return (hi_ - lo_) / static_cast<double>(n_ - 1); }

    /// Adds x as an exact grid point if it lies in [lo, hi]; otherwise no-op.
    GridSpec& inject(double x) {
        if (x >= lo_ && x <= hi_) injected_.push_back(x);
        return *this;
    }

    bool contains(double x) const noexcept { return x >= lo_ && x <= hi_; }

    /// Sorted, duplicate-free points.
    std::vector<double> points() const {
        std::vector<double> pts;
        pts.reserve(n_ + injected_.size());
        const double step = this->step();
        for (std::size_t j = 0; j + 1 < n_; ++j) pts.push_back(lo_ + static_cast<double>(j) * step);
        pts.push_back(hi_);
        pts.insert(pts.end(), injected_.begin(), injected_.end());
        std::sort(pts.begin(), pts.end());
        pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
        return pts;
    }

private:
    double lo_;
    double hi_;
    std::size_t n_;
    std::vector<double> injected_;
};

/// Price grid [0, a].
inline GridSpec classical_grid(const MarketParams& m, std::size_t n) {
    return GridSpec(0.0, m.a(), n);
}

/// Action grid [0, a / cosh(gamma)]: against any rival action in the grid the
/// own induced price sweeps past every price a deviation could profit from.
inline GridSpec quantum_grid(const MarketParams& m, double gamma, std::size_t n) {
    require_valid_gamma(gamma);
    return GridSpec(0.0, m.a() / std::cosh(gamma), n);
}

/// Width of the band around an analytic threshold inside which a grid of this
/// resolution cannot be expected to resolve the verdict: twice the induced
/// price step, with the payoff slope bounded by a and normalised by a.
inline double margin_band(const GridSpec& grid, double gamma = 0.0) {
    return 2.0 * grid.step() * std::cosh(gamma);
}

/// Payoffs of the discretised game as functions of raw actions.
///
/// Classical (no gamma): actions are prices. Quantum: actions are mapped
/// through induced_prices(). Prices closer than `tie_band` are treated as a
/// tie, so rounding in the entangled mapping cannot break the symmetric split.
class DuopolyGame {
public:
    DuopolyGame(const MarketParams& m, Rationing rule, std::optional<double> gamma = std::nullopt)
        : m_(m), rule_(rule), gamma_(gamma), tie_band_(1e-12 * m.a()) {
        if (gamma_) require_valid_gamma(*gamma_);
    }

    const MarketParams& params() const noexcept { return m_; }
    Rationing rule() const noexcept { return rule_; }
    std::optional<double> gamma() const noexcept { return gamma_; }

    PriceProfile prices(double x1, double x2) const {
        PriceProfile p = gamma_ ? induced_prices({x1, x2, *gamma_}) : PriceProfile{x1, x2};
        if (std::abs(p.p1 - p.p2) <= tie_band_) p.p2 = p.p1;
        return p;
    }

    double payoff(Firm firm, double x1, double x2) const {
        return profit(m_, rule_, prices(x1, x2), firm);
    }

    /// Payoff of `firm` playing `own` while the rival plays `rival`.
    double payoff_against(Firm firm, double own, double rival) const {
        return firm == Firm::First ? payoff(firm, own, rival) : payoff(firm, rival, own);
    }

private:
    MarketParams m_;
    Rationing rule_;
    std::optional<double> gamma_;
    double tie_band_;
};

struct BestResponse {
    double action;
    double payoff;
};

/// Grid maximiser of payoff(own, opponent). Ties go to the lowest action.
template <class Payoff>
BestResponse best_response(Payoff&& payoff, double opponent_action,
                           std::span<const double> points) {
    if (points.empty()) throw std::invalid_argument("best_response needs a non-empty grid");
    BestResponse best{points.front(), payoff(points.front(), opponent_action)};
    for (std::size_t i = 1; i < points.size(); ++i) {
        const double v = payoff(points[i], opponent_action);
        if (v > best.payoff) best = {points[i], v};
    }
    return best;
}

template <class Payoff>
BestResponse best_response(Payoff&& payoff, double opponent_action, const GridSpec& grid) {
    const auto pts = grid.points();
    return best_response(std::forward<Payoff>(payoff), opponent_action, std::span<const double>(pts));
}

namespace detail {

inline EquilibriumReport verify_actions(const DuopolyGame& game, double c1, double c2,
                                        GridSpec grid, double epsilon) {
    if (!(grid.contains(c1) && grid.contains(c2)))
        throw std::invalid_argument("candidate actions must lie within the grid bounds");
    grid.inject(c1).inject(c2);
    const auto pts = grid.points();

    EquilibriumReport report;
    report.epsilon = epsilon;
    report.worst_deviation = {c1, -std::numeric_limits<double>::infinity()};

    for (Firm firm : {Firm::First, Firm::Second}) {
        const double own = firm == Firm::First ? c1 : c2;
        const double rival = firm == Firm::First ? c2 : c1;
        const auto br = best_response(
            [&](double x, double opp) { return game.payoff_against(firm, x, opp); }, rival,
            std::span<const double>(pts));
        const double gain = br.payoff - game.payoff_against(firm, own, rival);
        if (gain > report.worst_deviation.gain) report.worst_deviation = {br.action, gain};
    }
    report.verdict = report.worst_deviation.gain <= epsilon ? Verdict::Exists : Verdict::NotExists;
    return report;
}

}  // namespace detail

/// Nash check of a classical price profile by exhaustive unilateral grid deviations.
inline EquilibriumReport verify_equilibrium(const MarketParams& m, Rationing rule,
                                            const PriceProfile& candidate, const GridSpec& grid,
                                            double epsilon) {
    auto report = detail::verify_actions(DuopolyGame(m, rule), candidate.p1, candidate.p2, grid,
                                         epsilon);
    report.candidate = candidate;
    return report;
}

/// Nash check of a quantum action profile; payoffs go through induced prices.
inline EquilibriumReport verify_equilibrium(const MarketParams& m, Rationing rule,
                                            const QuantumProfile& candidate, const GridSpec& grid,
                                            double epsilon) {
    auto report = detail::verify_actions(DuopolyGame(m, rule, candidate.gamma), candidate.x1,
                                         candidate.x2, grid, epsilon);
    report.candidate = candidate;
    return report;
}

struct EquilibriumPoint {
    double x1;
    double x2;
    double payoff1;
    double payoff2;
};

inline constexpr std::size_t kDefaultGridCap = 801;

/// Every pure epsilon-Nash profile of the grid game, after clustering.
///
/// A profile is epsilon-Nash when neither firm's grid best response beats it
/// by more than epsilon. Profiles that are epsilon/10-Nash seed clusters; any
/// epsilon-Nash profile within one grid step (in both coordinates) of a seed
/// joins that seed's cluster, and clusters sharing a profile merge. Each
/// cluster is reported once, at its largest joint payoff (lowest index on
/// ties). epsilon-Nash profiles not adjacent to a seed are discarded.
///
/// Candidate profiles live on the grid, but deviations are searched on the grid
/// refined `refinement` times. On the bare grid a tie one step above the
/// competitive price survives, because the only undercut available lands a
/// full step lower; finer deviations remove that artefact.
///
/// The competitive action (p^ or x^) is injected into the grid. Best responses
/// are tabulated once per rival action, so the cost is O(refinement n^2)
/// payoff calls.
inline std::vector<EquilibriumPoint> find_all_pure_equilibria(
    const MarketParams& m, Rationing rule, std::optional<double> gamma, GridSpec grid,
    double epsilon, std::size_t cap = kDefaultGridCap, std::size_t refinement = 4) {
    if (grid.n() > cap)
        throw std::length_error("grid size " + std::to_string(grid.n()) + " exceeds cap " +
                                std::to_string(cap));
    m.require_feasible();
    const DuopolyGame game(m, rule, gamma);
    grid.inject(gamma ? m.ce_price() * std::exp(-*gamma) : m.ce_price());
    const auto pts = grid.points();
    const std::size_t n = pts.size();

    if (refinement == 0) throw std::invalid_argument("deviation refinement must be >= 1");
    std::vector<double> deviations;
    deviations.reserve(refinement * n);
    for (std::size_t i = 0; i < n; ++i) {
        deviations.push_back(pts[i]);
        if (i + 1 == n) break;
        for (std::size_t q = 1; q < refinement; ++q)
            deviations.push_back(pts[i] + (pts[i + 1] - pts[i]) * static_cast<double>(q) /
                                              static_cast<double>(refinement));
    }

    std::vector<double> u1(n * n), u2(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            u1[i * n + j] = game.payoff(Firm::First, pts[i], pts[j]);
            u2[i * n + j] = game.payoff(Firm::Second, pts[i], pts[j]);
        }
    // br1[j]: firm 1's best payoff against x2 = pts[j]; br2[i] likewise for firm 2.
    std::vector<double> br1(n, -std::numeric_limits<double>::infinity());
    std::vector<double> br2(n, -std::numeric_limits<double>::infinity());
    for (double d : deviations)
        for (std::size_t j = 0; j < n; ++j) {
            br1[j] = std::max(br1[j], game.payoff(Firm::First, d, pts[j]));
            br2[j] = std::max(br2[j], game.payoff(Firm::Second, pts[j], d));
        }

    const auto is_nash = [&](std::size_t i, std::size_t j, double eps) {
        return u1[i * n + j] >= br1[j] - eps && u2[i * n + j] >= br2[i] - eps;
    };

    std::vector<std::size_t> cells;  // epsilon-Nash profiles, as i*n + j
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (is_nash(i, j, epsilon)) cells.push_back(i * n + j);

    std::vector<std::size_t> parent(cells.size());
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    std::vector<bool> attached(cells.size(), false);
    const auto find = [&](std::size_t c) {
        while (parent[c] != c) c = parent[c] = parent[parent[c]];
        return c;
    };
    std::vector<std::size_t> slot(n * n, cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) slot[cells[c]] = c;
    for (std::size_t s = 0; s < cells.size(); ++s) {
        const std::size_t si = cells[s] / n, sj = cells[s] % n;
        if (!is_nash(si, sj, epsilon / 10.0)) continue;
        attached[s] = true;
        for (std::size_t i = si == 0 ? 0 : si - 1; i <= std::min(si + 1, n - 1); ++i)
            for (std::size_t j = sj == 0 ? 0 : sj - 1; j <= std::min(sj + 1, n - 1); ++j) {
                const std::size_t c = slot[i * n + j];
                if (c == cells.size()) continue;
                attached[c] = true;
                parent[find(c)] = find(s);
            }
    }

    std::vector<std::size_t> representative(cells.size(), cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
        if (!attached[c]) continue;
        const std::size_t root = find(c);
        std::size_t& rep = representative[root];
        const auto joint = [&](std::size_t idx) { return u1[cells[idx]] + u2[cells[idx]]; };
        if (rep == cells.size() || joint(c) > joint(rep)) rep = c;
    }

    std::vector<EquilibriumPoint> out;
    for (std::size_t root = 0; root < cells.size(); ++root) {
        const std::size_t rep = representative[root];
        if (rep == cells.size()) continue;
        const std::size_t cell = cells[rep];
        out.push_back({pts[cell / n], pts[cell % n], u1[cell], u2[cell]});
    }
    std::sort(out.begin(), out.end(), [](const auto& l, const auto& r) {
        return l.x1 != r.x1 ? l.x1 < r.x1 : l.x2 < r.x2;
    });
    return out;
}

struct UndercutReport {
    double ce_payoff = 0.0;
    double max_payoff = -std::numeric_limits<double>::infinity();
    double worst_action = 0.0;
    std::size_t evaluated = 0;
    bool holds = true;
};

/// Checks that no grid action below the competitive action beats p^ k against
/// a rival at the competitive action. Uses the grid points strictly below it.
inline UndercutReport undercut_check(const MarketParams& m, Rationing rule,
                                     std::optional<double> gamma, const GridSpec& grid,
                                     double tolerance = 1e-12) {
    m.require_feasible();
    const DuopolyGame game(m, rule, gamma);
    const double ce_action = gamma ? m.ce_price() * std::exp(-*gamma) : m.ce_price();

    UndercutReport report;
    report.ce_payoff = m.ce_price() * m.k();
    for (double x : grid.points()) {
        if (!(x < ce_action)) break;
        const double v = game.payoff(Firm::First, x, ce_action);
        if (v > report.max_payoff) {
            report.max_payoff = v;
            report.worst_action = x;
        }
        ++report.evaluated;
    }
    report.holds = report.evaluated == 0 || report.max_payoff <= report.ce_payoff + tolerance;
    return report;
}

}  // namespace bertrand
