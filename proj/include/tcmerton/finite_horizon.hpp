/**
 * @file finite_horizon.hpp
 * @brief Finite-horizon equilibrium for CRRA utility
 *
 * With v(t,x) = f(t) x^p / p and w(t,x) = g(t) x^p / p the coupled (v, w)
 * system reduces to the ODE pair
 *
 *   f' + K f + (1 - p) f^{p/(p-1)} = alpha1 f + beta1 g
 *   g' + K g - p g f^{1/(p-1)}     = alpha2 f + beta2 g
 *
 * with f(T) = 1, g(T) = 0 and K = r p + p mu^2 / (2 (1 - p) sigma^2). The
 * equilibrium invests mu / ((1 - p) sigma^2) of wealth in the stock and
 * consumes the fraction f(t)^{1/(p-1)}.
 */

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "tcmerton/discounting.hpp"
#include "tcmerton/error.hpp"
#include "tcmerton/preferences.hpp"
#include "tcmerton/rk4.hpp"

namespace tcmerton {

/// f is considered blown up once it leaves [kMinF, kMaxF].
inline constexpr double kMinF = 1e-8;
inline constexpr double kMaxF = 1e8;

inline double kappa(const MarketParams& market, const CrraPreferences& prefs) {
    return market.r * prefs.p + prefs.p * risk_premium(market, prefs);
}

/// Right-hand side of the (f, g) system written as y' = F(y).
struct FgSystem {
    double K;
    double p;
    CoefficientMatrix coeffs;

    std::array<double, 2> operator()(double /*t*/, const std::array<double, 2>& y) const {
        const double f = y[0];
        const double g = y[1];
        const double df = (coeffs.alpha1 - K) * f + coeffs.beta1 * g - (1.0 - p) * std::pow(f, p / (p - 1.0));
        const double dg = coeffs.alpha2 * f + (coeffs.beta2 - K) * g + p * g * std::pow(f, 1.0 / (p - 1.0));
        return {df, dg};
    }
};

struct FgSolution {
    double horizon;
    double K;
    double p;
    std::vector<double> t;  // ascending, t.front() == 0, t.back() == horizon
    std::vector<double> f;
    std::vector<double> g;
};

struct FiniteEquilibriumPolicy {
    double investment_fraction;
    std::vector<double> t;
    std::vector<double> consumption_fraction;
};

struct ValuePair {
    double v;
    double w;
};

/// Consumption plan of the self at `planning_time` over s in [planning_time, T].
struct NaiveCurve {
    double planning_time;
    std::vector<double> s;
    std::vector<double> c;

    /// Value at an exact node of the curve; throws OutOfRange otherwise.
    double at(double node) const {
        auto it = std::lower_bound(s.begin(), s.end(), node);
        if (it == s.end() || *it != node) throw Error(ErrorKind::OutOfRange, "s is not a node of the curve");
        return c[static_cast<std::size_t>(it - s.begin())];
    }
};

namespace detail {

inline void check_grid(double horizon, int steps) {
    if (!(horizon > 0.0) || !std::isfinite(horizon)) throw Error(ErrorKind::InvalidHorizon, "T must be > 0");
    if (steps < 10) throw Error(ErrorKind::InvalidHorizon, "at least 10 grid steps are required");
}

inline double grid_node(double horizon, int steps, int i) {
    return horizon * static_cast<double>(i) / static_cast<double>(steps);
}

inline void check_bounds(double f, double t) {
    if (!std::isfinite(f) || f < kMinF || f > kMaxF)
        throw Error(ErrorKind::BlowUp, "f left [1e-8, 1e8] at t = " + std::to_string(t) + " (f = " + std::to_string(f) + ")");
}

}  // namespace detail

inline FgSolution solve_fg(const MarketParams& market, const CrraPreferences& prefs, const DiscountSpec& discount,
                           double horizon, int steps) {
    validate(market);
    validate(prefs);
    validate(discount);
    detail::check_grid(horizon, steps);
    if (!prefs.include_terminal)
        throw Error(ErrorKind::ValidationError, "the finite-horizon CRRA reduction needs terminal utility U-hat = U");

    const FgSystem system{kappa(market, prefs), prefs.p, hjb_coefficients(discount)};
    const auto n = static_cast<std::size_t>(steps);
    FgSolution sol{horizon, system.K, prefs.p, std::vector<double>(n + 1), std::vector<double>(n + 1),
                   std::vector<double>(n + 1)};
    for (int i = 0; i <= steps; ++i) sol.t[static_cast<std::size_t>(i)] = detail::grid_node(horizon, steps, i);

    std::array<double, 2> y{1.0, 0.0};
    sol.f[n] = y[0];
    sol.g[n] = y[1];
    for (std::size_t i = n; i-- > 0;) {
        y = rk4_step(system, sol.t[i + 1], y, sol.t[i] - sol.t[i + 1]);
        detail::check_bounds(y[0], sol.t[i]);
        sol.f[i] = y[0];
        sol.g[i] = y[1];
    }
    return sol;
}

/// Exact f(t) for the exponential discount: m = f^{1/(1-p)} solves the linear
/// ODE m' = gamma m - 1, m(T) = 1, with gamma = (delta - K) / (1 - p).
inline double exponential_f_closed_form(const MarketParams& market, const CrraPreferences& prefs, double delta,
                                        double horizon, double t) {
    const double p = prefs.p;
    const double gamma = (delta - kappa(market, prefs)) / (1.0 - p);
    const double tau = horizon - t;
    const double m = gamma == 0.0 ? 1.0 + tau : std::exp(-gamma * tau) - std::expm1(-gamma * tau) / gamma;
    return std::pow(m, 1.0 - p);
}

inline FiniteEquilibriumPolicy policy(const FgSolution& sol, const MarketParams& market, const CrraPreferences& prefs) {
    FiniteEquilibriumPolicy out{merton_fraction(market, prefs), sol.t, {}};
    out.consumption_fraction.reserve(sol.f.size());
    for (double f : sol.f) out.consumption_fraction.push_back(std::pow(f, 1.0 / (prefs.p - 1.0)));
    return out;
}

/// (f, g) at time t, linear between grid nodes.
inline std::array<double, 2> interpolate_fg(const FgSolution& sol, double t) {
    if (!(t >= 0.0 && t <= sol.horizon)) throw Error(ErrorKind::OutOfRange, "t outside [0, T]");
    auto it = std::upper_bound(sol.t.begin(), sol.t.end(), t);
    if (it == sol.t.end()) return {sol.f.back(), sol.g.back()};
    const auto hi = static_cast<std::size_t>(it - sol.t.begin());
    const auto lo = hi - 1;
    const double w = (t - sol.t[lo]) / (sol.t[hi] - sol.t[lo]);
    return {sol.f[lo] + w * (sol.f[hi] - sol.f[lo]), sol.g[lo] + w * (sol.g[hi] - sol.g[lo])};
}

inline ValuePair value_at(const FgSolution& sol, double t, double x) {
    if (!(x > 0.0)) throw Error(ErrorKind::OutOfRange, "wealth must be > 0");
    const auto fg = interpolate_fg(sol, t);
    const double scale = std::pow(x, sol.p) / sol.p;
    return {fg[0] * scale, fg[1] * scale};
}

/// Consumption fraction the self at time `planning_time` would choose for all
/// future s if it could commit, from the CRRA form of its own HJB equation:
///
///   phi' + K phi + (h'(s-t)/h(s-t)) phi + (1 - p) phi^{p/(p-1)} = 0,  phi(T) = 1,
///
/// and c(s) = phi(s)^{1/(p-1)}. The curve lives on the global grid
/// T i / steps, so curves for different planning times share their nodes.
inline NaiveCurve naive_consumption_fraction(const MarketParams& market, const CrraPreferences& prefs,
                                             const DiscountSpec& discount, double horizon, double planning_time,
                                             int steps) {
    validate(market);
    validate(prefs);
    validate(discount);
    detail::check_grid(horizon, steps);
    if (!(planning_time >= 0.0 && planning_time < horizon))
        throw Error(ErrorKind::InvalidWindow, "planning time must lie in [0, T)");

    const double K = kappa(market, prefs);
    const double p = prefs.p;
    auto rhs = [&](double s, const std::array<double, 1>& y) {
        const double rate = impatience_rate(discount, std::max(0.0, s - planning_time));
        return std::array<double, 1>{(rate - K) * y[0] - (1.0 - p) * std::pow(y[0], p / (p - 1.0))};
    };

    int first = 0;
    while (detail::grid_node(horizon, steps, first) < planning_time) ++first;
    std::vector<double> nodes;
    if (detail::grid_node(horizon, steps, first) - planning_time > 1e-12 * horizon) nodes.push_back(planning_time);
    for (int i = first; i <= steps; ++i) nodes.push_back(detail::grid_node(horizon, steps, i));

    NaiveCurve curve{planning_time, nodes, std::vector<double>(nodes.size())};
    std::array<double, 1> phi{1.0};
    curve.c.back() = 1.0;
    for (std::size_t j = nodes.size() - 1; j-- > 0;) {
        phi = rk4_step(rhs, nodes[j + 1], phi, nodes[j] - nodes[j + 1]);
        detail::check_bounds(phi[0], nodes[j]);
        curve.c[j] = std::pow(phi[0], 1.0 / (p - 1.0));
    }
    return curve;
}

}  // namespace tcmerton
