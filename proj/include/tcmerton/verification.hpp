/**
 * @file verification.hpp
 * @brief Independent checks of equilibria: exact-lognormal Monte Carlo,
 *        moment oracles, quadrature of the integral equation and the
 *        adjoint first-order identity.
 *
 * Under a CRRA equilibrium the wealth is a geometric Brownian motion
 *
 *   X(t) = x0 exp((r + (1 - 2p) mu^2 / (2 (1 - p)^2 sigma^2) - z) t + mu / ((1 - p) sigma) W(t)),
 *
 * so paths are sampled exactly at the grid nodes. Each path draws its normals
 * from std::mt19937_64 seeded with path_seed(seed, path index) and fed through
 * std::normal_distribution<double>; path results are reduced by pairwise
 * summation in path order, so estimates do not depend on the worker count.
 */

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "tcmerton/discounting.hpp"
#include "tcmerton/error.hpp"
#include "tcmerton/finite_horizon.hpp"
#include "tcmerton/infinite_horizon.hpp"
#include "tcmerton/parallel.hpp"
#include "tcmerton/preferences.hpp"
#include "tcmerton/quadrature.hpp"

namespace tcmerton {

struct SimConfig {
    double x0 = 1.0;
    std::size_t n_paths = 100000;
    std::size_t n_steps = 200;
    double horizon = 1.0;
    std::uint64_t seed = 42;

    friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

struct McEstimate {
    double mean;
    double std_error;
    std::size_t n_paths;
};

struct WealthPaths {
    std::size_t n_paths;
    std::size_t n_steps;
    double dt;
    std::vector<double> values;  // row-major, n_paths x (n_steps + 1)

    double at(std::size_t path, std::size_t step) const { return values[path * (n_steps + 1) + step]; }
};

/// One line of a verification report.
struct CheckResult {
    std::string name;
    double target;
    double estimate;
    double error;      // standard error for Monte Carlo checks, |residual| otherwise
    double tolerance;  // accepted |estimate - target|
    bool pass;
};

struct AdjointResidual {
    double M;
    double N;
    double residual;  // mu M + sigma N
    double relative;  // |residual| / max(|mu M|, |sigma N|), 0 when both vanish
};

inline void validate(const SimConfig& config) {
    if (!(config.x0 > 0.0)) throw Error(ErrorKind::InvalidSimConfig, "x0 must be > 0");
    if (config.n_paths < 1) throw Error(ErrorKind::InvalidSimConfig, "n_paths must be >= 1");
    if (config.n_steps < 1) throw Error(ErrorKind::InvalidSimConfig, "n_steps must be >= 1");
    if (!(config.horizon > 0.0) || !std::isfinite(config.horizon))
        throw Error(ErrorKind::InvalidSimConfig, "horizon must be > 0");
}

namespace detail {

/// Per-step drift and diffusion of log X under a constant consumption fraction.
struct LogWealthStep {
    double drift;      // r + (1 - 2p) mu^2 / (2 (1 - p)^2 sigma^2) - z
    double diffusion;  // mu / ((1 - p) sigma)
};

inline LogWealthStep log_wealth_step(const MarketParams& market, const CrraPreferences& prefs, double z) {
    const double p = prefs.p;
    const double s2 = market.sigma * market.sigma;
    return {market.r + (1.0 - 2.0 * p) * market.mu * market.mu / (2.0 * (1.0 - p) * (1.0 - p) * s2) - z,
            market.mu / ((1.0 - p) * market.sigma)};
}

class PathNoise {
public:
    PathNoise(std::uint64_t seed, std::uint64_t path) : engine_(path_seed(seed, path)) {}
    double operator()() { return normal_(engine_); }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_;
};

inline McEstimate summarize(const std::vector<double>& values) {
    const auto n = values.size();
    const double mean = pairwise_sum(values) / static_cast<double>(n);
    if (n < 2) return {mean, 0.0, n};
    std::vector<double> sq(n);
    for (std::size_t i = 0; i < n; ++i) sq[i] = (values[i] - mean) * (values[i] - mean);
    const double var = pairwise_sum(sq) / static_cast<double>(n - 1);
    return {mean, std::sqrt(var / static_cast<double>(n)), n};
}

inline std::vector<double> trapezoid_weights(std::size_t n_steps, double dt) {
    std::vector<double> w(n_steps + 1, dt);
    w.front() = 0.5 * dt;
    w.back() = 0.5 * dt;
    return w;
}

}  // namespace detail

/// Exact lognormal sampling of the equilibrium wealth on a uniform grid over
/// [0, config.horizon].
inline WealthPaths simulate_wealth(const MarketParams& market, const CrraPreferences& prefs, double z,
                                   const SimConfig& config, unsigned workers = 0) {
    validate(market);
    validate(prefs);
    validate(config);
    if (!(z >= 0.0)) throw Error(ErrorKind::OutOfRange, "consumption fraction must be >= 0");
    const auto step = detail::log_wealth_step(market, prefs, z);
    const std::size_t stride = config.n_steps + 1;
    const double dt = config.horizon / static_cast<double>(config.n_steps);
    const double drift = step.drift * dt;
    const double vol = step.diffusion * std::sqrt(dt);

    WealthPaths paths{config.n_paths, config.n_steps, dt, std::vector<double>(config.n_paths * stride)};
    parallel_for(config.n_paths, resolve_workers(workers), [&](std::size_t i) {
        detail::PathNoise noise(config.seed, i);
        double log_ratio = 0.0;
        double* row = paths.values.data() + i * stride;
        row[0] = config.x0;
        for (std::size_t j = 1; j < stride; ++j) {
            log_ratio += drift + vol * noise();
            row[j] = config.x0 * std::exp(log_ratio);
        }
    });
    return paths;
}

/// E[X(t)^p] = x0^p exp(k~ t) with k~ = p (r + mu^2 / (2 (1 - p) sigma^2) - z).
inline double moment_oracle(const MarketParams& market, const CrraPreferences& prefs, double z, double t,
                            double x0 = 1.0) {
    return std::pow(x0, prefs.p) * std::exp(detail::k_tilde(market, prefs, z) * t);
}

/// Analytic bound on \f$\int_H^\infty h(t) E[U(z X(t))] dt\f$.
inline double infinite_value_tail(const MarketParams& market, const CrraPreferences& prefs,
                                  const DiscountSpec& discount, double z, double x0, double horizon) {
    const double scale = std::pow(z * x0, prefs.p) / prefs.p;
    return std::abs(scale) * exp_weighted_tail(discount, detail::k_tilde(market, prefs, z), horizon);
}

/// Horizon whose analytic tail is below `tail_tolerance`.
inline double infinite_value_horizon(const MarketParams& market, const CrraPreferences& prefs,
                                     const DiscountSpec& discount, double z, double x0, double tail_tolerance) {
    const double scale = std::abs(std::pow(z * x0, prefs.p) / prefs.p);
    return horizon_for_tail(discount, detail::k_tilde(market, prefs, z), tail_tolerance / scale);
}

/// Monte Carlo estimate of \f$E[\int_0^H h(t) U(z X(t)) dt]\f$ with trapezoidal
/// time quadrature along each path. Throws TailTooLarge when the analytic tail
/// beyond H exceeds `tail_tolerance`.
inline McEstimate mc_infinite_value(const MarketParams& market, const CrraPreferences& prefs,
                                    const DiscountSpec& discount, double z, const SimConfig& config,
                                    double tail_tolerance, unsigned workers = 0) {
    validate(market);
    validate(prefs);
    validate(discount);
    validate(config);
    if (!(z > 0.0)) throw Error(ErrorKind::OutOfRange, "consumption fraction must be > 0");
    if (!exp_weighted_integral(discount, detail::k_tilde(market, prefs, z)).convergent)
        throw Error(ErrorKind::Divergent, "value integral diverges for this consumption fraction");
    const double tail = infinite_value_tail(market, prefs, discount, z, config.x0, config.horizon);
    if (tail > tail_tolerance)
        throw Error(ErrorKind::TailTooLarge,
                    "tail beyond H is " + std::to_string(tail) + " > " + std::to_string(tail_tolerance));

    const double p = prefs.p;
    const std::size_t n = config.n_steps;
    const double dt = config.horizon / static_cast<double>(n);
    const auto step = detail::log_wealth_step(market, prefs, z);
    const double drift = step.drift * dt;
    const double vol = step.diffusion * std::sqrt(dt);
    const double scale = std::pow(z * config.x0, p) / p;

    const auto weights = detail::trapezoid_weights(n, dt);
    std::vector<double> times(n + 1);
    for (std::size_t j = 0; j <= n; ++j) times[j] = config.horizon * double(j) / double(n);

    std::vector<double> per_path(config.n_paths);
    parallel_for(config.n_paths, resolve_workers(workers), [&](std::size_t i) {
        detail::PathNoise noise(config.seed, i);
        double log_ratio = 0.0;
        double acc = weights[0];
        for (std::size_t j = 1; j <= n; ++j) {
            log_ratio += drift + vol * noise();
            acc += weights[j] * scaled(discount, times[j], p * log_ratio);
        }
        per_path[i] = scale * acc;
    });
    return detail::summarize(per_path);
}

/// Bias of the trapezoidal rule in mc_infinite_value, computed on the expected
/// integrand: trapezoid sum of h(t) E[U(z X(t))] minus its exact integral over [0, H].
inline double infinite_value_quadrature_bias(const MarketParams& market, const CrraPreferences& prefs,
                                             const DiscountSpec& discount, double z, const SimConfig& config) {
    const double a = detail::k_tilde(market, prefs, z);
    const double scale = std::pow(z * config.x0, prefs.p) / prefs.p;
    const std::size_t n = config.n_steps;
    const double dt = config.horizon / static_cast<double>(n);
    const auto weights = detail::trapezoid_weights(n, dt);
    std::vector<double> terms(n + 1);
    for (std::size_t j = 0; j <= n; ++j) {
        const double t = config.horizon * double(j) / double(n);
        terms[j] = weights[j] * scaled(discount, t, a * t);
    }
    const double exact = exp_weighted_integral(discount, a).value - exp_weighted_tail(discount, a, config.horizon);
    return scale * (pairwise_sum(terms) - exact);
}

/// Compares mc_infinite_value with v(x0) = k x0^p / p. Accepts
/// |estimate - target| <= 3 se + |quadrature bias| + tail.
inline CheckResult mc_infinite_check(const MarketParams& market, const CrraPreferences& prefs,
                                     const DiscountSpec& discount, double z, const SimConfig& config,
                                     double tail_tolerance, unsigned workers = 0, std::string name = "mc_infinite_value") {
    const auto est = mc_infinite_value(market, prefs, discount, z, config, tail_tolerance, workers);
    const double target = std::pow(z, prefs.p - 1.0) * std::pow(config.x0, prefs.p) / prefs.p;
    const double tolerance = 3.0 * est.std_error +
                             std::abs(infinite_value_quadrature_bias(market, prefs, discount, z, config)) +
                             infinite_value_tail(market, prefs, discount, z, config.x0, config.horizon);
    return {std::move(name), target, est.mean, est.std_error, tolerance, std::abs(est.mean - target) <= tolerance};
}

/// Monte Carlo estimate of the finite-horizon integral equation at (t, x0):
///
///   E[ \int_t^T h(s - t) U(c*(s) X(s)) ds + h(T - t) U-hat(X(T)) ],
///
/// with the consumption fraction c*(s) frozen at the left node of each of the
/// config.n_steps steps on [t, T] and exact lognormal sampling inside a step.
/// config.horizon is not used; the window is [t, T].
inline McEstimate mc_finite_value(const MarketParams& market, const CrraPreferences& prefs,
                                  const DiscountSpec& discount, const FgSolution& sol, double t, double x0,
                                  const SimConfig& config, unsigned workers = 0) {
    validate(market);
    validate(prefs);
    validate(discount);
    if (sol.p != prefs.p) throw Error(ErrorKind::ValidationError, "solution was computed for a different p");
    if (!(t >= 0.0 && t <= sol.horizon)) throw Error(ErrorKind::InvalidWindow, "t must lie in [0, T]");
    if (!(x0 > 0.0)) throw Error(ErrorKind::NonPositiveWealth, "x0 must be > 0");
    if (config.n_paths < 1 || config.n_steps < 1) throw Error(ErrorKind::InvalidSimConfig, "empty simulation");

    const double p = prefs.p;
    const double terminal_weight = prefs.include_terminal ? 1.0 : 0.0;
    if (t == sol.horizon) return {terminal_weight * utility(prefs, x0), 0.0, config.n_paths};

    const std::size_t n = config.n_steps;
    const double window = sol.horizon - t;
    const double dt = window / static_cast<double>(n);
    const double invest = merton_fraction(market, prefs);
    const double base_drift = market.r + market.mu * invest - 0.5 * market.sigma * market.sigma * invest * invest;
    const double vol = market.sigma * invest * std::sqrt(dt);

    std::vector<double> consumption(n + 1);
    std::vector<double> weights = detail::trapezoid_weights(n, dt);
    for (std::size_t j = 0; j <= n; ++j) {
        const double s = j == n ? sol.horizon : t + window * double(j) / double(n);
        consumption[j] = std::pow(interpolate_fg(sol, s)[0], 1.0 / (p - 1.0));
        weights[j] *= evaluate(discount, s - t) * std::pow(consumption[j] * x0, p) / p;
    }
    const double terminal = terminal_weight * evaluate(discount, window) * std::pow(x0, p) / p;

    std::vector<double> per_path(config.n_paths);
    parallel_for(config.n_paths, resolve_workers(workers), [&](std::size_t i) {
        detail::PathNoise noise(config.seed, i);
        double log_ratio = 0.0;
        double acc = weights[0];
        for (std::size_t j = 1; j <= n; ++j) {
            log_ratio += (base_drift - consumption[j - 1]) * dt + vol * noise();
            acc += weights[j] * std::exp(p * log_ratio);
        }
        per_path[i] = acc + terminal * std::exp(p * log_ratio);
    });
    return detail::summarize(per_path);
}

/// Compares mc_finite_value with v(t, x0) from the ODE solution. Accepts
/// |estimate - target| <= 3 se + 2 dt |target|, dt = (T - t) / n_steps.
inline CheckResult mc_finite_check(const MarketParams& market, const CrraPreferences& prefs,
                                   const DiscountSpec& discount, const FgSolution& sol, double t, double x0,
                                   const SimConfig& config, unsigned workers = 0,
                                   std::string name = "mc_finite_value") {
    const auto est = mc_finite_value(market, prefs, discount, sol, t, x0, config, workers);
    const double target = value_at(sol, t, x0).v;
    const double dt = (sol.horizon - t) / static_cast<double>(config.n_steps);
    const double tolerance = 3.0 * est.std_error + 2.0 * dt * std::abs(target);
    return {std::move(name), target, est.mean, est.std_error, tolerance, std::abs(est.mean - target) <= tolerance};
}

/// mu M(t,t) + sigma N(t,t) for v = f x^p / p, with M = v_x and
/// N = sigma F1 v_xx, F1 = mu x / ((1 - p) sigma^2).
inline AdjointResidual adjoint_identity(const MarketParams& market, const CrraPreferences& prefs, double f_t,
                                        double x) {
    if (!(f_t > 0.0)) throw Error(ErrorKind::OutOfRange, "f(t) must be > 0");
    if (!(x > 0.0)) throw Error(ErrorKind::NonPositiveWealth, "x must be > 0");
    const double p = prefs.p;
    const double M = f_t * std::pow(x, p - 1.0);
    const double invest = market.mu * x / ((1.0 - p) * market.sigma * market.sigma);
    const double N = market.sigma * invest * f_t * (p - 1.0) * std::pow(x, p - 2.0);
    const double a = market.mu * M;
    const double b = market.sigma * N;
    const double scale = std::max(std::abs(a), std::abs(b));
    const double res = a + b;
    return {M, N, res, scale > 0.0 ? std::abs(res) / scale : 0.0};
}

/// Quadrature of \f$\int_0^\infty h(u) e^{k~ u} du\f$ minus 1/z; zero at equilibria.
inline double ie_quadrature_check(const MarketParams& market, const CrraPreferences& prefs,
                                  const DiscountSpec& discount, double z) {
    validate(market);
    validate(prefs);
    if (!(z > 0.0)) throw Error(ErrorKind::OutOfRange, "consumption fraction must be > 0");
    return exp_weighted_integral_quadrature(discount, detail::k_tilde(market, prefs, z)) - 1.0 / z;
}

}  // namespace tcmerton
