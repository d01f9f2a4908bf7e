/**
 * @file infinite_horizon.hpp
 * @brief Stationary equilibria for CRRA utility on an infinite horizon
 *
 * A stationary equilibrium consumes a constant fraction z of wealth and
 * invests mu / ((1 - p) sigma^2) in the stock. Writing k = z^{p-1} and
 *
 *   k~(z) = p (r + mu^2 / (2 (1 - p) sigma^2) - z),
 *
 * z is an equilibrium iff 1/z = \int_0^\infty h(u) e^{k~ u} du. For the
 * exponential discount this is solved in closed form; for type I and type II
 * it reduces to a quadratic A z^2 + B z + C = 0 whose real roots are filtered
 * by positivity, integrability (rho_i > k~) and transversality.
 */

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <iterator>
#include <limits>
#include <optional>
#include <variant>
#include <vector>

#include "tcmerton/discounting.hpp"
#include "tcmerton/error.hpp"
#include "tcmerton/finite_horizon.hpp"
#include "tcmerton/preferences.hpp"
#include "tcmerton/quadratic.hpp"

namespace tcmerton {

struct QuadraticCoefficients {
    double A;
    double B;
    double C;

    double operator()(double z) const { return (A * z + B) * z + C; }
};

struct EquilibriumCandidate {
    double z;
    double k;        // z^{p-1}; NaN when z <= 0
    double k_tilde;  // p (y - z)
    bool positive = false;
    bool integrable = false;
    bool transversal = false;
    bool merton_transversal = false;  // informational only
    bool boundary = false;            // some condition held with equality

    bool accepted() const { return positive && integrable && transversal; }
};

struct MertonBaseline {
    double delta;
    EquilibriumCandidate candidate;
    bool weak_condition;     // delta > (p v 0) (mu^2 / (2 (1 - p) sigma^2) + r)
    bool merton_condition;   // delta > (p v 0) ((2 - p) mu^2 / (2 (1 - p) sigma^2) + r)
    bool verification_gap;   // equilibrium exists, optimality cannot be verified
};

struct EquilibriumReport {
    DiscountSpec discount;
    std::vector<EquilibriumCandidate> candidates;
    std::optional<MertonBaseline> baseline;  // exponential discount only

    std::vector<EquilibriumCandidate> accepted() const {
        std::vector<EquilibriumCandidate> out;
        std::copy_if(candidates.begin(), candidates.end(), std::back_inserter(out),
                     [](const EquilibriumCandidate& c) { return c.accepted(); });
        return out;
    }
};

namespace detail {

struct StrictResult {
    bool pass;
    bool boundary;
};

/// lhs > rhs, where values within a relative 1e-12 band count as equality
/// (and therefore fail).
inline StrictResult strictly_greater(double lhs, double rhs) {
    const double band = 1e-12 * std::max(std::abs(lhs), std::abs(rhs));
    const double diff = lhs - rhs;
    const bool boundary = std::abs(diff) <= band;
    return {!boundary && diff > 0.0, boundary};
}

inline double k_tilde(const MarketParams& market, const CrraPreferences& prefs, double z) {
    return prefs.p * (effective_return(market, prefs) - z);
}

/// Right-hand side of the transversality condition for one exponential rate.
inline double transversality_bound(const MarketParams& market, const CrraPreferences& prefs, double rate) {
    const double p = prefs.p;
    return market.r + (rate - (2.0 * p - 1.0) * risk_premium(market, prefs)) / (1.0 - p);
}

inline EquilibriumCandidate make_candidate(const MarketParams& market, const CrraPreferences& prefs, double z) {
    EquilibriumCandidate c{};
    c.z = z;
    c.k = z > 0.0 ? std::pow(z, prefs.p - 1.0) : std::numeric_limits<double>::quiet_NaN();
    c.k_tilde = k_tilde(market, prefs, z);
    const auto pos = strictly_greater(z, 0.0);
    c.positive = pos.pass;
    c.boundary = pos.boundary;
    return c;
}

inline double merton_threshold(const MarketParams& market, const CrraPreferences& prefs, double premium_factor) {
    return std::max(prefs.p, 0.0) * (premium_factor * risk_premium(market, prefs) + market.r);
}

}  // namespace detail

/// Closed-form exponential equilibrium z = (delta - r p - p mu^2/(2(1-p)sigma^2)) / (1 - p).
inline double exponential_consumption_fraction(const MarketParams& market, const CrraPreferences& prefs, double delta) {
    const double p = prefs.p;
    return (delta - market.r * p - p * risk_premium(market, prefs)) / (1.0 - p);
}

inline QuadraticCoefficients quadratic_coefficients(const MarketParams& market, const CrraPreferences& prefs,
                                                    const DiscountSpec& discount) {
    validate(market);
    validate(prefs);
    validate(discount);
    const double p = prefs.p;
    const double y = effective_return(market, prefs);
    // rho - r p - p mu^2 / (2 (1 - p) sigma^2)
    auto shifted = [&](double rho) { return rho - p * y; };
    return std::visit(
        overloaded{[](const Exponential&) -> QuadraticCoefficients {
                       throw Error(ErrorKind::WrongDiscountKind, "the exponential discount is solved in closed form");
                   },
                   [&](const TypeI& d) {
                       const double l = d.lambda;
                       return QuadraticCoefficients{
                           1.0 - p,
                           (2.0 * p - 1.0) * y + (l * d.rho2 + (1.0 - l) * d.rho1) / p - (d.rho1 + d.rho2),
                           -shifted(d.rho1) * shifted(d.rho2) / p};
                   },
                   [&](const TypeII& d) {
                       const double s = shifted(d.rho);
                       return QuadraticCoefficients{1.0 - p,
                                                    (2.0 * p - 1.0) * y + d.rho * (1.0 - 2.0 * p) / p + d.lambda / p,
                                                    -s * s / p};
                   }},
        discount);
}

inline MertonBaseline merton_baseline(const MarketParams& market, const CrraPreferences& prefs, double delta) {
    validate(market);
    validate(prefs);
    if (!(delta > 0.0)) throw Error(ErrorKind::NonPositiveRate, "delta must be > 0");
    auto cand = detail::make_candidate(market, prefs, exponential_consumption_fraction(market, prefs, delta));
    const auto integrable = detail::strictly_greater(delta, cand.k_tilde);
    cand.integrable = integrable.pass;
    cand.transversal = true;  // M(t) decays with the closed-form equilibrium
    const auto weak = detail::strictly_greater(delta, detail::merton_threshold(market, prefs, 1.0));
    const auto strong = detail::strictly_greater(delta, detail::merton_threshold(market, prefs, 2.0 - prefs.p));
    cand.merton_transversal = strong.pass;
    cand.boundary = cand.boundary || integrable.boundary;
    return {delta, cand, weak.pass, strong.pass, weak.pass && !strong.pass};
}

inline EquilibriumReport enumerate_equilibria(const MarketParams& market, const CrraPreferences& prefs,
                                              const DiscountSpec& discount) {
    validate(market);
    validate(prefs);
    validate(discount);
    EquilibriumReport report{discount, {}, std::nullopt};

    if (const auto* e = std::get_if<Exponential>(&discount)) {
        const auto base = merton_baseline(market, prefs, e->delta);
        report.candidates.push_back(base.candidate);
        report.baseline = base;
        return report;
    }

    std::vector<double> rates;
    if (const auto* d = std::get_if<TypeI>(&discount)) {
        rates = {d->rho1, d->rho2};
    } else {
        rates = {std::get<TypeII>(discount).rho};
    }
    const double strong_threshold = detail::merton_threshold(market, prefs, 2.0 - prefs.p);

    const auto q = quadratic_coefficients(market, prefs, discount);
    for (double z : real_roots(q.A, q.B, q.C)) {
        auto cand = detail::make_candidate(market, prefs, z);
        cand.integrable = true;
        cand.transversal = true;
        for (double rho : rates) {
            const auto integ = detail::strictly_greater(rho, cand.k_tilde);
            const auto trans = detail::strictly_greater(detail::transversality_bound(market, prefs, rho), z);
            cand.integrable = cand.integrable && integ.pass;
            cand.transversal = cand.transversal && trans.pass;
            cand.boundary = cand.boundary || integ.boundary || trans.boundary;
        }
        cand.merton_transversal = detail::strictly_greater(dominant_rate(discount), strong_threshold).pass;
        report.candidates.push_back(cand);
    }
    return report;
}

/// 1/z - \int_0^\infty h(u) e^{k~(z) u} du; zero exactly at equilibria.
inline double residual(const MarketParams& market, const CrraPreferences& prefs, const DiscountSpec& discount,
                       double z) {
    if (!(z > 0.0)) throw Error(ErrorKind::OutOfRange, "residual needs z > 0");
    const auto integral = exp_weighted_integral(discount, detail::k_tilde(market, prefs, z));
    if (!integral.convergent) throw Error(ErrorKind::Divergent, "integral diverges at this z");
    return 1.0 / z - integral.value;
}

/// Stationary pair f = k, g = alpha2 k / (K - p z - beta2) of the finite-horizon system.
inline std::array<double, 2> stationary_fg(const MarketParams& market, const CrraPreferences& prefs,
                                           const DiscountSpec& discount, double z) {
    const auto coeffs = hjb_coefficients(discount);
    const double k = std::pow(z, prefs.p - 1.0);
    const double denom = kappa(market, prefs) - prefs.p * z - coeffs.beta2;
    if (denom == 0.0) throw Error(ErrorKind::OutOfRange, "K - p z - beta2 vanishes");
    return {k, coeffs.alpha2 * k / denom};
}

}  // namespace tcmerton
