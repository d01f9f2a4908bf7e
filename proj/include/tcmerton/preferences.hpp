#pragma once

#include <cmath>
#include <string>

#include "tcmerton/error.hpp"

namespace tcmerton {

/// U(x) = x^p / p with p < 1, p != 0. `include_terminal` selects whether the
/// terminal wealth is valued by the same utility or by zero.
struct CrraPreferences {
    double p;
    bool include_terminal = true;

    friend bool operator==(const CrraPreferences&, const CrraPreferences&) = default;
};

struct MarketParams {
    double r;      // riskless rate
    double mu;     // excess return of the stock over r
    double sigma;  // stock volatility

    friend bool operator==(const MarketParams&, const MarketParams&) = default;
};

inline void validate(const CrraPreferences& prefs) {
    if (!(prefs.p < 1.0) || prefs.p == 0.0 || !std::isfinite(prefs.p))
        throw Error(ErrorKind::InvalidPreferences, "risk exponent p must satisfy p < 1 and p != 0");
}

inline void validate(const MarketParams& market) {
    if (!(market.sigma > 0.0) || !std::isfinite(market.sigma))
        throw Error(ErrorKind::InvalidMarket, "sigma must be > 0");
    if (!(market.mu >= 0.0) || !std::isfinite(market.mu))
        throw Error(ErrorKind::InvalidMarket, "mu must be >= 0");
    if (!(market.r >= 0.0) || !std::isfinite(market.r))
        throw Error(ErrorKind::InvalidMarket, "r must be >= 0");
}

inline double utility(const CrraPreferences& prefs, double x) {
    if (!(x > 0.0)) throw Error(ErrorKind::NonPositiveWealth, "utility needs x > 0");
    return std::pow(x, prefs.p) / prefs.p;
}

inline double marginal_utility(const CrraPreferences& prefs, double x) {
    if (!(x > 0.0)) throw Error(ErrorKind::NonPositiveWealth, "marginal utility needs x > 0");
    return std::pow(x, prefs.p - 1.0);
}

/// I(y), the inverse of U'.
inline double inverse_marginal(const CrraPreferences& prefs, double y) {
    if (!(y > 0.0)) throw Error(ErrorKind::NonPositiveMarginal, "inverse marginal needs y > 0");
    return std::pow(y, 1.0 / (prefs.p - 1.0));
}

/// sup_x [U(x) - x y] = ((1 - p) / p) y^{p / (p - 1)}
inline double legendre(const CrraPreferences& prefs, double y) {
    if (!(y > 0.0)) throw Error(ErrorKind::NonPositiveMarginal, "Legendre transform needs y > 0");
    const double p = prefs.p;
    return (1.0 - p) / p * std::pow(y, p / (p - 1.0));
}

/// Constant fraction of wealth held in the stock, mu / ((1 - p) sigma^2).
inline double merton_fraction(const MarketParams& market, const CrraPreferences& prefs) {
    return market.mu / ((1.0 - prefs.p) * market.sigma * market.sigma);
}

/// Risk premium term mu^2 / (2 (1 - p) sigma^2).
inline double risk_premium(const MarketParams& market, const CrraPreferences& prefs) {
    return market.mu * market.mu / (2.0 * (1.0 - prefs.p) * market.sigma * market.sigma);
}

/// y = r + mu^2 / (2 (1 - p) sigma^2): the certainty-equivalent growth rate
/// that enters every infinite-horizon formula.
inline double effective_return(const MarketParams& market, const CrraPreferences& prefs) {
    return market.r + risk_premium(market, prefs);
}

}  // namespace tcmerton
