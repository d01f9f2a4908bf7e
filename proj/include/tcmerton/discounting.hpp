/**
 * @file discounting.hpp
 * @brief Exponential and pseudo-exponential discount functions
 *
 *   Exponential   h(t) = exp(-delta t)
 *   Type I        h(t) = lambda exp(-rho1 t) + (1 - lambda) exp(-rho2 t)
 *   Type II       h(t) = (1 + lambda t) exp(-rho t)
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <type_traits>
#include <variant>

#include "tcmerton/error.hpp"

namespace tcmerton {

struct Exponential {
    double delta;

    friend bool operator==(const Exponential&, const Exponential&) = default;
};

struct TypeI {
    double lambda;  // weight on the rho1 component, in [0, 1]
    double rho1;
    double rho2;

    friend bool operator==(const TypeI&, const TypeI&) = default;
};

struct TypeII {
    double lambda;  // slope of the linear prefactor, >= 0
    double rho;

    friend bool operator==(const TypeII&, const TypeII&) = default;
};

using DiscountSpec = std::variant<Exponential, TypeI, TypeII>;

/// Coupling coefficients of the two-equation (v, w) system for a discount variant.
struct CoefficientMatrix {
    double alpha1;
    double alpha2;
    double beta1;
    double beta2;
};

/// Value of a discount-weighted exponential integral; `convergent` is false
/// when the integral diverges, in which case `value` is +inf.
struct WeightedIntegral {
    double value;
    bool convergent;
};

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

inline std::string kind_name(const DiscountSpec& spec) {
    return std::visit(overloaded{[](const Exponential&) { return std::string("exponential"); },
                                 [](const TypeI&) { return std::string("type1"); },
                                 [](const TypeII&) { return std::string("type2"); }},
                      spec);
}

inline void validate(const DiscountSpec& spec) {
    auto positive = [](double rate, const char* name) {
        if (!(rate > 0.0) || !std::isfinite(rate))
            throw Error(ErrorKind::NonPositiveRate, std::string(name) + " must be > 0");
    };
    std::visit(overloaded{
                   [&](const Exponential& e) { positive(e.delta, "delta"); },
                   [&](const TypeI& d) {
                       positive(d.rho1, "rho1");
                       positive(d.rho2, "rho2");
                       if (!(d.lambda >= 0.0 && d.lambda <= 1.0))
                           throw Error(ErrorKind::WeightOutOfRange, "type I lambda must lie in [0, 1]");
                   },
                   [&](const TypeII& d) {
                       positive(d.rho, "rho");
                       if (!(d.lambda >= 0.0) || !std::isfinite(d.lambda))
                           throw Error(ErrorKind::WeightOutOfRange, "type II lambda must be >= 0");
                   }},
               spec);
}

namespace detail {
inline void require_time(double t) {
    if (!(t >= 0.0)) throw Error(ErrorKind::NegativeTime, "discount evaluated at t < 0");
}
}  // namespace detail

inline double evaluate(const DiscountSpec& spec, double t) {
    detail::require_time(t);
    return std::visit(
        overloaded{[&](const Exponential& e) { return std::exp(-e.delta * t); },
                   [&](const TypeI& d) {
                       return d.lambda * std::exp(-d.rho1 * t) + (1.0 - d.lambda) * std::exp(-d.rho2 * t);
                   },
                   [&](const TypeII& d) { return (1.0 + d.lambda * t) * std::exp(-d.rho * t); }},
        spec);
}

/// h(t) e^{x}, combined inside each exponential so that neither factor
/// under- or overflows on its own.
inline double scaled(const DiscountSpec& spec, double t, double x) {
    return std::visit(
        overloaded{[&](const Exponential& e) { return std::exp(x - e.delta * t); },
                   [&](const TypeI& d) {
                       return d.lambda * std::exp(x - d.rho1 * t) + (1.0 - d.lambda) * std::exp(x - d.rho2 * t);
                   },
                   [&](const TypeII& d) { return (1.0 + d.lambda * t) * std::exp(x - d.rho * t); }},
        spec);
}

/// h'(t)
inline double derivative(const DiscountSpec& spec, double t) {
    detail::require_time(t);
    return std::visit(overloaded{[&](const Exponential& e) { return -e.delta * std::exp(-e.delta * t); },
                                 [&](const TypeI& d) {
                                     return -d.lambda * d.rho1 * std::exp(-d.rho1 * t) -
                                            (1.0 - d.lambda) * d.rho2 * std::exp(-d.rho2 * t);
                                 },
                                 [&](const TypeII& d) {
                                     return (d.lambda - d.rho * (1.0 + d.lambda * t)) * std::exp(-d.rho * t);
                                 }},
                      spec);
}

/// Rate of impatience -h'(t)/h(t). Constant in t only for the exponential variant.
inline double impatience_rate(const DiscountSpec& spec, double t) {
    constexpr double zero_weight = 1e-30;
    detail::require_time(t);
    if (evaluate(spec, t) <= zero_weight)
        throw Error(ErrorKind::ZeroDiscountWeight, "h(t) vanishes at t = " + std::to_string(t));
    return std::visit(overloaded{[&](const Exponential& e) { return e.delta; },
                                 [&](const TypeI& d) {
                                     // Weighted average of the two rates; stable for large t.
                                     const double w1 = d.lambda * std::exp(-d.rho1 * t);
                                     const double w2 = (1.0 - d.lambda) * std::exp(-d.rho2 * t);
                                     return (w1 * d.rho1 + w2 * d.rho2) / (w1 + w2);
                                 },
                                 [&](const TypeII& d) { return d.rho - d.lambda / (1.0 + d.lambda * t); }},
                      spec);
}

inline CoefficientMatrix hjb_coefficients(const DiscountSpec& spec) {
    validate(spec);
    return std::visit(overloaded{[](const Exponential& e) { return CoefficientMatrix{e.delta, 0.0, 0.0, 0.0}; },
                                 [](const TypeI& d) {
                                     const double l = d.lambda;
                                     return CoefficientMatrix{l * d.rho1 + (1.0 - l) * d.rho2, d.rho1 - d.rho2,
                                                              l * (1.0 - l) * (d.rho1 - d.rho2),
                                                              l * d.rho2 + (1.0 - l) * d.rho1};
                                 },
                                 [](const TypeII& d) {
                                     return CoefficientMatrix{d.rho - d.lambda, -d.lambda, d.lambda, d.rho + d.lambda};
                                 }},
                      spec);
}

/// Long-run decay rate of h: the slowest exponential carrying non-zero weight.
inline double dominant_rate(const DiscountSpec& spec) {
    return std::visit(overloaded{[](const Exponential& e) { return e.delta; },
                                 [](const TypeI& d) {
                                     if (d.lambda == 0.0) return d.rho2;
                                     if (d.lambda == 1.0) return d.rho1;
                                     return std::min(d.rho1, d.rho2);
                                 },
                                 [](const TypeII& d) { return d.rho; }},
                      spec);
}

/// Closed form of \f$\int_0^\infty h(u) e^{a u} du\f$.
///
/// Components with zero weight do not affect convergence, so type I with
/// lambda in {0, 1} behaves exactly like the surviving exponential.
inline WeightedIntegral exp_weighted_integral(const DiscountSpec& spec, double a) {
    validate(spec);
    constexpr double inf = std::numeric_limits<double>::infinity();
    return std::visit(
        overloaded{[&](const Exponential& e) {
                       if (!(e.delta > a)) return WeightedIntegral{inf, false};
                       return WeightedIntegral{1.0 / (e.delta - a), true};
                   },
                   [&](const TypeI& d) {
                       double value = 0.0;
                       if (d.lambda != 0.0) {
                           if (!(d.rho1 > a)) return WeightedIntegral{inf, false};
                           value += d.lambda / (d.rho1 - a);
                       }
                       if (d.lambda != 1.0) {
                           if (!(d.rho2 > a)) return WeightedIntegral{inf, false};
                           value += (1.0 - d.lambda) / (d.rho2 - a);
                       }
                       return WeightedIntegral{value, true};
                   },
                   [&](const TypeII& d) {
                       if (!(d.rho > a)) return WeightedIntegral{inf, false};
                       const double gap = d.rho - a;
                       return WeightedIntegral{1.0 / gap + d.lambda / (gap * gap), true};
                   }},
        spec);
}

/// Tail \f$\int_H^\infty h(u) e^{a u} du\f$ in closed form. Throws Divergent when
/// the full integral diverges.
inline double exp_weighted_tail(const DiscountSpec& spec, double a, double horizon) {
    if (!exp_weighted_integral(spec, a).convergent)
        throw Error(ErrorKind::Divergent, "exp-weighted integral diverges");
    detail::require_time(horizon);
    return std::visit(overloaded{[&](const Exponential& e) {
                                     const double c = e.delta - a;
                                     return std::exp(-c * horizon) / c;
                                 },
                                 [&](const TypeI& d) {
                                     double tail = 0.0;
                                     if (d.lambda != 0.0) {
                                         const double c = d.rho1 - a;
                                         tail += d.lambda * std::exp(-c * horizon) / c;
                                     }
                                     if (d.lambda != 1.0) {
                                         const double c = d.rho2 - a;
                                         tail += (1.0 - d.lambda) * std::exp(-c * horizon) / c;
                                     }
                                     return tail;
                                 },
                                 [&](const TypeII& d) {
                                     const double c = d.rho - a;
                                     return std::exp(-c * horizon) * ((1.0 + d.lambda * horizon) / c + d.lambda / (c * c));
                                 }},
                      spec);
}

/// Horizon H at which the analytic tail drops below `tolerance` (doubling,
/// then bisection).
inline double horizon_for_tail(const DiscountSpec& spec, double a, double tolerance) {
    if (!(tolerance > 0.0)) throw Error(ErrorKind::OutOfRange, "tail tolerance must be > 0");
    if (exp_weighted_tail(spec, a, 0.0) <= tolerance) return 0.0;
    double hi = 1.0;
    while (exp_weighted_tail(spec, a, hi) > tolerance) {
        hi *= 2.0;
        if (hi > 1e12) throw Error(ErrorKind::TailTooLarge, "no finite horizon meets the tail tolerance");
    }
    double lo = hi / 2.0;
    for (int i = 0; i < 200 && hi - lo > 1e-9 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        (exp_weighted_tail(spec, a, mid) > tolerance ? lo : hi) = mid;
    }
    return hi;
}

}  // namespace tcmerton
