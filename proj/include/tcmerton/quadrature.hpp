#pragma once

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "tcmerton/discounting.hpp"
#include "tcmerton/error.hpp"

namespace tcmerton {

/// Adaptive Gauss-Kronrod integral of `f` over [0, upper], split into
/// geometrically growing panels [0,1], [1,2], [2,4], ... so that fast and slow
/// exponential components are both resolved.
template <class F>
double integrate_panels(const F& f, double upper, double rel_tol = 1e-14) {
    using boost::math::quadrature::gauss_kronrod;
    double total = 0.0;
    double lo = 0.0;
    double width = 1.0;
    while (lo < upper) {
        const double hi = std::min(upper, lo + width);
        total += gauss_kronrod<double, 31>::integrate(f, lo, hi, 20, rel_tol);
        lo = hi;
        width = std::max(1.0, lo);
    }
    return total;
}

/// \f$\int_0^\infty h(u) e^{a u} du\f$ by quadrature on [0, U] with U chosen so
/// that the analytic tail is below `tail_tolerance`. The tail is not added
/// back, so the result never touches the closed form.
inline double exp_weighted_integral_quadrature(const DiscountSpec& spec, double a, double tail_tolerance = 1e-10) {
    if (!exp_weighted_integral(spec, a).convergent)
        throw Error(ErrorKind::Divergent, "exp-weighted integral diverges");
    const double upper = horizon_for_tail(spec, a, tail_tolerance);
    return integrate_panels([&](double u) { return scaled(spec, u, a * u); }, upper);
}

}  // namespace tcmerton
