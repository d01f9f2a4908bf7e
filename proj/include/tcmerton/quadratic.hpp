#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

namespace tcmerton {

/// Real roots of a z^2 + b z + c = 0 (a != 0), ascending. A double root is
/// reported once.
///
/// Uses q = -(b + sign(b) sqrt(D)) / 2, roots q/a and c/q, which avoids
/// cancellation when b^2 >> 4ac; each root is then polished by one Newton
/// step, kept only if it does not increase |Q|.
inline std::vector<double> real_roots(double a, double b, double c) {
    auto Q = [&](double z) { return (a * z + b) * z + c; };
    auto polish = [&](double z) {
        const double slope = 2.0 * a * z + b;
        if (slope == 0.0) return z;
        const double next = z - Q(z) / slope;
        return std::abs(Q(next)) <= std::abs(Q(z)) ? next : z;
    };

    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) return {};
    if (disc == 0.0) return {-b / (2.0 * a)};

    const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
    std::vector<double> roots{polish(q / a), polish(c / q)};
    std::sort(roots.begin(), roots.end());
    if (roots[0] == roots[1]) roots.pop_back();
    return roots;
}

}  // namespace tcmerton
