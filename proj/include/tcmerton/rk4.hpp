#pragma once

#include <array>
#include <cstddef>

namespace tcmerton {

/// One classical fourth-order Runge-Kutta step of y' = rhs(t, y) with step `h`
/// (negative h integrates backward in time).
template <std::size_t N, class Rhs>
std::array<double, N> rk4_step(const Rhs& rhs, double t, const std::array<double, N>& y, double h) {
    auto axpy = [](const std::array<double, N>& base, double scale, const std::array<double, N>& dir) {
        std::array<double, N> out;
        for (std::size_t i = 0; i < N; ++i) out[i] = base[i] + scale * dir[i];
        return out;
    };
    const std::array<double, N> k1 = rhs(t, y);
    const std::array<double, N> k2 = rhs(t + 0.5 * h, axpy(y, 0.5 * h, k1));
    const std::array<double, N> k3 = rhs(t + 0.5 * h, axpy(y, 0.5 * h, k2));
    const std::array<double, N> k4 = rhs(t + h, axpy(y, h, k3));
    std::array<double, N> next;
    for (std::size_t i = 0; i < N; ++i) next[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return next;
}

}  // namespace tcmerton
