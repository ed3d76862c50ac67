// Independent cross-checks used by the test suite. Nothing here shares code
// with the library: the barrier amplitudes come from direct RK4 integration
// of the stationary Schrodinger equation, and the free packet is the
// closed-form spreading Gaussian written out from scratch.
#pragma once

#include "tptweak/types.hpp"

#include <cmath>
#include <numbers>

namespace oracles {

using tptweak::cplx;

// Transmission/reflection amplitudes for a plane wave of momentum p incident
// from the left on potential V(x) supported in [-a, a], obtained by RK4
// integration of psi'' = 2M(V - E)/hbar^2 psi from the transmitted side
// backwards. Works for any exterior-free potential; here V is the square
// barrier of the given height.
struct BarrierAmplitudes {
    cplx t;
    cplx r;
};

inline BarrierAmplitudes rk4_square_barrier(double p, double height, double a, double mass,
                                            double hbar, int steps = 20000) {
    const double k = p / hbar;
    const double energy = p * p / (2.0 * mass);
    const cplx i{0.0, 1.0};

    // psi'' = c * psi inside the barrier.
    const cplx c = 2.0 * mass * (height - energy) / (hbar * hbar);

    // Provisional transmitted wave psi(x >= a) = e^{ikx}.
    cplx y = std::exp(i * k * a);
    cplx dy = i * k * y;

    const double h = -2.0 * a / steps;  // integrate from +a down to -a
    auto rhs = [&](const cplx& f) { return c * f; };
    for (int n = 0; n < steps; ++n) {
        const cplx k1y = dy, k1d = rhs(y);
        const cplx k2y = dy + 0.5 * h * k1d, k2d = rhs(y + 0.5 * h * k1y);
        const cplx k3y = dy + 0.5 * h * k2d, k3d = rhs(y + 0.5 * h * k2y);
        const cplx k4y = dy + h * k3d, k4d = rhs(y + h * k3y);
        y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
        dy += h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
    }

    // Match to alpha e^{ikx} + beta e^{-ikx} at x = -a.
    const cplx e_m = std::exp(-i * k * a);   // e^{ik(-a)}
    const cplx e_p = std::exp(i * k * a);    // e^{-ik(-a)}
    const cplx alpha = 0.5 * (y + dy / (i * k)) / e_m;
    const cplx beta = 0.5 * (y - dy / (i * k)) / e_p;
    return {1.0 / alpha, beta / alpha};
}

// Freely spreading Gaussian coherent state: mean position x_i + p_i t / M,
// momentum p_i, width parameter gamma.
inline cplx free_gaussian(double x, double t, double gamma, double x_i, double p_i, double mass,
                          double hbar) {
    const cplx i{0.0, 1.0};
    const cplx alpha = mass / (mass + i * hbar * gamma * t);
    const double drift = x - x_i - p_i * t / mass;
    return std::pow(gamma / std::numbers::pi, 0.25) * std::sqrt(alpha) *
           std::exp(-alpha * gamma * drift * drift / 2.0 + i * p_i * (x - x_i) / hbar -
                    i * p_i * p_i * t / (2.0 * mass * hbar));
}

}  // namespace oracles
