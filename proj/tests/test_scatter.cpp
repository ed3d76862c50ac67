#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "tptweak/scatter.hpp"

#include <cmath>
#include <numbers>
#include <vector>

using namespace tptweak;

namespace {
const PhysicalParams params{};
const SquareBarrier barrier{1.0, 1.0};
const CoherentState state{0.001, -100.0, 0.25};
}  // namespace

TEST_CASE("barrier amplitudes match direct integration of the stationary equation") {
    // Includes tunneling momenta, the band edge p^2 = 2 M V0 (p = 1 here),
    // and propagating momenta above it.
    for (double p : {0.05, 0.25, 0.6, 0.9999, 1.0, 1.0001, 1.3, 2.0, 3.0}) {
        const auto ref = oracles::rk4_square_barrier(p, barrier.height, barrier.half_width,
                                                     params.mass, params.hbar);
        const cplx t = transmission_amplitude(p, barrier, params);
        const cplx r = reflection_amplitude(p, barrier, params);
        CAPTURE(p);
        CHECK(std::abs(t - ref.t) < 1e-10);
        CHECK(std::abs(r - ref.r) < 1e-10);
    }
}

TEST_CASE("flux unitarity across the momentum range") {
    double worst = 0.0;
    for (int i = 0; i < 500; ++i) {
        const double p = 0.01 + (3.0 - 0.01) * i / 499.0;
        const double t2 = std::norm(transmission_amplitude(p, barrier, params));
        const double r2 = std::norm(reflection_amplitude(p, barrier, params));
        worst = std::max(worst, std::abs(t2 + r2 - 1.0));
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("real fast path agrees with the generic complex path") {
    for (int i = 0; i < 200; ++i) {
        const double p = 0.02 + (2.5 - 0.02) * i / 199.0;
        cplx t_fast, r_fast, t_gen, r_gen;
        detail::barrier_amplitudes(cplx{p, 0.0}, barrier, params, t_fast, r_fast, false);
        detail::barrier_amplitudes(cplx{p, 0.0}, barrier, params, t_gen, r_gen, true);
        CAPTURE(p);
        CHECK(std::abs(t_fast - t_gen) <= 1e-12);
        CHECK(std::abs(r_fast - r_gen) <= 1e-12);
    }
}

TEST_CASE("amplitudes are continuous through the band edge") {
    const cplx t_edge = transmission_amplitude(1.0, barrier, params);
    CHECK(std::abs(transmission_amplitude(1.0 - 1e-7, barrier, params) - t_edge) < 1e-5);
    CHECK(std::abs(transmission_amplitude(1.0 + 1e-7, barrier, params) - t_edge) < 1e-5);
    const cplx r_edge = reflection_amplitude(1.0, barrier, params);
    CHECK(std::abs(reflection_amplitude(1.0 - 1e-7, barrier, params) - r_edge) < 1e-5);
}

TEST_CASE("zero-height barrier is transparent") {
    const SquareBarrier none{0.0, 1.0};
    for (double p : {0.1, 0.25, 1.0, 2.0}) {
        CHECK(std::abs(transmission_amplitude(p, none, params) - 1.0) < 1e-13);
        CHECK(std::abs(reflection_amplitude(p, none, params)) < 1e-13);
    }
}

TEST_CASE("complex continuation is smooth off the real axis") {
    for (double p : {0.25, 0.9, 1.5}) {
        const cplx on_axis = transmission_amplitude(cplx{p, 0.0}, barrier, params);
        const cplx off_axis = transmission_amplitude(cplx{p, 1e-8}, barrier, params);
        CHECK(std::abs(off_axis - on_axis) < 1e-5);
        // First-order Cauchy consistency: derivative along real and imaginary
        // directions must agree (analyticity of the continued amplitude).
        const double h = 1e-6;
        const cplx d_re = (transmission_amplitude(cplx{p + h, 0.0}, barrier, params) -
                           transmission_amplitude(cplx{p - h, 0.0}, barrier, params)) /
                          (2.0 * h);
        const cplx d_im = (transmission_amplitude(cplx{p, h}, barrier, params) -
                           transmission_amplitude(cplx{p, -h}, barrier, params)) /
                          (cplx{0.0, 2.0 * h});
        CHECK(std::abs(d_re - d_im) < 1e-4 * std::abs(d_re));
    }
}

TEST_CASE("initial state: position representation") {
    const cplx at_center = position_wavefunction_initial(state.x_center, state, params);
    CHECK(std::abs(at_center - std::pow(state.gamma / std::numbers::pi, 0.25)) < 1e-14);

    // Norm over a wide window (trapezoid; sigma_x = 1/sqrt(2 gamma)).
    const double sigma_x = 1.0 / std::sqrt(2.0 * state.gamma);
    const int n = 20001;
    const double lo = state.x_center - 12.0 * sigma_x, hi = state.x_center + 12.0 * sigma_x;
    const double dx = (hi - lo) / (n - 1);
    double norm = 0.0;
    for (int i = 0; i < n; ++i) {
        const double edge = (i == 0 || i == n - 1) ? 0.5 : 1.0;
        norm += edge * std::norm(position_wavefunction_initial(lo + i * dx, state, params));
    }
    CHECK(std::abs(norm * dx - 1.0) < 1e-10);
}

TEST_CASE("initial state: momentum representation is the Fourier transform") {
    const double sigma_x = 1.0 / std::sqrt(2.0 * state.gamma);
    const int n = 40001;
    const double lo = state.x_center - 14.0 * sigma_x, hi = state.x_center + 14.0 * sigma_x;
    const double dx = (hi - lo) / (n - 1);
    const cplx i_unit{0.0, 1.0};
    for (double p : {0.22, 0.25, 0.29}) {
        cplx acc{0.0, 0.0};
        for (int i = 0; i < n; ++i) {
            const double x = lo + i * dx;
            const double edge = (i == 0 || i == n - 1) ? 0.5 : 1.0;
            acc += edge * std::exp(-i_unit * p * x / params.hbar) *
                   position_wavefunction_initial(x, state, params);
        }
        acc *= dx / std::sqrt(2.0 * std::numbers::pi * params.hbar);
        const cplx direct = momentum_wavefunction_initial(p, state, params);
        CAPTURE(p);
        CHECK(std::abs(acc - direct) < 1e-8);
    }
}

TEST_CASE("scattering overlap: reflected term is negligible at the packet center") {
    const cplx direct = momentum_wavefunction_initial(state.p_incident, state, params);
    const cplx reflected = std::conj(reflection_amplitude(state.p_incident, barrier, params)) *
                           momentum_wavefunction_initial(-state.p_incident, state, params);
    CHECK(std::abs(reflected) / std::abs(direct) < 1e-50);
    const cplx overlap = scattering_overlap(state.p_incident, state, barrier, params);
    CHECK(std::abs(overlap - direct) <= 1e-50 * std::abs(direct));
}
