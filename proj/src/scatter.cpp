#include "tptweak/scatter.hpp"

#include <cmath>
#include <numbers>

namespace tptweak {

namespace {

// sin(2qa)/q and cos(2qa) as even functions of q, i.e. functions of
// disc = q^2. The series kicks in near the band edge where the direct forms
// lose accuracy; three terms leave a relative error ~ (4a^2 disc)^3 / 5040.
void even_trig_real(double disc, double a, double& c_out, double& s_out) {
    const double z2 = 4.0 * a * a * disc;  // (2qa)^2, sign carries the branch
    if (std::abs(z2) < 1e-4) {
        c_out = 1.0 - z2 / 2.0 + z2 * z2 / 24.0 - z2 * z2 * z2 / 720.0;
        s_out = 2.0 * a * (1.0 - z2 / 6.0 + z2 * z2 / 120.0 - z2 * z2 * z2 / 5040.0);
        return;
    }
    if (disc >= 0.0) {
        const double q = std::sqrt(disc);
        c_out = std::cos(2.0 * q * a);
        s_out = std::sin(2.0 * q * a) / q;
    } else {
        const double kappa = std::sqrt(-disc);
        c_out = std::cosh(2.0 * kappa * a);
        s_out = std::sinh(2.0 * kappa * a) / kappa;
    }
}

void even_trig_generic(cplx disc, double a, cplx& c_out, cplx& s_out) {
    const cplx z2 = 4.0 * a * a * disc;
    if (std::abs(z2) < 1e-4) {
        c_out = 1.0 - z2 / 2.0 + z2 * z2 / 24.0 - z2 * z2 * z2 / 720.0;
        s_out = 2.0 * a * (1.0 - z2 / 6.0 + z2 * z2 / 120.0 - z2 * z2 * z2 / 5040.0);
        return;
    }
    const cplx q = std::sqrt(disc);
    c_out = std::cos(2.0 * q * a);
    s_out = std::sin(2.0 * q * a) / q;
}

}  // namespace

namespace detail {

void barrier_amplitudes(cplx p, const SquareBarrier& barrier, const PhysicalParams& params,
                        cplx& t_out, cplx& r_out, bool force_generic) {
    const double a = barrier.half_width;
    const cplx k = p / params.hbar;
    const cplx k2 = k * k;
    const cplx disc = k2 - 2.0 * params.mass * barrier.height / (params.hbar * params.hbar);

    cplx c, s;
    if (!force_generic && p.imag() == 0.0 && disc.imag() == 0.0) {
        double cr, sr;
        even_trig_real(disc.real(), a, cr, sr);
        c = cr;
        s = sr;
    } else {
        even_trig_generic(disc, a, c, s);
    }

    const cplx i{0.0, 1.0};
    const cplx denom = c - i * (k2 + disc) / (2.0 * k) * s;
    t_out = std::exp(-2.0 * i * k * a) / denom;
    r_out = i * (disc - k2) / (2.0 * k) * s * t_out;
}

}  // namespace detail

cplx position_wavefunction_initial(double x, const CoherentState& state,
                                   const PhysicalParams& params) {
    const double g = state.gamma;
    const double dx = x - state.x_center;
    const cplx i{0.0, 1.0};
    return std::pow(g / std::numbers::pi, 0.25) *
           std::exp(-g * dx * dx / 2.0 + i * state.p_incident * dx / params.hbar);
}

cplx momentum_wavefunction_initial(double p, const CoherentState& state,
                                   const PhysicalParams& params) {
    const double hb = params.hbar;
    const double g = state.gamma;
    const double dp = p - state.p_incident;
    const cplx i{0.0, 1.0};
    return std::pow(std::numbers::pi * hb * hb * g, -0.25) *
           std::exp(-dp * dp / (2.0 * hb * hb * g) - i * p * state.x_center / hb);
}

cplx transmission_amplitude(double p, const SquareBarrier& barrier, const PhysicalParams& params) {
    cplx t, r;
    detail::barrier_amplitudes(cplx{p, 0.0}, barrier, params, t, r, false);
    return t;
}

cplx reflection_amplitude(double p, const SquareBarrier& barrier, const PhysicalParams& params) {
    cplx t, r;
    detail::barrier_amplitudes(cplx{p, 0.0}, barrier, params, t, r, false);
    return r;
}

cplx transmission_amplitude(cplx p, const SquareBarrier& barrier, const PhysicalParams& params) {
    cplx t, r;
    detail::barrier_amplitudes(p, barrier, params, t, r, false);
    return t;
}

cplx reflection_amplitude(cplx p, const SquareBarrier& barrier, const PhysicalParams& params) {
    cplx t, r;
    detail::barrier_amplitudes(p, barrier, params, t, r, false);
    return r;
}

cplx scattering_overlap(double p, const CoherentState& state, const SquareBarrier& barrier,
                        const PhysicalParams& params) {
    cplx t, r;
    detail::barrier_amplitudes(cplx{p, 0.0}, barrier, params, t, r, false);
    return momentum_wavefunction_initial(p, state, params) +
           std::conj(r) * momentum_wavefunction_initial(-p, state, params);
}

}  // namespace tptweak
