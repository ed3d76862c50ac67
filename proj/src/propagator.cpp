#include "tptweak/propagator.hpp"

#include "tptweak/scatter.hpp"

#include <cmath>
#include <numbers>
#include <thread>

namespace tptweak {

SpectralPropagator::SpectralPropagator(const CoherentState& state, const SquareBarrier& barrier,
                                       const PhysicalParams& params, const MomentumGrid& grid,
                                       const PostSelection& detection)
    : x_(detection.x), hbar_(params.hbar) {
    if (!outside_barrier_zone(detection, barrier))
        throw ConfigError("detection point x = " + std::to_string(detection.x) +
                          " lies inside the barrier exclusion zone |x| <= " +
                          std::to_string(barrier.half_width + detection.margin));

    const double hb = params.hbar;
    const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi * hb);
    const cplx i{0.0, 1.0};
    const bool transmitted_side = x_ > 0.0;  // exterior side selector; exact for V0 = 0 too

    terms_.reserve(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double p = grid.nodes[j];
        const double w = grid.weights[j];
        const cplx overlap = scattering_overlap(p, state, barrier, params);
        cplx t_amp, r_amp;
        detail::barrier_amplitudes(cplx{p, 0.0}, barrier, params, t_amp, r_amp, false);

        const double k = p / hb;
        const cplx e_plus = std::exp(i * k * x_);
        cplx eigen, eigen_dx;
        if (transmitted_side) {
            eigen = t_amp * e_plus * norm;
            eigen_dx = i * k * t_amp * e_plus * norm;
        } else {
            const cplx e_minus = std::exp(-i * k * x_);
            eigen = (e_plus + r_amp * e_minus) * norm;
            eigen_dx = i * k * (e_plus - r_amp * e_minus) * norm;
        }

        NodeTerm term;
        term.omega = p * p / (2.0 * params.mass * hb);
        term.psi_coef = w * eigen * overlap;
        term.dpsi_coef = w * eigen_dx * overlap;
        terms_.push_back(term);
    }
}

cplx SpectralPropagator::wavefunction_at(double t) const {
    cplx acc{0.0, 0.0};
    for (const auto& term : terms_) {
        const double ph = term.omega * t;
        acc += term.psi_coef * cplx{std::cos(ph), -std::sin(ph)};
    }
    return acc;
}

cplx SpectralPropagator::hamiltonian_action_at(double t) const {
    cplx acc{0.0, 0.0};
    for (const auto& term : terms_) {
        const double ph = term.omega * t;
        acc += (hbar_ * term.omega) * term.psi_coef * cplx{std::cos(ph), -std::sin(ph)};
    }
    return acc;
}

cplx SpectralPropagator::spatial_derivative_at(double t) const {
    cplx acc{0.0, 0.0};
    for (const auto& term : terms_) {
        const double ph = term.omega * t;
        acc += term.dpsi_coef * cplx{std::cos(ph), -std::sin(ph)};
    }
    return acc;
}

EvolvedSamples SpectralPropagator::sample(const TimeGrid& grid, int threads) const {
    EvolvedSamples out;
    const int n = grid.samples;
    out.times.resize(n);
    out.psi.resize(n);
    out.hpsi.resize(n);
    out.dpsi.resize(n);

    auto work = [&](int begin, int end) {
        for (int idx = begin; idx < end; ++idx) {
            const double t = grid.time_at(idx);
            cplx acc_psi{0.0, 0.0}, acc_h{0.0, 0.0}, acc_d{0.0, 0.0};
            for (const auto& term : terms_) {
                const double ph = term.omega * t;
                const cplx phase{std::cos(ph), -std::sin(ph)};
                const cplx base = term.psi_coef * phase;
                acc_psi += base;
                acc_h += (hbar_ * term.omega) * base;
                acc_d += term.dpsi_coef * phase;
            }
            out.times[idx] = t;
            out.psi[idx] = acc_psi;
            out.hpsi[idx] = acc_h;
            out.dpsi[idx] = acc_d;
        }
    };

    const int workers = std::max(1, threads);
    if (workers == 1 || n < 2 * workers) {
        work(0, n);
        return out;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const int chunk = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const int begin = w * chunk;
        const int end = std::min(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back(work, begin, end);
    }
    for (auto& th : pool) th.join();
    return out;
}

}  // namespace tptweak
