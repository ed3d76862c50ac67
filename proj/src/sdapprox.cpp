#include "tptweak/sdapprox.hpp"

#include "tptweak/scatter.hpp"

#include <cmath>
#include <numbers>

namespace tptweak {

namespace {

// alpha(t) = M / (M + i hbar Gamma t), the complex spreading factor of the
// freely evolving Gaussian.
cplx alpha_factor(const SDConfig& cfg, double t) {
    const cplx i{0.0, 1.0};
    return cfg.params.mass /
           (cfg.params.mass + i * cfg.params.hbar * cfg.state.gamma * t);
}

}  // namespace

cplx sd_weak_momentum(const SDConfig& cfg, double t) {
    const cplx i{0.0, 1.0};
    return alpha_factor(cfg, t) *
           (cfg.state.p_incident + i * cfg.params.hbar * cfg.state.gamma * (cfg.x - cfg.state.x_center));
}

cplx sd_wavefunction(const SDConfig& cfg, double t) {
    const double g = cfg.state.gamma;
    const double p_i = cfg.state.p_incident;
    const double hb = cfg.params.hbar;
    const double M = cfg.params.mass;
    const cplx i{0.0, 1.0};
    const cplx alpha = alpha_factor(cfg, t);
    const double X = cfg.x - cfg.state.x_center - p_i * t / M;

    const cplx free_packet = std::pow(g / std::numbers::pi, 0.25) * std::sqrt(alpha) *
                             std::exp(-alpha * g * X * X / 2.0 +
                                      i * p_i * (cfg.x - cfg.state.x_center) / hb -
                                      i * p_i * p_i * t / (2.0 * M * hb));
    return transmission_amplitude(sd_weak_momentum(cfg, t), cfg.barrier, cfg.params) * free_packet;
}

double sd_density(const SDConfig& cfg, double t) { return std::norm(sd_wavefunction(cfg, t)); }

double sd_norm(const SDConfig& cfg) {
    const double t2 =
        std::norm(transmission_amplitude(cfg.state.p_incident, cfg.barrier, cfg.params));
    return cfg.params.mass * t2 / cfg.state.p_incident;
}

double sd_distribution(const SDConfig& cfg, double t) {
    const double g = cfg.state.gamma;
    const double p_i = cfg.state.p_incident;
    const double hb = cfg.params.hbar;
    const double M = cfg.params.mass;
    const double spread = M * M + t * t * hb * hb * g * g;
    const double X = cfg.state.x_center - cfg.x + p_i * t / M;
    const double scale = 1.0 + std::pow(t * hb * g / M, 2);
    return std::sqrt(g) * p_i / std::sqrt(std::numbers::pi * spread) *
           std::exp(-g * X * X / scale);
}

double sd_mean_momentum(const SDConfig& cfg) { return cfg.state.p_incident; }

double sd_momentum_stddev(const SDConfig& cfg) {
    return cfg.params.hbar * std::sqrt(cfg.state.gamma / 2.0);
}

double sd_time_variance(const SDConfig& cfg) {
    const double ratio = cfg.params.mass / cfg.state.p_incident;
    return ratio * ratio / (2.0 * cfg.state.gamma);
}

double sd_energy_mean(const SDConfig& cfg) {
    const double p_i = cfg.state.p_incident;
    const double hb = cfg.params.hbar;
    const double M = cfg.params.mass;
    return p_i * p_i / (2.0 * M) + hb * hb * cfg.state.gamma / (4.0 * M);
}

double sd_energy_variance(const SDConfig& cfg) {
    const double p_i = cfg.state.p_incident;
    const double hb = cfg.params.hbar;
    const double M = cfg.params.mass;
    const double g = cfg.state.gamma;
    return hb * hb * g * p_i * p_i / (2.0 * M * M) +
           std::pow(hb, 4) * g * g / (8.0 * M * M);
}

double sd_uncertainty_product(const SDConfig& cfg) {
    const double hb = cfg.params.hbar;
    const double p_i = cfg.state.p_incident;
    return hb * hb / 4.0 + std::pow(hb, 4) * cfg.state.gamma / (16.0 * p_i * p_i);
}

double sd_inverse_momentum(const SDConfig& cfg, const TimeGrid& grid) {
    const double g = cfg.state.gamma;
    const double p_i = cfg.state.p_incident;
    const double hb = cfg.params.hbar;
    const double M = cfg.params.mass;

    // d<t>/dx / M with <t> taken over sd_distribution on the truncated grid:
    // the x-derivative acts only on the Gaussian exponent.
    double acc = 0.0;
    for (int i = 0; i < grid.samples; ++i) {
        const double t = grid.time_at(i);
        const double scale = 1.0 + std::pow(t * hb * g / M, 2);
        const double drift = cfg.state.x_center - cfg.x + p_i * t / M;
        const double f = sd_distribution(cfg, t) * t * g * drift / scale;
        acc += (i == 0 || i + 1 == grid.samples) ? 0.5 * f : f;
    }
    return 2.0 / M * acc * grid.spacing();
}

}  // namespace tptweak
