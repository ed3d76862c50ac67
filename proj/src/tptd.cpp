#include "tptweak/tptd.hpp"

#include <algorithm>
#include <cmath>

namespace tptweak {

namespace {

double trapezoid(const std::vector<double>& y, double spacing) {
    if (y.size() < 2) return 0.0;
    double acc = 0.5 * (y.front() + y.back());
    for (std::size_t i = 1; i + 1 < y.size(); ++i) acc += y[i];
    return acc * spacing;
}

std::vector<double> densities(const EvolvedSamples& samples) {
    std::vector<double> d(samples.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = std::norm(samples.psi[i]);
    return d;
}

// Fraction of |psi|^2 mass in the trailing 10% of the horizon.
double tail_fraction(const std::vector<double>& d, double spacing) {
    const std::size_t n = d.size();
    const std::size_t tail_start = n - std::max<std::size_t>(2, n / 10);
    std::vector<double> tail(d.begin() + tail_start, d.end());
    const double total = trapezoid(d, spacing);
    if (total <= 0.0) return 1.0;
    return trapezoid(tail, spacing) / total;
}

// True when the density shows no decay across the trailing horizon: compares
// the mean level of the last 5% of samples against the preceding 5%.
bool tail_not_decaying(const std::vector<double>& d) {
    const std::size_t n = d.size();
    const std::size_t w = std::max<std::size_t>(2, n / 20);
    double last = 0.0, prev = 0.0;
    for (std::size_t i = n - w; i < n; ++i) last += d[i];
    for (std::size_t i = n - 2 * w; i < n - w; ++i) prev += d[i];
    return last >= prev;
}

double initial_horizon(const CoherentState& state, const PhysicalParams& params, double x) {
    const double t_classical = params.mass * (x - state.x_center) / state.p_incident;
    const double sigma_t =
        std::sqrt(1.0 / (2.0 * state.gamma)) * params.mass / state.p_incident;
    return std::max(t_classical, 0.0) + 20.0 * sigma_t;
}

}  // namespace

TPTDistribution build_distribution_on_grid(const CoherentState& state,
                                           const SquareBarrier& barrier,
                                           const PhysicalParams& params,
                                           const PostSelection& detection,
                                           const GridControls& controls, const TimeGrid& grid,
                                           Diagnostics& diag) {
    const MomentumGrid pgrid =
        build_momentum_grid(state, params, controls.window_sigmas, controls.resolution,
                            grid.t_max, detection.x, controls.max_phase_rate, diag);
    const SpectralPropagator prop(state, barrier, params, pgrid, detection);

    TPTDistribution dist;
    dist.grid = grid;
    dist.x = detection.x;
    dist.samples = prop.sample(grid, controls.threads);
    dist.density = densities(dist.samples);
    dist.norm = trapezoid(dist.density, grid.spacing());
    if (!(dist.norm > 0.0))
        throw ConvergenceError("arrival-time normalization vanished at x = " +
                               std::to_string(detection.x));
    for (double& v : dist.density) v /= dist.norm;
    dist.tail_mass_estimate = tail_fraction(dist.density, grid.spacing());
    return dist;
}

TPTDistribution build_distribution(const CoherentState& state, const SquareBarrier& barrier,
                                   const PhysicalParams& params, const PostSelection& detection,
                                   const GridControls& controls, Diagnostics& diag) {
    // Horizon search on a fixed coarse probe so the accepted t_max does not
    // depend on the final sample count.
    constexpr int kProbeSamples = 2048;
    double t_max = initial_horizon(state, params, detection.x);

    {
        int ext = 0;
        for (;; ++ext) {
            Diagnostics probe_diag;  // probe warnings would repeat the final ones
            const MomentumGrid pgrid =
                build_momentum_grid(state, params, controls.window_sigmas, controls.resolution,
                                    t_max, detection.x, controls.max_phase_rate, probe_diag);
            const SpectralPropagator prop(state, barrier, params, pgrid, detection);
            const TimeGrid probe{t_max, kProbeSamples};
            const EvolvedSamples s = prop.sample(probe, controls.threads);
            const std::vector<double> d = densities(s);
            const double tail = tail_fraction(d, probe.spacing());
            if (tail < controls.eps_tail) break;
            if (tail_not_decaying(d))
                throw ConvergenceError(
                    "arrival-time density is not decaying over the trailing horizon at x = " +
                    std::to_string(detection.x) +
                    "; the normalization integral looks non-convergent");
            if (ext >= controls.max_extensions)
                throw ConvergenceError(
                    "time horizon extension limit reached (tail mass " + std::to_string(tail) +
                    " still above eps_tail after " + std::to_string(ext) + " extensions)");
            t_max *= 1.5;
        }
        if (ext > 0)
            diag.warn("time horizon extended " + std::to_string(ext) + "x to t_max = " +
                      std::to_string(t_max));
    }

    return build_distribution_on_grid(state, barrier, params, detection, controls,
                                      TimeGrid{t_max, controls.time_samples}, diag);
}

double time_moment(const TPTDistribution& dist, int n) {
    if (n < 0 || n > 2)
        throw ConfigError("time moments are supported for n in {0, 1, 2}; got n = " +
                          std::to_string(n));
    std::vector<double> integrand(dist.density.size());
    for (std::size_t i = 0; i < integrand.size(); ++i)
        integrand[i] = dist.density[i] * std::pow(dist.grid.time_at(static_cast<int>(i)), n);
    return trapezoid(integrand, dist.grid.spacing());
}

double mean_arrival_time(const TPTDistribution& dist) { return time_moment(dist, 1); }

ArrivalEstimate arrival_time_momentum(const CoherentState& state, const SquareBarrier& barrier,
                                      const PhysicalParams& params, const PostSelection& detection,
                                      double delta_x, const GridControls& controls,
                                      Diagnostics& diag) {
    if (!(delta_x > 0.0)) throw ConfigError("arrival-protocol delta_x must be positive");

    auto mean_time_at = [&](double offset, double& spacing_out) {
        PostSelection shifted = detection;
        shifted.x = detection.x + offset;
        if (!outside_barrier_zone(shifted, barrier))
            throw ConfigError("arrival-protocol probe point x = " + std::to_string(shifted.x) +
                              " falls inside the barrier exclusion zone; reduce delta_x or move x");
        const TPTDistribution d =
            build_distribution(state, barrier, params, shifted, controls, diag);
        spacing_out = d.grid.spacing();
        return mean_arrival_time(d);
    };

    ArrivalEstimate est;
    double sp[4] = {0, 0, 0, 0};
    const double tp_coarse = mean_time_at(+delta_x / 2.0, sp[0]);
    const double tm_coarse = mean_time_at(-delta_x / 2.0, sp[1]);
    const double tp_fine = mean_time_at(+delta_x / 4.0, sp[2]);
    const double tm_fine = mean_time_at(-delta_x / 4.0, sp[3]);

    const double dt_coarse = tp_coarse - tm_coarse;
    const double dt_fine = tp_fine - tm_fine;
    const double coarse_res = std::max(sp[0], sp[1]);
    const double fine_res = std::max(sp[2], sp[3]);
    if (std::abs(dt_coarse) < coarse_res || std::abs(dt_fine) < fine_res)
        throw ConfigError(
            "mean-arrival-time difference falls below the time-grid resolution; "
            "increase delta_x (or the time sample count)");

    est.slope_coarse = dt_coarse / delta_x;
    est.slope_fine = dt_fine / (delta_x / 2.0);
    est.slope_refined = (4.0 * est.slope_fine - est.slope_coarse) / 3.0;
    est.momentum = params.mass / est.slope_refined;
    return est;
}

}  // namespace tptweak
