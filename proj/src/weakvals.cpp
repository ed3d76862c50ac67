#include "tptweak/weakvals.hpp"

#include "tptweak/scatter.hpp"

#include <algorithm>
#include <cmath>

namespace tptweak {

namespace {

// Trapezoid rule over the series grid for P(t) * f(t); masked samples carry
// zero weight.
cplx weighted_trapezoid(const TPTDistribution& dist, const WeakValueSeries& series,
                        const std::function<cplx(std::size_t)>& f) {
    const std::size_t n = dist.density.size();
    cplx acc{0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
        if (!series.valid[i]) continue;
        const double edge = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
        acc += edge * dist.density[i] * f(i);
    }
    return acc * dist.grid.spacing();
}

}  // namespace

WeakValueSeries weak_value_series(const TPTDistribution& dist, const PhysicalParams& params) {
    WeakValueSeries series;
    series.grid = dist.grid;
    series.x = dist.x;
    const std::size_t n = dist.samples.size();
    series.p_weak.assign(n, cplx{0.0, 0.0});
    series.H_weak.assign(n, cplx{0.0, 0.0});
    series.valid.assign(n, 0);

    double peak = 0.0;
    for (const cplx& v : dist.samples.psi) peak = std::max(peak, std::abs(v));
    const double floor = kWeakValueMaskFloor * peak;

    const cplx minus_i_hbar{0.0, -params.hbar};
    for (std::size_t i = 0; i < n; ++i) {
        const cplx psi = dist.samples.psi[i];
        if (std::abs(psi) <= floor) continue;
        series.valid[i] = 1;
        series.p_weak[i] = minus_i_hbar * dist.samples.dpsi[i] / psi;
        series.H_weak[i] = dist.samples.hpsi[i] / psi;
    }
    return series;
}

cplx time_average(const TPTDistribution& dist, const WeakValueSeries& series,
                  const std::vector<cplx>& f) {
    return weighted_trapezoid(dist, series, [&](std::size_t i) { return f[i]; });
}

cplx time_average_of(const TPTDistribution& dist, const WeakValueSeries& series,
                     const std::function<cplx(std::size_t, double)>& f) {
    return weighted_trapezoid(dist, series, [&](std::size_t i) {
        return f(i, dist.grid.time_at(static_cast<int>(i)));
    });
}

double momentum_stddev(const TPTDistribution& dist, const WeakValueSeries& series) {
    const double mean = time_average(dist, series, series.p_weak).real();
    const cplx second = weighted_trapezoid(
        dist, series, [&](std::size_t i) { return cplx{std::norm(series.p_weak[i]), 0.0}; });
    return std::sqrt(second.real() - mean * mean);
}

cplx commutator_check(const TPTDistribution& dist, const WeakValueSeries& series) {
    return time_average_of(dist, series, [&](std::size_t i, double t) {
        return t * (std::conj(series.H_weak[i]) - series.H_weak[i]);
    });
}

MomentSummary uncertainty_report(const TPTDistribution& dist, const WeakValueSeries& series,
                                 const PhysicalParams& params, Diagnostics& diag) {
    MomentSummary s;
    const double hb = params.hbar;

    s.mean_p = time_average(dist, series, series.p_weak).real();
    s.mean_H = time_average(dist, series, series.H_weak).real();
    const double p2 =
        weighted_trapezoid(dist, series, [&](std::size_t i) {
            return cplx{std::norm(series.p_weak[i]), 0.0};
        }).real();
    const double H2 =
        weighted_trapezoid(dist, series, [&](std::size_t i) {
            return cplx{std::norm(series.H_weak[i]), 0.0};
        }).real();
    s.var_p = p2 - s.mean_p * s.mean_p;
    s.var_H = H2 - s.mean_H * s.mean_H;

    s.mean_t = time_moment(dist, 1);
    const double t2 = time_moment(dist, 2);
    s.var_t = t2 - s.mean_t * s.mean_t;

    s.commutator = commutator_check(dist, series);
    s.product_second_moment = t2 * H2;
    s.product_stddev = std::sqrt(std::max(0.0, s.var_t * s.var_H));
    s.bound_rhs = 0.5 * hb * (1.0 - s.mean_t * dist.density.front());

    if (s.product_second_moment < hb * hb / 4.0)
        diag.warn("second-moment uncertainty bound violated: <t^2><HH*> = " +
                  std::to_string(s.product_second_moment));
    if (s.product_stddev < s.bound_rhs)
        diag.warn("standard-deviation uncertainty bound violated: sqrt(var_t var_H) = " +
                  std::to_string(s.product_stddev) + " < " + std::to_string(s.bound_rhs));
    return s;
}

cplx spatial_average_check(double t, const std::vector<double>& x_grid,
                           const CoherentState& state, const SquareBarrier& barrier,
                           const PhysicalParams& params, const GridControls& controls,
                           Diagnostics& diag) {
    if (barrier.height != 0.0)
        throw ConfigError("the spatial-average identity is verified for the free particle only");
    if (x_grid.size() < 2) throw ConfigError("spatial-average check needs at least two x samples");

    double far_x = 0.0;
    for (double x : x_grid) far_x = std::max(far_x, std::abs(x - state.x_center));
    const MomentumGrid pgrid =
        build_momentum_grid(state, params, controls.window_sigmas, controls.resolution, t,
                            state.x_center + far_x, controls.max_phase_rate, diag);

    const double dx = x_grid[1] - x_grid[0];
    cplx weighted{0.0, 0.0};
    double mass = 0.0;
    const cplx minus_i_hbar{0.0, -params.hbar};
    for (std::size_t j = 0; j < x_grid.size(); ++j) {
        const SpectralPropagator prop(state, barrier, params, pgrid,
                                      PostSelection{x_grid[j], 0.0});
        const cplx psi = prop.wavefunction_at(t);
        const cplx pw = minus_i_hbar * prop.spatial_derivative_at(t) / psi;
        const double edge = (j == 0 || j + 1 == x_grid.size()) ? 0.5 : 1.0;
        weighted += edge * std::norm(psi) * pw;
        mass += edge * std::norm(psi);
    }
    weighted *= dx;
    mass *= dx;
    if (std::abs(mass - 1.0) > 1e-6)
        diag.warn("spatial-average window captures mass " + std::to_string(mass) +
                  "; widen x_grid for a cleaner identity check");
    return weighted / mass;
}

}  // namespace tptweak
