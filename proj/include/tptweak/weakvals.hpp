// Complex weak values of momentum and energy along the arrival-time axis,
// their time-averaged moments, the commutator identity, and both
// time-energy uncertainty relations.
#pragma once

#include "tptweak/tptd.hpp"
#include "tptweak/types.hpp"

#include <cstdint>
#include <functional>

namespace tptweak {

// Pointwise ratios at the post-selected point. Samples where |psi| falls
// under mask_floor * peak|psi| are masked: the ratios are numerically
// meaningless there and the probability weight is negligible by construction.
struct WeakValueSeries {
    TimeGrid grid;
    std::vector<cplx> p_weak;    // -i hbar (d/dx psi) / psi
    std::vector<cplx> H_weak;    // (H psi) / psi
    std::vector<std::uint8_t> valid;  // 1 where defined, 0 where masked
    double x = 0.0;
};

// Time-averaged moments of the weak values under P(t;x), plus the derived
// uncertainty quantities. Variances subtract the squared *real* means from
// averaged |.|^2, matching the complex-weak-value conventions used throughout.
struct MomentSummary {
    double mean_p = 0.0;
    double var_p = 0.0;
    double mean_H = 0.0;
    double var_H = 0.0;
    double mean_t = 0.0;
    double var_t = 0.0;
    cplx commutator{0.0, 0.0};           // integral of P * t * (conj(H_w) - H_w)
    double product_second_moment = 0.0;  // <t^2> * <|H_w|^2>, bounded below by hbar^2/4
    double product_stddev = 0.0;         // sqrt(var_t * var_H)
    double bound_rhs = 0.0;              // (hbar/2) * (1 - <t> * P(0;x))
};

constexpr double kWeakValueMaskFloor = 1e-14;

// Builds both weak-value series from the stored samples of a distribution.
WeakValueSeries weak_value_series(const TPTDistribution& dist, const PhysicalParams& params);

// Spacing-weighted (trapezoid) time average of P(t;x) * f(t); masked samples
// contribute zero. f must be sampled on the distribution's grid.
cplx time_average(const TPTDistribution& dist, const WeakValueSeries& series,
                  const std::vector<cplx>& f);

// Convenience: time average of an arbitrary per-sample functional of the series.
cplx time_average_of(const TPTDistribution& dist, const WeakValueSeries& series,
                     const std::function<cplx(std::size_t, double)>& f);

// sqrt(<|p_w|^2> - (Re <p_w>)^2).
double momentum_stddev(const TPTDistribution& dist, const WeakValueSeries& series);

// integral of P * t * (conj(H_w) - H_w) dt; expected i*hbar*(1 - <t> P(0;x)).
cplx commutator_check(const TPTDistribution& dist, const WeakValueSeries& series);

// Fills every MomentSummary field and appends diagnostics when either
// uncertainty bound (second-moment form or standard-deviation form) is
// violated on this configuration.
MomentSummary uncertainty_report(const TPTDistribution& dist, const WeakValueSeries& series,
                                 const PhysicalParams& params, Diagnostics& diag);

// Free-particle check that the |psi|^2-weighted spatial average of the weak
// momentum reproduces the strong expectation value <p> = p_incident. x_grid
// must be uniform and wide enough to hold the packet at time t.
cplx spatial_average_check(double t, const std::vector<double>& x_grid,
                           const CoherentState& state, const SquareBarrier& barrier,
                           const PhysicalParams& params, const GridControls& controls,
                           Diagnostics& diag);

}  // namespace tptweak
