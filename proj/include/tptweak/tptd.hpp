// Transition-path-time distribution at a fixed detection point: adaptive
// choice of the time horizon, normalization over arrival times, moments, and
// the finite-difference arrival-time momentum estimate.
#pragma once

#include "tptweak/propagator.hpp"
#include "tptweak/types.hpp"

namespace tptweak {

struct GridControls {
    double window_sigmas = 12.0;   // momentum window half-width in sigma_p
    GridResolution resolution{};   // composite Gauss-Legendre layout
    int time_samples = 8192;       // samples of the final uniform time grid
    double eps_tail = 1e-6;        // max fraction of |psi|^2 mass in the last 10% of the horizon
    int max_extensions = 8;        // horizon growth attempts before giving up
    double max_phase_rate = 0.7853981633974483;  // pi/4, spectral-phase bound per node step
    int threads = 1;
};

struct TPTDistribution {
    TimeGrid grid;
    EvolvedSamples samples;          // psi, H psi, d/dx psi on grid times
    std::vector<double> density;     // P(t;x) = |psi|^2 / norm
    double norm = 0.0;               // N(x) = integral of |psi(x,t)|^2 over t >= 0
    double tail_mass_estimate = 0.0; // fraction of mass in the last 10% of the horizon
    double x = 0.0;                  // detection point
};

// Builds the distribution with an automatically extended horizon: the initial
// guess max(t_classical, 0) + 20 sigma_t is grown by 1.5x (on a fixed coarse
// probe) until the trailing decade of the horizon carries less than eps_tail
// of the total mass. Throws ConvergenceError when max_extensions is exhausted
// or the tail shows no decay.
TPTDistribution build_distribution(const CoherentState& state, const SquareBarrier& barrier,
                                   const PhysicalParams& params, const PostSelection& detection,
                                   const GridControls& controls, Diagnostics& diag);

// Same pipeline on a caller-supplied time grid (no horizon search). Lets two
// detection points share identical sample times.
TPTDistribution build_distribution_on_grid(const CoherentState& state,
                                           const SquareBarrier& barrier,
                                           const PhysicalParams& params,
                                           const PostSelection& detection,
                                           const GridControls& controls, const TimeGrid& grid,
                                           Diagnostics& diag);

// n-th arrival-time moment of the normalized distribution, n in {0, 1, 2}
// (n = 0 returns 1 up to quadrature error). Larger n throws ConfigError.
double time_moment(const TPTDistribution& dist, int n);

double mean_arrival_time(const TPTDistribution& dist);

struct ArrivalEstimate {
    double momentum = 0.0;      // M / slope_refined
    double slope_refined = 0.0; // Richardson-extrapolated d<t>/dx
    double slope_coarse = 0.0;  // centered difference at separation delta_x
    double slope_fine = 0.0;    // centered difference at separation delta_x / 2
};

// Estimates the local momentum M / (d<t>/dx) from mean arrival times at
// detection points straddling detection.x. Throws ConfigError when delta_x is
// so small that the mean-time differences fall under the time-grid spacing.
ArrivalEstimate arrival_time_momentum(const CoherentState& state, const SquareBarrier& barrier,
                                      const PhysicalParams& params, const PostSelection& detection,
                                      double delta_x, const GridControls& controls,
                                      Diagnostics& diag);

}  // namespace tptweak
