// Composite Gauss-Legendre momentum grid for the spectral integrals.
// The window [p_i - W*sigma_p, p_i + W*sigma_p] is clamped to stay strictly
// positive; panel count is boosted automatically when the integrand's phase
// would rotate too fast between neighboring nodes at the largest time.
#pragma once

#include "tptweak/types.hpp"

namespace tptweak {

struct GridResolution {
    int panels = 40;
    int nodes_per_panel = 50;
};

struct MomentumGrid {
    std::vector<double> nodes;    // ascending momenta
    std::vector<double> weights;  // matching Gauss-Legendre weights
    double p_lo = 0.0;
    double p_hi = 0.0;
    int panel_count = 0;
    int nodes_per_panel = 0;
    bool clamped_at_zero = false;

    std::size_t size() const { return nodes.size(); }
};

// Gauss-Legendre nodes/weights on [-1, 1] (Newton iteration on Legendre
// polynomials; exact symmetry enforced).
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

// Build the composite grid for the given packet. window_sigmas is W above;
// max_phase_rate bounds the per-node phase increment (radians) of
// exp(-i p^2 t_max / (2 M hbar) + i p |x - x_i| / hbar); panels are doubled
// (with a diagnostic) until the bound holds.
MomentumGrid build_momentum_grid(const CoherentState& state, const PhysicalParams& params,
                                 double window_sigmas, GridResolution resolution,
                                 double t_max, double x_detect, double max_phase_rate,
                                 Diagnostics& diag);

}  // namespace tptweak
