#include "tptweak/quadrature.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

namespace tptweak {

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Chebyshev-based initial guess, then Newton on P_n.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double step = p1 / dp;
            x -= step;
            if (std::abs(step) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) nodes[half - 1] = 0.0;
}

MomentumGrid build_momentum_grid(const CoherentState& state, const PhysicalParams& params,
                                 double window_sigmas, GridResolution resolution, double t_max,
                                 double x_detect, double max_phase_rate, Diagnostics& diag) {
    if (window_sigmas < 6.0)
        throw ConfigError("momentum window must span at least 6 sigma_p (got " +
                          std::to_string(window_sigmas) + ")");

    const double sigma_p = params.hbar * std::sqrt(state.gamma / 2.0);
    const double eps_p = 1e-6 * state.p_incident;
    const double hi = state.p_incident + window_sigmas * sigma_p;
    double lo = state.p_incident - window_sigmas * sigma_p;

    MomentumGrid grid;
    if (lo < eps_p) {
        lo = eps_p;
        grid.clamped_at_zero = true;
        char bound[32];
        std::snprintf(bound, sizeof(bound), "%.6g", eps_p);
        diag.warn(std::string("momentum window clamped at lower bound ") + bound +
                  " to keep p = 0 out of the grid");
    }
    grid.p_lo = lo;
    grid.p_hi = hi;

    // Per-node phase increment of exp(-i p^2 t / (2 M hbar) + i p (x - x_i) / hbar)
    // at the fastest-oscillating corner (p = hi, t = t_max).
    const double phase_slope =
        hi * t_max / (params.mass * params.hbar) + std::abs(x_detect - state.x_center) / params.hbar;

    int panels = resolution.panels;
    for (int boost = 0;; ++boost) {
        const double spacing = (hi - lo) / (static_cast<double>(panels) * resolution.nodes_per_panel);
        if (phase_slope * spacing < max_phase_rate) break;
        if (boost >= 24)
            throw ConvergenceError("momentum grid cannot satisfy the phase-resolution bound");
        panels *= 2;
        diag.warn("momentum panel count raised to " + std::to_string(panels) +
                  " to bound the per-node phase increment");
    }
    grid.panel_count = panels;
    grid.nodes_per_panel = resolution.nodes_per_panel;

    std::vector<double> ref_nodes, ref_weights;
    gauss_legendre(resolution.nodes_per_panel, ref_nodes, ref_weights);

    grid.nodes.reserve(static_cast<std::size_t>(panels) * resolution.nodes_per_panel);
    grid.weights.reserve(grid.nodes.capacity());
    const double panel_width = (hi - lo) / panels;
    for (int j = 0; j < panels; ++j) {
        const double left = lo + j * panel_width;
        const double mid = left + panel_width / 2.0;
        const double half = panel_width / 2.0;
        for (int m = 0; m < resolution.nodes_per_panel; ++m) {
            grid.nodes.push_back(mid + half * ref_nodes[m]);
            grid.weights.push_back(half * ref_weights[m]);
        }
    }
    return grid;
}

}  // namespace tptweak
