// Core domain types shared by every layer: physical constants, the incident
// coherent state, the square barrier, post-selection, and the uniform time grid.
// All quantities are in atomic-style units (hbar, mass, lengths dimensionless).
#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace tptweak {

using cplx = std::complex<double>;

struct PhysicalParams {
    double hbar = 1.0;
    double mass = 0.5;
};

// Incident Gaussian coherent state centered at x_center with mean momentum
// p_incident > 0 and width parameter gamma (position variance 1/(2*gamma)).
struct CoherentState {
    double gamma = 0.001;
    double x_center = -100.0;
    double p_incident = 0.25;
};

// Rectangular barrier of the given height on [-half_width, +half_width].
// height == 0 selects the free particle.
struct SquareBarrier {
    double height = 1.0;
    double half_width = 1.0;
};

// Fixed detection point. The exterior margin keeps evaluations away from the
// barrier edges where the piecewise scattering eigenfunctions would need the
// interior branch; it is waived for the free particle (height == 0).
struct PostSelection {
    double x = 100.0;
    double margin = 1.0;
};

struct TimeGrid {
    double t_max = 0.0;
    int samples = 0;

    double spacing() const { return t_max / (samples - 1); }
    double time_at(int i) const { return t_max * i / (samples - 1); }
};

// Non-fatal observations (window clamping, panel boosts, bound violations)
// collected during a run and surfaced in reports.
struct Diagnostics {
    std::vector<std::string> warnings;
    void warn(std::string msg) { warnings.push_back(std::move(msg)); }
};

// Error classes map onto the CLI exit-code contract.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// True when x lies outside the exclusion zone |x| <= half_width + margin,
// or unconditionally for the free particle.
bool outside_barrier_zone(const PostSelection& sel, const SquareBarrier& barrier);

}  // namespace tptweak
