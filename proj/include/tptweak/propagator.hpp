// Exact spectral propagation of the scattered packet at a fixed exterior
// detection point. Construction folds the packet overlap, the scattering
// eigenfunction at the detection point, and the quadrature weight into one
// complex coefficient per momentum node; each time sample is then a single
// weighted sum over nodes. The same node data yields the wavefunction, the
// Hamiltonian applied to it, and its spatial derivative.
#pragma once

#include "tptweak/quadrature.hpp"
#include "tptweak/types.hpp"

namespace tptweak {

// psi, H psi and d/dx psi evaluated on a common time grid.
struct EvolvedSamples {
    std::vector<double> times;
    std::vector<cplx> psi;
    std::vector<cplx> hpsi;
    std::vector<cplx> dpsi;

    std::size_t size() const { return times.size(); }
};

class SpectralPropagator {
  public:
    // Throws ConfigError when the detection point sits inside the exclusion
    // zone around a nonzero barrier (the exterior eigenfunction branches used
    // here would not apply there).
    SpectralPropagator(const CoherentState& state, const SquareBarrier& barrier,
                       const PhysicalParams& params, const MomentumGrid& grid,
                       const PostSelection& detection);

    cplx wavefunction_at(double t) const;
    cplx hamiltonian_action_at(double t) const;
    cplx spatial_derivative_at(double t) const;

    // Evaluates all three series on every grid time. Work is split over time
    // samples; the per-sample momentum reduction always runs in ascending node
    // order, so results are bitwise identical for any thread count.
    EvolvedSamples sample(const TimeGrid& grid, int threads = 1) const;

    double detection_point() const { return x_; }

  private:
    struct NodeTerm {
        double omega;     // p^2 / (2 M hbar)
        cplx psi_coef;    // weight * <x|p+> * <p+|Psi_0>
        cplx dpsi_coef;   // weight * d/dx<x|p+> * <p+|Psi_0>
    };
    std::vector<NodeTerm> terms_;
    double x_ = 0.0;
    double hbar_ = 1.0;
};

}  // namespace tptweak
