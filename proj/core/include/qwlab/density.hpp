#pragma once

#include "qwlab/channels.hpp"
#include "qwlab/linalg.hpp"
#include "qwlab/walk.hpp"

namespace qwlab {

// Full coin (x) position density matrix, dimension 2*nsites, row-major,
// index ordering (coin, site): r = a*nsites + j.
struct DensityState {
  Topology topo;
  int base = 0;
  int nsites = 0;
  int steps = 0;
  std::vector<cplx> m;

  int dim() const { return 2 * nsites; }
  cplx& at(int a, int j, int b, int k) {
    return m[size_t((a * nsites + j) * dim() + (b * nsites + k))];
  }
  const cplx& at(int a, int j, int b, int k) const {
    return m[size_t((a * nsites + j) * dim() + (b * nsites + k))];
  }

  double trace_real() const;
  double hermiticity_defect() const;  // max |rho - rho^dag|
  double purity() const;              // tr rho^2 via Frobenius norm
};

DensityState init_density(const InitialSpec& spec, const Topology& topo);
DensityState density_from_pure(const WalkerState& s);

// One noisy walk step: coin, shift, optional coin-space insertion, then the
// channel's Kraus sum (each operator acting as E (x) 1_position). The
// insertion sits before the channel; with thermal damping plus the
// reflection-composed symmetry the two orders are not equivalent and only
// this one preserves the line symmetries.
void step_density_in_place(DensityState& rho, const StepPlan& plan,
                           const KrausChannel* channel);
DensityState step_density(const DensityState& rho, const StepPlan& plan,
                          const KrausChannel* channel);
void evolve_density_in_place(DensityState& rho, const StepPlan& plan,
                             const KrausChannel* channel, int steps);

Distribution position_distribution(const DensityState& rho);

// Partial trace over position.
Mat2 reduced_coin(const DensityState& rho);
Mat2 reduced_coin(const WalkerState& s);

}  // namespace qwlab
