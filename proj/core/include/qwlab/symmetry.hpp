#pragma once

#include <optional>
#include <vector>

#include "qwlab/coin.hpp"
#include "qwlab/density.hpp"
#include "qwlab/walk.hpp"

namespace qwlab {

// Per-step coin-space insertions and the reflection-composed operation.
// phase_shift and phase_gate share the matrix diag(1, e^{i angle}); they are
// kept apart because reports label them differently (line vs cycle usage).
enum class SymmetryKind {
  pauli_z,
  pauli_x,
  phase_shift,
  parity_reflect_flip,
  phase_gate,
};

struct SymmetryOp {
  SymmetryKind kind = SymmetryKind::pauli_z;
  double angle = 0;

  static SymmetryOp z() { return {SymmetryKind::pauli_z, 0}; }
  static SymmetryOp x() { return {SymmetryKind::pauli_x, 0}; }
  static SymmetryOp phase_shift(double phi) {
    return {SymmetryKind::phase_shift, phi};
  }
  static SymmetryOp prx() { return {SymmetryKind::parity_reflect_flip, 0}; }
  static SymmetryOp phase_gate(double beta) {
    return {SymmetryKind::phase_gate, beta};
  }
};

// Baseline and augmented step plans realizing the comparison a symmetry
// claim makes:
//   pauli_z / phase_shift / phase_gate: baseline = plain walk, augmented =
//     same coin with the insertion.
//   pauli_x: augmented = X insertion on the original coin; baseline = plain
//     walk with reflected angles, site axis mirrored at report time.
//   parity_reflect_flip: augmented = X insertion on the reflected coin with
//     mirrored reporting; baseline = plain walk with the original coin.
struct SymmetryPlans {
  StepPlan baseline;
  StepPlan augmented;
};
SymmetryPlans make_symmetry_plans(const CoinParams& p, CoinFamily family,
                                  const SymmetryOp& op);

// The augmented plan only (spec'd single-plan entry point).
StepPlan apply_symmetry(const CoinParams& p, CoinFamily family,
                        const SymmetryOp& op);

// Half the l1 distance between distributions on the same site set.
double kolmogorov_distance(const Distribution& a, const Distribution& b);

struct SymmetryReport {
  Distribution baseline;
  Distribution augmented;
  double kolmogorov = 0;
  bool symmetric = false;  // kolmogorov <= 1e-8
};

SymmetryReport symmetry_report(const CoinParams& p, CoinFamily family,
                               const SymmetryOp& op, const Topology& topo,
                               int steps, const KrausChannel* channel,
                               const InitialSpec& initial);

// Off-diagonal density mass binned by position separation into M intervals
// of width s/M, s = half the site count (cyclic distance on a cycle); the
// first bin also carries the coin coherence at separation zero.
struct CoherenceBins {
  std::vector<double> bins;
  double total = 0;
};
CoherenceBins coherence_function(const DensityState& rho, int bins);

// One "turn" is s = (n-1)/2 steps on an odd cycle. Evolves plain and
// augmented walks with and without the channel, sampling after each turn.
struct TurnPoint {
  int tau = 0;
  long steps = 0;
  double d_noisy = 0;
  double d_noiseless = 0;
  double d_ratio = 0;              // d_noisy / d_noiseless, 0 when baseline ~ 0
  double coherence_ratio_far = 0;  // last bin: largest separations
  double coherence_ratio_total = 0;
};
std::vector<TurnPoint> turn_series(const CoinParams& p, CoinFamily family,
                                   const SymmetryOp& op, int cycle_sites,
                                   int tau_max, const KrausChannel* channel,
                                   int bins, const InitialSpec& initial);

}  // namespace qwlab
