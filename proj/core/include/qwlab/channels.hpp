#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qwlab/linalg.hpp"
#include "qwlab/rng.hpp"
#include "qwlab/walk.hpp"

namespace qwlab {

// Coin-space Kraus set. Every factory below produces a complete set
// (sum E^dag E = 1 within 1e-12); apply sites validate before use.
struct KrausChannel {
  std::vector<Mat2> ops;
  std::string label;
  std::vector<std::pair<std::string, double>> params;

  double completeness_defect() const;
  void validate() const;  // throws std::invalid_argument on broken sets
};

KrausChannel bit_flip(double p);
KrausChannel phase_flip(double p);
KrausChannel amplitude_damping(double p);

// Dissipative coupling to a thermal bath; natural units (hbar = k_B = 1,
// bath frequency 1), so temperature enters only through the occupation
// n_thermal. p_step is the flip probability accumulated over one delta_t.
struct GadParams {
  double gamma0 = 0;
  double temperature = 0;
  double delta_t = 1.0;

  double n_thermal() const;
  double chi() const;                // (1 + 1/(2 n_th + 1)) / 2
  double p_of(double time) const;    // 1 - e^{-gamma0 (2 n_th + 1) time}
  double p_step() const { return p_of(delta_t); }
  void validate() const;
};

KrausChannel generalized_amplitude_damping(const GadParams& g);

// Composition: applies Pauli X after every operator of `ch` (deterministic
// per-step flip stacked on a damping channel).
KrausChannel then_pauli_x(const KrausChannel& ch);

// Coin-only map rho -> sum E rho E^dag.
Mat2 apply_channel(const KrausChannel& ch, const Mat2& rho);

// Thermal relaxation in closed form, basis (|0>,|1>) with
// sigma_z = |1><1| - |0><0| and <sigma_minus> = rho_{10}:
//   z(t)        = e^{-G t} z(0) - (1 - e^{-G t}) / (2 n_th + 1)
//   rho_{10}(t) = e^{-G t / 2} rho_{10}(0),   G = gamma0 (2 n_th + 1).
// The per-step Kraus map reproduces this exactly at step boundaries.
Mat2 closed_form_gad_state(double z0, cplx sminus0, const GadParams& g,
                           double time);

// Quantum-trajectory unravelling: walk step, then select E_x with
// probability |E_x psi|^2 and renormalize. Branches below norm^2 1e-14 are
// excluded. Ensemble averages over seeds converge to the Kraus evolution.
WalkerState sample_trajectory(const WalkerState& s, const Mat2& coin,
                              const KrausChannel& ch, int steps,
                              std::uint64_t seed);
WalkerState sample_trajectory(const WalkerState& s, const StepPlan& plan,
                              const KrausChannel& ch, int steps, Rng& rng);

}  // namespace qwlab
