#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "qwlab/channels.hpp"
#include "qwlab/linalg.hpp"
#include "qwlab/walk.hpp"

namespace qwlab {

// One distinguishable walker: position amplitudes (absolute sites, already
// normalized together) sharing a single coin state cos(delta)|0> +
// e^{i eta} sin(delta)|1>.
struct ParticleInit {
  std::vector<std::pair<int, cplx>> sites;
  double delta = pi / 4.0;
  double eta = pi / 2.0;
};

// M walkers on adjacent sites centered on 0 (even M leans left: -M/2 ..
// M/2-1), each localized, coin (|0> + i|1>)/sqrt(2).
std::vector<ParticleInit> mi_initial(int m);

// Delocalized variant: every walker spread uniformly (equal positive
// amplitudes) over those same M central sites.
std::vector<ParticleInit> sf_initial(int m);

struct EnsembleSpec {
  std::vector<ParticleInit> particles;
  TopologyKind topology = TopologyKind::line;
  int cycle_sites = 0;  // cycle only
  Mat2 coin;
  std::optional<KrausChannel> noise;
  int steps = 0;
};

// Per-particle position distributions over a common site window; particles
// never interact, so each row is an independent walk.
struct LatticeProfile {
  int base = 0;
  int steps = 0;
  std::vector<std::vector<double>> occupation;  // [particle][site]

  int particles() const { return static_cast<int>(occupation.size()); }
  int sites() const {
    return occupation.empty() ? 0 : static_cast<int>(occupation[0].size());
  }
  int site_at(int slot) const { return base + slot; }
};

LatticeProfile evolve_ensemble(const EnsembleSpec& spec);

// n_j = sum_i a_j^(i); sums to M.
std::vector<double> density_profile(const LatticeProfile& profile);

struct EntanglementResult {
  double value = 0;
  int site_count = 0;
  int particles = 0;
};

// Global entanglement of the lattice-occupation state:
// E = (2^M / (2^M - 1)) (1 - (1/L) sum_j prod_i [(a_j^i)^2 + (1-a_j^i)^2]),
// L = realized window size. Exact for independent walkers because each
// site-occupation reduction is diagonal with per-particle factors.
EntanglementResult meyer_wallach_spatial(const LatticeProfile& profile);

// Independent small-system oracle: enumerates all L^M joint configurations
// of per-particle (coin-projected) position amplitudes, bins probability by
// site-occupation pattern, and reduces in the 2^M-dimensional site space
// without using the per-particle product shortcut. M <= 3 enforced.
double meyer_wallach_bruteforce(
    const std::vector<std::vector<cplx>>& per_particle_amps);

// Coin-|0> projected per-particle amplitude rows over the common window
// (noiseless specs only); renormalized per particle.
std::vector<std::vector<cplx>> project_coin_zero(const EnsembleSpec& spec);

// M walkers on Cycle(M), one per site, symmetric coin states; E(t) for
// t = 0..steps via the product formula on full position distributions.
std::vector<double> closed_chain_entanglement(int m, const Mat2& coin,
                                              int steps);

}  // namespace qwlab
