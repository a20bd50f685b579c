#include "qwlab/symmetry.hpp"

#include <cmath>
#include <stdexcept>

namespace qwlab {

namespace {

Mat2 phase_insertion(double angle) {
  return Mat2{{cplx(1), cplx(0), cplx(0), std::polar(1.0, angle)}};
}

}  // namespace

SymmetryPlans make_symmetry_plans(const CoinParams& p, CoinFamily family,
                                  const SymmetryOp& op) {
  const Mat2 coin = make_coin(family, p);
  const Mat2 refl = make_coin(family, p.reflected());
  SymmetryPlans out{StepPlan::plain(coin), StepPlan::plain(coin)};
  switch (op.kind) {
    case SymmetryKind::pauli_z:
      out.augmented.insertion = pauli_z();
      break;
    case SymmetryKind::phase_shift:
    case SymmetryKind::phase_gate:
      out.augmented.insertion = phase_insertion(op.angle);
      break;
    case SymmetryKind::pauli_x:
      out.augmented.insertion = pauli_x();
      out.baseline = StepPlan::plain(refl);
      out.baseline.reverse_sites = true;
      break;
    case SymmetryKind::parity_reflect_flip:
      out.augmented = StepPlan::plain(refl);
      out.augmented.insertion = pauli_x();
      out.augmented.reverse_sites = true;
      break;
  }
  return out;
}

StepPlan apply_symmetry(const CoinParams& p, CoinFamily family,
                        const SymmetryOp& op) {
  return make_symmetry_plans(p, family, op).augmented;
}

double kolmogorov_distance(const Distribution& a, const Distribution& b) {
  if (a.sites() != b.sites() || a.base != b.base || a.cyclic != b.cyclic)
    throw std::invalid_argument("kolmogorov_distance: mismatched site sets");
  double s = 0;
  for (int j = 0; j < a.sites(); ++j)
    s += std::abs(a.p[size_t(j)] - b.p[size_t(j)]);
  return 0.5 * s;
}

namespace {

Distribution run_plan(const StepPlan& plan, const Topology& topo, int steps,
                      const KrausChannel* channel, const InitialSpec& initial) {
  Distribution d;
  if (channel) {
    DensityState rho = init_density(initial, topo);
    evolve_density_in_place(rho, plan, channel, steps);
    d = position_distribution(rho);
  } else {
    WalkerState s = init_pure(initial, topo);
    evolve_in_place(s, plan, steps);
    d = position_distribution(s);
  }
  return plan.reverse_sites ? reverse_sites(d) : d;
}

}  // namespace

SymmetryReport symmetry_report(const CoinParams& p, CoinFamily family,
                               const SymmetryOp& op, const Topology& topo,
                               int steps, const KrausChannel* channel,
                               const InitialSpec& initial) {
  const SymmetryPlans plans = make_symmetry_plans(p, family, op);
  SymmetryReport rep;
  rep.baseline = run_plan(plans.baseline, topo, steps, channel, initial);
  rep.augmented = run_plan(plans.augmented, topo, steps, channel, initial);
  rep.kolmogorov = kolmogorov_distance(rep.baseline, rep.augmented);
  rep.symmetric = rep.kolmogorov <= 1e-8;
  return rep;
}

CoherenceBins coherence_function(const DensityState& rho, int bins) {
  const int n = rho.nsites;
  if (bins < 1 || bins > n)
    throw std::invalid_argument("coherence_function: bad bin count");
  const bool cyc = rho.topo.kind == TopologyKind::cycle;
  const double s = n / 2.0;
  const double width = s / bins;
  CoherenceBins out;
  out.bins.assign(static_cast<size_t>(bins), 0.0);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          if (a == b && j == k) continue;  // diagonal carries no coherence
          int sep = std::abs(j - k);
          if (cyc) sep = std::min(sep, n - sep);
          const double mag = std::abs(rho.at(a, j, b, k));
          int bin = static_cast<int>(sep / width);
          if (bin >= bins) bin = bins - 1;  // separation exactly s
          out.bins[size_t(bin)] += mag;
          out.total += mag;
        }
  return out;
}

std::vector<TurnPoint> turn_series(const CoinParams& p, CoinFamily family,
                                   const SymmetryOp& op, int cycle_sites,
                                   int tau_max, const KrausChannel* channel,
                                   int bins, const InitialSpec& initial) {
  if (cycle_sites < 3 || cycle_sites % 2 == 0)
    throw std::invalid_argument("turn_series: need an odd cycle, n >= 3");
  if (tau_max < 1) throw std::invalid_argument("turn_series: tau_max < 1");
  const int s = (cycle_sites - 1) / 2;
  const Topology topo = Topology::cycle(cycle_sites);
  const SymmetryPlans plans = make_symmetry_plans(p, family, op);

  DensityState clean_base = init_density(initial, topo);
  DensityState clean_aug = clean_base;
  DensityState noisy_base = clean_base;
  DensityState noisy_aug = clean_base;

  auto dist = [](const DensityState& rho, const StepPlan& plan) {
    Distribution d = position_distribution(rho);
    return plan.reverse_sites ? reverse_sites(d) : d;
  };

  std::vector<TurnPoint> series;
  series.reserve(static_cast<size_t>(tau_max));
  for (int tau = 1; tau <= tau_max; ++tau) {
    evolve_density_in_place(clean_base, plans.baseline, nullptr, s);
    evolve_density_in_place(clean_aug, plans.augmented, nullptr, s);
    if (channel) {
      evolve_density_in_place(noisy_base, plans.baseline, channel, s);
      evolve_density_in_place(noisy_aug, plans.augmented, channel, s);
    }
    TurnPoint pt;
    pt.tau = tau;
    pt.steps = static_cast<long>(tau) * s;
    pt.d_noiseless =
        kolmogorov_distance(dist(clean_base, plans.baseline),
                            dist(clean_aug, plans.augmented));
    const CoherenceBins cclean = coherence_function(clean_base, bins);
    if (channel) {
      pt.d_noisy = kolmogorov_distance(dist(noisy_base, plans.baseline),
                                       dist(noisy_aug, plans.augmented));
      const CoherenceBins cnoisy = coherence_function(noisy_base, bins);
      pt.coherence_ratio_far =
          cclean.bins.back() > 0 ? cnoisy.bins.back() / cclean.bins.back() : 0;
      pt.coherence_ratio_total =
          cclean.total > 0 ? cnoisy.total / cclean.total : 0;
    } else {
      pt.d_noisy = pt.d_noiseless;
      pt.coherence_ratio_far = 1.0;
      pt.coherence_ratio_total = 1.0;
    }
    pt.d_ratio = pt.d_noiseless > 1e-12 ? pt.d_noisy / pt.d_noiseless : 0.0;
    series.push_back(pt);
  }
  return series;
}

}  // namespace qwlab
