#include "qwlab/many_body.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qwlab/density.hpp"

namespace qwlab {

namespace {

std::vector<int> block_sites(int m) {
  // m contiguous sites centered on 0; even m occupies -m/2 .. m/2-1
  std::vector<int> sites(static_cast<size_t>(m));
  const int start = m % 2 == 1 ? -(m - 1) / 2 : -m / 2;
  for (int i = 0; i < m; ++i) sites[size_t(i)] = start + i;
  return sites;
}

}  // namespace

std::vector<ParticleInit> mi_initial(int m) {
  if (m < 1) throw std::invalid_argument("mi_initial: need m >= 1");
  const std::vector<int> sites = block_sites(m);
  std::vector<ParticleInit> out(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i)
    out[size_t(i)].sites = {{sites[size_t(i)], cplx(1.0)}};
  return out;
}

std::vector<ParticleInit> sf_initial(int m) {
  if (m < 1) throw std::invalid_argument("sf_initial: need m >= 1");
  const std::vector<int> sites = block_sites(m);
  const cplx amp(1.0 / std::sqrt(static_cast<double>(m)));
  std::vector<ParticleInit> out(static_cast<size_t>(m));
  for (auto& particle : out)
    for (int site : sites) particle.sites.emplace_back(site, amp);
  return out;
}

namespace {

struct Window {
  int base = 0;
  int size = 0;
};

Window ensemble_window(const EnsembleSpec& spec) {
  if (spec.topology == TopologyKind::cycle)
    return {0, spec.cycle_sites};
  int lo = 0, hi = 0;
  bool first = true;
  for (const ParticleInit& p : spec.particles)
    for (const auto& [site, amp] : p.sites) {
      (void)amp;
      lo = first ? site : std::min(lo, site);
      hi = first ? site : std::max(hi, site);
      first = false;
    }
  lo -= spec.steps;
  hi += spec.steps;
  return {lo, hi - lo + 1};
}

// State over the particle's own reachable window (line) or the cycle.
WalkerState init_particle(const ParticleInit& p, const EnsembleSpec& spec) {
  if (p.sites.empty())
    throw std::invalid_argument("ensemble: particle with empty support");
  WalkerState s;
  const cplx a0(std::cos(p.delta));
  const cplx a1 = std::polar(std::sin(p.delta), p.eta);
  if (spec.topology == TopologyKind::cycle) {
    s.topo = Topology::cycle(spec.cycle_sites);
    s.base = 0;
    s.c0.assign(static_cast<size_t>(spec.cycle_sites), cplx(0));
    s.c1.assign(static_cast<size_t>(spec.cycle_sites), cplx(0));
    for (const auto& [site, amp] : p.sites) {
      const int j = ((site % spec.cycle_sites) + spec.cycle_sites) %
                    spec.cycle_sites;
      s.c0[size_t(j)] += amp * a0;
      s.c1[size_t(j)] += amp * a1;
    }
    return s;
  }
  int lo = p.sites[0].first, hi = p.sites[0].first;
  for (const auto& [site, amp] : p.sites) {
    (void)amp;
    lo = std::min(lo, site);
    hi = std::max(hi, site);
  }
  s.topo = Topology::line(spec.steps);
  s.base = lo - spec.steps;
  const int width = hi - lo + 2 * spec.steps + 1;
  s.c0.assign(static_cast<size_t>(width), cplx(0));
  s.c1.assign(static_cast<size_t>(width), cplx(0));
  for (const auto& [site, amp] : p.sites) {
    s.c0[size_t(site - s.base)] += amp * a0;
    s.c1[size_t(site - s.base)] += amp * a1;
  }
  return s;
}

void add_into_window(std::vector<double>& row, const Window& w,
                     const Distribution& d) {
  for (int j = 0; j < d.sites(); ++j) {
    const int slot = d.site_at(j) - w.base;
    if (slot >= 0 && slot < w.size) row[size_t(slot)] += d.p[size_t(j)];
  }
}

}  // namespace

LatticeProfile evolve_ensemble(const EnsembleSpec& spec) {
  if (spec.particles.empty())
    throw std::invalid_argument("ensemble: no particles");
  if (spec.steps < 0) throw std::invalid_argument("ensemble: negative steps");
  if (spec.topology == TopologyKind::cycle && spec.cycle_sites < 2)
    throw std::invalid_argument("ensemble: bad cycle size");
  const Window w = ensemble_window(spec);
  LatticeProfile profile;
  profile.base = w.base;
  profile.steps = spec.steps;
  profile.occupation.assign(spec.particles.size(),
                            std::vector<double>(static_cast<size_t>(w.size), 0.0));
  const StepPlan plan = StepPlan::plain(spec.coin);
  for (size_t i = 0; i < spec.particles.size(); ++i) {
    WalkerState s = init_particle(spec.particles[i], spec);
    Distribution d;
    if (spec.noise) {
      DensityState rho = density_from_pure(s);
      evolve_density_in_place(rho, plan, &*spec.noise, spec.steps);
      d = position_distribution(rho);
    } else {
      evolve_in_place(s, plan, spec.steps);
      d = position_distribution(s);
    }
    add_into_window(profile.occupation[i], w, d);
  }
  return profile;
}

std::vector<double> density_profile(const LatticeProfile& profile) {
  std::vector<double> n(static_cast<size_t>(profile.sites()), 0.0);
  for (const auto& row : profile.occupation)
    for (size_t j = 0; j < row.size(); ++j) n[j] += row[j];
  return n;
}

EntanglementResult meyer_wallach_spatial(const LatticeProfile& profile) {
  const int m = profile.particles();
  const int l = profile.sites();
  if (m < 1 || l < 1)
    throw std::invalid_argument("meyer_wallach_spatial: empty profile");
  double purity_sum = 0;
  for (int j = 0; j < l; ++j) {
    double prod = 1.0;
    for (int i = 0; i < m; ++i) {
      const double a =
          std::clamp(profile.occupation[size_t(i)][size_t(j)], 0.0, 1.0);
      prod *= a * a + (1.0 - a) * (1.0 - a);
    }
    purity_sum += prod;
  }
  // 2^M/(2^M-1) without overflow: exp2(-m) underflows to 0 for large m,
  // where the prefactor is 1 to machine precision anyway.
  const double prefactor = 1.0 / (1.0 - std::exp2(-static_cast<double>(m)));
  EntanglementResult out;
  out.site_count = l;
  out.particles = m;
  out.value = std::max(0.0, prefactor * (1.0 - purity_sum / l));
  return out;
}

double meyer_wallach_bruteforce(
    const std::vector<std::vector<cplx>>& per_particle_amps) {
  const int m = static_cast<int>(per_particle_amps.size());
  if (m < 1 || m > 3)
    throw std::invalid_argument("meyer_wallach_bruteforce: need 1 <= M <= 3");
  const int l = static_cast<int>(per_particle_amps[0].size());
  for (const auto& row : per_particle_amps)
    if (static_cast<int>(row.size()) != l)
      throw std::invalid_argument("meyer_wallach_bruteforce: ragged windows");
  std::vector<std::vector<double>> prob(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) {
    double norm = 0;
    for (const cplx& a : per_particle_amps[size_t(i)]) norm += std::norm(a);
    if (norm < 1e-30)
      throw std::runtime_error(
          "meyer_wallach_bruteforce: projection yields zero norm");
    prob[size_t(i)].resize(static_cast<size_t>(l));
    for (int j = 0; j < l; ++j)
      prob[size_t(i)][size_t(j)] =
          std::norm(per_particle_amps[size_t(i)][size_t(j)]) / norm;
  }
  // Occupation-pattern probabilities per site, accumulated over all L^M
  // joint configurations; site reductions in the single-excitation sector
  // are diagonal in the pattern basis, so these are the full eigenvalues.
  const int patterns = 1 << m;
  std::vector<std::vector<double>> site_pattern(
      static_cast<size_t>(l), std::vector<double>(static_cast<size_t>(patterns), 0.0));
  std::vector<int> config(static_cast<size_t>(m), 0);
  for (;;) {
    double pconf = 1.0;
    for (int i = 0; i < m; ++i)
      pconf *= prob[size_t(i)][size_t(config[size_t(i)])];
    if (pconf > 0) {
      for (int j = 0; j < l; ++j) {
        int pattern = 0;
        for (int i = 0; i < m; ++i)
          if (config[size_t(i)] == j) pattern |= 1 << i;
        site_pattern[size_t(j)][size_t(pattern)] += pconf;
      }
    }
    int digit = 0;
    while (digit < m && ++config[size_t(digit)] == l) {
      config[size_t(digit)] = 0;
      ++digit;
    }
    if (digit == m) break;
  }
  double purity_sum = 0;
  for (int j = 0; j < l; ++j) {
    double purity = 0;
    for (double p : site_pattern[size_t(j)]) purity += p * p;
    purity_sum += purity;
  }
  const double d = std::exp2(static_cast<double>(m));
  return std::max(0.0, d / (d - 1.0) * (1.0 - purity_sum / l));
}

std::vector<std::vector<cplx>> project_coin_zero(const EnsembleSpec& spec) {
  if (spec.noise)
    throw std::invalid_argument("project_coin_zero: pure evolutions only");
  const Window w = ensemble_window(spec);
  const StepPlan plan = StepPlan::plain(spec.coin);
  std::vector<std::vector<cplx>> rows;
  rows.reserve(spec.particles.size());
  for (const ParticleInit& p : spec.particles) {
    WalkerState s = init_particle(p, spec);
    evolve_in_place(s, plan, spec.steps);
    std::vector<cplx> row(static_cast<size_t>(w.size), cplx(0));
    double norm = 0;
    for (int j = 0; j < s.sites(); ++j) {
      const int slot = s.site_at(j) - w.base;
      if (slot >= 0 && slot < w.size) {
        row[size_t(slot)] += s.c0[size_t(j)];
        norm += std::norm(s.c0[size_t(j)]);
      }
    }
    if (norm < 1e-30)
      throw std::runtime_error("project_coin_zero: projection yields zero norm");
    const double inv = 1.0 / std::sqrt(norm);
    for (cplx& a : row) a *= inv;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<double> closed_chain_entanglement(int m, const Mat2& coin,
                                              int steps) {
  if (m < 2) throw std::invalid_argument("closed_chain: need m >= 2");
  if (steps < 0) throw std::invalid_argument("closed_chain: negative steps");
  std::vector<WalkerState> walkers;
  walkers.reserve(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i)
    walkers.push_back(
        init_pure(InitialSpec{pi / 4.0, pi / 2.0, i}, Topology::cycle(m)));
  LatticeProfile profile;
  profile.base = 0;
  std::vector<double> series;
  series.reserve(static_cast<size_t>(steps + 1));
  const StepPlan plan = StepPlan::plain(coin);
  for (int t = 0; t <= steps; ++t) {
    profile.steps = t;
    profile.occupation.assign(static_cast<size_t>(m), {});
    for (int i = 0; i < m; ++i)
      profile.occupation[size_t(i)] = position_distribution(walkers[size_t(i)]).p;
    series.push_back(meyer_wallach_spatial(profile).value);
    if (t < steps)
      for (WalkerState& s : walkers) evolve_in_place(s, plan, 1);
  }
  return series;
}

}  // namespace qwlab
