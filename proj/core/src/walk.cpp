#include "qwlab/walk.hpp"

#include <cmath>
#include <stdexcept>

#include "qwlab/rng.hpp"

namespace qwlab {

Topology Topology::line(int step_budget) {
  if (step_budget < 0) throw std::invalid_argument("line: negative budget");
  Topology t;
  t.kind = TopologyKind::line;
  t.budget = step_budget;
  return t;
}

Topology Topology::cycle(int sites) {
  if (sites < 2) throw std::invalid_argument("cycle: need n >= 2");
  Topology t;
  t.kind = TopologyKind::cycle;
  t.n = sites;
  return t;
}

double WalkerState::norm() const {
  return std::sqrt(norm_sq(c0) + norm_sq(c1));
}

double Distribution::total() const {
  double s = 0;
  for (double x : p) s += x;
  return s;
}

WalkerState init_pure(const InitialSpec& spec, const Topology& topo) {
  WalkerState s;
  s.topo = topo;
  const int n = topo.sites();
  s.c0.assign(static_cast<size_t>(n), cplx(0));
  s.c1.assign(static_cast<size_t>(n), cplx(0));
  int slot;
  if (topo.kind == TopologyKind::cycle) {
    if (spec.origin < 0 || spec.origin >= topo.n)
      throw std::invalid_argument("init_pure: origin outside cycle");
    s.base = 0;
    slot = spec.origin;
  } else {
    s.base = spec.origin - topo.budget;
    slot = topo.budget;
  }
  s.c0[static_cast<size_t>(slot)] = spec.amp0();
  s.c1[static_cast<size_t>(slot)] = spec.amp1();
  return s;
}

namespace {

// Workhorse: coin on each site pair, then conditional shift. Scratch buffers
// supplied by the caller so tight loops do not allocate.
void coin_shift(WalkerState& s, const Mat2& b, std::vector<cplx>& t0,
                std::vector<cplx>& t1) {
  const int n = s.sites();
  t0.assign(static_cast<size_t>(n), cplx(0));
  t1.assign(static_cast<size_t>(n), cplx(0));
  const cplx b00 = b(0, 0), b01 = b(0, 1), b10 = b(1, 0), b11 = b(1, 1);
  if (s.topo.kind == TopologyKind::cycle) {
    for (int j = 0; j < n; ++j) {
      const cplx a0 = b00 * s.c0[size_t(j)] + b01 * s.c1[size_t(j)];
      const cplx a1 = b10 * s.c0[size_t(j)] + b11 * s.c1[size_t(j)];
      t0[size_t((j + n - 1) % n)] += a0;
      t1[size_t((j + 1) % n)] += a1;
    }
  } else {
    if (s.steps >= s.topo.budget)
      throw std::invalid_argument("step: line step budget exhausted");
    for (int j = 0; j < n; ++j) {
      const cplx a0 = b00 * s.c0[size_t(j)] + b01 * s.c1[size_t(j)];
      const cplx a1 = b10 * s.c0[size_t(j)] + b11 * s.c1[size_t(j)];
      if (j > 0) t0[size_t(j - 1)] += a0;
      if (j + 1 < n) t1[size_t(j + 1)] += a1;
    }
  }
  s.c0.swap(t0);
  s.c1.swap(t1);
  s.steps += 1;
}

void apply_coin_unitary(WalkerState& s, const Mat2& u) {
  const cplx u00 = u(0, 0), u01 = u(0, 1), u10 = u(1, 0), u11 = u(1, 1);
  const int n = s.sites();
  for (int j = 0; j < n; ++j) {
    const cplx a0 = u00 * s.c0[size_t(j)] + u01 * s.c1[size_t(j)];
    const cplx a1 = u10 * s.c0[size_t(j)] + u11 * s.c1[size_t(j)];
    s.c0[size_t(j)] = a0;
    s.c1[size_t(j)] = a1;
  }
}

}  // namespace

void step_in_place(WalkerState& s, const Mat2& coin) {
  std::vector<cplx> t0, t1;
  coin_shift(s, coin, t0, t1);
}

WalkerState step(const WalkerState& s, const Mat2& coin) {
  WalkerState out = s;
  step_in_place(out, coin);
  return out;
}

void evolve_in_place(WalkerState& s, const StepPlan& plan, int steps) {
  if (steps < 0) throw std::invalid_argument("evolve: negative step count");
  std::vector<cplx> t0, t1;
  for (int k = 0; k < steps; ++k) {
    coin_shift(s, plan.coin, t0, t1);
    if (plan.insertion) apply_coin_unitary(s, *plan.insertion);
  }
}

WalkerState evolve(const WalkerState& s, const Mat2& coin, int steps) {
  return evolve(s, StepPlan::plain(coin), steps);
}

WalkerState evolve(const WalkerState& s, const StepPlan& plan, int steps) {
  WalkerState out = s;
  evolve_in_place(out, plan, steps);
  return out;
}

Distribution position_distribution(const WalkerState& s) {
  Distribution d;
  d.base = s.base;
  d.cyclic = s.topo.kind == TopologyKind::cycle;
  d.p.resize(s.c0.size());
  for (size_t j = 0; j < s.c0.size(); ++j)
    d.p[j] = std::norm(s.c0[j]) + std::norm(s.c1[j]);
  return d;
}

Distribution reverse_sites(const Distribution& d) {
  Distribution out = d;
  const int n = d.sites();
  if (d.cyclic) {
    for (int j = 0; j < n; ++j) out.p[size_t((n - j) % n)] = d.p[size_t(j)];
  } else {
    if (d.base != -(n - 1) / 2 || n % 2 == 0)
      throw std::invalid_argument("reverse_sites: window not centered on 0");
    for (int j = 0; j < n; ++j) out.p[size_t(n - 1 - j)] = d.p[size_t(j)];
  }
  return out;
}

WalkerState randomized_evolve(const InitialSpec& spec, int steps,
                              std::uint64_t seed, const AngleRange& xi,
                              const AngleRange& theta, const AngleRange& zeta,
                              CoinFamily family) {
  for (const AngleRange* r : {&xi, &theta, &zeta}) {
    if (r->lo > r->hi)
      throw std::invalid_argument("randomized_evolve: empty angle range");
    if (r->lo < 0 || r->hi > pi / 2.0 + 1e-12)
      throw std::invalid_argument("randomized_evolve: range outside [0, pi/2]");
  }
  WalkerState s = init_pure(spec, Topology::line(steps));
  Rng rng(seed);
  auto draw = [&rng](const AngleRange& r) {
    return r.lo + (r.hi - r.lo) * rng.uniform();
  };
  std::vector<cplx> t0, t1;
  for (int k = 0; k < steps; ++k) {
    const CoinParams p{draw(xi), draw(theta), draw(zeta)};
    coin_shift(s, make_coin(family, p), t0, t1);
  }
  return s;
}

}  // namespace qwlab
