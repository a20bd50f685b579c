#include "qwlab/observables.hpp"

#include <cmath>
#include <stdexcept>

#include "qwlab/density.hpp"

namespace qwlab {

MomentSummary moments(const Distribution& d) {
  double m1 = 0, m2 = 0;
  for (int j = 0; j < d.sites(); ++j) {
    const double site = d.site_at(j);
    m1 += site * d.p[size_t(j)];
    m2 += site * site * d.p[size_t(j)];
  }
  MomentSummary out;
  out.mean = m1;
  out.variance = std::max(0.0, m2 - m1 * m1);
  out.std = std::sqrt(out.variance);
  return out;
}

double c_theta(double theta, int t) {
  if (t <= 0) throw std::invalid_argument("c_theta: t must be positive");
  WalkerState s = init_pure(InitialSpec::symmetric(), Topology::line(t));
  const Mat2 coin = u2_coin_prime({0.0, theta, 0.0});
  evolve_in_place(s, StepPlan::plain(coin), t);
  return moments(position_distribution(s)).variance /
         (static_cast<double>(t) * t);
}

Distribution envelope_distribution(double theta, int t) {
  if (t <= 0) throw std::invalid_argument("envelope: t must be positive");
  const double c = std::cos(theta);
  const double edge = t * c;
  const int jmax = static_cast<int>(std::floor(edge));
  const double c2 = std::cos(2.0 * theta);
  const double k = 0.5 * std::sqrt(static_cast<double>(t)) * c *
                   (1.0 + c2 * c2) * (1.0 + std::sin(theta));
  Distribution d;
  d.base = -jmax;
  d.p.assign(static_cast<size_t>(2 * jmax + 1), 0.0);
  const double amp = (1.0 + c2 * c2) / std::sqrt(static_cast<double>(t));
  double total = 0;
  for (int j = -jmax; j <= jmax; ++j) {
    const double u = static_cast<double>(j) * j / (edge * edge) - 1.0;
    const double v = amp * std::exp(k * u);
    d.p[size_t(j + jmax)] = v;
    total += v;
  }
  for (double& x : d.p) x /= total;
  return d;
}

double shannon_entropy(const Distribution& d) {
  double h = 0;
  for (double p : d.p)
    if (p > 0) h -= p * std::log(p);
  return h;
}

namespace {

int origin_slot(const WalkerState& s, const InitialSpec& spec) {
  return spec.origin - s.base;
}

double origin_probability(const WalkerState& s, int slot) {
  return std::norm(s.c0[size_t(slot)]) + std::norm(s.c1[size_t(slot)]);
}

}  // namespace

double recurrence_probability(const Mat2& coin, const InitialSpec& spec,
                              const Topology& topo, int t) {
  if (t < 0) throw std::invalid_argument("recurrence_probability: t < 0");
  Topology use = topo;
  if (use.kind == TopologyKind::line && use.budget < t) use.budget = t;
  WalkerState s = init_pure(spec, use);
  evolve_in_place(s, StepPlan::plain(coin), t);
  return origin_probability(s, origin_slot(s, spec));
}

double polya_number(const Mat2& coin, const InitialSpec& spec,
                    const Topology& topo, int t_max) {
  if (t_max < 1) throw std::invalid_argument("polya_number: t_max < 1");
  Topology use = topo;
  if (use.kind == TopologyKind::line && use.budget < t_max) use.budget = t_max;
  WalkerState s = init_pure(spec, use);
  const int slot = origin_slot(s, spec);
  double survive = 1.0;  // prod (1 - P0(t))
  const StepPlan plan = StepPlan::plain(coin);
  for (int t = 1; t <= t_max; ++t) {
    evolve_in_place(s, plan, 1);
    survive *= 1.0 - std::min(1.0, origin_probability(s, slot));
  }
  return 1.0 - survive;
}

Distribution time_averaged_distribution(const Mat2& coin,
                                        const InitialSpec& spec,
                                        const Topology& topo, long T) {
  if (topo.kind != TopologyKind::cycle)
    throw std::invalid_argument("time_averaged_distribution: cycle only");
  if (T < 1) throw std::invalid_argument("time_averaged_distribution: T < 1");
  WalkerState s = init_pure(spec, topo);
  Distribution acc = position_distribution(s);  // tau = 0 term
  const StepPlan plan = StepPlan::plain(coin);
  for (long tau = 1; tau < T; ++tau) {
    evolve_in_place(s, plan, 1);
    const Distribution d = position_distribution(s);
    for (size_t j = 0; j < acc.p.size(); ++j) acc.p[j] += d.p[j];
  }
  for (double& x : acc.p) x /= static_cast<double>(T);
  return acc;
}

double total_variation_from_uniform(const Distribution& d) {
  const double u = 1.0 / d.sites();
  double s = 0;
  for (double p : d.p) s += std::abs(p - u);
  return 0.5 * s;
}

double max_deviation_from_uniform(const Distribution& d) {
  const double u = 1.0 / d.sites();
  double mx = 0;
  for (double p : d.p) mx = std::max(mx, std::abs(p - u));
  return mx;
}

std::optional<long> mixing_time(const Mat2& coin, const InitialSpec& spec,
                                const Topology& topo, double eps) {
  if (topo.kind != TopologyKind::cycle)
    throw std::invalid_argument("mixing_time: cycle only");
  if (eps <= 0) throw std::invalid_argument("mixing_time: eps must be > 0");
  const int n = topo.n;
  const long cap =
      static_cast<long>(std::ceil(20.0 * n * std::log(static_cast<double>(n)))) +
      1;
  WalkerState s = init_pure(spec, topo);
  std::vector<double> acc(static_cast<size_t>(n), 0.0);
  const StepPlan plan = StepPlan::plain(coin);
  const double u = 1.0 / n;
  for (long T = 1; T <= cap; ++T) {
    const Distribution d = position_distribution(s);
    double tv = 0;
    for (int j = 0; j < n; ++j) {
      acc[size_t(j)] += d.p[size_t(j)];
      tv += std::abs(acc[size_t(j)] / T - u);
    }
    if (0.5 * tv <= eps) return T;
    evolve_in_place(s, plan, 1);
  }
  return std::nullopt;
}

double coin_position_entanglement(const WalkerState& s) {
  const Mat2 rc = reduced_coin(s);
  const auto ev = hermitian_eigenvalues(rc);
  double e = 0;
  for (double lam : ev)
    if (lam > 1e-15) e -= lam * std::log2(lam);
  return e;
}

Distribution classical_walk_reference(int t) {
  if (t < 0) throw std::invalid_argument("classical_walk_reference: t < 0");
  Distribution d;
  d.base = -t;
  d.p.assign(static_cast<size_t>(2 * t + 1), 0.0);
  const double loghalf = -std::log(2.0) * t;
  for (int k = 0; k <= t; ++k) {  // k right moves -> site 2k - t
    const double logp = loghalf + std::lgamma(t + 1.0) -
                        std::lgamma(k + 1.0) - std::lgamma(t - k + 1.0);
    d.p[size_t(2 * k)] = std::exp(logp);
  }
  return d;
}

}  // namespace qwlab
