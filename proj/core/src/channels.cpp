#include "qwlab/channels.hpp"

#include <cmath>
#include <stdexcept>

namespace qwlab {

double KrausChannel::completeness_defect() const {
  Mat2 s = Mat2::zero();
  for (const Mat2& e : ops) s = s + e.adjoint() * e;
  return max_abs_diff(s, Mat2::identity());
}

void KrausChannel::validate() const {
  if (ops.empty()) throw std::invalid_argument(label + ": empty Kraus set");
  if (completeness_defect() > 1e-12)
    throw std::invalid_argument(label + ": Kraus completeness violated");
}

namespace {

void check_probability(double p, const char* who) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument(std::string(who) + ": p outside [0,1]");
}

// Scaled operators with exactly zero weight are dropped so degenerate
// parameter points (p=0, T=0) produce the minimal channel.
void push_scaled(KrausChannel& ch, double w, const Mat2& m) {
  if (w == 0.0) return;
  ch.ops.push_back(m * cplx(w));
}

}  // namespace

KrausChannel bit_flip(double p) {
  check_probability(p, "bit_flip");
  KrausChannel ch;
  ch.label = "bit-flip";
  ch.params = {{"p", p}};
  push_scaled(ch, std::sqrt(1.0 - p), Mat2::identity());
  push_scaled(ch, std::sqrt(p), pauli_x());
  return ch;
}

KrausChannel phase_flip(double p) {
  check_probability(p, "phase_flip");
  KrausChannel ch;
  ch.label = "phase-flip";
  ch.params = {{"p", p}};
  push_scaled(ch, std::sqrt(1.0 - p), Mat2::identity());
  push_scaled(ch, std::sqrt(p), pauli_z());
  return ch;
}

KrausChannel amplitude_damping(double p) {
  check_probability(p, "amplitude_damping");
  const double q = std::sqrt(1.0 - p);
  KrausChannel ch;
  ch.label = "amplitude-damping";
  ch.params = {{"p", p}};
  ch.ops.push_back(Mat2{{cplx(1), cplx(0), cplx(0), cplx(q)}});
  push_scaled(ch, std::sqrt(p), Mat2{{cplx(0), cplx(1), cplx(0), cplx(0)}});
  return ch;
}

double GadParams::n_thermal() const {
  if (temperature <= 0) return 0.0;
  return 1.0 / std::expm1(1.0 / temperature);
}

double GadParams::chi() const {
  return 0.5 * (1.0 + 1.0 / (2.0 * n_thermal() + 1.0));
}

double GadParams::p_of(double time) const {
  return -std::expm1(-gamma0 * (2.0 * n_thermal() + 1.0) * time);
}

void GadParams::validate() const {
  if (gamma0 < 0 || temperature < 0 || delta_t <= 0)
    throw std::invalid_argument("GadParams: need gamma0,T >= 0 and delta_t > 0");
}

KrausChannel generalized_amplitude_damping(const GadParams& g) {
  g.validate();
  const double p = g.p_step();
  const double x = g.chi();
  const double q = std::sqrt(1.0 - p), rp = std::sqrt(p);
  KrausChannel ch;
  ch.label = "generalized-amplitude-damping";
  ch.params = {{"gamma0", g.gamma0},
               {"temperature", g.temperature},
               {"delta_t", g.delta_t}};
  push_scaled(ch, std::sqrt(x), Mat2{{cplx(1), cplx(0), cplx(0), cplx(q)}});
  if (p > 0)
    push_scaled(ch, std::sqrt(x), Mat2{{cplx(0), cplx(rp), cplx(0), cplx(0)}});
  push_scaled(ch, std::sqrt(1.0 - x),
              Mat2{{cplx(q), cplx(0), cplx(0), cplx(1)}});
  if (p > 0)
    push_scaled(ch, std::sqrt(1.0 - x),
                Mat2{{cplx(0), cplx(0), cplx(rp), cplx(0)}});
  return ch;
}

KrausChannel then_pauli_x(const KrausChannel& ch) {
  KrausChannel out;
  out.label = ch.label + "+flip";
  out.params = ch.params;
  const Mat2 x = pauli_x();
  for (const Mat2& e : ch.ops) out.ops.push_back(x * e);
  return out;
}

Mat2 apply_channel(const KrausChannel& ch, const Mat2& rho) {
  Mat2 out = Mat2::zero();
  for (const Mat2& e : ch.ops) out = out + e * rho * e.adjoint();
  return out;
}

Mat2 closed_form_gad_state(double z0, cplx sminus0, const GadParams& g,
                           double time) {
  g.validate();
  const double big_g = g.gamma0 * (2.0 * g.n_thermal() + 1.0);
  const double decay = std::exp(-big_g * time);
  const double z =
      decay * z0 - (1.0 - decay) / (2.0 * g.n_thermal() + 1.0);
  const cplx sm = std::exp(-0.5 * big_g * time) * sminus0;
  return Mat2{{cplx(0.5 * (1.0 - z)), std::conj(sm), sm, cplx(0.5 * (1.0 + z))}};
}

WalkerState sample_trajectory(const WalkerState& s, const Mat2& coin,
                              const KrausChannel& ch, int steps,
                              std::uint64_t seed) {
  Rng rng(seed);
  return sample_trajectory(s, StepPlan::plain(coin), ch, steps, rng);
}

WalkerState sample_trajectory(const WalkerState& s, const StepPlan& plan,
                              const KrausChannel& ch, int steps, Rng& rng) {
  ch.validate();
  WalkerState cur = s;
  const int nops = static_cast<int>(ch.ops.size());
  std::vector<double> w(static_cast<size_t>(nops));
  std::vector<cplx> b0, b1;
  for (int k = 0; k < steps; ++k) {
    evolve_in_place(cur, plan, 1);
    const int n = cur.sites();
    for (int x = 0; x < nops; ++x) {
      const Mat2& e = ch.ops[size_t(x)];
      double acc = 0;
      for (int j = 0; j < n; ++j) {
        acc += std::norm(e(0, 0) * cur.c0[size_t(j)] + e(0, 1) * cur.c1[size_t(j)]) +
               std::norm(e(1, 0) * cur.c0[size_t(j)] + e(1, 1) * cur.c1[size_t(j)]);
      }
      w[size_t(x)] = acc < 1e-14 ? 0.0 : acc;  // starved branches excluded
    }
    const size_t pickx = rng.pick(w);
    const Mat2& e = ch.ops[pickx];
    const double inv = 1.0 / std::sqrt(w[pickx]);
    b0.assign(static_cast<size_t>(n), cplx(0));
    b1.assign(static_cast<size_t>(n), cplx(0));
    for (int j = 0; j < n; ++j) {
      b0[size_t(j)] = inv * (e(0, 0) * cur.c0[size_t(j)] + e(0, 1) * cur.c1[size_t(j)]);
      b1[size_t(j)] = inv * (e(1, 0) * cur.c0[size_t(j)] + e(1, 1) * cur.c1[size_t(j)]);
    }
    cur.c0.swap(b0);
    cur.c1.swap(b1);
  }
  return cur;
}

}  // namespace qwlab
