#include "qwlab/density.hpp"

#include <cmath>
#include <stdexcept>

namespace qwlab {

double DensityState::trace_real() const {
  double s = 0;
  const int d = dim();
  for (int r = 0; r < d; ++r) s += m[size_t(r * d + r)].real();
  return s;
}

double DensityState::hermiticity_defect() const {
  double mx = 0;
  const int d = dim();
  for (int r = 0; r < d; ++r)
    for (int c = r; c < d; ++c)
      mx = std::max(mx,
                    std::abs(m[size_t(r * d + c)] -
                             std::conj(m[size_t(c * d + r)])));
  return mx;
}

double DensityState::purity() const {
  // tr rho^2 = sum |rho_rc|^2 for Hermitian rho
  double s = 0;
  for (const cplx& x : m) s += std::norm(x);
  return s;
}

DensityState init_density(const InitialSpec& spec, const Topology& topo) {
  return density_from_pure(init_pure(spec, topo));
}

DensityState density_from_pure(const WalkerState& s) {
  DensityState rho;
  rho.topo = s.topo;
  rho.base = s.base;
  rho.nsites = s.sites();
  rho.steps = s.steps;
  const int d = rho.dim();
  rho.m.assign(static_cast<size_t>(d) * static_cast<size_t>(d), cplx(0));
  std::vector<cplx> v(static_cast<size_t>(d));
  for (int j = 0; j < rho.nsites; ++j) {
    v[size_t(j)] = s.c0[size_t(j)];
    v[size_t(rho.nsites + j)] = s.c1[size_t(j)];
  }
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c)
      rho.m[size_t(r * d + c)] = v[size_t(r)] * std::conj(v[size_t(c)]);
  return rho;
}

namespace {

// Walk unitary applied to one length-d vector laid out as [c0 | c1].
void walk_vec(const cplx* in, cplx* out, int n, bool cyclic, const Mat2& b) {
  for (int j = 0; j < 2 * n; ++j) out[j] = cplx(0);
  const cplx b00 = b(0, 0), b01 = b(0, 1), b10 = b(1, 0), b11 = b(1, 1);
  if (cyclic) {
    for (int j = 0; j < n; ++j) {
      const cplx a0 = b00 * in[j] + b01 * in[n + j];
      const cplx a1 = b10 * in[j] + b11 * in[n + j];
      out[(j + n - 1) % n] += a0;
      out[n + (j + 1) % n] += a1;
    }
  } else {
    for (int j = 0; j < n; ++j) {
      const cplx a0 = b00 * in[j] + b01 * in[n + j];
      const cplx a1 = b10 * in[j] + b11 * in[n + j];
      if (j > 0) out[j - 1] += a0;
      if (j + 1 < n) out[n + j + 1] += a1;
    }
  }
}

void coin_vec(const cplx* in, cplx* out, int n, const Mat2& u) {
  const cplx u00 = u(0, 0), u01 = u(0, 1), u10 = u(1, 0), u11 = u(1, 1);
  for (int j = 0; j < n; ++j) {
    out[j] = u00 * in[j] + u01 * in[n + j];
    out[n + j] = u10 * in[j] + u11 * in[n + j];
  }
}

Mat2 conj_mat(const Mat2& m) {
  Mat2 out = m;
  for (auto& x : out.a) x = std::conj(x);
  return out;
}

// rho -> U rho U^dag for U = walk step or coin insertion. Rows pick up
// conj(U) (contiguous), columns pick up U (strided gather/scatter).
template <typename K1, typename K2>
void conjugate_by(DensityState& rho, K1&& apply_u, K2&& apply_uconj) {
  const int d = rho.dim();
  std::vector<cplx> buf(static_cast<size_t>(d)), res(static_cast<size_t>(d));
  for (int r = 0; r < d; ++r) {  // rho W^dag : each row via conj kernel
    cplx* row = &rho.m[size_t(r * d)];
    apply_uconj(row, res.data());
    for (int c = 0; c < d; ++c) row[c] = res[size_t(c)];
  }
  for (int c = 0; c < d; ++c) {  // W rho : each column
    for (int r = 0; r < d; ++r) buf[size_t(r)] = rho.m[size_t(r * d + c)];
    apply_u(buf.data(), res.data());
    for (int r = 0; r < d; ++r) rho.m[size_t(r * d + c)] = res[size_t(r)];
  }
}

void apply_kraus(DensityState& rho, const KrausChannel& ch) {
  const int n = rho.nsites, d = rho.dim();
  std::vector<cplx> prev = rho.m;
  std::fill(rho.m.begin(), rho.m.end(), cplx(0));
  for (const Mat2& e : ch.ops) {
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int c = 0; c < 2; ++c)
          for (int f = 0; f < 2; ++f) {
            const cplx coeff = e(a, c) * std::conj(e(b, f));
            if (coeff == cplx(0)) continue;
            const cplx* src = &prev[size_t((c * n) * d + f * n)];
            cplx* dst = &rho.m[size_t((a * n) * d + b * n)];
            for (int j = 0; j < n; ++j)
              for (int k = 0; k < n; ++k)
                dst[j * d + k] += coeff * src[j * d + k];
          }
  }
}

}  // namespace

void step_density_in_place(DensityState& rho, const StepPlan& plan,
                           const KrausChannel* channel) {
  if (rho.topo.kind == TopologyKind::line && rho.steps >= rho.topo.budget)
    throw std::invalid_argument("step_density: line step budget exhausted");
  if (channel) channel->validate();
  const int n = rho.nsites;
  const bool cyc = rho.topo.kind == TopologyKind::cycle;
  const Mat2 b = plan.coin, bc = conj_mat(plan.coin);
  conjugate_by(
      rho, [&](const cplx* in, cplx* out) { walk_vec(in, out, n, cyc, b); },
      [&](const cplx* in, cplx* out) { walk_vec(in, out, n, cyc, bc); });
  if (plan.insertion) {
    const Mat2 g = *plan.insertion, gc = conj_mat(g);
    conjugate_by(
        rho, [&](const cplx* in, cplx* out) { coin_vec(in, out, n, g); },
        [&](const cplx* in, cplx* out) { coin_vec(in, out, n, gc); });
  }
  if (channel) apply_kraus(rho, *channel);
  rho.steps += 1;
}

DensityState step_density(const DensityState& rho, const StepPlan& plan,
                          const KrausChannel* channel) {
  DensityState out = rho;
  step_density_in_place(out, plan, channel);
  return out;
}

void evolve_density_in_place(DensityState& rho, const StepPlan& plan,
                             const KrausChannel* channel, int steps) {
  for (int k = 0; k < steps; ++k) step_density_in_place(rho, plan, channel);
}

Distribution position_distribution(const DensityState& rho) {
  Distribution d;
  d.base = rho.base;
  d.cyclic = rho.topo.kind == TopologyKind::cycle;
  d.p.resize(static_cast<size_t>(rho.nsites));
  for (int j = 0; j < rho.nsites; ++j)
    d.p[size_t(j)] = rho.at(0, j, 0, j).real() + rho.at(1, j, 1, j).real();
  return d;
}

Mat2 reduced_coin(const DensityState& rho) {
  Mat2 out = Mat2::zero();
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      cplx s = 0;
      for (int j = 0; j < rho.nsites; ++j) s += rho.at(a, j, b, j);
      out(a, b) = s;
    }
  return out;
}

Mat2 reduced_coin(const WalkerState& s) {
  Mat2 out = Mat2::zero();
  for (size_t j = 0; j < s.c0.size(); ++j) {
    out(0, 0) += s.c0[j] * std::conj(s.c0[j]);
    out(0, 1) += s.c0[j] * std::conj(s.c1[j]);
    out(1, 0) += s.c1[j] * std::conj(s.c0[j]);
    out(1, 1) += s.c1[j] * std::conj(s.c1[j]);
  }
  return out;
}

}  // namespace qwlab
