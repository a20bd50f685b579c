#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "qwlab/density.hpp"
#include "support/jacobi.hpp"

using namespace qwlab;

namespace {

void apply_coin_op(WalkerState& s, const Mat2& e) {
  for (size_t j = 0; j < s.c0.size(); ++j) {
    const cplx a = s.c0[j], b = s.c1[j];
    s.c0[j] = e(0, 0) * a + e(0, 1) * b;
    s.c1[j] = e(1, 0) * a + e(1, 1) * b;
  }
}

double max_entry_diff(const DensityState& x, const DensityState& y) {
  double worst = 0;
  for (size_t i = 0; i < x.m.size(); ++i)
    worst = std::max(worst, std::abs(x.m[i] - y.m[i]));
  return worst;
}

}  // namespace

TEST_CASE("density construction") {
  const DensityState rho = init_density(InitialSpec::symmetric(), Topology::line(3));
  CHECK(std::abs(rho.trace_real() - 1.0) < 1e-15);
  CHECK(rho.hermiticity_defect() < 1e-15);
  CHECK(std::abs(rho.purity() - 1.0) < 1e-14);
  CHECK(rho.dim() == 14);
  const cplx on = rho.at(0, 3, 1, 3);
  CHECK(std::abs(on - cplx(0, -0.5)) < 1e-15);  // <0| rho |1> of (|0>+i|1>)/sqrt2
}

TEST_CASE("noiseless density evolution tracks the pure walk") {
  const InitialSpec spec{deg2rad(25.0), deg2rad(70.0), 0};
  const Mat2 coin = su2_coin({0.3, 0.7, 1.1});
  const int t = 10;

  WalkerState psi = init_pure(spec, Topology::line(t));
  evolve_in_place(psi, StepPlan::plain(coin), t);

  DensityState rho = init_density(spec, Topology::line(t));
  evolve_density_in_place(rho, StepPlan::plain(coin), nullptr, t);

  CHECK(max_entry_diff(rho, density_from_pure(psi)) < 1e-13);
  CHECK(std::abs(rho.purity() - 1.0) < 1e-12);
}

TEST_CASE("insertion conjugation matches the pure-state path") {
  const Mat2 ins = u2_general(0.3, 0.4, 0.1, 0.9);
  StepPlan plan{hadamard(), ins, false};
  const int t = 8;

  WalkerState psi = init_pure(InitialSpec::symmetric(), Topology::line(t));
  evolve_in_place(psi, plan, t);

  DensityState rho = init_density(InitialSpec::symmetric(), Topology::line(t));
  evolve_density_in_place(rho, plan, nullptr, t);

  CHECK(max_entry_diff(rho, density_from_pure(psi)) < 1e-13);
}

TEST_CASE("channel evolution invariants") {
  const KrausChannel ch = phase_flip(0.1);
  DensityState rho = init_density(InitialSpec::symmetric(), Topology::line(15));
  double last_purity = 1.0;
  for (int t = 1; t <= 15; ++t) {
    step_density_in_place(rho, StepPlan::plain(hadamard()), &ch);
    CHECK(std::abs(rho.trace_real() - 1.0) < 1e-12);
    CHECK(rho.hermiticity_defect() < 1e-12);
    const double pur = rho.purity();
    CHECK(pur <= last_purity + 1e-12);
    last_purity = pur;
  }
  CHECK(last_purity < 0.9);
}

TEST_CASE("kraus sum equals the explicit sequence enumeration") {
  // Six bit-flip steps expand into 2^6 operator sequences; summing the
  // unnormalized branch distributions must reproduce the density result.
  const double p = 0.1;
  const int t = 6;
  const KrausChannel ch = bit_flip(p);
  const InitialSpec spec{deg2rad(30.0), deg2rad(45.0), 0};

  DensityState rho = init_density(spec, Topology::line(t));
  evolve_density_in_place(rho, StepPlan::plain(hadamard()), &ch, t);
  const Distribution exact = position_distribution(rho);

  std::vector<double> acc(exact.p.size(), 0.0);
  Mat2 racc = Mat2::zero();
  for (int mask = 0; mask < (1 << t); ++mask) {
    WalkerState branch = init_pure(spec, Topology::line(t));
    for (int k = 0; k < t; ++k) {
      step_in_place(branch, hadamard());
      apply_coin_op(branch, ch.ops[size_t((mask >> k) & 1)]);
    }
    for (size_t j = 0; j < acc.size(); ++j)
      acc[j] += std::norm(branch.c0[j]) + std::norm(branch.c1[j]);
    racc = racc + reduced_coin(branch);
  }
  for (size_t j = 0; j < acc.size(); ++j)
    CHECK(std::abs(acc[j] - exact.p[j]) < 1e-10);
  CHECK(max_abs_diff(racc, reduced_coin(rho)) < 1e-10);
}

TEST_CASE("spectrum stays positive under thermal damping") {
  const KrausChannel ch = generalized_amplitude_damping({0.05, 3.5, 1.0});
  const int t = 12;
  DensityState rho = init_density(InitialSpec::symmetric(), Topology::line(t));
  evolve_density_in_place(rho, StepPlan::plain(hadamard()), &ch, t);

  const auto ev = oracle::jacobi_eigenvalues(rho.m, rho.dim());
  double sum = 0, lo = 1;
  for (double v : ev) {
    sum += v;
    lo = std::min(lo, v);
  }
  CHECK(std::abs(sum - 1.0) < 1e-10);
  CHECK(lo > -1e-10);
  const double p2 = rho.purity();
  double spec_p2 = 0;
  for (double v : ev) spec_p2 += v * v;
  CHECK(std::abs(p2 - spec_p2) < 1e-9);
}

TEST_CASE("reduced coin") {
  SUBCASE("pure product start gives the coin projector") {
    const WalkerState s = init_pure(InitialSpec::symmetric(), Topology::line(2));
    const Mat2 r = reduced_coin(s);
    CHECK(std::abs(r(0, 0) - cplx(0.5)) < 1e-15);
    CHECK(std::abs(r(1, 1) - cplx(0.5)) < 1e-15);
    CHECK(std::abs(r(0, 1) - cplx(0, -0.5)) < 1e-15);
  }
  SUBCASE("density and pure reductions agree") {
    const InitialSpec spec{deg2rad(25.0), deg2rad(70.0), 0};
    WalkerState psi = init_pure(spec, Topology::line(9));
    evolve_in_place(psi, StepPlan::plain(hadamard()), 9);
    DensityState rho = init_density(spec, Topology::line(9));
    evolve_density_in_place(rho, StepPlan::plain(hadamard()), nullptr, 9);
    CHECK(max_abs_diff(reduced_coin(psi), reduced_coin(rho)) < 1e-13);
    CHECK(std::abs(reduced_coin(rho).trace().real() - 1.0) < 1e-13);
  }
}

TEST_CASE("density line budget is enforced") {
  DensityState rho = init_density(InitialSpec::symmetric(), Topology::line(3));
  evolve_density_in_place(rho, StepPlan::plain(hadamard()), nullptr, 3);
  CHECK_THROWS_AS(step_density_in_place(rho, StepPlan::plain(hadamard()), nullptr),
                  std::invalid_argument);
}

TEST_CASE("cycle density wraps") {
  const int n = 6, t = 9;
  const Mat2 coin = u2_coin_prime({0.2, 0.9, 0.4});
  WalkerState psi = init_pure(InitialSpec::symmetric(2), Topology::cycle(n));
  evolve_in_place(psi, StepPlan::plain(coin), t);
  DensityState rho = init_density(InitialSpec::symmetric(2), Topology::cycle(n));
  evolve_density_in_place(rho, StepPlan::plain(coin), nullptr, t);
  const Distribution dp = position_distribution(psi);
  const Distribution dd = position_distribution(rho);
  for (int j = 0; j < n; ++j) CHECK(std::abs(dp.p[size_t(j)] - dd.p[size_t(j)]) < 1e-13);
}
