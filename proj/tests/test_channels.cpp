#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "qwlab/channels.hpp"
#include "qwlab/density.hpp"

using namespace qwlab;

namespace {

Mat2 coin_rho(double z, cplx sminus) {
  Mat2 r = Mat2::zero();
  r(0, 0) = 0.5 * (1.0 - z);
  r(1, 1) = 0.5 * (1.0 + z);
  r(1, 0) = sminus;
  r(0, 1) = std::conj(sminus);
  return r;
}

}  // namespace

TEST_CASE("pauli channel factories") {
  SUBCASE("completeness and operator count") {
    for (double p : {0.0, 0.05, 0.5, 1.0}) {
      for (const KrausChannel& ch :
           {bit_flip(p), phase_flip(p), amplitude_damping(p)}) {
        CHECK(ch.completeness_defect() < 1e-14);
        CHECK_NOTHROW(ch.validate());
      }
    }
    CHECK(bit_flip(0.0).ops.size() == 1);
    CHECK(bit_flip(0.3).ops.size() == 2);
    CHECK(amplitude_damping(0.0).ops.size() == 1);
    CHECK(amplitude_damping(0.3).ops.size() == 2);
  }
  SUBCASE("probability range is enforced") {
    CHECK_THROWS_AS(bit_flip(-0.1), std::invalid_argument);
    CHECK_THROWS_AS(phase_flip(1.1), std::invalid_argument);
    CHECK_THROWS_AS(amplitude_damping(2.0), std::invalid_argument);
  }
  SUBCASE("bit flip mixes populations, phase flip kills coherence") {
    const Mat2 rho = coin_rho(0.6, cplx(0.1, 0.2));
    const Mat2 bf = apply_channel(bit_flip(0.25), rho);
    CHECK(std::abs(bf(1, 1).real() - (0.75 * 0.8 + 0.25 * 0.2)) < 1e-14);
    CHECK(std::abs(bf(1, 0) - (0.75 * cplx(0.1, 0.2) +
                               0.25 * std::conj(cplx(0.1, 0.2)))) < 1e-14);
    const Mat2 pf = apply_channel(phase_flip(0.25), rho);
    CHECK(std::abs(pf(0, 0) - rho(0, 0)) < 1e-15);
    CHECK(std::abs(pf(1, 0) - 0.5 * rho(1, 0)) < 1e-14);
    const Mat2 dead = apply_channel(phase_flip(0.5), rho);
    CHECK(std::abs(dead(1, 0)) < 1e-15);
  }
  SUBCASE("amplitude damping empties |1> at p = 1") {
    const Mat2 out = apply_channel(amplitude_damping(1.0), coin_rho(1.0, 0));
    CHECK(std::abs(out(0, 0) - cplx(1.0)) < 1e-14);
    CHECK(std::abs(out(1, 1)) < 1e-14);
  }
}

TEST_CASE("thermal bath parameters") {
  SUBCASE("zero temperature has empty bath") {
    const GadParams g{0.1, 0.0, 1.0};
    CHECK(g.n_thermal() == 0.0);
    CHECK(g.chi() == 1.0);
    CHECK(generalized_amplitude_damping(g).ops.size() == 2);
  }
  SUBCASE("n_thermal = 1/2 at T = 1/ln 3") {
    const GadParams g{0.1, 1.0 / std::log(3.0), 1.0};
    CHECK(std::abs(g.n_thermal() - 0.5) < 1e-12);
    CHECK(std::abs(g.chi() - 0.75) < 1e-12);
  }
  SUBCASE("flip probability saturates") {
    const GadParams g{0.05, 3.5, 1.0};
    CHECK(g.p_of(0.0) == 0.0);
    CHECK(g.p_of(1e9) == doctest::Approx(1.0));
    CHECK(g.p_step() > 0.0);
    CHECK(g.p_step() < 1.0);
  }
  SUBCASE("validation") {
    CHECK_THROWS_AS((GadParams{-0.1, 0.0, 1.0}).validate(),
                    std::invalid_argument);
    CHECK_THROWS_AS((GadParams{0.1, -1.0, 1.0}).validate(),
                    std::invalid_argument);
    CHECK_THROWS_AS((GadParams{0.1, 0.0, 0.0}).validate(),
                    std::invalid_argument);
    CHECK_NOTHROW((GadParams{0.1, 3.5, 0.1}).validate());
  }
  SUBCASE("kraus set is complete across temperatures") {
    for (double T : {0.0, 0.5, 1.0, 3.5, 20.0}) {
      const KrausChannel ch =
          generalized_amplitude_damping({0.07, T, 0.25});
      CHECK(ch.completeness_defect() < 1e-13);
    }
  }
}

TEST_CASE("thermal channel matches its closed form at step boundaries") {
  // Iterated per-step Kraus map against the continuous-time solution
  // evaluated at multiples of delta_t; agreement is exact, not asymptotic.
  const double z0 = 0.37;
  const cplx s0(0.21, -0.33);
  for (double T : {0.0, 1.0 / std::log(3.0), 3.5}) {
    const GadParams g{0.05, T, 0.2};
    const KrausChannel ch = generalized_amplitude_damping(g);
    Mat2 rho = coin_rho(z0, s0);
    for (int k = 1; k <= 40; ++k) {
      rho = apply_channel(ch, rho);
      const Mat2 want = closed_form_gad_state(z0, s0, g, k * g.delta_t);
      CHECK(max_abs_diff(rho, want) < 1e-13);
    }
  }
}

TEST_CASE("thermal fixed point") {
  // z* = -1/(2 n_th + 1); at T = 0 the walker coin relaxes to |0>.
  for (double T : {0.0, 2.0}) {
    const GadParams g{0.4, T, 1.0};
    Mat2 rho = coin_rho(-0.9, cplx(0.4, 0.1));
    for (int k = 0; k < 400; ++k)
      rho = apply_channel(generalized_amplitude_damping(g), rho);
    const double zstar = -1.0 / (2.0 * g.n_thermal() + 1.0);
    CHECK(std::abs((rho(1, 1).real() - rho(0, 0).real()) - zstar) < 1e-12);
    CHECK(std::abs(rho(1, 0)) < 1e-12);
  }
}

TEST_CASE("composed flip wraps every damping operator") {
  const KrausChannel base = generalized_amplitude_damping({0.1, 0.0, 1.0});
  const KrausChannel flipped = then_pauli_x(base);
  REQUIRE(flipped.ops.size() == base.ops.size());
  CHECK(flipped.completeness_defect() < 1e-14);
  for (size_t i = 0; i < base.ops.size(); ++i)
    CHECK(max_abs_diff(flipped.ops[i], pauli_x() * base.ops[i]) == 0.0);
  CHECK(flipped.label.find("+flip") != std::string::npos);
}

TEST_CASE("trajectory unravelling") {
  SUBCASE("deterministic channel reproduces the unitary walk") {
    const WalkerState s0 =
        init_pure(InitialSpec::symmetric(), Topology::line(20));
    const WalkerState traj =
        sample_trajectory(s0, hadamard(), bit_flip(0.0), 20, 99);
    WalkerState want = s0;
    evolve_in_place(want, StepPlan::plain(hadamard()), 20);
    double worst = 0;
    for (size_t j = 0; j < want.c0.size(); ++j) {
      worst = std::max(worst, std::abs(traj.c0[j] - want.c0[j]));
      worst = std::max(worst, std::abs(traj.c1[j] - want.c1[j]));
    }
    CHECK(worst < 1e-12);
  }
  SUBCASE("trajectories stay normalized") {
    const WalkerState s0 =
        init_pure(InitialSpec::symmetric(), Topology::line(40));
    for (std::uint64_t seed : {1ull, 2ull, 3ull, 4ull}) {
      const WalkerState t = sample_trajectory(
          s0, hadamard(), generalized_amplitude_damping({0.1, 3.5, 1.0}), 40,
          seed);
      CHECK(std::abs(t.norm() - 1.0) < 1e-10);
    }
  }
  SUBCASE("ensemble average converges to the density-operator evolution") {
    const int steps = 12, nsamp = 20000;
    const KrausChannel ch = phase_flip(0.15);
    const InitialSpec spec = InitialSpec::symmetric();

    DensityState rho = init_density(spec, Topology::line(steps));
    evolve_density_in_place(rho, StepPlan::plain(hadamard()), &ch, steps);
    const Distribution exact = position_distribution(rho);

    const WalkerState s0 = init_pure(spec, Topology::line(steps));
    std::vector<double> acc(exact.p.size(), 0.0);
    Rng rng(2024);
    for (int k = 0; k < nsamp; ++k) {
      const WalkerState t =
          sample_trajectory(s0, StepPlan::plain(hadamard()), ch, steps, rng);
      for (size_t j = 0; j < acc.size(); ++j)
        acc[j] += std::norm(t.c0[j]) + std::norm(t.c1[j]);
    }
    double tv = 0;
    for (size_t j = 0; j < acc.size(); ++j)
      tv += std::abs(acc[j] / nsamp - exact.p[j]);
    CHECK(0.5 * tv < 2e-2);
  }
}
