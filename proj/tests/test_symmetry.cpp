#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "qwlab/symmetry.hpp"

using namespace qwlab;

namespace {

Distribution variant_distribution(const Mat2& base, PhaseVariant v, double phi,
                                  const InitialSpec& spec, int steps) {
  WalkerState s = init_pure(spec, Topology::line(steps));
  evolve_in_place(s, StepPlan::plain(coin_variant(base, v, phi)), steps);
  return position_distribution(s);
}

Distribution plain_distribution(const Mat2& coin, const InitialSpec& spec,
                                int steps) {
  WalkerState s = init_pure(spec, Topology::line(steps));
  evolve_in_place(s, StepPlan::plain(coin), steps);
  return position_distribution(s);
}

}  // namespace

TEST_CASE("kolmogorov distance") {
  Distribution a, b;
  a.base = b.base = 0;
  a.p = {0.5, 0.3, 0.2};
  b.p = {0.1, 0.6, 0.3};
  CHECK(kolmogorov_distance(a, a) == 0.0);
  CHECK(std::abs(kolmogorov_distance(a, b) - 0.4) < 1e-15);
  Distribution c = b;
  c.base = 1;
  CHECK_THROWS_AS(kolmogorov_distance(a, c), std::invalid_argument);
  Distribution d = b;
  d.p.push_back(0.0);
  CHECK_THROWS_AS(kolmogorov_distance(a, d), std::invalid_argument);
}

TEST_CASE("plan construction") {
  const CoinParams p{0.0, pi / 6.0, 0.0};
  SUBCASE("pauli_z keeps the coin and adds the diag(1,-1) insertion") {
    const SymmetryPlans pl =
        make_symmetry_plans(p, CoinFamily::reflective, SymmetryOp::z());
    CHECK(!pl.baseline.insertion.has_value());
    REQUIRE(pl.augmented.insertion.has_value());
    CHECK(max_abs_diff(*pl.augmented.insertion, pauli_z()) == 0.0);
    CHECK(!pl.augmented.reverse_sites);
  }
  SUBCASE("pauli_z coincides with the pi phase gate") {
    const SymmetryPlans z =
        make_symmetry_plans(p, CoinFamily::reflective, SymmetryOp::z());
    const SymmetryPlans g = make_symmetry_plans(p, CoinFamily::reflective,
                                                SymmetryOp::phase_gate(pi));
    CHECK(max_abs_diff(*z.augmented.insertion, *g.augmented.insertion) < 1e-15);
  }
  SUBCASE("pauli_x mirrors the baseline") {
    const SymmetryPlans pl =
        make_symmetry_plans(p, CoinFamily::reflective, SymmetryOp::x());
    REQUIRE(pl.augmented.insertion.has_value());
    CHECK(max_abs_diff(*pl.augmented.insertion, pauli_x()) == 0.0);
    CHECK(pl.baseline.reverse_sites);
    const Mat2 want = u2_coin_prime(p.reflected());
    CHECK(max_abs_diff(pl.baseline.coin, want) < 1e-15);
  }
  SUBCASE("reflection-composed op augments with the reflected coin") {
    const SymmetryPlans pl =
        make_symmetry_plans(p, CoinFamily::reflective, SymmetryOp::prx());
    CHECK(!pl.baseline.insertion.has_value());
    CHECK(!pl.baseline.reverse_sites);
    REQUIRE(pl.augmented.insertion.has_value());
    CHECK(pl.augmented.reverse_sites);
    CHECK(max_abs_diff(pl.augmented.coin, u2_coin_prime(p.reflected())) < 1e-15);
  }
}

TEST_CASE("line symmetries hold without noise") {
  const Topology topo = Topology::line(25);
  const InitialSpec sym = InitialSpec::symmetric();
  const CoinParams had{0.0, pi / 4.0, 0.0};
  const CoinParams tilted{0.0, deg2rad(30.0), 0.0};
  for (const SymmetryOp& op : {SymmetryOp::z(), SymmetryOp::x(),
                               SymmetryOp::prx(), SymmetryOp::phase_shift(pi)}) {
    for (const CoinParams& p : {had, tilted}) {
      const SymmetryReport rep = symmetry_report(p, CoinFamily::reflective, op,
                                                 topo, 25, nullptr, sym);
      CAPTURE(int(op.kind));
      CAPTURE(p.theta);
      CHECK(rep.kolmogorov <= 1e-10);
      CHECK(rep.symmetric);
    }
  }
}

TEST_CASE("identity phase shift is exactly no-op") {
  const SymmetryReport rep = symmetry_report(
      {0.0, pi / 4.0, 0.0}, CoinFamily::reflective, SymmetryOp::phase_shift(0.0),
      Topology::line(20), 20, nullptr, InitialSpec::symmetric());
  CHECK(rep.kolmogorov == 0.0);
}

TEST_CASE("diagonal insertion survives any initial state and channel") {
  // The augmented walk differs from the plain one by a site-diagonal phase,
  // which coin-space Kraus operators cannot see.
  const InitialSpec generic{deg2rad(40.0), deg2rad(70.0), 0};
  const KrausChannel pf = phase_flip(0.3);
  const KrausChannel gad = generalized_amplitude_damping({0.05, 3.5, 1.0});
  for (const KrausChannel* ch : {static_cast<const KrausChannel*>(nullptr),
                                 &pf, &gad}) {
    const SymmetryReport rep =
        symmetry_report({0.3, 0.8, 1.2}, CoinFamily::special, SymmetryOp::z(),
                        Topology::line(15), 15, ch, generic);
    CHECK(rep.kolmogorov <= 1e-10);
  }
}

TEST_CASE("mirrored comparisons hold under real-coin noise") {
  const CoinParams had{0.0, pi / 4.0, 0.0};
  const KrausChannel bf = bit_flip(0.1);
  const KrausChannel gad0 = generalized_amplitude_damping({0.05, 0.0, 1.0});
  const KrausChannel gadT = generalized_amplitude_damping({0.05, 3.5, 1.0});
  for (const SymmetryOp& op : {SymmetryOp::x(), SymmetryOp::prx()}) {
    for (const KrausChannel* ch : {&bf, &gad0, &gadT}) {
      const SymmetryReport rep =
          symmetry_report(had, CoinFamily::reflective, op, Topology::line(12),
                          12, ch, InitialSpec::symmetric());
      CAPTURE(int(op.kind));
      CHECK(rep.kolmogorov <= 1e-10);
    }
  }
}

TEST_CASE("phase variant distributions match the plain walk") {
  const Mat2 base = u2_coin_prime({0.0, pi / 4.0, 0.0});
  const double phi = 0.7;
  const int t = 20;
  SUBCASE("output-side variants are start-independent") {
    const InitialSpec generic{deg2rad(35.0), deg2rad(50.0), 0};
    const Distribution ref = plain_distribution(base, generic, t);
    for (PhaseVariant v : {PhaseVariant::output_one, PhaseVariant::output_zero}) {
      const Distribution got = variant_distribution(base, v, phi, generic, t);
      CHECK(kolmogorov_distance(ref, got) <= 1e-12);
    }
  }
  SUBCASE("input-side variants need a coin-basis start") {
    for (PhaseVariant v : {PhaseVariant::input_one, PhaseVariant::input_zero}) {
      for (double delta : {0.0, pi / 2.0}) {
        const InitialSpec basis{delta, 0.0, 0};
        const Distribution ref = plain_distribution(base, basis, t);
        const Distribution got = variant_distribution(base, v, phi, basis, t);
        CHECK(kolmogorov_distance(ref, got) <= 1e-12);
      }
    }
  }
  SUBCASE("input-side phase on |1> folds into the start's relative phase") {
    const InitialSpec spec{deg2rad(35.0), deg2rad(50.0), 0};
    const InitialSpec shifted{deg2rad(35.0), deg2rad(50.0) + phi, 0};
    const Distribution got =
        variant_distribution(base, PhaseVariant::input_one, phi, spec, t);
    const Distribution ref = plain_distribution(base, shifted, t);
    CHECK(kolmogorov_distance(ref, got) <= 1e-12);
  }
}

TEST_CASE("long cycle run breaks the phase-gate symmetry") {
  const SymmetryReport rep = symmetry_report(
      {0.0, pi / 4.0, 0.0}, CoinFamily::reflective,
      SymmetryOp::phase_gate(deg2rad(40.0)), Topology::cycle(51), 50 * 25,
      nullptr, InitialSpec::symmetric(0));
  CHECK(rep.kolmogorov > 0.01);
  CHECK(!rep.symmetric);
}

TEST_CASE("coherence binning") {
  SUBCASE("single-site coin coherence lands in the first bin") {
    WalkerState s = init_pure({0.0, 0.0, 0}, Topology::cycle(4));
    s.c0.assign(4, cplx(0));
    s.c1.assign(4, cplx(0));
    s.c0[0] = 0.6;
    s.c1[0] = 0.8;
    const CoherenceBins cb = coherence_function(density_from_pure(s), 4);
    CHECK(std::abs(cb.bins[0] - 0.96) < 1e-13);
    CHECK(std::abs(cb.bins[1]) + std::abs(cb.bins[2]) + std::abs(cb.bins[3]) ==
          0.0);
    CHECK(std::abs(cb.total - 0.96) < 1e-13);
  }
  SUBCASE("cyclic separations fill the outer bins") {
    WalkerState s = init_pure({0.0, 0.0, 0}, Topology::cycle(4));
    s.c0 = {cplx(0.5), cplx(0.5), cplx(0), cplx(0)};
    s.c1 = {cplx(0), cplx(0), cplx(0.5), cplx(0.5)};
    const CoherenceBins cb = coherence_function(density_from_pure(s), 2);
    CHECK(std::abs(cb.bins[0]) == 0.0);
    CHECK(std::abs(cb.bins[1] - 3.0) < 1e-13);
    CHECK(std::abs(cb.total - 3.0) < 1e-13);
  }
  SUBCASE("bin count validation") {
    const DensityState rho =
        init_density(InitialSpec::symmetric(0), Topology::cycle(5));
    CHECK_THROWS_AS(coherence_function(rho, 0), std::invalid_argument);
    CHECK_THROWS_AS(coherence_function(rho, 6), std::invalid_argument);
  }
}

TEST_CASE("turn sampling on a small odd cycle") {
  const CoinParams had{0.0, pi / 4.0, 0.0};
  SUBCASE("phase gate stays exact until a winding path can interfere") {
    // Interfering lifts differ by 2n in displacement (odd n forbids a
    // single winding by parity), so d = 0 for all t < n: turns 1 and 2
    // on Cycle(2s+1) are still line-equivalent, turn 3 is not.
    const auto series =
        turn_series(had, CoinFamily::reflective, SymmetryOp::phase_gate(0.7), 11,
                    4, nullptr, 5, InitialSpec::symmetric(0));
    REQUIRE(series.size() == 4);
    CHECK(series[0].tau == 1);
    CHECK(series[0].steps == 5);
    CHECK(series[0].d_noiseless <= 1e-8);
    CHECK(series[1].d_noiseless <= 1e-8);
    CHECK(series[2].d_noiseless > 1e-4);
    CHECK(series[0].coherence_ratio_total == 1.0);
  }
  SUBCASE("noise shrinks both the distance and the coherence") {
    const KrausChannel pf = phase_flip(0.05);
    const auto series =
        turn_series(had, CoinFamily::reflective, SymmetryOp::phase_gate(0.7), 11,
                    4, &pf, 5, InitialSpec::symmetric(0));
    const TurnPoint& pt = series[3];
    CHECK(pt.d_noisy < pt.d_noiseless);
    CHECK(pt.d_ratio > 0.0);
    CHECK(pt.d_ratio < 1.0);
    CHECK(pt.coherence_ratio_total > 0.0);
    CHECK(pt.coherence_ratio_total < 1.0);
    CHECK(pt.coherence_ratio_far > 0.0);
    CHECK(pt.coherence_ratio_far < 1.0);
  }
  SUBCASE("input validation") {
    CHECK_THROWS_AS(turn_series(had, CoinFamily::reflective, SymmetryOp::z(), 10,
                                2, nullptr, 3, InitialSpec::symmetric(0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(turn_series(had, CoinFamily::reflective, SymmetryOp::z(), 11,
                                0, nullptr, 3, InitialSpec::symmetric(0)),
                    std::invalid_argument);
  }
}
