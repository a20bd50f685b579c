#pragma once

#include <optional>
#include <vector>

#include "qwlab/coin.hpp"
#include "qwlab/linalg.hpp"

namespace qwlab {

enum class TopologyKind { line, cycle };

// Line storage is a fixed window of 2*budget+1 sites allocated up front from
// the requested step budget; the reachable support after t <= budget steps is
// provably inside it, so no reallocation ever happens.
struct Topology {
  TopologyKind kind = TopologyKind::line;
  int n = 0;       // cycle: site count
  int budget = 0;  // line: maximum number of steps the window can absorb

  static Topology line(int step_budget);
  static Topology cycle(int sites);
  int sites() const { return kind == TopologyKind::line ? 2 * budget + 1 : n; }
};

// cos(delta)|0> + e^{i eta} sin(delta)|1> at `origin`.
struct InitialSpec {
  double delta = 0;
  double eta = 0;
  int origin = 0;

  static InitialSpec coin_zero(int origin = 0) { return {0.0, 0.0, origin}; }
  static InitialSpec symmetric(int origin = 0) {
    return {pi / 4.0, pi / 2.0, origin};
  }
  cplx amp0() const { return {std::cos(delta), 0.0}; }
  cplx amp1() const { return std::polar(std::sin(delta), eta); }
};

// Two-component amplitude field. c0 multiplies coin |0> (shifts to j-1),
// c1 multiplies coin |1> (shifts to j+1, mod n on a cycle). `base` is the
// absolute site index of slot 0 (always 0 on a cycle).
struct WalkerState {
  Topology topo;
  int base = 0;
  int steps = 0;
  std::vector<cplx> c0, c1;

  int sites() const { return static_cast<int>(c0.size()); }
  int site_at(int slot) const { return base + slot; }
  double norm() const;
};

struct Distribution {
  int base = 0;
  bool cyclic = false;
  std::vector<double> p;

  int sites() const { return static_cast<int>(p.size()); }
  int site_at(int slot) const { return base + slot; }
  double total() const;
};

// One walk step plus optional decorations, shared by the pure and density
// evolutions: coin, then conditional shift, then an optional coin-space
// unitary insertion. reverse_sites applies at report time only.
struct StepPlan {
  Mat2 coin;
  std::optional<Mat2> insertion;
  bool reverse_sites = false;

  static StepPlan plain(const Mat2& c) { return {c, std::nullopt, false}; }
};

WalkerState init_pure(const InitialSpec& spec, const Topology& topo);

void step_in_place(WalkerState& s, const Mat2& coin);
WalkerState step(const WalkerState& s, const Mat2& coin);

// Applies plan.coin + shift (+ insertion) `steps` times.
void evolve_in_place(WalkerState& s, const StepPlan& plan, int steps);
WalkerState evolve(const WalkerState& s, const Mat2& coin, int steps);
WalkerState evolve(const WalkerState& s, const StepPlan& plan, int steps);

Distribution position_distribution(const WalkerState& s);

// Site relabeling j -> -j (line; window must be centered on 0) or
// j -> (n-j) mod n (cycle).
Distribution reverse_sites(const Distribution& d);

// Fresh (xi, theta, zeta) drawn per step from closed intervals inside
// [0, pi/2]; line topology, deterministic under `seed`.
struct AngleRange {
  double lo = 0, hi = 0;
};
WalkerState randomized_evolve(const InitialSpec& spec, int steps,
                              std::uint64_t seed, const AngleRange& xi,
                              const AngleRange& theta, const AngleRange& zeta,
                              CoinFamily family = CoinFamily::reflective);

}  // namespace qwlab
