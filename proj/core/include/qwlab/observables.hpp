#pragma once

#include <optional>

#include "qwlab/coin.hpp"
#include "qwlab/walk.hpp"

namespace qwlab {

struct MomentSummary {
  double mean = 0;
  double variance = 0;
  double std = 0;
};
MomentSummary moments(const Distribution& d);

// sigma^2 / t^2 of the reflective-family coin at (0, theta, 0), symmetric
// start; tracks 1 - sin(theta).
double c_theta(double theta, int t);

// Two-peaked envelope over integer sites in [-t cos(theta), t cos(theta)]:
// P(j) proportional to (1 + cos^2 2theta) e^{K (j^2/(t^2 cos^2 theta) - 1)}
// / sqrt(t), K = (sqrt(t)/2) cos(theta) (1 + cos^2 2theta)(1 + sin(theta));
// renormalized over the grid.
Distribution envelope_distribution(double theta, int t);

// Natural log; 0 log 0 := 0.
double shannon_entropy(const Distribution& d);

double recurrence_probability(const Mat2& coin, const InitialSpec& spec,
                              const Topology& topo, int t);

// 1 - prod_{t=1..t_max} (1 - P_origin(t)), the truncated return indicator
// for an ensemble of identically prepared walks.
double polya_number(const Mat2& coin, const InitialSpec& spec,
                    const Topology& topo, int t_max);

// (1/T) sum_{tau=0..T-1} P(.,tau) on a cycle.
Distribution time_averaged_distribution(const Mat2& coin,
                                        const InitialSpec& spec,
                                        const Topology& topo, long T);

double total_variation_from_uniform(const Distribution& d);
double max_deviation_from_uniform(const Distribution& d);

// Smallest T with total-variation(averaged(T), uniform) <= eps, scanned
// incrementally up to cap = 20 n ln n; empty when the cap is hit.
std::optional<long> mixing_time(const Mat2& coin, const InitialSpec& spec,
                                const Topology& topo, double eps);

// Von Neumann entropy (log2) of the reduced coin state.
double coin_position_entanglement(const WalkerState& s);

// Unbiased classical random walk after t steps: binomial over
// parity-matching sites, sigma^2 = t.
Distribution classical_walk_reference(int t);

}  // namespace qwlab
