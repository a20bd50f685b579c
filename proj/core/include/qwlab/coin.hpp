#pragma once

#include "qwlab/linalg.hpp"

namespace qwlab {

// Three-angle coin parametrization. Angles in radians, normalized to
// [0, 2*pi). Two families share the parameters:
//   CoinFamily::special  det +1   [[ e^{i xi} cos,  e^{i zeta} sin ],
//                                  [ -e^{-i zeta} sin, e^{-i xi} cos ]]
//   CoinFamily::reflective det -1 [[ e^{i xi} cos,  e^{i zeta} sin ],
//                                  [ e^{-i zeta} sin, -e^{-i xi} cos ]]
// The reflective family contains the Hadamard coin at (0, pi/4, 0).
struct CoinParams {
  double xi = 0;
  double theta = 0;
  double zeta = 0;

  CoinParams normalized() const;
  // Angle map (xi,theta,zeta) -> (-zeta, pi/2-theta, -xi); used by the
  // reflection-composed symmetry.
  CoinParams reflected() const;
};

enum class CoinFamily { special, reflective };

Mat2 su2_coin(const CoinParams& p);
Mat2 u2_coin_prime(const CoinParams& p);
Mat2 make_coin(CoinFamily family, const CoinParams& p);

// Global phase times rotations about x, y, z:
// e^{i zeta_phase} e^{i alpha X} e^{i beta Y} e^{i gamma Z}.
Mat2 u2_general(double zeta_phase, double alpha, double beta, double gamma);

Mat2 hadamard();

// Phase deformations of a coin: e^{i phi} attached to one coin index.
// output_* variants multiply a row (phase keyed to the coin state produced),
// input_* variants multiply a column (phase keyed to the coin state consumed).
// Walks driven by output variants reproduce the plain walk's distribution for
// every initial state; input variants do so for coin-basis starts.
enum class PhaseVariant { output_one, input_one, output_zero, input_zero };
Mat2 coin_variant(const Mat2& coin, PhaseVariant v, double phi);

// 1-based index used at external interfaces; throws on anything else.
PhaseVariant phase_variant_from_index(int index);

// Effective wave parameters of the discretized Klein-Gordon correspondence:
// speed c = sqrt(cos theta), mass m = sqrt(2 (sec theta - 1) / cos theta).
struct KgParameters {
  double speed;
  double mass;
};
KgParameters kg_parameters(double theta);

}  // namespace qwlab
