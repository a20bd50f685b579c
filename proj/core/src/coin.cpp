#include "qwlab/coin.hpp"

#include <cmath>
#include <stdexcept>

namespace qwlab {

namespace {

double wrap_2pi(double a) {
  const double two_pi = 2.0 * pi;
  double r = std::fmod(a, two_pi);
  if (r < 0) r += two_pi;
  return r;
}

}  // namespace

CoinParams CoinParams::normalized() const {
  return {wrap_2pi(xi), wrap_2pi(theta), wrap_2pi(zeta)};
}

CoinParams CoinParams::reflected() const {
  return CoinParams{-zeta, pi / 2.0 - theta, -xi}.normalized();
}

Mat2 su2_coin(const CoinParams& p) {
  const double c = std::cos(p.theta), s = std::sin(p.theta);
  const cplx exi = std::polar(1.0, p.xi), eze = std::polar(1.0, p.zeta);
  return Mat2{{exi * c, eze * s, -std::conj(eze) * s, std::conj(exi) * c}};
}

Mat2 u2_coin_prime(const CoinParams& p) {
  const double c = std::cos(p.theta), s = std::sin(p.theta);
  const cplx exi = std::polar(1.0, p.xi), eze = std::polar(1.0, p.zeta);
  return Mat2{{exi * c, eze * s, std::conj(eze) * s, -std::conj(exi) * c}};
}

Mat2 make_coin(CoinFamily family, const CoinParams& p) {
  return family == CoinFamily::special ? su2_coin(p) : u2_coin_prime(p);
}

Mat2 u2_general(double zeta_phase, double alpha, double beta, double gamma) {
  // e^{i a sigma} = cos(a) 1 + i sin(a) sigma for each Pauli axis
  auto axis = [](double a, const Mat2& sigma) {
    return Mat2::identity() * cplx(std::cos(a)) + sigma * cplx(0, std::sin(a));
  };
  const Mat2 rx = axis(alpha, pauli_x());
  const Mat2 ry = axis(beta, pauli_y());
  const Mat2 rz = axis(gamma, pauli_z());
  return std::polar(1.0, zeta_phase) * (rx * ry * rz);
}

Mat2 hadamard() { return u2_coin_prime({0.0, pi / 4.0, 0.0}); }

Mat2 coin_variant(const Mat2& coin, PhaseVariant v, double phi) {
  const cplx ph = std::polar(1.0, phi);
  Mat2 m = coin;
  switch (v) {
    case PhaseVariant::output_one:
      m(1, 0) *= ph;
      m(1, 1) *= ph;
      break;
    case PhaseVariant::input_one:
      m(0, 1) *= ph;
      m(1, 1) *= ph;
      break;
    case PhaseVariant::output_zero:
      m(0, 0) *= ph;
      m(0, 1) *= ph;
      break;
    case PhaseVariant::input_zero:
      m(0, 0) *= ph;
      m(1, 0) *= ph;
      break;
  }
  return m;
}

PhaseVariant phase_variant_from_index(int index) {
  switch (index) {
    case 1:
      return PhaseVariant::output_one;
    case 2:
      return PhaseVariant::input_one;
    case 3:
      return PhaseVariant::output_zero;
    case 4:
      return PhaseVariant::input_zero;
    default:
      throw std::invalid_argument("phase variant index must be 1..4");
  }
}

KgParameters kg_parameters(double theta) {
  const double c = std::cos(theta);
  if (c <= 0) throw std::invalid_argument("kg_parameters: need cos(theta) > 0");
  return {std::sqrt(c), std::sqrt(2.0 * (1.0 / c - 1.0) / c)};
}

}  // namespace qwlab
