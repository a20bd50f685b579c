#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

namespace qwlab {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;

inline double deg2rad(double d) { return d * pi / 180.0; }

// Dense complex 2x2, row-major. Everything coin-space sized lives here;
// position-space structure is handled by the walk kernels, never by a
// general matrix type.
struct Mat2 {
  std::array<cplx, 4> a{};  // [r*2 + c]

  cplx& operator()(int r, int c) { return a[static_cast<size_t>(r * 2 + c)]; }
  const cplx& operator()(int r, int c) const {
    return a[static_cast<size_t>(r * 2 + c)];
  }

  static Mat2 identity() { return Mat2{{cplx(1), cplx(0), cplx(0), cplx(1)}}; }
  static Mat2 zero() { return Mat2{}; }

  Mat2 adjoint() const {
    return Mat2{{std::conj(a[0]), std::conj(a[2]), std::conj(a[1]),
                 std::conj(a[3])}};
  }

  cplx trace() const { return a[0] + a[3]; }
  cplx det() const { return a[0] * a[3] - a[1] * a[2]; }

  Mat2 operator*(const Mat2& o) const {
    return Mat2{{a[0] * o.a[0] + a[1] * o.a[2], a[0] * o.a[1] + a[1] * o.a[3],
                 a[2] * o.a[0] + a[3] * o.a[2], a[2] * o.a[1] + a[3] * o.a[3]}};
  }
  Mat2 operator+(const Mat2& o) const {
    return Mat2{{a[0] + o.a[0], a[1] + o.a[1], a[2] + o.a[2], a[3] + o.a[3]}};
  }
  Mat2 operator-(const Mat2& o) const {
    return Mat2{{a[0] - o.a[0], a[1] - o.a[1], a[2] - o.a[2], a[3] - o.a[3]}};
  }
  Mat2 operator*(cplx s) const {
    return Mat2{{a[0] * s, a[1] * s, a[2] * s, a[3] * s}};
  }
  friend Mat2 operator*(cplx s, const Mat2& m) { return m * s; }
};

inline double max_abs_diff(const Mat2& x, const Mat2& y) {
  double m = 0;
  for (int i = 0; i < 4; ++i) m = std::max(m, std::abs(x.a[size_t(i)] - y.a[size_t(i)]));
  return m;
}

// ||U U^dag - 1||_max; 0 for exactly unitary input.
inline double unitarity_defect(const Mat2& u) {
  return max_abs_diff(u * u.adjoint(), Mat2::identity());
}

inline Mat2 pauli_x() { return Mat2{{cplx(0), cplx(1), cplx(1), cplx(0)}}; }
inline Mat2 pauli_y() {
  return Mat2{{cplx(0), cplx(0, -1), cplx(0, 1), cplx(0)}};
}
inline Mat2 pauli_z() { return Mat2{{cplx(1), cplx(0), cplx(0), cplx(-1)}}; }

// Eigenvalues of a Hermitian 2x2 (ascending). Closed form; input assumed
// Hermitian, imaginary parts of the result discarded.
inline std::array<double, 2> hermitian_eigenvalues(const Mat2& h) {
  const double tr = h.trace().real();
  const double dt = h.det().real();
  double disc = tr * tr - 4.0 * dt;
  if (disc < 0) disc = 0;  // numerical guard
  const double s = std::sqrt(disc);
  return {0.5 * (tr - s), 0.5 * (tr + s)};
}

inline double norm_sq(const std::vector<cplx>& v) {
  double s = 0;
  for (const auto& x : v) s += std::norm(x);
  return s;
}

}  // namespace qwlab
