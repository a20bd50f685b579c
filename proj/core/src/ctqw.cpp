#include "qwlab/ctqw.hpp"

#include <cmath>
#include <stdexcept>

namespace qwlab {

std::vector<double> Generator::matrix() const {
  std::vector<double> h(static_cast<size_t>(sites) * sites, 0.0);
  auto at = [&](int r, int c) -> double& {
    return h[size_t(r * sites + c)];
  };
  for (int j = 0; j < sites; ++j) {
    const int left = j - 1, right = j + 1;
    int degree = 0;
    if (cyclic || left >= 0) {
      ++degree;
      at(j, (left + sites) % sites) -= gamma;
    }
    if (cyclic || right < sites) {
      ++degree;
      at(j, right % sites) -= gamma;
    }
    at(j, j) += degree * gamma;
  }
  return h;
}

namespace {

Generator make_generator(int sites, double gamma, bool cyclic) {
  if (sites < 2) throw std::invalid_argument("generator: need >= 2 sites");
  if (gamma <= 0) throw std::invalid_argument("generator: gamma must be > 0");
  Generator g;
  g.cyclic = cyclic;
  g.sites = sites;
  g.gamma = gamma;
  return g;
}

}  // namespace

Generator line_generator(int sites, double gamma) {
  return make_generator(sites, gamma, false);
}

Generator cycle_generator(int sites, double gamma) {
  return make_generator(sites, gamma, true);
}

std::vector<cplx> evolve_ct(const std::vector<cplx>& psi0, const Generator& gen,
                            double t) {
  const int n = gen.sites;
  if (static_cast<int>(psi0.size()) != n)
    throw std::invalid_argument("evolve_ct: psi0 size mismatch");
  std::vector<cplx> out(static_cast<size_t>(n), cplx(0));
  if (gen.cyclic) {
    // Fourier modes v_k(j) = e^{2 pi i k j / n} / sqrt(n),
    // lambda_k = 2 gamma (1 - cos(2 pi k / n))
    for (int k = 0; k < n; ++k) {
      cplx proj = 0;
      for (int j = 0; j < n; ++j)
        proj += std::polar(1.0, -2.0 * pi * k * j / n) * psi0[size_t(j)];
      proj /= std::sqrt(static_cast<double>(n));
      const double lam = 2.0 * gen.gamma * (1.0 - std::cos(2.0 * pi * k / n));
      const cplx w = std::polar(1.0, -lam * t) * proj /
                     std::sqrt(static_cast<double>(n));
      for (int j = 0; j < n; ++j)
        out[size_t(j)] += w * std::polar(1.0, 2.0 * pi * k * j / n);
    }
  } else {
    // Path-graph Laplacian eigenvectors are the half-shifted cosine modes
    // v_k(j) = c_k cos(pi k (2j+1) / (2n)), lambda_k = 4 gamma sin^2(pi k/2n)
    for (int k = 0; k < n; ++k) {
      const double ck = std::sqrt((k == 0 ? 1.0 : 2.0) / n);
      cplx proj = 0;
      for (int j = 0; j < n; ++j)
        proj += ck * std::cos(pi * k * (2.0 * j + 1.0) / (2.0 * n)) *
                psi0[size_t(j)];
      const double sn = std::sin(pi * k / (2.0 * n));
      const double lam = 4.0 * gen.gamma * sn * sn;
      const cplx w = std::polar(1.0, -lam * t) * proj;
      for (int j = 0; j < n; ++j)
        out[size_t(j)] +=
            w * ck * std::cos(pi * k * (2.0 * j + 1.0) / (2.0 * n));
    }
  }
  return out;
}

Distribution ctqw_line_distribution(double gamma, double t,
                                    double boundary_tol) {
  if (t < 0) throw std::invalid_argument("ctqw_line_distribution: t < 0");
  // Ballistic front moves at speed 2 gamma; cushion covers the Airy tail.
  int half = static_cast<int>(std::ceil(2.0 * gamma * t)) + 12 +
             static_cast<int>(std::ceil(4.0 * std::cbrt(2.0 * gamma * t + 1.0)));
  for (;;) {
    const int n = 2 * half + 1;
    std::vector<cplx> psi0(static_cast<size_t>(n), cplx(0));
    psi0[size_t(half)] = 1.0;
    const std::vector<cplx> psi = evolve_ct(psi0, line_generator(n, gamma), t);
    double edge = 0;
    for (int j : {0, 1, n - 2, n - 1}) edge += std::norm(psi[size_t(j)]);
    if (edge <= boundary_tol) {
      Distribution d;
      d.base = -half;
      d.p.resize(static_cast<size_t>(n));
      for (int j = 0; j < n; ++j) d.p[size_t(j)] = std::norm(psi[size_t(j)]);
      return d;
    }
    half = half * 3 / 2 + 8;
  }
}

}  // namespace qwlab
