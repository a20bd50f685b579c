#pragma once

#include <vector>

#include "qwlab/linalg.hpp"
#include "qwlab/walk.hpp"

namespace qwlab {

// gamma times the graph Laplacian of a path (degree-weighted reflecting
// ends) or a cycle. Spectra are closed-form cosine/Fourier modes, so the
// propagator never needs a numeric eigensolver.
struct Generator {
  bool cyclic = false;
  int sites = 0;
  double gamma = 0;

  std::vector<double> matrix() const;  // dense row-major, sites x sites
};

Generator line_generator(int sites, double gamma);
Generator cycle_generator(int sites, double gamma);

// psi(t) = e^{-iHt} psi0 via the generator's eigenbasis.
std::vector<cplx> evolve_ct(const std::vector<cplx>& psi0, const Generator& gen,
                            double t);

// Walk from a delta start at the center of a line segment sized so that
// boundary mass stays below boundary_tol; grows the window and retries if
// the estimate falls short.
Distribution ctqw_line_distribution(double gamma, double t,
                                    double boundary_tol = 1e-8);

}  // namespace qwlab
