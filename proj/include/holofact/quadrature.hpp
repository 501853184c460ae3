#pragma once

#include <complex>
#include <cstddef>
#include <functional>

namespace holofact::quad {

using cplx = std::complex<double>;

struct Result {
  cplx value;
  double error;
  std::size_t evals;
};

struct Options {
  double rel_tol = 1e-12;
  std::size_t max_evals = 400000;
  int max_depth = 48;
};

// Adaptive Gauss-Kronrod 7/15 along the straight segment [z0, z1].
// Throws Errc::QuadratureNonConvergence when the budget runs out with
// unresolved subintervals.
Result segment(const std::function<cplx(cplx)>& f, cplx z0, cplx z1,
               const Options& opt = {});

}  // namespace holofact::quad
