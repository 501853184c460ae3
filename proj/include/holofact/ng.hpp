#pragma once

#include <complex>
#include <vector>

#include "holofact/power_series.hpp"

// Constructive sequence c_1 = 1, c_2, c_3, ... making the nested compositions
// F_n(z) = (c_1 e^z + z) o ... o (c_n e^z + z) converge uniformly on compact
// sets: each c_{k+1} is half the supremum keeping the increment on |z| <= k
// below 2^{-k}.

namespace holofact::ng {

using cplx = std::complex<double>;
using series::PowerSeries;

struct NgSequence {
  std::vector<double> cs;
  std::vector<double> margins;  // achieved increment over the 2^{-k} budget
  std::vector<int> bisection_iters;
};

NgSequence build_cs(int K);  // K <= 40

// F_k evaluated by right-to-left folding of w -> c_j e^w + w
double prefix_eval_real(const NgSequence& seq, int k, double x);
cplx prefix_eval(const NgSequence& seq, int k, cplx z);
PowerSeries prefix_series(const NgSequence& seq, int k, int order);

// max over 720 boundary samples of |F_{k+1} - F_k| on |z| = probe_radius;
// nonnegative Taylor coefficients put the true maximum on the circle
double tail_bound_check(const NgSequence& seq, int k, double probe_radius);

struct LimitValue {
  cplx value;
  double error;  // geometric tail of the remaining increments
};
LimitValue limit_eval(const NgSequence& seq, cplx z);

}  // namespace holofact::ng
