#pragma once

#include <complex>
#include <vector>

#include "holofact/errors.hpp"

// Truncated complex Taylor series about a center; the carrier type for every
// computation in this project. All operations are pure and return new values.

namespace holofact::series {

using cplx = std::complex<double>;

struct PowerSeries {
  cplx center{};
  std::vector<cplx> coeffs;  // coeffs[n] multiplies (z - center)^n; size >= 1

  int order() const { return static_cast<int>(coeffs.size()); }
  cplx c0() const { return coeffs.empty() ? cplx{} : coeffs[0]; }
};

PowerSeries make(cplx center, std::vector<cplx> coeffs);
bool all_finite(const PowerSeries& a);

PowerSeries add(const PowerSeries& a, const PowerSeries& b);
PowerSeries sub(const PowerSeries& a, const PowerSeries& b);
PowerSeries mul(const PowerSeries& a, const PowerSeries& b);
PowerSeries scale(const PowerSeries& a, cplx s);

// outer evaluated on inner; requires inner.c0 == outer.center to 1e-12
PowerSeries compose(const PowerSeries& outer, const PowerSeries& inner);

PowerSeries exp(const PowerSeries& a);
PowerSeries log(const PowerSeries& a);  // principal branch at the constant term
PowerSeries pow(const PowerSeries& a, cplx exponent);
PowerSeries reciprocal(const PowerSeries& a);
PowerSeries div(const PowerSeries& a, const PowerSeries& b);

PowerSeries derive(const PowerSeries& a);                // order n -> n-1
PowerSeries integrate(const PowerSeries& a, cplx c0);    // order n -> n+1

struct EvalResult {
  cplx value;
  double error;  // last retained term times a geometric tail factor
  bool inside;   // |z - center| below the estimated radius
};
EvalResult eval(const PowerSeries& a, cplx z);

enum class RadiusMethod { HadamardFit, Ratio, DeclaredEntire };

struct RadiusEstimate {
  double value = 0.0;
  bool unbounded = false;
  RadiusMethod method = RadiusMethod::HadamardFit;
  int window_lo = 0, window_hi = 0;  // [lo, hi) index window used by the fit
  double fit_residual = 0.0;
};

// Least-squares fit of log|c_n| against n over the tail window [order/2, order),
// skipping coefficients below 1e-300. Declares the series entire when the tail
// decays super-geometrically; falls back to a ratio test on the last 8 nonzero
// coefficients when the window is mostly skipped or the fit residual exceeds 0.5.
RadiusEstimate radius_estimate(const PowerSeries& a);

double radius_or_inf(const RadiusEstimate& r);

}  // namespace holofact::series
