#include "holofact/ng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace holofact::ng {

namespace {

using std::numbers::pi;

double fold_real(const std::vector<double>& cs, int k, double x) {
  double w = x;
  for (int j = k; j-- > 0;) w = cs[j] * std::exp(w) + w;
  return w;
}

cplx fold_cplx(const std::vector<double>& cs, int k, cplx z) {
  cplx w = z;
  for (int j = k; j-- > 0;) w = cs[j] * std::exp(w) + w;
  return w;
}

}  // namespace

double prefix_eval_real(const NgSequence& seq, int k, double x) {
  return fold_real(seq.cs, k, x);
}

cplx prefix_eval(const NgSequence& seq, int k, cplx z) { return fold_cplx(seq.cs, k, z); }

PowerSeries prefix_series(const NgSequence& seq, int k, int order) {
  if (order < 2) throw Error(Errc::SchemaError, "series prefix needs order >= 2");
  PowerSeries w{cplx{}, std::vector<cplx>(order, cplx{})};
  w.coeffs[1] = 1.0;
  for (int j = k; j-- > 0;)
    w = series::add(series::scale(series::exp(w), seq.cs[j]), w);
  return w;
}

NgSequence build_cs(int K) {
  if (K < 1 || K > 40)
    throw Error(Errc::SchemaError, "prefix length must lie in 1..40");
  NgSequence seq;
  seq.cs = {1.0};
  for (int k = 1; k < K; ++k) {
    double bound = std::pow(2.0, -k);
    // increment at z = k of appending c e^z + z on the inside
    auto incr = [&](double c) {
      double v = fold_real(seq.cs, k, c * std::exp(double(k)) + k) -
                 fold_real(seq.cs, k, double(k));
      return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
    };
    double hi = 1e-18;
    int guard = 0;
    while (incr(hi) <= bound && guard++ < 4000) hi *= 2;
    double lo = hi / 2;
    int iters = 0;
    while (iters < 200 && (hi - lo) > 1e-12 * hi) {
      double mid = 0.5 * (lo + hi);
      (incr(mid) <= bound ? lo : hi) = mid;
      ++iters;
    }
    double sup = lo;
    if (sup < 1e-300)
      throw Error(Errc::UnderflowAtStage, "increment budget underflows here");
    double c_next = 0.5 * sup;
    double achieved = incr(c_next);
    if (!(achieved <= bound))
      throw Error(Errc::UnderflowAtStage, "halved supremum fails the increment bound");
    seq.cs.push_back(c_next);
    seq.margins.push_back(achieved / bound);
    seq.bisection_iters.push_back(iters);
  }
  return seq;
}

double tail_bound_check(const NgSequence& seq, int k, double probe_radius) {
  if (k < 1 || k >= static_cast<int>(seq.cs.size()))
    throw Error(Errc::SchemaError, "tail check needs 1 <= k < prefix length");
  double worst = 0;
  if (probe_radius == 0.0) {
    worst = std::abs(fold_cplx(seq.cs, k + 1, cplx{}) - fold_cplx(seq.cs, k, cplx{}));
    return worst;
  }
  for (int i = 0; i < 720; ++i) {
    cplx z = std::polar(probe_radius, 2 * pi * i / 720);
    worst = std::max(worst,
                     std::abs(fold_cplx(seq.cs, k + 1, z) - fold_cplx(seq.cs, k, z)));
  }
  return worst;
}

LimitValue limit_eval(const NgSequence& seq, cplx z) {
  int K = static_cast<int>(seq.cs.size());
  if (std::abs(z) > double(K - 1))
    throw Error(Errc::OutsideValidatedDisk, "point lies outside the validated disks");
  return {fold_cplx(seq.cs, K, z), std::pow(2.0, 1 - K)};
}

}  // namespace holofact::ng
