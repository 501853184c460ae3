#include "holofact/power_series.hpp"

#include <cmath>
#include <vector>

#include "doctest.h"
#include "util.hpp"

using namespace holofact;
using namespace holofact::series;
using hftest::Rng;

namespace {

PowerSeries from_reals(std::vector<double> v, cplx center = {}) {
  std::vector<cplx> c(v.begin(), v.end());
  return PowerSeries{center, std::move(c)};
}

PowerSeries exp_series(int order, cplx lambda = {1.0, 0.0}, cplx center = {}) {
  std::vector<cplx> c(order);
  cplx num{1.0, 0.0};
  double fact = 1;
  for (int n = 0; n < order; ++n) {
    if (n > 0) {
      fact *= n;
      num *= lambda;
    }
    c[n] = num / fact * std::exp(lambda * center);
  }
  return PowerSeries{center, std::move(c)};
}

PowerSeries random_series(Rng& rng, int order, cplx c0) {
  std::vector<cplx> c(order);
  c[0] = c0;
  for (int n = 1; n < order; ++n) c[n] = 0.5 * rng.unit_disk();
  return PowerSeries{{}, std::move(c)};
}

double coeff_dist(const PowerSeries& a, const PowerSeries& b, int upto = -1) {
  int n = std::min(a.order(), b.order());
  if (upto >= 0) n = std::min(n, upto);
  double d = 0;
  for (int i = 0; i < n; ++i) d = std::max(d, std::abs(a.coeffs[i] - b.coeffs[i]));
  return d;
}

}  // namespace

TEST_CASE("arithmetic basics") {
  PowerSeries one_plus = from_reals({1, 1});
  PowerSeries one_minus = from_reals({1, -1});
  PowerSeries s = add(one_plus, one_minus);
  CHECK(std::abs(s.coeffs[0] - cplx{2, 0}) < 1e-15);
  CHECK(std::abs(s.coeffs[1]) < 1e-15);

  PowerSeries p = mul(from_reals({1, 1, 0}), from_reals({1, -1, 0}));
  CHECK(std::abs(p.coeffs[0] - cplx{1, 0}) < 1e-15);
  CHECK(std::abs(p.coeffs[1]) < 1e-15);
  CHECK(std::abs(p.coeffs[2] + cplx{1, 0}) < 1e-15);

  PowerSeries sc = scale(from_reals({0, 1, 1}), 2.0);
  CHECK(std::abs(sc.coeffs[1] - cplx{2, 0}) < 1e-15);
  CHECK(std::abs(sc.coeffs[2] - cplx{2, 0}) < 1e-15);

  PowerSeries shifted = from_reals({1, 1});
  shifted.center = {0.5, 0};
  CHECK_THROWS_AS((void)add(one_plus, shifted), Error);
}

TEST_CASE("compose studies") {
  // outer w^2 about 1, inner 1 + z
  PowerSeries outer = from_reals({1, 2, 1}, cplx{1, 0});
  PowerSeries inner = from_reals({1, 1, 0});
  PowerSeries r = compose(outer, inner);
  CHECK(std::abs(r.coeffs[0] - cplx{1, 0}) < 1e-14);
  CHECK(std::abs(r.coeffs[1] - cplx{2, 0}) < 1e-14);
  CHECK(std::abs(r.coeffs[2] - cplx{1, 0}) < 1e-14);

  // identity outer
  Rng rng_id(7);
  PowerSeries id = from_reals({0, 1, 0, 0});
  PowerSeries s = random_series(rng_id, 4, cplx{});
  PowerSeries rid = compose(id, s);
  CHECK(coeff_dist(rid, s) < 1e-14);

  // exp(e^z - 1): z^2 coefficient equals 1 (independent expansion check)
  int order = 12;
  PowerSeries em1 = exp_series(order);
  em1.coeffs[0] = 0;
  PowerSeries eo = exp_series(order);
  PowerSeries comp = compose(eo, em1);
  CHECK(std::abs(comp.coeffs[2] - cplx{1, 0}) < 1e-13);

  PowerSeries bad = from_reals({0.5, 1});
  CHECK_THROWS_AS((void)compose(eo, bad), Error);
}

TEST_CASE("exp and log recursions") {
  PowerSeries z = from_reals({0, 1, 0, 0});
  PowerSeries e = series::exp(z);
  CHECK(std::abs(e.coeffs[0] - cplx{1, 0}) < 1e-15);
  CHECK(std::abs(e.coeffs[1] - cplx{1, 0}) < 1e-15);
  CHECK(std::abs(e.coeffs[2] - cplx{0.5, 0}) < 1e-15);
  CHECK(std::abs(e.coeffs[3] - cplx{1.0 / 6, 0}) < 1e-15);

  PowerSeries lp = series::log(from_reals({1, 1, 0, 0}));
  CHECK(std::abs(lp.coeffs[1] - cplx{1, 0}) < 1e-15);
  CHECK(std::abs(lp.coeffs[2] + cplx{0.5, 0}) < 1e-15);
  CHECK(std::abs(lp.coeffs[3] - cplx{1.0 / 3, 0}) < 1e-15);

  PowerSeries round = series::exp(lp);
  CHECK(std::abs(round.coeffs[0] - cplx{1, 0}) < 1e-13);
  CHECK(std::abs(round.coeffs[1] - cplx{1, 0}) < 1e-13);
  CHECK(std::abs(round.coeffs[2]) < 1e-13);

  CHECK_THROWS_AS((void)series::log(from_reals({0, 1})), Error);
}

TEST_CASE("exp/log round trip across seed magnitudes") {
  Rng rng(42);
  for (int rep = 0; rep < 20; ++rep) {
    double mag = rng.uniform(0.5, 2.0);
    cplx c0 = std::polar(mag, rng.uniform(0, 6.28));
    PowerSeries a = random_series(rng, 24, c0);
    PowerSeries round = series::exp(series::log(a));
    CHECK(coeff_dist(round, a) < 1e-12);
  }
}

TEST_CASE("calculus") {
  PowerSeries a = from_reals({1, 0, -1, 0, 0.5});
  PowerSeries ia = integrate(a, cplx{});
  CHECK(ia.order() == 6);
  CHECK(std::abs(ia.coeffs[1] - cplx{1, 0}) < 1e-15);
  CHECK(std::abs(ia.coeffs[3] + cplx{1.0 / 3, 0}) < 1e-15);
  CHECK(std::abs(ia.coeffs[5] - cplx{0.1, 0}) < 1e-15);

  PowerSeries d = derive(from_reals({0, 1, 0, -1.0 / 3}));
  CHECK(d.order() == 3);
  CHECK(std::abs(d.coeffs[0] - cplx{1, 0}) < 1e-15);
  CHECK(std::abs(d.coeffs[2] + cplx{1, 0}) < 1e-15);

  PowerSeries e = exp_series(10);
  PowerSeries round = derive(integrate(e, cplx{7, 0}));
  CHECK(coeff_dist(round, e) < 1e-15);
}

TEST_CASE("eval") {
  PowerSeries e24 = exp_series(24);
  auto r = eval(e24, cplx{1, 0});
  CHECK(std::abs(r.value - std::exp(1.0)) < 1e-12);
  CHECK(r.inside);

  PowerSeries any = from_reals({3.25, -2, 9});
  CHECK(std::abs(eval(any, cplx{}).value - cplx{3.25, 0}) == 0.0);

  PowerSeries geo = from_reals(std::vector<double>(32, 1.0));
  auto g = eval(geo, cplx{0.5, 0});
  CHECK(std::abs(g.value - cplx{2, 0}) < 1e-8);
  CHECK(g.inside);
  auto out = eval(geo, cplx{1.5, 0});
  CHECK_FALSE(out.inside);
}

TEST_CASE("radius estimation") {
  PowerSeries ones = from_reals(std::vector<double>(64, 1.0));
  auto r1 = radius_estimate(ones);
  CHECK_FALSE(r1.unbounded);
  CHECK(r1.value == doctest::Approx(1.0).epsilon(0.02));

  std::vector<cplx> pow2(64);
  for (int n = 0; n < 64; ++n) pow2[n] = std::pow(2.0, n);
  auto r2 = radius_estimate(PowerSeries{{}, pow2});
  CHECK(r2.value == doctest::Approx(0.5).epsilon(0.02));

  // -log(2 - e^z) built through series ops; nearest singularity at log 2
  PowerSeries e64 = exp_series(64);
  PowerSeries two_minus = scale(e64, -1.0);
  two_minus.coeffs[0] += 2.0;
  PowerSeries L = scale(series::log(two_minus), -1.0);
  auto r3 = radius_estimate(L);
  CHECK_FALSE(r3.unbounded);
  CHECK(r3.value == doctest::Approx(std::log(2.0)).epsilon(0.02));

  CHECK_THROWS_AS((void)radius_estimate(from_reals({1, 2, 3})), Error);

  // entire series must be flagged unbounded
  auto re = radius_estimate(exp_series(64));
  CHECK(re.unbounded);
  auto rhalf = radius_estimate(scale(exp_series(64, cplx{0.5, 0}), std::sqrt(2.0)));
  CHECK(rhalf.unbounded);
}

TEST_CASE("ring axioms on sampled series") {
  Rng rng(99);
  for (int rep = 0; rep < 10; ++rep) {
    PowerSeries a = random_series(rng, 20, rng.unit_disk());
    PowerSeries b = random_series(rng, 20, rng.unit_disk());
    PowerSeries c = random_series(rng, 20, rng.unit_disk());
    PowerSeries lhs = mul(add(a, b), c);
    PowerSeries rhs = add(mul(a, c), mul(b, c));
    double scale_max = 0;
    for (auto& x : lhs.coeffs) scale_max = std::max(scale_max, std::abs(x));
    CHECK(coeff_dist(lhs, rhs) < 1e-13 * (1 + scale_max));
  }
}

TEST_CASE("compose associativity") {
  Rng rng(7);
  for (int rep = 0; rep < 6; ++rep) {
    cplx w0 = rng.unit_disk(), v0 = rng.unit_disk();
    PowerSeries c = random_series(rng, 16, w0);
    PowerSeries b = random_series(rng, 16, v0);
    b.center = w0;
    PowerSeries a = random_series(rng, 16, rng.unit_disk());
    a.center = v0;
    PowerSeries lhs = compose(compose(a, b), c);
    PowerSeries rhs = compose(a, compose(b, c));
    CHECK(coeff_dist(lhs, rhs) < 1e-12);
  }
}

TEST_CASE("product radius respects the smaller factor radius") {
  // factors with radii 1 and 0.5
  std::vector<cplx> g1(64), g2(64);
  for (int n = 0; n < 64; ++n) {
    g1[n] = 1.0;
    g2[n] = std::pow(2.0, n);
  }
  PowerSeries prod = mul(PowerSeries{{}, g1}, PowerSeries{{}, g2});
  auto r = radius_estimate(prod);
  CHECK(series::radius_or_inf(r) >= 0.5 * 0.95);
}
