#include "holofact/ng.hpp"

#include <cmath>

#include "doctest.h"

using namespace holofact;
using namespace holofact::ng;

namespace {

// independent bisection oracle for the first nontrivial stage:
// increment(c) = e^{1 + c e} + c e - e - 1 + ... relative to F_1(1) = e + 1
double stage_two_supremum() {
  auto incr = [](double c) {
    double x = c * std::exp(1.0) + 1.0;
    return (std::exp(x) + x) - (std::exp(1.0) + 1.0);
  };
  double lo = 0, hi = 1;
  while (incr(hi) <= 0.5) hi *= 2;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    (incr(mid) <= 0.5 ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace

TEST_CASE("first stage is pinned to one") {
  NgSequence s = build_cs(1);
  REQUIRE(s.cs.size() == 1);
  CHECK(s.cs[0] == 1.0);
}

TEST_CASE("second stage matches the independent bisection") {
  NgSequence s = build_cs(2);
  REQUIRE(s.cs.size() == 2);
  double sup = stage_two_supremum();
  CHECK(s.cs[1] == doctest::Approx(0.5 * sup).epsilon(1e-9));
  CHECK(s.cs[1] == doctest::Approx(0.024).epsilon(0.05));

  // the doubled supremum violates the defining inequality
  auto incr = [](double c) {
    double x = c * std::exp(1.0) + 1.0;
    return (std::exp(x) + x) - (std::exp(1.0) + 1.0);
  };
  CHECK(incr(2 * sup) > 0.5);
  CHECK(incr(s.cs[1]) <= 0.5);
}

TEST_CASE("tail bounds hold on the validated disks") {
  NgSequence s = build_cs(7);
  CHECK(tail_bound_check(s, 1, 1.0) <= 0.5 + 1e-12);
  CHECK(tail_bound_check(s, 5, 5.0) <= std::pow(2.0, -5) + 1e-12);
  CHECK(tail_bound_check(s, 2, 0.0) <= 0.25 + 1e-12);
}

TEST_CASE("limit evaluation") {
  NgSequence s = build_cs(10);
  LimitValue v1 = limit_eval(s, cplx{1, 0});
  CHECK(v1.value.real() > 1.0);
  LimitValue v0 = limit_eval(s, cplx{});
  CHECK(v0.value.real() >= 1.0);
  CHECK(v0.error == doctest::Approx(std::pow(2.0, -9)));
  CHECK_THROWS_AS((void)limit_eval(s, cplx{50, 0}), Error);
}

TEST_CASE("prefixes grow monotonically on the positive axis") {
  NgSequence s = build_cs(8);
  for (double x : {0.0, 0.5, 1.0, 2.0, 3.0})
    for (int k = 1; k < 8; ++k)
      CHECK(prefix_eval_real(s, k + 1, x) >= prefix_eval_real(s, k, x));
}

TEST_CASE("prefix series have nonnegative coefficients") {
  NgSequence s = build_cs(6);
  for (int k = 1; k <= 6; ++k) {
    series::PowerSeries p = prefix_series(s, k, 40);
    for (const cplx& c : p.coeffs) {
      CHECK(c.real() >= -1e-12);
      CHECK(std::abs(c.imag()) < 1e-12);
    }
  }
}

TEST_CASE("increments stay summable at a fixed radius") {
  NgSequence s = build_cs(10);
  double sum = 0;
  for (int k = 2; k < 10; ++k) {
    double m = tail_bound_check(s, k, 2.0);
    CHECK(m <= std::pow(2.0, -k) + 1e-12);
    sum += m;
  }
  CHECK(sum < 0.5);
}
