#include "holofact/ivp.hpp"

#include <cmath>
#include <vector>

#include "doctest.h"
#include "util.hpp"

using namespace holofact;
using namespace holofact::ivp;
using hftest::Rng;

namespace {

// L' = e^z e^{L}, L(0) = 0, closed form L = -log(2 - e^z), radius log 2
IvpSpec benchmark() {
  IvpSpec s;
  s.f_exp = {{0, 0}, {1, 0}};
  s.g_exp = {{0, 0}, {-1, 0}};
  s.type = IvpType::Type1;
  return s;
}

// L' = e^z / L, L(0) = sqrt(2), closed form L = sqrt(2) e^{z/2}, entire
IvpSpec entire_type2() {
  IvpSpec s;
  s.f_exp = {{0, 0}, {1, 0}};
  s.g_exp = {{0, 0}};
  s.zero_order = 1;
  s.exceptional = {};
  s.type = IvpType::Type2;
  s.seed = {std::sqrt(2.0), 0};
  return s;
}

}  // namespace

TEST_CASE("local solution of the closed-form benchmark") {
  DiskChart c = solve_local(benchmark(), 8);
  CHECK(std::abs(c.L.coeffs[0]) < 1e-15);
  CHECK(std::abs(c.L.coeffs[1] - cplx{1, 0}) < 1e-12);
  CHECK(std::abs(c.L.coeffs[2] - cplx{1, 0}) < 1e-12);
  CHECK(std::abs(c.L.coeffs[3] - cplx{1, 0}) < 1e-12);
  CHECK(std::abs(c.L.coeffs[4] - cplx{13.0 / 12, 0}) < 1e-12);

  // center slope invariant: c1 = e^{F(center)} (seed-a)^{-N} e^{-G(seed)}
  DiskChart c64 = solve_local(benchmark(), 64);
  CHECK(std::abs(c64.L.coeffs[1] - rhs_eval(c64.spec, c64.spec.center, c64.spec.seed)) <
        1e-12);
  CHECK(c64.empirical.value == doctest::Approx(std::log(2.0)).epsilon(0.03));
}

TEST_CASE("invalid specs are rejected") {
  IvpSpec bad;
  bad.f_exp = {{0, 0}, {0, 0}, {-1, 0}};
  bad.g_exp = {{0, 0}};  // constant G with N = 0
  bad.type = IvpType::Type1;
  CHECK_THROWS_AS((void)solve_local(bad, 8), Error);

  IvpSpec seed_bad = entire_type2();
  seed_bad.seed = seed_bad.exceptional;
  CHECK_THROWS_AS((void)solve_local(seed_bad, 8), Error);
}

TEST_CASE("type-2 closed form") {
  DiskChart c = solve_local(entire_type2(), 8);
  double r2 = std::sqrt(2.0);
  CHECK(std::abs(c.L.coeffs[0] - cplx{r2, 0}) < 1e-14);
  CHECK(std::abs(c.L.coeffs[1] - cplx{r2 / 2, 0}) < 1e-13);
  CHECK(std::abs(c.L.coeffs[2] - cplx{r2 / 8, 0}) < 1e-13);

  DiskChart c64 = solve_local(entire_type2(), 64);
  CHECK(c64.empirical.unbounded);
}

TEST_CASE("existence bounds on the benchmark box") {
  TheoryBounds b = existence_bounds(benchmark(), 1.0, 1.0);
  double e2 = std::exp(2.0);
  CHECK(b.M == doctest::Approx(e2).epsilon(1e-6));
  CHECK(b.K == doctest::Approx(e2).epsilon(1e-6));
  CHECK(b.banach == doctest::Approx(1.0 / e2).epsilon(1e-6));
  CHECK(b.picard == doctest::Approx(1.0 / e2).epsilon(1e-6));
  CHECK(b.cauchy == doctest::Approx(1.0 - std::exp(-1.0 / (2 * e2))).epsilon(1e-6));
}

TEST_CASE("w-box hitting the exceptional value is rejected") {
  IvpSpec s = entire_type2();
  s.g_exp = {{5, 0}};
  s.seed = {1, 0};
  CHECK_THROWS_AS((void)existence_bounds(s, 1.0, 2.0), Error);
}

TEST_CASE("box shape sensitivity follows the direct formula") {
  TheoryBounds b = existence_bounds(benchmark(), 0.1, 10.0);
  double M = std::exp(0.1) * std::exp(10.0);
  CHECK(b.M == doctest::Approx(M).epsilon(1e-6));
  CHECK(b.picard == doctest::Approx(std::min(0.1, 10.0 / M)).epsilon(1e-6));
}

TEST_CASE("residual check") {
  DiskChart c = solve_local(benchmark(), 64);
  CHECK(residual_check(c, 100) < 1e-10);

  DiskChart corrupted = c;
  corrupted.L.coeffs[3] += 0.1;
  CHECK(residual_check(corrupted, 100) > 1e-3);

  DiskChart t2 = solve_local(entire_type2(), 64);
  CHECK(residual_check(t2, 100) < 1e-10);
}

TEST_CASE("bound ordering and soundness on the benchmark") {
  for (double ba : {0.25, 0.5, 1.0, 2.0}) {
    for (double bb : {0.25, 0.5, 1.0, 2.0, 4.0}) {
      TheoryBounds b = existence_bounds(benchmark(), ba, bb);
      CHECK(b.banach <= b.picard + 1e-15);
      CHECK(b.banach <= std::log(2.0) + 1e-9);
      CHECK(b.picard <= std::log(2.0) + 1e-9);
      CHECK(b.cauchy <= std::log(2.0) + 1e-9);
    }
  }
}

TEST_CASE("local factorization identity on the disk") {
  DiskChart c = solve_local(benchmark(), 64);
  cplx offset = g_offset_for_root(c.spec);
  CHECK(std::abs(offset) < 1e-12);  // f(0) = 0 and g(0) = 0 here
  double rmax = 0.4 * series::radius_or_inf(c.empirical);
  for (const cplx& z : hftest::halton_disk(60, rmax)) {
    cplx L = series::eval(c.L, z).value;
    cplx lhs = eval_f(c.spec, z);
    cplx rhs = eval_g(c.spec, L, offset);
    CHECK(std::abs(lhs - rhs) < 1e-9);
  }
}

TEST_CASE("shared coefficients agree between truncation orders") {
  DiskChart a = solve_local(benchmark(), 48);
  DiskChart b = solve_local(benchmark(), 64);
  for (int n = 0; n < 48; ++n) {
    double scale = std::abs(b.L.coeffs[n]) + 1e-30;
    CHECK(std::abs(a.L.coeffs[n] - b.L.coeffs[n]) / scale < 1e-12);
  }
}

TEST_CASE("searched boxes keep the bound ordering") {
  Rng rng(20250810);
  for (int rep = 0; rep < 5; ++rep) {
    IvpSpec s;
    int df = 1 + int(rng.uniform() * 4), dg = 1 + int(rng.uniform() * 3);
    s.f_exp.resize(df + 1);
    s.g_exp.resize(dg + 1);
    for (auto& c : s.f_exp) c = rng.unit_disk();
    for (auto& c : s.g_exp) c = rng.unit_disk();
    while (std::abs(s.f_exp.back()) < 0.05) s.f_exp.back() = rng.unit_disk();
    while (std::abs(s.g_exp.back()) < 0.05) s.g_exp.back() = rng.unit_disk();
    s.type = IvpType::Type1;
    for (const TheoryBounds& b : searched_bounds(s)) {
      CHECK(b.banach <= b.picard + 1e-15);
      CHECK(b.cauchy >= 0);
    }
  }
}
