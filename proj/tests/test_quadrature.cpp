#include "holofact/quadrature.hpp"

#include <cmath>

#include "doctest.h"
#include "holofact/errors.hpp"

using namespace holofact;
using quad::cplx;

TEST_CASE("plain exponential segment") {
  auto r = quad::segment([](cplx t) { return std::exp(t); }, cplx{}, cplx{1, 0});
  CHECK(std::abs(r.value - (std::exp(1.0) - 1.0)) < 1e-13);
}

TEST_CASE("complex segment endpoint") {
  // int_0^{i pi} e^t dt = e^{i pi} - 1 = -2
  cplx zi{0, 3.14159265358979323846};
  auto r = quad::segment([](cplx t) { return std::exp(t); }, cplx{}, zi);
  CHECK(std::abs(r.value - cplx{-2, 0}) < 1e-12);
}

TEST_CASE("gaussian on the real axis") {
  auto r = quad::segment([](cplx t) { return std::exp(-t * t); }, cplx{}, cplx{10, 0});
  CHECK(std::abs(r.value - std::sqrt(3.14159265358979323846) / 2) < 1e-12);
}

TEST_CASE("oscillatory integrand converges") {
  // int_0^20 e^{i t^2} dt, frequency grows along the path
  auto r = quad::segment([](cplx t) { return std::exp(cplx{0, 1} * t * t); }, cplx{},
                         cplx{20, 0});
  CHECK(r.evals > 100);
  CHECK(std::isfinite(std::abs(r.value)));
  // Fresnel limit sqrt(pi/8)(1+i); at T=20 the remainder is ~1/(2T)
  cplx fresnel = std::sqrt(3.14159265358979323846 / 8.0) * cplx{1, 1};
  CHECK(std::abs(r.value - fresnel) < 0.03);
}

TEST_CASE("budget exhaustion throws") {
  quad::Options opt;
  opt.max_evals = 60;
  opt.max_depth = 2;
  CHECK_THROWS_AS(
      (void)quad::segment([](cplx t) { return std::exp(cplx{0, 400} * t * t); }, cplx{},
                          cplx{20, 0}, opt),
      Error);
}
