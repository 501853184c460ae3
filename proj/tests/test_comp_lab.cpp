#include "holofact/comp_lab.hpp"

#include <cmath>
#include <vector>

#include "doctest.h"
#include "util.hpp"

using namespace holofact;
using namespace holofact::lab;
using catalog::Affine;
using catalog::CatalogFn;
using catalog::Chain;
using catalog::IntExpPoly;
using catalog::Monomial;
using catalog::ScaledExp;

namespace {

CatalogFn exp_minus_one() { return CatalogFn{IntExpPoly{{{0, 0}, {1, 0}}, {}}}; }
CatalogFn plain_exp() { return CatalogFn{IntExpPoly{{{0, 0}, {1, 0}}, {1, 0}}}; }
CatalogFn calabi() { return CatalogFn{IntExpPoly{{{0, 0}, {0, 0}, {-1, 0}}, {}}}; }

}  // namespace

TEST_CASE("square-of-exponential identity") {
  FactorChain chain;
  chain.factors = {CatalogFn{Chain{{CatalogFn{Affine{{-1, 0}}}, CatalogFn{Monomial{2}}}}},
                   CatalogFn{ScaledExp{{0.5, 0}}}};
  CHECK(verify_composition(exp_minus_one(), chain) < 1e-12);
}

TEST_CASE("monomial ladder identity for the exponential") {
  for (int n : {2, 3, 4}) {
    FactorChain chain;
    double fact = 1;
    for (int k = 2; k <= n; ++k) {
      chain.factors.push_back(CatalogFn{Monomial{k}});
      fact *= k;
    }
    chain.factors.push_back(CatalogFn{ScaledExp{{1.0 / fact, 0}}});
    CHECK(verify_composition(CatalogFn{ScaledExp{{1, 0}}}, chain) < 1e-12);
  }
}

TEST_CASE("identity chain has zero residual") {
  FactorChain chain;
  chain.factors = {calabi()};
  chain.provenance = Provenance::Identity;
  CHECK(verify_composition(calabi(), chain) == 0.0);
}

TEST_CASE("omitted-value factorization, affine case") {
  FactorChain chain = picard_factorize(CatalogFn{ScaledExp{{1, 0}}}, {});
  CHECK(chain.provenance == Provenance::OmittedAffine);
  REQUIRE(chain.factors.size() == 2);  // omitted = 0 drops the identity shift
  CHECK(std::holds_alternative<Monomial>(chain.factors[0].v));
  CHECK(verify_composition(CatalogFn{ScaledExp{{1, 0}}}, chain) < 1e-12);
}

TEST_CASE("omitted-value factorization, transcendental case") {
  CatalogFn f{Chain{{CatalogFn{ScaledExp{{1, 0}}}, calabi()}}};
  FactorChain chain = picard_factorize(f, {});
  CHECK(chain.provenance == Provenance::OmittedLog);
  REQUIRE(chain.factors.size() == 3);  // (0+z) o e^z o (gaussian integral)
  CHECK(std::holds_alternative<Affine>(chain.factors[0].v));
  CHECK(std::holds_alternative<ScaledExp>(chain.factors[1].v));
  CHECK(std::holds_alternative<IntExpPoly>(chain.factors[2].v));
  CHECK(verify_composition(f, chain) < 1e-10);
}

TEST_CASE("factorization refuses attained targets") {
  CHECK_THROWS_AS((void)picard_factorize(calabi(), {}), Error);
}

TEST_CASE("fractional-root factorization") {
  FactorChain c1 = root_factorize(plain_exp(), 1);
  CHECK(c1.provenance == Provenance::FractionalRoot);
  CHECK(verify_composition(plain_exp(), c1) < 1e-12);
  // the inner factor expands to sqrt(2) e^{z/2}
  CatalogFn inner{Chain{{c1.factors[3], c1.factors[4], c1.factors[5]}}};
  series::PowerSeries s = catalog::taylor_at(inner, {}, 8);
  double r2 = std::sqrt(2.0);
  CHECK(std::abs(s.coeffs[0] - cplx{r2, 0}) < 1e-10);
  CHECK(std::abs(s.coeffs[1] - cplx{r2 / 2, 0}) < 1e-10);

  FactorChain c2 = root_factorize(plain_exp(), 2);
  CHECK(verify_composition(plain_exp(), c2) < 1e-12);
  CatalogFn inner2{Chain{{c2.factors[3], c2.factors[4], c2.factors[5]}}};
  series::PowerSeries s2 = catalog::taylor_at(inner2, {}, 8);
  double r3 = std::pow(3.0, 1.0 / 3.0);
  CHECK(std::abs(s2.coeffs[0] - cplx{r3, 0}) < 1e-10);

  CHECK_THROWS_AS((void)root_factorize(exp_minus_one(), 1), Error);
}

TEST_CASE("divide recursion on the exponential tower") {
  // g = e^w, h = e^z - 1: every quotient is again e^{h(z)}
  DivideReport rep = divide_recursion(CatalogFn{ScaledExp{{1, 0}}}, exp_minus_one(), 3);
  REQUIRE(rep.residuals.size() == 4);
  for (double r : rep.residuals) CHECK(r < 1e-9);
  CHECK(rep.pair_identity_residual < 1e-9);
}

TEST_CASE("divide recursion on the squared exponential") {
  // g = w^2, h = e^z: f = e^{2z}, then 2 e^z, then the constant 2
  DivideReport rep = divide_recursion(CatalogFn{Monomial{2}}, CatalogFn{ScaledExp{{1, 0}}}, 2);
  REQUIRE(rep.residuals.size() == 3);
  for (double r : rep.residuals) CHECK(r < 1e-12);
  CHECK(rep.pair_identity_residual < 1e-12);

  DivideReport rep0 = divide_recursion(CatalogFn{Monomial{2}}, CatalogFn{ScaledExp{{1, 0}}}, 0);
  REQUIRE(rep0.residuals.size() == 1);
  CHECK(rep0.residuals[0] == 0.0);
}

TEST_CASE("divide recursion rejects vanishing inner derivative") {
  CHECK_THROWS_AS((void)divide_recursion(CatalogFn{ScaledExp{{1, 0}}}, CatalogFn{Monomial{2}}, 1),
                  Error);
}

TEST_CASE("prop-9 style coefficient agreement through order 32") {
  struct Pair { CatalogFn g, h; };
  std::vector<Pair> instances{{CatalogFn{ScaledExp{{1, 0}}}, exp_minus_one()},
                              {CatalogFn{Monomial{2}}, CatalogFn{ScaledExp{{1, 0}}}}};
  for (auto& [g, h] : instances) {
    series::PowerSeries hs = catalog::taylor_at(h, {}, 40);
    series::PowerSeries gs = catalog::taylor_at(g, hs.c0(), 40);
    series::PowerSeries hp = series::derive(hs);
    series::PowerSeries fk = series::compose(gs, hs);
    series::PowerSeries gk = gs;
    for (int k = 1; k <= 3; ++k) {
      fk = series::div(series::derive(fk), hp);
      gk = series::derive(gk);
      series::PowerSeries want = series::compose(gk, hs);
      for (int n = 0; n < 32 && n < std::min(fk.order(), want.order()); ++n) {
        double scale = std::abs(want.coeffs[n]) + 1.0;
        CHECK(std::abs(fk.coeffs[n] - want.coeffs[n]) / scale < 1e-10);
      }
    }
  }
}

TEST_CASE("asymptotic set composition") {
  AsymptoticSet af{{cplx{2, 0}}, true, catalog::Provenance::ClosedForm};
  AsymptoticSet ag{{cplx{0, 0}}, true, catalog::Provenance::ClosedForm};
  AsymptoticSet out = asym_compose(af, CatalogFn{Affine{{1, 0}}}, ag);
  REQUIRE(out.values.size() == 2);
  CHECK(out.complete);

  // self-iterate of the gaussian integral
  AsymptoticSet ac = catalog::asymptotic_values(calabi());
  AsymptoticSet it = asym_iterate(calabi(), ac, 1);
  REQUIRE(it.values.size() == 4);
  double root_pi_half = 0.88622692545275801365;
  double f_at = std::sqrt(3.14159265358979323846) / 2 * std::erf(root_pi_half);
  bool found = false;
  for (const cplx& v : it.values)
    if (std::abs(v - cplx{f_at, 0}) < 2e-4) found = true;
  CHECK(found);
  CHECK(std::abs(f_at - 0.7000) < 5e-4);

  AsymptoticSet incomplete{{}, false, catalog::Provenance::ClosedForm};
  CHECK_THROWS_AS((void)asym_compose(incomplete, calabi(), ac), Error);

  // monotone and idempotent under repeated folding with itself
  AsymptoticSet once = asym_compose(af, CatalogFn{Affine{{0, 0}}}, af);
  AsymptoticSet twice = asym_compose(once, CatalogFn{Affine{{0, 0}}}, once);
  CHECK(once.values.size() == af.values.size());
  CHECK(twice.values.size() == once.values.size());
}

TEST_CASE("koebe-style count bound") {
  CompCounts maximal{1, {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18,
                         19, 20, 21, 22, 23, 24, 25, 26, 27, 28, 29, 30}};
  KoebeCheck eq = comp_koebe(maximal, cplx{0.5, 0});
  CHECK(eq.lhs == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(eq.bound == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(eq.ok);

  CompCounts flat{1, std::vector<int>(30, 1)};
  KoebeCheck fl = comp_koebe(flat, cplx{0.5, 0});
  CHECK(fl.lhs == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(fl.lhs <= fl.bound);
  CHECK(fl.ok);

  CompCounts bad{1, {1, 5}};
  CHECK_THROWS_AS((void)comp_koebe(bad, cplx{0.5, 0}), Error);
}

TEST_CASE("koebe bound holds for every admissible short sequence") {
  std::vector<cplx> zs{{0.3, 0}, {0.5, 0}, {0.35, 0.35}, {-0.6, 0.2}};
  for (int comp = 1; comp <= 2; ++comp) {
    // enumerate f_k <= comp*k with subadditivity, K = 3
    for (int f1 = comp; f1 <= comp; ++f1)
      for (int f2 = 1; f2 <= 2 * comp; ++f2)
        for (int f3 = 1; f3 <= 3 * comp; ++f3) {
          CompCounts c{comp, {f1, f2, f3}};
          bool admissible = f2 <= 2 * f1 && f3 <= f1 + f2;
          if (!admissible) continue;
          for (const cplx& z : zs) CHECK(comp_koebe(c, z).ok);
        }
  }
}

TEST_CASE("growth inequality instances") {
  GrowthCheck g = growth_clunie(exp_minus_one(), exp_minus_one(), 0.5, 2.0);
  CHECK(g.lhs == doctest::Approx(std::exp(std::exp(2.0) - 1.0) - 1.0).epsilon(1e-4));
  CHECK(g.rhs == doctest::Approx(0.9048).epsilon(1e-3));
  CHECK(g.ok);

  GrowthCheck id = growth_clunie(exp_minus_one(), CatalogFn{Affine{{0, 0}}}, 0.5, 1.0);
  CHECK(id.ok);

  CHECK_THROWS_AS((void)growth_clunie(exp_minus_one(), CatalogFn{ScaledExp{{1, 0}}}, 0.5, 1.0),
                  Error);
}

TEST_CASE("log-max-modulus ratios of the exponential tower") {
  RatioReport rep = polya_ratio(CatalogFn{ScaledExp{{1, 0}}}, CatalogFn{ScaledExp{{1, 0}}},
                                {1.0, 2.0, 3.0});
  REQUIRE(rep.ratios.size() == 3);
  CHECK(rep.ratios[0] == doctest::Approx(std::exp(1.0)).epsilon(1e-5));
  CHECK(rep.ratios[1] == doctest::Approx(std::exp(2.0) / 2).epsilon(1e-5));
  CHECK(rep.ratios[2] == doctest::Approx(std::exp(3.0) / 3).epsilon(1e-5));
  CHECK(rep.strictly_increasing);

  RatioReport identity = polya_ratio(CatalogFn{ScaledExp{{1, 0}}}, CatalogFn{Affine{{0, 0}}},
                                     {1.0, 2.0});
  for (double r : identity.ratios) CHECK(r == doctest::Approx(1.0).epsilon(1e-9));

  RatioReport single = polya_ratio(CatalogFn{ScaledExp{{1, 0}}}, CatalogFn{ScaledExp{{1, 0}}},
                                   {1.0});
  CHECK(single.ratios.size() == 1);
  CHECK(single.strictly_increasing);

  CHECK_THROWS_AS((void)polya_ratio(CatalogFn{Affine{{0, 0}}}, CatalogFn{ScaledExp{{1, 0}}},
                                    {0.5}),
                  Error);
}
