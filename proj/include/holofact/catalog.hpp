#pragma once

#include <complex>
#include <map>
#include <memory>
#include <variant>
#include <vector>

#include "holofact/power_series.hpp"

// The library of concrete entire functions the lab operates on. Integral
// variants evaluate by adaptive quadrature along the straight segment from 0;
// every variant has a closed-form derivative so Newton probing never needs
// numerical differentiation.

namespace holofact::catalog {

using cplx = std::complex<double>;
using series::PowerSeries;

struct CatalogFn;

struct IntExpPoly {  // int_0^z e^{p(t)} dt + c, deg p >= 1
  std::vector<cplx> p;
  cplx c{};
};
struct ExpAffine {  // alpha + e^{a z + b}, a != 0
  cplx alpha{}, a{1.0, 0.0}, b{};
};
struct Affine {  // z + a
  cplx a{};
};
struct Monomial {  // z^n, n >= 1
  int n = 1;
};
struct ScaledExp {  // e^{lambda z}, lambda != 0
  cplx lambda{1.0, 0.0};
};
struct ZExpH {};     // z * e^{h(z)}, h(z) = sum_{n>=1} z^n/(n*n!)
struct IntExpExp {}; // int_0^z e^{e^t} dt
struct NgLimit {     // prefix of the nested-exponential limit construction
  std::vector<double> cs;
  int prefix = 1;
};
struct Chain {  // f1(f2(...fm(z))), outermost first
  std::vector<CatalogFn> factors;
};
struct Scale {  // lambda * z, lambda != 0
  cplx lambda{1.0, 0.0};
};
struct PowRoot {  // principal z^{1/den}, den >= 2
  int den = 2;
};
struct LogShift {  // principal log(z - w0)
  cplx w0{};
};

using FnVariant = std::variant<IntExpPoly, ExpAffine, Affine, Monomial, ScaledExp, ZExpH,
                               IntExpExp, NgLimit, Chain, Scale, PowRoot, LogShift>;

struct CatalogFn {
  FnVariant v;
  CatalogFn() : v(Affine{}) {}
  CatalogFn(FnVariant var) : v(std::move(var)) {}
};

const char* kind_name(const CatalogFn& f);
void validate(const CatalogFn& f);  // throws Errc::SchemaError on a bad variant

struct EvalValue {
  cplx value;
  double error;  // quadrature / tail bound, 0 for closed forms
};

EvalValue eval_full(const CatalogFn& f, cplx z);
cplx eval(const CatalogFn& f, cplx z);
cplx deriv_eval(const CatalogFn& f, cplx z);

PowerSeries taylor_at(const CatalogFn& f, cplx center, int order);

enum class Provenance { ClosedForm, SectorQuadrature, SetAlgebra };

struct AsymptoticSet {
  std::vector<cplx> values;  // pairwise distinct to 1e-9
  bool complete = false;
  Provenance provenance = Provenance::ClosedForm;
};

// Finite asymptotic values. Closed forms for the affine/exponential variants;
// decay-sector ray quadrature for polynomial-exponent integrals. Unsupported
// variants report an empty, incomplete set.
AsymptoticSet asymptotic_values(const CatalogFn& f);

// dedup helper shared with the set algebra
void insert_dedup(std::vector<cplx>& values, cplx v, double tol = 1e-9);

// max |f| on |z| = r: 720 equiangular samples plus golden-section refinement
double max_modulus(const CatalogFn& f, double r);

struct ProbeReport {
  std::map<int, cplx> hits;  // target index -> first converged preimage
  std::vector<int> misses;
};

// Multi-start Newton for f(z) = w from a 9x9 grid clipped to |z| <= 6.
ProbeReport surjectivity_probe(const CatalogFn& f, const std::vector<cplx>& targets,
                               int newton_budget = 50);

// h(z) = sum_{n>=1} z^n/(n*n!) and its Taylor coefficients about any center
cplx zexph_h(cplx z);
std::vector<cplx> zexph_h_coeffs(cplx center, int order);

}  // namespace holofact::catalog
