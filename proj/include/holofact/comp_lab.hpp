#pragma once

#include <complex>
#include <vector>

#include "holofact/catalog.hpp"

// Explicit factorization chains, the divide recursion induced by a known
// right factor, asymptotic-set algebra, and the classical growth inequalities
// for compositions.

namespace holofact::lab {

using cplx = std::complex<double>;
using catalog::AsymptoticSet;
using catalog::CatalogFn;

enum class Provenance { OmittedAffine, OmittedLog, FractionalRoot, Identity, User };

struct FactorChain {
  std::vector<CatalogFn> factors;  // outermost first
  Provenance provenance = Provenance::User;
};

CatalogFn as_catalog(const FactorChain& chain);

// max |f(z) - chain(z)| over low-discrepancy samples of |z| <= box_radius
double verify_composition(const CatalogFn& f, const FactorChain& chain,
                          int n_samples = 200, double box_radius = 2.0);

// factorization through an omitted value: the affine-logarithm case collapses
// to square-of-exponential, otherwise the logarithm factor stays in the chain
FactorChain picard_factorize(const CatalogFn& f, cplx omitted);

// fractional-root factorization of a zero-omitting exponential integral
FactorChain root_factorize(const CatalogFn& f, int N);

struct DivideReport {
  std::vector<double> residuals;        // k = 0 .. n_max
  double pair_identity_residual = 0.0;  // f1*f0 against (f0^2/2)'/h'
};

// f0 = g o h, f_{k+1} = f_k'/h'; each f_k must match the k-th derivative of g
// composed with h
DivideReport divide_recursion(const CatalogFn& g, const CatalogFn& h, int n_max,
                              int order = 64);

AsymptoticSet asym_compose(const AsymptoticSet& a_f, const CatalogFn& f,
                           const AsymptoticSet& a_g);
// folded self-composition: the asymptotic set of the (n+1)-fold iterate
AsymptoticSet asym_iterate(const CatalogFn& f, const AsymptoticSet& a_f, int n);

struct CompCounts {
  int comp_f = 1;
  std::vector<int> f_k;  // f_k[i] counts the components of the (i+1)-fold iterate
};

struct KoebeCheck {
  double lhs = 0;   // |partial sum| plus the closed-form tail allowance
  double bound = 0; // comp_f |z| / (1-|z|)^2
  bool ok = false;
};
KoebeCheck comp_koebe(const CompCounts& counts, cplx z);

struct GrowthCheck {
  double lhs = 0;
  double rhs = 0;
  bool ok = false;
};
// M(R, f o g) >= M(c(rho) M(rho R, g), f) with c(rho) = (1 - rho^2)/(4 rho)
GrowthCheck growth_clunie(const CatalogFn& f, const CatalogFn& g, double rho, double R);

struct RatioReport {
  std::vector<double> ratios;  // log M(r, f o g) / log M(r, f)
  bool strictly_increasing = false;
};
RatioReport polya_ratio(const CatalogFn& f, const CatalogFn& g,
                        const std::vector<double>& r_grid);

std::vector<cplx> halton_disk_points(int count, double radius);

}  // namespace holofact::lab
