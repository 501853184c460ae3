#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "holofact/catalog.hpp"
#include "holofact/power_series.hpp"

// Local Taylor solutions of the two factorization initial value problems
//
//   type 1:  L' = e^{F(z)} e^{-G(L)},            L(center) = seed
//   type 2:  L' = e^{F(z)} (L-a)^{-N} e^{-G(L)}, L(center) = seed != a
//
// with F, G complex polynomials, plus the quantitative lower bounds on the
// radius of the disk of holomorphy from the classical existence theorems.

namespace holofact::ivp {

using cplx = std::complex<double>;
using series::PowerSeries;
using series::RadiusEstimate;

enum class IvpType { Type1, Type2 };

struct IvpSpec {
  std::vector<cplx> f_exp;   // exponent F, non-constant
  std::vector<cplx> g_exp;   // exponent G; may be constant only when zero_order > 0
  int zero_order = 0;        // N, the order of the zero of g' at the exceptional value
  cplx exceptional{};        // a; meaningful when zero_order > 0 or type 2
  IvpType type = IvpType::Type1;
  cplx center{};             // expansion center
  cplx seed{};               // L(center)
};

void validate(const IvpSpec& spec);  // NonElhSpec / SeedAtExceptionalValue

struct TheoryBounds {
  double banach = 0;   // min(a, b/M, 1/K)
  double picard = 0;   // min(a, b/M)
  double cauchy = 0;   // a (1 - exp(-b / (2 a M)))
  double M = 0;        // max |rhs| on the dicylinder boundary
  double K = 0;        // max |d rhs / dw| there
  double box_a = 0, box_b = 0;
};

// Boundary-grid maximization (128 samples per circle plus golden-section
// refinement); the right side separates into a z-factor and a w-factor, so the
// dicylinder maximum is the product of the two circle maxima.
TheoryBounds existence_bounds(const IvpSpec& spec, double box_a, double box_b);

// The 5-point log-grid search over box_b used when no box is supplied.
std::vector<TheoryBounds> searched_bounds(const IvpSpec& spec);
TheoryBounds best_bounds(const IvpSpec& spec);

struct DiskChart {
  int id = 0;
  IvpSpec spec;
  PowerSeries L;
  TheoryBounds theory;
  RadiusEstimate empirical;
  int generation = 0;
  std::optional<int> parent;
  std::optional<double> entry_angle;
};

// One-pass matched-coefficient recursion: the right side is expanded stage by
// stage (reciprocal powers, polynomial composition, exp, product), and
// coefficient n of the expansion yields coefficient n+1 of L.
PowerSeries solve_series(const IvpSpec& spec, int order);

// The same problem in the variable zeta = (z - center)/rho, seeded at `seed`.
// Tiny disks would otherwise overflow the raw coefficients (they grow like
// radius^-n); the scaled solution stays O(|L|).
IvpSpec rescaled(const IvpSpec& spec, cplx center, cplx seed, double rho);

DiskChart solve_local(const IvpSpec& spec, int order, bool with_bounds = true);

// max |L' - rhs(z, L)| over n samples with |z - center| <= 0.5 min(picard, r_emp)
double residual_check(const DiskChart& chart, int n_samples);

// rhs factors evaluated pointwise
cplx rhs_eval(const IvpSpec& spec, cplx z, cplx w);

// the induced outer/inner pair: f(z) = int_0^z e^F + 0, g(w) = int_0^w (t-a)^N e^G + C
// with C fixed by g(seed) = f(center) of the root problem.
cplx eval_f(const IvpSpec& spec, cplx z);
cplx eval_g_raw(const IvpSpec& spec, cplx w);              // C = 0
cplx eval_g(const IvpSpec& spec, cplx w, cplx g_offset);   // raw + offset
cplx g_offset_for_root(const IvpSpec& spec);

}  // namespace holofact::ivp
