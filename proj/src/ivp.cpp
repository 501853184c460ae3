#include "holofact/ivp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "holofact/kernels.hpp"
#include "holofact/quadrature.hpp"

namespace holofact::ivp {

namespace {

using std::numbers::pi;

cplx poly_eval(const std::vector<cplx>& p, cplx z) {
  cplx acc{};
  for (std::size_t k = p.size(); k-- > 0;) acc = acc * z + p[k];
  return acc;
}

std::vector<cplx> poly_deriv(const std::vector<cplx>& p) {
  if (p.size() <= 1) return {cplx{}};
  std::vector<cplx> d(p.size() - 1);
  for (std::size_t k = 1; k < p.size(); ++k) d[k - 1] = double(k) * p[k];
  return d;
}

std::vector<cplx> poly_shift(std::vector<cplx> p, cplx center) {
  int n = static_cast<int>(p.size());
  for (int i = 0; i < n - 1; ++i)
    for (int j = n - 2; j >= i; --j) p[j] += center * p[j + 1];
  return p;
}

int poly_degree(const std::vector<cplx>& p) {
  for (std::size_t k = p.size(); k-- > 0;)
    if (std::abs(p[k]) != 0.0) return static_cast<int>(k);
  return 0;
}

// max of |e^{poly}| (optionally times |w - a|^{-N} |...| factors handled by
// the caller) over the circle |w - c| = r, sampled then refined
template <class F>
double circle_max(const F& f, cplx c, double r, int samples = 128) {
  double best = -1, best_theta = 0;
  for (int k = 0; k < samples; ++k) {
    double theta = 2 * pi * k / samples;
    double m = f(c + std::polar(r, theta));
    if (m > best) {
      best = m;
      best_theta = theta;
    }
  }
  double lo = best_theta - 2 * pi / samples, hi = best_theta + 2 * pi / samples;
  const double gr = (std::sqrt(5.0) - 1) / 2;
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = f(c + std::polar(r, x1)), f2 = f(c + std::polar(r, x2));
  for (int it = 0; it < 48; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = f(c + std::polar(r, x2));
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = f(c + std::polar(r, x1));
    }
  }
  return std::max({best, f1, f2});
}

}  // namespace

void validate(const IvpSpec& spec) {
  if (poly_degree(spec.f_exp) < 1)
    throw Error(Errc::NonElhSpec, "exponent F must be non-constant");
  if (spec.zero_order < 0) throw Error(Errc::NonElhSpec, "zero order N must be >= 0");
  if (spec.type == IvpType::Type1) {
    if (spec.zero_order != 0)
      throw Error(Errc::NonElhSpec, "type-1 problems require N = 0");
    if (poly_degree(spec.g_exp) < 1)
      throw Error(Errc::NonElhSpec, "type-1 problems require non-constant G");
  } else {
    if (std::abs(spec.seed - spec.exceptional) == 0.0)
      throw Error(Errc::SeedAtExceptionalValue, "seed equals the exceptional value");
    if (spec.zero_order == 0 && poly_degree(spec.g_exp) < 1)
      throw Error(Errc::NonElhSpec, "N = 0 requires non-constant G");
  }
}

PowerSeries solve_series(const IvpSpec& spec, int order) {
  validate(spec);
  if (order < 8) throw Error(Errc::NonElhSpec, "solver needs order >= 8");
  const int n = order;
  const int N = spec.zero_order;
  const bool type2 = spec.type == IvpType::Type2;
  const cplx a = type2 ? spec.exceptional : cplx{};

  // P = e^{F(center + h)}
  std::vector<cplx> fsh = poly_shift(spec.f_exp, spec.center);
  fsh.resize(n, cplx{});
  PowerSeries P = series::exp(PowerSeries{spec.center, std::move(fsh)});

  const int gdeg = poly_degree(spec.g_exp);
  const bool need_recip = type2 && N > 0;

  std::vector<cplx> w(n, cplx{}), wm(n, cplx{}), arg(n, cplx{}), darg(n, cplx{});
  std::vector<cplx> q(n, cplx{}), t(n, cplx{}), rhs(n, cplx{});
  std::vector<double> abs_p(n), abs_t(n);
  // (w-a)^{-N} by a reciprocal-power ladder; the convolution recursions keep
  // errors relative to the local coefficient scale, which an exp(log) route
  // does not (its error floor decays only geometrically and buries the
  // factorial tail of entire solutions)
  std::vector<std::vector<cplx>> vp;  // vp[j] = (w-a)^{-(j+1)}, j = 0..N-1
  if (need_recip) vp.assign(N, std::vector<cplx>(n, cplx{}));
  // power ladder w^j for the polynomial composition G(w)
  std::vector<std::vector<cplx>> pw(std::max(gdeg + 1, 2), std::vector<cplx>(n, cplx{}));

  for (int m = 0; m < n; ++m) abs_p[m] = std::abs(P.coeffs[m]);

  w[0] = spec.seed;
  double floor_prev = 0;
  for (int m = 0; m < n; ++m) {
    if (m > 0) {
      w[m] = rhs[m - 1] / double(m);
      // the product against e^F cancels; below the accumulated rounding floor
      // a coefficient carries no signal, and for entire-type solutions the
      // junk tail would otherwise fake a finite radius
      if (std::abs(w[m]) < floor_prev / double(m)) w[m] = cplx{};
    }
    wm[m] = w[m] - (m == 0 ? a : cplx{});

    if (need_recip) {
      if (m == 0) {
        vp[0][0] = 1.0 / wm[0];
      } else {
        vp[0][m] = -kernels::conv_range(wm.data(), vp[0].data(), m, 1, m) / wm[0];
      }
      for (int j = 1; j < N; ++j)
        vp[j][m] = kernels::conv_range(vp[j - 1].data(), vp[0].data(), m, 0, m);
    }

    // extend the power ladder and G(w)
    pw[1][m] = w[m];
    for (int j = 2; j <= gdeg; ++j)
      pw[j][m] = kernels::conv_range(pw[j - 1].data(), w.data(), m, 0, m);
    cplx gl = (m == 0 && !spec.g_exp.empty()) ? spec.g_exp[0] : cplx{};
    for (int j = 1; j <= gdeg; ++j)
      gl += (j < static_cast<int>(spec.g_exp.size()) ? spec.g_exp[j] : cplx{}) * pw[j][m];

    arg[m] = -gl;
    darg[m] = double(m) * arg[m];

    if (m == 0) {
      q[0] = std::exp(arg[0]);
    } else {
      cplx s = kernels::conv_range(darg.data(), q.data(), m, 1, m);
      q[m] = s / double(m);
    }
    t[m] = need_recip ? kernels::conv_range(vp[N - 1].data(), q.data(), m, 0, m) : q[m];
    abs_t[m] = std::abs(t[m]);
    rhs[m] = kernels::conv_range(P.coeffs.data(), t.data(), m, 0, m);
    double absconv = 0;
    for (int k = 0; k <= m; ++k) absconv += abs_p[k] * abs_t[m - k];
    floor_prev = 32.0 * 2.22e-16 * absconv;
  }

  PowerSeries L{spec.center, std::move(w)};
  if (!series::all_finite(L))
    throw Error(Errc::NonElhSpec, "solution coefficients overflowed");
  return L;
}

IvpSpec rescaled(const IvpSpec& spec, cplx center, cplx seed, double rho) {
  IvpSpec out = spec;
  out.f_exp = poly_shift(spec.f_exp, center);
  cplx p{1.0, 0.0};
  for (std::size_t k = 1; k < out.f_exp.size(); ++k) {
    p *= rho;
    out.f_exp[k] *= p;
  }
  out.f_exp[0] += std::log(rho);  // absorbs the dz = rho dzeta factor
  out.center = cplx{};
  out.seed = seed;
  return out;
}

TheoryBounds existence_bounds(const IvpSpec& spec, double box_a, double box_b) {
  validate(spec);
  if (!(box_a > 0) || !(box_b > 0))
    throw Error(Errc::NonElhSpec, "dicylinder radii must be positive");
  const int N = spec.zero_order;
  const bool type2 = spec.type == IvpType::Type2;
  const cplx a = type2 ? spec.exceptional : cplx{};
  if (type2 && std::abs(a - spec.seed) <= box_b)
    throw Error(Errc::BoxHitsExceptionalValue,
                "w-box of this radius contains the exceptional value");

  auto zfac = [&](cplx z) { return std::exp(std::real(poly_eval(spec.f_exp, z))); };
  auto wfac = [&](cplx w) {
    double m = std::exp(-std::real(poly_eval(spec.g_exp, w)));
    if (type2 && N > 0) m *= std::pow(std::abs(w - a), -double(N));
    return m;
  };
  std::vector<cplx> gd = poly_deriv(spec.g_exp);
  auto wlip = [&](cplx w) {
    cplx factor = -poly_eval(gd, w);
    if (type2 && N > 0) factor -= double(N) / (w - a);
    return wfac(w) * std::abs(factor);
  };

  TheoryBounds b;
  b.box_a = box_a;
  b.box_b = box_b;
  double mz = circle_max(zfac, spec.center, box_a);
  double mw = circle_max(wfac, spec.seed, box_b);
  b.M = mz * mw;
  b.K = mz * circle_max(wlip, spec.seed, box_b);
  b.picard = std::min(box_a, box_b / b.M);
  b.banach = std::min(b.picard, b.K > 0 ? 1.0 / b.K : box_a);
  b.cauchy = box_a * (1.0 - std::exp(-box_b / (2.0 * box_a * b.M)));
  return b;
}

std::vector<TheoryBounds> searched_bounds(const IvpSpec& spec) {
  validate(spec);
  std::vector<double> cands{0.25, 0.5, 1.0, 2.0, 4.0};
  if (spec.type == IvpType::Type2) {
    double gap = std::abs(spec.seed - spec.exceptional);
    std::vector<double> ok;
    for (double b : cands)
      if (b < 0.9 * gap) ok.push_back(b);
    if (ok.empty()) ok.push_back(0.5 * gap);
    cands = ok;
  }
  std::vector<TheoryBounds> out;
  for (double b : cands) out.push_back(existence_bounds(spec, 1.0, b));
  return out;
}

TheoryBounds best_bounds(const IvpSpec& spec) {
  auto all = searched_bounds(spec);
  const TheoryBounds* best = &all.front();
  for (const auto& b : all)
    if (b.picard > best->picard) best = &b;
  return *best;
}

DiskChart solve_local(const IvpSpec& spec, int order, bool with_bounds) {
  DiskChart chart;
  chart.spec = spec;
  chart.L = solve_series(spec, order);
  if (order >= 16) {
    chart.empirical = series::radius_estimate(chart.L);
  } else {
    // below the fit precondition: crude per-step ratio of the trailing coefficients
    series::RadiusEstimate r;
    r.method = series::RadiusMethod::Ratio;
    int hi = order - 1;
    while (hi > 0 && std::abs(chart.L.coeffs[hi]) < 1e-300) --hi;
    int lo = hi - 1;
    while (lo > 0 && std::abs(chart.L.coeffs[lo]) < 1e-300) --lo;
    if (hi > lo && std::abs(chart.L.coeffs[hi]) > 0 && std::abs(chart.L.coeffs[lo]) > 0) {
      r.value = std::pow(std::abs(chart.L.coeffs[lo]) / std::abs(chart.L.coeffs[hi]),
                         1.0 / double(hi - lo));
    } else {
      r.unbounded = true;
      r.method = series::RadiusMethod::DeclaredEntire;
      r.value = std::numeric_limits<double>::infinity();
    }
    r.window_lo = lo;
    r.window_hi = hi + 1;
    chart.empirical = r;
  }
  if (with_bounds) chart.theory = best_bounds(spec);
  return chart;
}

cplx rhs_eval(const IvpSpec& spec, cplx z, cplx w) {
  cplx v = std::exp(poly_eval(spec.f_exp, z) - poly_eval(spec.g_exp, w));
  if (spec.zero_order > 0) {
    cplx base = w - spec.exceptional;
    cplx pw{1.0, 0.0};
    for (int i = 0; i < spec.zero_order; ++i) pw *= base;
    v /= pw;
  }
  return v;
}

double residual_check(const DiskChart& chart, int n_samples) {
  double pic = chart.theory.picard > 0 ? chart.theory.picard
                                       : std::numeric_limits<double>::infinity();
  double rmax = 0.5 * std::min(pic, series::radius_or_inf(chart.empirical));
  if (!std::isfinite(rmax)) rmax = 1.0;
  PowerSeries dL = series::derive(chart.L);
  double worst = 0;
  const double golden = pi * (3.0 - std::sqrt(5.0));
  for (int j = 0; j < n_samples; ++j) {
    double rho = rmax * std::sqrt((j + 1.0) / n_samples);
    double theta = golden * j;
    cplx z = chart.spec.center + std::polar(rho, theta);
    cplx L = series::eval(chart.L, z).value;
    cplx Lp = series::eval(dL, z).value;
    worst = std::max(worst, std::abs(Lp - rhs_eval(chart.spec, z, L)));
  }
  return worst;
}

cplx eval_f(const IvpSpec& spec, cplx z) {
  auto r =
      quad::segment([&](cplx t) { return std::exp(poly_eval(spec.f_exp, t)); }, cplx{}, z);
  return r.value;
}

cplx eval_g_raw(const IvpSpec& spec, cplx w) {
  const int N = spec.zero_order;
  const cplx a = spec.exceptional;
  auto r = quad::segment(
      [&](cplx t) {
        cplx v = std::exp(poly_eval(spec.g_exp, t));
        for (int i = 0; i < N; ++i) v *= (t - a);
        return v;
      },
      cplx{}, w);
  return r.value;
}

cplx eval_g(const IvpSpec& spec, cplx w, cplx g_offset) {
  return eval_g_raw(spec, w) + g_offset;
}

cplx g_offset_for_root(const IvpSpec& spec) {
  return eval_f(spec, spec.center) - eval_g_raw(spec, spec.seed);
}

}  // namespace holofact::ivp
