#include "holofact/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "holofact/quadrature.hpp"

namespace holofact::catalog {

namespace {

using std::numbers::pi;

cplx poly_eval(const std::vector<cplx>& p, cplx z) {
  cplx acc{};
  for (std::size_t k = p.size(); k-- > 0;) acc = acc * z + p[k];
  return acc;
}

// shift p to the new center: q(s) = p(center + s), exact synthetic division
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

PowerSeries poly_exp_series(const std::vector<cplx>& p, cplx center, int order) {
  std::vector<cplx> shifted = poly_shift(p, center);
  shifted.resize(std::max(order, 1), cplx{});
  return series::exp(PowerSeries{center, std::move(shifted)});
}

EvalValue quad_int_exp_poly(const std::vector<cplx>& p, cplx z) {
  auto r = quad::segment([&](cplx t) { return std::exp(poly_eval(p, t)); }, cplx{}, z);
  return {r.value, r.error};
}

}  // namespace

cplx zexph_h(cplx z) {
  // sum z^n/(n*n!), terms drop factorially; fine on the |z| <= ~15 the probes use
  cplx term = z, sum{};
  for (int n = 1; n <= 300; ++n) {
    cplx add = term / double(n);
    sum += add;
    if (std::abs(add) < 1e-18 * (1.0 + std::abs(sum))) break;
    term *= z / double(n + 1);
  }
  return sum;
}

std::vector<cplx> zexph_h_coeffs(cplx center, int order) {
  // integrand (e^t - 1)/t about the center; its n-th coefficient is
  // sum_{j>=0} C(n+j, n) center^j / (n+j+1)!, an absolutely convergent sum
  // with factorially decaying terms. Integrate termwise afterwards.
  std::vector<cplx> integ(order > 1 ? order - 1 : 1, cplx{});
  for (int n = 0; n < static_cast<int>(integ.size()); ++n) {
    double logfact = 0;
    for (int k = 2; k <= n + 1; ++k) logfact += std::log(double(k));
    cplx t = cplx{std::exp(-logfact), 0.0};  // j = 0 term: 1/(n+1)!
    cplx sum{};
    for (int j = 0; j <= 250; ++j) {
      sum += t;
      if (std::abs(t) < 1e-20 * (1.0 + std::abs(sum))) break;
      t *= center * double(n + j + 1) / (double(j + 1) * double(n + j + 2));
    }
    integ[n] = sum;
  }
  PowerSeries h = series::integrate(PowerSeries{center, integ}, zexph_h(center));
  h.coeffs.resize(order);
  return h.coeffs;
}

const char* kind_name(const CatalogFn& f) {
  return std::visit(
      [](const auto& v) -> const char* {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, IntExpPoly>) return "int_exp_poly";
        else if constexpr (std::is_same_v<T, ExpAffine>) return "exp_affine";
        else if constexpr (std::is_same_v<T, Affine>) return "affine";
        else if constexpr (std::is_same_v<T, Monomial>) return "monomial";
        else if constexpr (std::is_same_v<T, ScaledExp>) return "scaled_exp";
        else if constexpr (std::is_same_v<T, ZExpH>) return "z_exp_h";
        else if constexpr (std::is_same_v<T, IntExpExp>) return "int_exp_exp";
        else if constexpr (std::is_same_v<T, NgLimit>) return "ng_limit";
        else if constexpr (std::is_same_v<T, Chain>) return "chain";
        else if constexpr (std::is_same_v<T, Scale>) return "scale";
        else if constexpr (std::is_same_v<T, PowRoot>) return "pow_root";
        else return "log_shift";
      },
      f.v);
}

void validate(const CatalogFn& f) {
  std::visit(
      [](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, IntExpPoly>) {
          if (poly_degree(v.p) < 1)
            throw Error(Errc::SchemaError, "int_exp_poly exponent must be non-constant");
        } else if constexpr (std::is_same_v<T, ExpAffine>) {
          if (std::abs(v.a) == 0.0) throw Error(Errc::SchemaError, "exp_affine needs a != 0");
        } else if constexpr (std::is_same_v<T, Monomial>) {
          if (v.n < 1) throw Error(Errc::SchemaError, "monomial needs n >= 1");
        } else if constexpr (std::is_same_v<T, ScaledExp>) {
          if (std::abs(v.lambda) == 0.0)
            throw Error(Errc::SchemaError, "scaled_exp needs lambda != 0");
        } else if constexpr (std::is_same_v<T, NgLimit>) {
          if (v.prefix < 1 || v.prefix > static_cast<int>(v.cs.size()))
            throw Error(Errc::UnsupportedVariant, "ng_limit prefix exceeds stored sequence");
          for (double c : v.cs)
            if (!(c > 0)) throw Error(Errc::SchemaError, "ng_limit needs positive terms");
        } else if constexpr (std::is_same_v<T, Chain>) {
          if (v.factors.empty()) throw Error(Errc::SchemaError, "chain must be nonempty");
          for (const auto& g : v.factors) validate(g);
        } else if constexpr (std::is_same_v<T, Scale>) {
          if (std::abs(v.lambda) == 0.0) throw Error(Errc::SchemaError, "scale needs lambda != 0");
        } else if constexpr (std::is_same_v<T, PowRoot>) {
          if (v.den < 2) throw Error(Errc::SchemaError, "pow_root needs den >= 2");
        }
      },
      f.v);
}

EvalValue eval_full(const CatalogFn& f, cplx z) {
  return std::visit(
      [&](const auto& v) -> EvalValue {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, IntExpPoly>) {
          EvalValue r = quad_int_exp_poly(v.p, z);
          return {r.value + v.c, r.error};
        } else if constexpr (std::is_same_v<T, ExpAffine>) {
          return {v.alpha + std::exp(v.a * z + v.b), 0.0};
        } else if constexpr (std::is_same_v<T, Affine>) {
          return {z + v.a, 0.0};
        } else if constexpr (std::is_same_v<T, Monomial>) {
          cplx acc{1.0, 0.0};
          for (int i = 0; i < v.n; ++i) acc *= z;
          return {acc, 0.0};
        } else if constexpr (std::is_same_v<T, ScaledExp>) {
          return {std::exp(v.lambda * z), 0.0};
        } else if constexpr (std::is_same_v<T, ZExpH>) {
          return {z * std::exp(zexph_h(z)), 0.0};
        } else if constexpr (std::is_same_v<T, IntExpExp>) {
          auto r = quad::segment([](cplx t) { return std::exp(std::exp(t)); }, cplx{}, z);
          return {r.value, r.error};
        } else if constexpr (std::is_same_v<T, NgLimit>) {
          cplx w = z;
          for (int j = v.prefix; j-- > 0;) w = v.cs[j] * std::exp(w) + w;
          return {w, std::pow(2.0, 1 - v.prefix)};
        } else if constexpr (std::is_same_v<T, Chain>) {
          cplx w = z;
          double err = 0;
          for (std::size_t i = v.factors.size(); i-- > 0;) {
            EvalValue e = eval_full(v.factors[i], w);
            w = e.value;
            err += e.error;
          }
          return {w, err};
        } else if constexpr (std::is_same_v<T, Scale>) {
          return {v.lambda * z, 0.0};
        } else if constexpr (std::is_same_v<T, PowRoot>) {
          return {std::pow(z, 1.0 / double(v.den)), 0.0};
        } else {  // LogShift
          return {std::log(z - v.w0), 0.0};
        }
      },
      f.v);
}

cplx eval(const CatalogFn& f, cplx z) { return eval_full(f, z).value; }

cplx deriv_eval(const CatalogFn& f, cplx z) {
  return std::visit(
      [&](const auto& v) -> cplx {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, IntExpPoly>) {
          return std::exp(poly_eval(v.p, z));
        } else if constexpr (std::is_same_v<T, ExpAffine>) {
          return v.a * std::exp(v.a * z + v.b);
        } else if constexpr (std::is_same_v<T, Affine>) {
          (void)v;
          return {1.0, 0.0};
        } else if constexpr (std::is_same_v<T, Monomial>) {
          if (v.n == 1) return {1.0, 0.0};
          cplx acc{double(v.n), 0.0};
          for (int i = 0; i < v.n - 1; ++i) acc *= z;
          return acc;
        } else if constexpr (std::is_same_v<T, ScaledExp>) {
          return v.lambda * std::exp(v.lambda * z);
        } else if constexpr (std::is_same_v<T, ZExpH>) {
          return std::exp(z + zexph_h(z));
        } else if constexpr (std::is_same_v<T, IntExpExp>) {
          return std::exp(std::exp(z));
        } else if constexpr (std::is_same_v<T, NgLimit>) {
          cplx w = z, dw{1.0, 0.0};
          for (int j = v.prefix; j-- > 0;) {
            dw = (v.cs[j] * std::exp(w) + 1.0) * dw;
            w = v.cs[j] * std::exp(w) + w;
          }
          return dw;
        } else if constexpr (std::is_same_v<T, Chain>) {
          cplx w = z, dw{1.0, 0.0};
          for (std::size_t i = v.factors.size(); i-- > 0;) {
            dw *= deriv_eval(v.factors[i], w);
            w = eval(v.factors[i], w);
          }
          return dw;
        } else if constexpr (std::is_same_v<T, Scale>) {
          return v.lambda;
        } else if constexpr (std::is_same_v<T, PowRoot>) {
          return std::pow(z, 1.0 / double(v.den) - 1.0) / double(v.den);
        } else {  // LogShift
          return 1.0 / (z - v.w0);
        }
      },
      f.v);
}

PowerSeries taylor_at(const CatalogFn& f, cplx center, int order) {
  if (order < 2) throw Error(Errc::SchemaError, "taylor_at needs order >= 2");
  return std::visit(
      [&](const auto& v) -> PowerSeries {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, IntExpPoly>) {
          PowerSeries integ = poly_exp_series(v.p, center, order - 1);
          return series::integrate(integ, eval(CatalogFn{v}, center));
        } else if constexpr (std::is_same_v<T, ExpAffine>) {
          std::vector<cplx> c(order);
          cplx lead = std::exp(v.a * center + v.b);
          double fact = 1;
          cplx an{1.0, 0.0};
          for (int n = 0; n < order; ++n) {
            if (n > 0) {
              fact *= n;
              an *= v.a;
            }
            c[n] = lead * an / fact;
          }
          c[0] += v.alpha;
          return PowerSeries{center, std::move(c)};
        } else if constexpr (std::is_same_v<T, Affine>) {
          std::vector<cplx> c(order, cplx{});
          c[0] = center + v.a;
          c[1] = 1.0;
          return PowerSeries{center, std::move(c)};
        } else if constexpr (std::is_same_v<T, Monomial>) {
          std::vector<cplx> c(order, cplx{});
          // binomial expansion of (center + s)^n
          cplx binom{1.0, 0.0};
          for (int k = 0; k <= v.n && k < order; ++k) {
            cplx pw{1.0, 0.0};
            for (int i = 0; i < v.n - k; ++i) pw *= center;
            c[k] = binom * pw;
            binom *= double(v.n - k) / double(k + 1);
          }
          return PowerSeries{center, std::move(c)};
        } else if constexpr (std::is_same_v<T, ScaledExp>) {
          std::vector<cplx> c(order);
          cplx lead = std::exp(v.lambda * center);
          double fact = 1;
          cplx ln{1.0, 0.0};
          for (int n = 0; n < order; ++n) {
            if (n > 0) {
              fact *= n;
              ln *= v.lambda;
            }
            c[n] = lead * ln / fact;
          }
          return PowerSeries{center, std::move(c)};
        } else if constexpr (std::is_same_v<T, ZExpH>) {
          PowerSeries h{center, zexph_h_coeffs(center, order)};
          PowerSeries zed{center, std::vector<cplx>(order, cplx{})};
          zed.coeffs[0] = center;
          zed.coeffs[1] = 1.0;
          return series::mul(zed, series::exp(h));
        } else if constexpr (std::is_same_v<T, IntExpExp>) {
          std::vector<cplx> expo(order - 1, cplx{});
          cplx ec = std::exp(center);
          double fact = 1;
          for (int n = 0; n < order - 1; ++n) {
            if (n > 0) fact *= n;
            expo[n] = ec / fact;
          }
          PowerSeries integ = series::exp(PowerSeries{center, std::move(expo)});
          return series::integrate(integ, eval(CatalogFn{v}, center));
        } else if constexpr (std::is_same_v<T, NgLimit>) {
          validate(CatalogFn{v});
          PowerSeries w{center, std::vector<cplx>(order, cplx{})};
          w.coeffs[0] = center;
          w.coeffs[1] = 1.0;
          for (int j = v.prefix; j-- > 0;)
            w = series::add(series::scale(series::exp(w), v.cs[j]), w);
          return w;
        } else if constexpr (std::is_same_v<T, Chain>) {
          PowerSeries s = taylor_at(v.factors.back(), center, order);
          for (std::size_t i = v.factors.size() - 1; i-- > 0;) {
            PowerSeries outer = taylor_at(v.factors[i], s.c0(), order);
            s = series::compose(outer, s);
          }
          return s;
        } else if constexpr (std::is_same_v<T, Scale>) {
          std::vector<cplx> c(order, cplx{});
          c[0] = v.lambda * center;
          c[1] = v.lambda;
          return PowerSeries{center, std::move(c)};
        } else if constexpr (std::is_same_v<T, PowRoot>) {
          if (std::abs(center) == 0.0)
            throw Error(Errc::BranchObstruction, "fractional root expansion at a branch point");
          std::vector<cplx> lin(order, cplx{});
          lin[0] = center;
          lin[1] = 1.0;
          return series::pow(PowerSeries{center, std::move(lin)}, 1.0 / double(v.den));
        } else {  // LogShift
          std::vector<cplx> lin(order, cplx{});
          lin[0] = center - v.w0;
          lin[1] = 1.0;
          return series::log(PowerSeries{center, std::move(lin)});
        }
      },
      f.v);
}

void insert_dedup(std::vector<cplx>& values, cplx v, double tol) {
  for (const cplx& w : values)
    if (std::abs(w - v) < tol) return;
  values.push_back(v);
}

AsymptoticSet asymptotic_values(const CatalogFn& f) {
  return std::visit(
      [&](const auto& v) -> AsymptoticSet {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Affine>) {
          return {{}, true, Provenance::ClosedForm};
        } else if constexpr (std::is_same_v<T, ExpAffine>) {
          return {{v.alpha}, true, Provenance::ClosedForm};
        } else if constexpr (std::is_same_v<T, ScaledExp>) {
          return {{cplx{}}, true, Provenance::ClosedForm};
        } else if constexpr (std::is_same_v<T, IntExpPoly>) {
          int d = poly_degree(v.p);
          cplx lead = v.p[d];
          AsymptoticSet out;
          out.provenance = Provenance::SectorQuadrature;
          // decay sectors of Re(lead t^d): bisectors where arg(lead) + d*theta = pi
          for (int j = 0; j < d; ++j) {
            double theta = (pi - std::arg(lead) + 2 * pi * j) / d;
            cplx dir = std::polar(1.0, theta);
            // cutoff radius: |e^{p}| < 1e-18 and decreasing from there on
            double rcut = 1.0;
            bool ok = false;
            double prev = 1e300;
            for (int it = 0; it < 60; ++it) {
              double mag = std::real(poly_eval(v.p, rcut * dir));
              if (mag < -45.0 && mag < prev) {
                ok = true;
                break;
              }
              prev = mag;
              rcut *= 1.5;
              if (rcut > 1e6) break;
            }
            if (!ok)
              throw Error(Errc::RayDivergence, "integrand fails to decay along sector bisector");
            auto r = quad::segment([&](cplx t) { return std::exp(poly_eval(v.p, t)); },
                                   cplx{}, rcut * dir);
            insert_dedup(out.values, r.value + v.c);
          }
          out.complete = true;
          return out;
        } else {
          return {{}, false, Provenance::ClosedForm};
        }
      },
      f.v);
}

double max_modulus(const CatalogFn& f, double r) {
  if (!(r > 0)) throw Error(Errc::SchemaError, "max_modulus needs r > 0");
  const int n = 720;
  double best = -1, best_theta = 0;
  for (int k = 0; k < n; ++k) {
    double theta = 2 * pi * k / n;
    double m = std::abs(eval(f, std::polar(r, theta)));
    if (m > best) {
      best = m;
      best_theta = theta;
    }
  }
  // golden-section refinement on the bracketing arc
  double lo = best_theta - 2 * pi / n, hi = best_theta + 2 * pi / n;
  const double gr = (std::sqrt(5.0) - 1) / 2;
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = std::abs(eval(f, std::polar(r, x1)));
  double f2 = std::abs(eval(f, std::polar(r, x2)));
  for (int it = 0; it < 60; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = std::abs(eval(f, std::polar(r, x2)));
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = std::abs(eval(f, std::polar(r, x1)));
    }
    if (hi - lo < 1e-12) break;
  }
  return std::max({best, f1, f2});
}

ProbeReport surjectivity_probe(const CatalogFn& f, const std::vector<cplx>& targets,
                               int newton_budget) {
  ProbeReport rep;
  std::vector<cplx> starts;
  for (int i = 0; i < 9; ++i)
    for (int j = 0; j < 9; ++j) {
      cplx s{-6.0 + 12.0 * i / 8.0, -6.0 + 12.0 * j / 8.0};
      if (std::abs(s) <= 6.0) starts.push_back(s);
    }
  // nearest starts first, ties broken lexicographically, so the reported
  // preimage is the innermost one the grid can reach
  std::stable_sort(starts.begin(), starts.end(), [](cplx a, cplx b) {
    double ma = std::abs(a), mb = std::abs(b);
    if (ma != mb) return ma < mb;
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  for (int ti = 0; ti < static_cast<int>(targets.size()); ++ti) {
    cplx w = targets[ti];
    bool hit = false;
    for (const cplx& s0 : starts) {
      cplx z = s0;
      cplx fv;
      try {
        fv = eval(f, z) - w;
      } catch (const Error&) {
        continue;
      }
      double prev_step = std::numeric_limits<double>::infinity();
      for (int it = 0; it < newton_budget; ++it) {
        cplx dv;
        try {
          dv = deriv_eval(f, z);
        } catch (const Error&) {
          break;
        }
        if (std::abs(dv) == 0.0 || !std::isfinite(std::abs(fv))) break;
        cplx step = fv / dv;
        z -= step;
        try {
          fv = eval(f, z) - w;
        } catch (const Error&) {
          break;
        }
        // a residual alone is not a root certificate: along an asymptotic
        // tract |f - w| also collapses while the iterates creep in constant
        // or growing steps; a simple root shows quadratic step decay
        double snorm = std::abs(step);
        bool machine_small = snorm <= 1e-13 * (1.0 + std::abs(z));
        bool quadratic = snorm <= 0.3 * prev_step;
        if (std::abs(fv) < 1e-9 && (machine_small || quadratic)) {
          rep.hits[ti] = z;
          hit = true;
          break;
        }
        prev_step = snorm;
        if (std::abs(z) > 1e6) break;
      }
      if (hit) break;
    }
    if (!hit) rep.misses.push_back(ti);
  }
  return rep;
}

}  // namespace holofact::catalog
