#include "holofact/comp_lab.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace holofact::lab {

namespace {

using std::numbers::pi;

double halton(int i, int base) {
  double f = 1.0, r = 0.0;
  for (int n = i + 1; n > 0; n /= base) {
    f /= base;
    r += f * (n % base);
  }
  return r;
}

}  // namespace

std::vector<cplx> halton_disk_points(int count, double radius) {
  std::vector<cplx> pts;
  pts.reserve(count);
  for (int i = 0; i < count; ++i) {
    double rho = radius * std::sqrt(halton(i, 2));
    double theta = 2 * pi * halton(i, 3);
    pts.push_back(std::polar(rho, theta));
  }
  return pts;
}

CatalogFn as_catalog(const FactorChain& chain) {
  if (chain.factors.size() == 1) return chain.factors.front();
  return CatalogFn{catalog::Chain{chain.factors}};
}

double verify_composition(const CatalogFn& f, const FactorChain& chain, int n_samples,
                          double box_radius) {
  CatalogFn c = as_catalog(chain);
  double worst = 0;
  for (const cplx& z : halton_disk_points(n_samples, box_radius))
    worst = std::max(worst, std::abs(catalog::eval(f, z) - catalog::eval(c, z)));
  return worst;
}

namespace {

// all coefficients of degree >= 2 negligible at two expansion centers
bool log_is_affine(const CatalogFn& f, cplx omitted) {
  for (cplx center : {cplx{0, 0}, cplx{1, 0}}) {
    series::PowerSeries s = catalog::taylor_at(f, center, 16);
    s.coeffs[0] -= omitted;
    series::PowerSeries l = series::log(s);
    for (int n = 2; n < l.order(); ++n)
      if (std::abs(l.coeffs[n]) > 1e-10) return false;
  }
  return true;
}

}  // namespace

FactorChain picard_factorize(const CatalogFn& f, cplx omitted) {
  auto probe = catalog::surjectivity_probe(f, {omitted});
  if (!probe.hits.empty())
    throw Error(Errc::NotOmittedOnProbe, "a preimage of the target was found");

  series::PowerSeries s0 = catalog::taylor_at(f, cplx{}, 16);
  s0.coeffs[0] -= omitted;
  series::PowerSeries l0;
  try {
    l0 = series::log(s0);
  } catch (const Error&) {
    throw Error(Errc::BranchObstruction, "logarithm of f - omitted failed at 0");
  }

  FactorChain chain;
  if (log_is_affine(f, omitted)) {
    // log(f - omitted) = c z + d, so f = omitted + (e^{(c z + d)/2})^2
    cplx d = l0.coeffs[0], c = l0.coeffs[1];
    chain.provenance = Provenance::OmittedAffine;
    if (std::abs(omitted) != 0.0)
      chain.factors.push_back(CatalogFn{catalog::Affine{omitted}});
    chain.factors.push_back(CatalogFn{catalog::Monomial{2}});
    chain.factors.push_back(CatalogFn{catalog::ExpAffine{{0, 0}, 0.5 * c, 0.5 * d}});
    return chain;
  }

  chain.provenance = Provenance::OmittedLog;
  chain.factors.push_back(CatalogFn{catalog::Affine{omitted}});
  chain.factors.push_back(CatalogFn{catalog::ScaledExp{{1, 0}}});
  // the inner logarithm factor; when f is exp composed with something the
  // logarithm cancels exactly and the tail chain is kept verbatim
  bool simplified = false;
  if (std::abs(omitted) == 0.0) {
    if (const auto* ch = std::get_if<catalog::Chain>(&f.v)) {
      if (!ch->factors.empty()) {
        if (const auto* head = std::get_if<catalog::ScaledExp>(&ch->factors.front().v)) {
          if (std::abs(head->lambda - cplx{1, 0}) < 1e-15) {
            for (std::size_t i = 1; i < ch->factors.size(); ++i)
              chain.factors.push_back(ch->factors[i]);
            simplified = true;
          }
        }
      }
    }
  }
  if (!simplified) {
    chain.factors.push_back(CatalogFn{catalog::LogShift{omitted}});
    chain.factors.push_back(f);
  }
  return chain;
}

FactorChain root_factorize(const CatalogFn& f, int N) {
  if (!std::holds_alternative<catalog::IntExpPoly>(f.v))
    throw Error(Errc::UnsupportedVariant,
                "root factorization needs an exponential integral");
  if (N < 1) throw Error(Errc::SchemaError, "root factorization needs N >= 1");
  auto probe = catalog::surjectivity_probe(f, {cplx{}});
  if (!probe.hits.empty())
    throw Error(Errc::ZeroValueOnProbe, "f takes the value 0 on the probe grid");

  double root = std::pow(double(N + 1), 1.0 / double(N + 1));
  FactorChain chain;
  chain.provenance = Provenance::FractionalRoot;
  chain.factors.push_back(CatalogFn{catalog::Scale{{1.0 / double(N + 1), 0}}});
  chain.factors.push_back(CatalogFn{catalog::Monomial{N + 1}});
  chain.factors.push_back(CatalogFn{catalog::Affine{{0, 0}}});
  chain.factors.push_back(CatalogFn{catalog::Scale{{root, 0}}});
  chain.factors.push_back(CatalogFn{catalog::PowRoot{N + 1}});
  chain.factors.push_back(f);

  double resid = verify_composition(f, chain, 64, 1.0);
  if (!(resid < 1e-9))
    throw Error(Errc::BranchObstruction, "root chain fails to reproduce f near 0");
  return chain;
}

DivideReport divide_recursion(const CatalogFn& g, const CatalogFn& h, int n_max,
                              int order) {
  // h' must not vanish on the sample box
  std::vector<cplx> probe = halton_disk_points(40, 1.0);
  probe.push_back(cplx{});
  for (const cplx& z : probe)
    if (std::abs(catalog::deriv_eval(h, z)) < 1e-12)
      throw Error(Errc::HPrimeZeroOnBox, "h' vanishes on the test box");

  series::PowerSeries hs = catalog::taylor_at(h, cplx{}, order + 1);
  series::PowerSeries gs = catalog::taylor_at(g, hs.c0(), order + 1);
  series::PowerSeries hp = series::derive(hs);
  series::PowerSeries f0 = series::compose(gs, hs);

  std::vector<cplx> samples = halton_disk_points(40, 0.8);
  DivideReport rep;

  series::PowerSeries fk = f0;
  series::PowerSeries gk = gs;
  for (int k = 0; k <= n_max; ++k) {
    series::PowerSeries gkh = series::compose(gk, hs);
    double worst = 0;
    for (const cplx& z : samples)
      worst = std::max(
          worst, std::abs(series::eval(fk, z).value - series::eval(gkh, z).value));
    rep.residuals.push_back(worst);
    if (k < n_max) {
      fk = series::div(series::derive(fk), hp);
      gk = series::derive(gk);
    }
  }

  // f1 f0 equals the derivative of f0^2/2 divided by h'
  series::PowerSeries f1 = series::div(series::derive(f0), hp);
  series::PowerSeries lhs = series::mul(f1, f0);
  series::PowerSeries rhs =
      series::div(series::derive(series::scale(series::mul(f0, f0), 0.5)), hp);
  double worst = 0;
  for (const cplx& z : samples)
    worst = std::max(worst,
                     std::abs(series::eval(lhs, z).value - series::eval(rhs, z).value));
  rep.pair_identity_residual = worst;
  return rep;
}

AsymptoticSet asym_compose(const AsymptoticSet& a_f, const CatalogFn& f,
                           const AsymptoticSet& a_g) {
  if (!a_f.complete || !a_g.complete)
    throw Error(Errc::IncompleteInput, "set algebra needs complete asymptotic sets");
  AsymptoticSet out;
  out.complete = true;
  out.provenance = catalog::Provenance::SetAlgebra;
  for (const cplx& v : a_f.values) catalog::insert_dedup(out.values, v);
  for (const cplx& v : a_g.values) catalog::insert_dedup(out.values, catalog::eval(f, v));
  return out;
}

AsymptoticSet asym_iterate(const CatalogFn& f, const AsymptoticSet& a_f, int n) {
  AsymptoticSet acc = a_f;
  for (int k = 0; k < n; ++k) acc = asym_compose(a_f, f, acc);
  return acc;
}

KoebeCheck comp_koebe(const CompCounts& counts, cplx z) {
  if (!(std::abs(z) < 1.0)) throw Error(Errc::SchemaError, "koebe check needs |z| < 1");
  int K = static_cast<int>(counts.f_k.size());
  if (K >= 1 && counts.f_k[0] != counts.comp_f)
    throw Error(Errc::SubadditivityViolation, "f_1 must equal comp(f)");
  for (int i = 1; i <= K; ++i)
    for (int j = 1; i + j <= K; ++j)
      if (counts.f_k[i + j - 1] > counts.f_k[i - 1] + counts.f_k[j - 1])
        throw Error(Errc::SubadditivityViolation, "counts violate subadditivity");

  cplx partial{};
  cplx zk{1.0, 0.0};
  for (int k = 1; k <= K; ++k) {
    zk *= z;
    partial += double(counts.f_k[k - 1]) * zk;
  }
  double x = std::abs(z);
  // sum_{k>K} k x^k in closed form
  double tail = double(counts.comp_f) * std::pow(x, K + 1) * ((K + 1) - K * x) /
                ((1 - x) * (1 - x));
  KoebeCheck out;
  out.lhs = std::abs(partial) + tail;
  out.bound = double(counts.comp_f) * x / ((1 - x) * (1 - x));
  out.ok = out.lhs <= out.bound * (1 + 1e-12) + 1e-12;
  return out;
}

GrowthCheck growth_clunie(const CatalogFn& f, const CatalogFn& g, double rho, double R) {
  if (!(rho > 0 && rho < 1)) throw Error(Errc::SchemaError, "rho must lie in (0,1)");
  if (!(R > 0)) throw Error(Errc::SchemaError, "R must be positive");
  if (std::abs(catalog::eval(g, cplx{})) > 1e-12)
    throw Error(Errc::GNotZeroAtOrigin, "inner factor must vanish at the origin");
  double c = (1 - rho * rho) / (4 * rho);
  CatalogFn comp{catalog::Chain{{f, g}}};
  GrowthCheck out;
  out.lhs = catalog::max_modulus(comp, R);
  double inner = catalog::max_modulus(g, rho * R);
  out.rhs = catalog::max_modulus(f, c * inner);
  out.ok = out.lhs >= out.rhs * (1 - 1e-6);
  return out;
}

RatioReport polya_ratio(const CatalogFn& f, const CatalogFn& g,
                        const std::vector<double>& r_grid) {
  RatioReport rep;
  CatalogFn comp{catalog::Chain{{f, g}}};
  for (double r : r_grid) {
    double mf = catalog::max_modulus(f, r);
    if (!(mf > 1.0)) throw Error(Errc::DegenerateModulus, "log M(r, f) must be positive");
    rep.ratios.push_back(std::log(catalog::max_modulus(comp, r)) / std::log(mf));
  }
  rep.strictly_increasing = true;
  for (std::size_t i = 0; i + 1 < rep.ratios.size(); ++i)
    if (rep.ratios[i + 1] <= rep.ratios[i]) rep.strictly_increasing = false;
  return rep;
}

}  // namespace holofact::lab
