#include "holofact/quadrature.hpp"

#include <cmath>

#include "holofact/errors.hpp"

namespace holofact::quad {

namespace {

// 15-point Kronrod extension of 7-point Gauss (QUADPACK values)
constexpr double kX[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
constexpr double kWK[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
constexpr double kWG[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Ctx {
  const std::function<cplx(cplx)>& f;
  cplx z0, dz;  // segment z0 + t*dz, t in [0,1]
  const Options& opt;
  std::size_t evals = 0;
  cplx total{};
  double err = 0;
};

// one GK15 pass over [a,b] in parameter space
void gk15(Ctx& c, double a, double b, cplx& k15, double& diff) {
  double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  cplx sk{}, sg{};
  for (int i = 0; i < 8; ++i) {
    cplx fv;
    if (i == 7) {
      fv = c.f(c.z0 + mid * c.dz);
      sk += kWK[7] * fv;
      sg += kWG[3] * fv;
      c.evals += 1;
    } else {
      cplx fp = c.f(c.z0 + (mid + half * kX[i]) * c.dz);
      cplx fm = c.f(c.z0 + (mid - half * kX[i]) * c.dz);
      sk += kWK[i] * (fp + fm);
      if (i % 2 == 1) sg += kWG[i / 2] * (fp + fm);
      c.evals += 2;
    }
  }
  k15 = sk * half;
  diff = std::abs((sk - sg) * half);
}

void adapt(Ctx& c, double a, double b, int depth) {
  cplx k15;
  double diff;
  gk15(c, a, b, k15, diff);
  double tol = c.opt.rel_tol * std::max(std::abs(k15), std::abs(c.total));
  if (diff <= std::max(tol, 1e-305) || depth >= c.opt.max_depth) {
    if (depth >= c.opt.max_depth && diff > std::max(tol, 1e-305) * 16)
      throw Error(Errc::QuadratureNonConvergence, "max refinement depth reached");
    c.total += k15;
    c.err += diff;
    return;
  }
  if (c.evals > c.opt.max_evals)
    throw Error(Errc::QuadratureNonConvergence, "evaluation budget exhausted");
  double mid = 0.5 * (a + b);
  adapt(c, a, mid, depth + 1);
  adapt(c, mid, b, depth + 1);
}

}  // namespace

Result segment(const std::function<cplx(cplx)>& f, cplx z0, cplx z1, const Options& opt) {
  cplx dz = z1 - z0;
  if (std::abs(dz) == 0.0) return {cplx{}, 0.0, 0};
  Ctx c{f, z0, dz, opt};
  adapt(c, 0.0, 1.0, 0);
  return {c.total * dz, c.err * std::abs(dz), c.evals};
}

}  // namespace holofact::quad
