#include "holofact/power_series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "holofact/kernels.hpp"

namespace holofact::series {

namespace {

constexpr double kCenterTol = 1e-14;
constexpr double kComposeTol = 1e-12;
constexpr double kSkipFloor = 1e-300;

void require_same_center(const PowerSeries& a, const PowerSeries& b) {
  if (std::abs(a.center - b.center) > kCenterTol)
    throw Error(Errc::CenterMismatch, "operands expanded about different centers");
}

int min_order(const PowerSeries& a, const PowerSeries& b) {
  return std::min(a.order(), b.order());
}

}  // namespace

PowerSeries make(cplx center, std::vector<cplx> coeffs) {
  if (coeffs.empty()) coeffs.push_back(cplx{});
  PowerSeries s{center, std::move(coeffs)};
  return s;
}

bool all_finite(const PowerSeries& a) {
  for (const cplx& c : a.coeffs)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  return true;
}

PowerSeries add(const PowerSeries& a, const PowerSeries& b) {
  require_same_center(a, b);
  int n = min_order(a, b);
  PowerSeries r{a.center, std::vector<cplx>(n)};
  for (int i = 0; i < n; ++i) r.coeffs[i] = a.coeffs[i] + b.coeffs[i];
  return r;
}

PowerSeries sub(const PowerSeries& a, const PowerSeries& b) {
  require_same_center(a, b);
  int n = min_order(a, b);
  PowerSeries r{a.center, std::vector<cplx>(n)};
  for (int i = 0; i < n; ++i) r.coeffs[i] = a.coeffs[i] - b.coeffs[i];
  return r;
}

PowerSeries mul(const PowerSeries& a, const PowerSeries& b) {
  require_same_center(a, b);
  std::size_t n = static_cast<std::size_t>(min_order(a, b));
  PowerSeries r{a.center, std::vector<cplx>(n)};
  kernels::conv(a.coeffs.data(), a.coeffs.size(), b.coeffs.data(), b.coeffs.size(),
                r.coeffs.data(), n);
  return r;
}

PowerSeries scale(const PowerSeries& a, cplx s) {
  PowerSeries r = a;
  for (cplx& c : r.coeffs) c *= s;
  return r;
}

PowerSeries compose(const PowerSeries& outer, const PowerSeries& inner) {
  if (std::abs(inner.c0() - outer.center) > kComposeTol)
    throw Error(Errc::ConstantTermMismatch,
                "inner constant term does not match outer center");
  int n = min_order(outer, inner);
  // s = inner - outer.center, evaluated by Horner over series
  PowerSeries s = inner;
  s.coeffs.resize(n);
  s.coeffs[0] = inner.c0() - outer.center;
  PowerSeries acc{inner.center, std::vector<cplx>(n)};
  acc.coeffs[0] = outer.coeffs[n - 1];
  for (int k = n - 2; k >= 0; --k) {
    acc = mul(acc, s);
    acc.coeffs[0] += outer.coeffs[k];
  }
  return acc;
}

PowerSeries exp(const PowerSeries& a) {
  int n = a.order();
  PowerSeries r{a.center, std::vector<cplx>(n)};
  std::vector<cplx> da(n);  // da[k] = k * a[k]
  for (int k = 0; k < n; ++k) da[k] = double(k) * a.coeffs[k];
  r.coeffs[0] = std::exp(a.c0());
  for (int m = 1; m < n; ++m) {
    // m * e_m = sum_{k=1..m} k a_k e_{m-k}
    cplx s = kernels::conv_range(da.data(), r.coeffs.data(), m, 1, m);
    r.coeffs[m] = s / double(m);
  }
  return r;
}

PowerSeries log(const PowerSeries& a) {
  if (std::abs(a.c0()) == 0.0)
    throw Error(Errc::LogOfZeroConstantTerm, "series log needs nonzero constant term");
  int n = a.order();
  PowerSeries r{a.center, std::vector<cplx>(n)};
  std::vector<cplx> dl(n);  // dl[k] = k * l_k
  r.coeffs[0] = std::log(a.c0());
  dl[0] = cplx{};
  for (int m = 1; m < n; ++m) {
    // m a_m = sum_{k=1..m} k l_k a_{m-k}  =>  solve for l_m
    cplx s = kernels::conv_range(dl.data(), a.coeffs.data(), m, 1, m - 1);
    cplx lm = (double(m) * a.coeffs[m] - s) / (double(m) * a.c0());
    r.coeffs[m] = lm;
    dl[m] = double(m) * lm;
  }
  return r;
}

PowerSeries pow(const PowerSeries& a, cplx exponent) {
  return exp(scale(log(a), exponent));
}

PowerSeries reciprocal(const PowerSeries& a) {
  if (std::abs(a.c0()) == 0.0)
    throw Error(Errc::LogOfZeroConstantTerm, "reciprocal needs nonzero constant term");
  int n = a.order();
  PowerSeries r{a.center, std::vector<cplx>(n)};
  r.coeffs[0] = 1.0 / a.c0();
  for (int m = 1; m < n; ++m) {
    cplx s = kernels::conv_range(a.coeffs.data(), r.coeffs.data(), m, 1, m);
    r.coeffs[m] = -s / a.c0();
  }
  return r;
}

PowerSeries div(const PowerSeries& a, const PowerSeries& b) {
  require_same_center(a, b);
  int n = min_order(a, b);
  if (std::abs(b.c0()) == 0.0)
    throw Error(Errc::LogOfZeroConstantTerm, "series division by zero constant term");
  PowerSeries r{a.center, std::vector<cplx>(n)};
  for (int m = 0; m < n; ++m) {
    cplx s = kernels::conv_range(b.coeffs.data(), r.coeffs.data(), m, 1, m);
    r.coeffs[m] = (a.coeffs[m] - s) / b.c0();
  }
  return r;
}

PowerSeries derive(const PowerSeries& a) {
  int n = a.order();
  if (n == 1) return PowerSeries{a.center, {cplx{}}};
  PowerSeries r{a.center, std::vector<cplx>(n - 1)};
  for (int k = 1; k < n; ++k) r.coeffs[k - 1] = double(k) * a.coeffs[k];
  return r;
}

PowerSeries integrate(const PowerSeries& a, cplx c0) {
  int n = a.order();
  PowerSeries r{a.center, std::vector<cplx>(n + 1)};
  r.coeffs[0] = c0;
  for (int k = 0; k < n; ++k) r.coeffs[k + 1] = a.coeffs[k] / double(k + 1);
  return r;
}

EvalResult eval(const PowerSeries& a, cplx z) {
  cplx dz = z - a.center;
  int n = a.order();
  cplx value;
  kernels::horner_many(a.coeffs.data(), a.coeffs.size(), &dz, 1, &value);
  double adz = std::abs(dz);
  if (adz == 0.0) return {a.c0(), 0.0, true};

  double radius = std::numeric_limits<double>::infinity();
  if (n >= 16) {
    radius = radius_or_inf(radius_estimate(a));
  } else {
    // short series: crude ratio of the last two nonzero coefficients
    int hi = n - 1;
    while (hi > 0 && std::abs(a.coeffs[hi]) < kSkipFloor) --hi;
    int lo = hi - 1;
    while (lo > 0 && std::abs(a.coeffs[lo]) < kSkipFloor) --lo;
    if (hi > lo && std::abs(a.coeffs[hi]) > 0.0 && std::abs(a.coeffs[lo]) > 0.0)
      radius = std::pow(std::abs(a.coeffs[lo]) / std::abs(a.coeffs[hi]),
                        1.0 / double(hi - lo));
  }

  double last = std::abs(a.coeffs[n - 1]) * std::pow(adz, n - 1);
  bool inside = adz < radius;
  double err;
  if (!std::isfinite(radius)) {
    err = last;
  } else {
    double q = adz / radius;
    err = (q < 1.0) ? last * q / (1.0 - q) : std::numeric_limits<double>::infinity();
  }
  return {value, err, inside};
}

namespace {

struct LineFit {
  double slope = 0.0, intercept = 0.0, rms = 0.0;
  int count = 0;
  double mean_n = 0.0;
};

LineFit fit_line(const std::vector<std::pair<int, double>>& pts) {
  LineFit f;
  f.count = static_cast<int>(pts.size());
  if (f.count < 2) return f;
  double sx = 0, sy = 0;
  for (auto& p : pts) {
    sx += p.first;
    sy += p.second;
  }
  double mx = sx / f.count, my = sy / f.count;
  double sxx = 0, sxy = 0;
  for (auto& p : pts) {
    sxx += (p.first - mx) * (p.first - mx);
    sxy += (p.first - mx) * (p.second - my);
  }
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double se = 0;
  for (auto& p : pts) {
    double r = p.second - (f.intercept + f.slope * p.first);
    se += r * r;
  }
  f.rms = std::sqrt(se / f.count);
  f.mean_n = mx;
  return f;
}

RadiusEstimate ratio_fallback(const PowerSeries& a, int wlo, int whi, double residual) {
  // per-step ratios of the last 8 nonzero coefficients, lacunary-safe
  std::vector<int> idx;
  for (int n = a.order() - 1; n >= 0 && static_cast<int>(idx.size()) < 8; --n)
    if (std::abs(a.coeffs[n]) >= kSkipFloor) idx.push_back(n);
  RadiusEstimate r;
  r.method = RadiusMethod::Ratio;
  r.window_lo = wlo;
  r.window_hi = whi;
  r.fit_residual = residual;
  if (idx.size() < 2) {
    // nothing to measure; an (effectively) finite polynomial is entire
    r.unbounded = true;
    r.method = RadiusMethod::DeclaredEntire;
    r.value = std::numeric_limits<double>::infinity();
    return r;
  }
  double acc = 0;
  int cnt = 0;
  for (std::size_t i = 0; i + 1 < idx.size(); ++i) {
    int hi = idx[i], lo = idx[i + 1];
    double step = std::log(std::abs(a.coeffs[lo]) / std::abs(a.coeffs[hi])) / double(hi - lo);
    acc += step;
    ++cnt;
  }
  r.value = std::exp(acc / cnt);
  if (!(r.value > 0.0) || !std::isfinite(r.value)) {
    r.unbounded = true;
    r.method = RadiusMethod::DeclaredEntire;
    r.value = std::numeric_limits<double>::infinity();
  }
  return r;
}

}  // namespace

RadiusEstimate radius_estimate(const PowerSeries& a) {
  int n = a.order();
  if (n < 16) throw Error(Errc::InsufficientOrder, "radius fit needs order >= 16");
  int wlo = n / 2, whi = n;

  double scale = 0;
  for (const cplx& c : a.coeffs) scale = std::max(scale, std::abs(c));
  // an exactly (or numerically) terminating series is entire
  bool tail_zero = true;
  for (int k = 3 * n / 4; k < n; ++k)
    if (std::abs(a.coeffs[k]) > scale * 1e-250) tail_zero = false;
  if (tail_zero && scale > 0) {
    RadiusEstimate r;
    r.unbounded = true;
    r.method = RadiusMethod::DeclaredEntire;
    r.value = std::numeric_limits<double>::infinity();
    r.window_lo = wlo;
    r.window_hi = whi;
    return r;
  }

  std::vector<std::pair<int, double>> pts;
  for (int k = wlo; k < whi; ++k) {
    double m = std::abs(a.coeffs[k]);
    if (m >= kSkipFloor) pts.emplace_back(k, std::log(m));
  }
  int window = whi - wlo;
  bool too_sparse = static_cast<int>(pts.size()) * 2 < window;

  LineFit full = fit_line(pts);

  // Entire declaration: strongly negative slope together with downward
  // curvature across the two half-windows. Pure geometric decay has flat
  // curvature no matter how steep, so it never lands here.
  if (!too_sparse && full.count >= 8 && full.slope < -std::log(1e6) / window) {
    std::vector<std::pair<int, double>> first, second;
    int mid = (wlo + whi) / 2;
    for (auto& p : pts) (p.first < mid ? first : second).push_back(p);
    if (first.size() >= 3 && second.size() >= 3) {
      LineFit fa = fit_line(first), fb = fit_line(second);
      double need = 0.25 * std::log(fb.mean_n / fa.mean_n);
      if (fb.slope - fa.slope < -need) {
        RadiusEstimate r;
        r.unbounded = true;
        r.method = RadiusMethod::DeclaredEntire;
        r.value = std::numeric_limits<double>::infinity();
        r.window_lo = wlo;
        r.window_hi = whi;
        r.fit_residual = full.rms;
        return r;
      }
    }
  }

  if (too_sparse || full.count < 2 || full.rms > 0.5)
    return ratio_fallback(a, wlo, whi, full.rms);

  RadiusEstimate r;
  r.method = RadiusMethod::HadamardFit;
  r.value = std::exp(-full.slope);
  r.window_lo = wlo;
  r.window_hi = whi;
  r.fit_residual = full.rms;
  if (!(r.value > 0.0)) return ratio_fallback(a, wlo, whi, full.rms);
  if (!std::isfinite(r.value)) {
    r.unbounded = true;
    r.method = RadiusMethod::DeclaredEntire;
    r.value = std::numeric_limits<double>::infinity();
  }
  return r;
}

double radius_or_inf(const RadiusEstimate& r) {
  return r.unbounded ? std::numeric_limits<double>::infinity() : r.value;
}

}  // namespace holofact::series
