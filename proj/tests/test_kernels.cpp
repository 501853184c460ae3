#include "holofact/kernels.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "util.hpp"

using namespace holofact;
using hftest::Rng;
using kernels::cplx;

namespace {

std::vector<cplx> random_vec(Rng& rng, std::size_t n, double scale = 1.0) {
  std::vector<cplx> v(n);
  for (auto& c : v) c = scale * cplx{rng.uniform(-1, 1), rng.uniform(-1, 1)};
  return v;
}

double vec_scale(const std::vector<cplx>& a) {
  double s = 0;
  for (auto& c : a) s = std::max(s, std::abs(c));
  return s;
}

}  // namespace

TEST_CASE("scalar dot_rev matches a hand sum") {
  std::vector<cplx> a{{1, 0}, {2, 0}, {3, 0}};
  std::vector<cplx> b{{0, 1}, {1, 0}, {2, -1}};
  // sum a[i] b[2-i] = 1*(2-i) + 2*1 + 3*(i)
  cplx want = cplx{1, 0} * cplx{2, -1} + cplx{2, 0} * cplx{1, 0} + cplx{3, 0} * cplx{0, 1};
  cplx got = kernels::scalar_ops().dot_rev(a.data(), b.data(), 3);
  CHECK(std::abs(got - want) < 1e-15);
}

TEST_CASE("scalar conv matches polynomial multiplication") {
  std::vector<cplx> a{{1, 0}, {1, 0}};   // 1 + z
  std::vector<cplx> b{{1, 0}, {-1, 0}};  // 1 - z
  std::vector<cplx> out(2);
  kernels::scalar_ops().conv(a.data(), 2, b.data(), 2, out.data(), 2);
  CHECK(std::abs(out[0] - cplx{1, 0}) < 1e-15);
  CHECK(std::abs(out[1]) < 1e-15);
}

TEST_CASE("simd variants agree with the scalar reference") {
  const kernels::Ops* simd = kernels::avx2_ops();
  if (!simd) {
    MESSAGE("avx2 unavailable on this host; dispatch falls back to scalar");
    CHECK(&kernels::active() == &kernels::scalar_ops());
    return;
  }
  Rng rng(0xC0FFEE);
  for (std::size_t n : {1u, 2u, 3u, 7u, 8u, 31u, 64u, 65u, 129u}) {
    auto a = random_vec(rng, n, 2.0);
    auto b = random_vec(rng, n, 2.0);

    cplx ds = kernels::scalar_ops().dot_rev(a.data(), b.data(), n);
    cplx dv = simd->dot_rev(a.data(), b.data(), n);
    CHECK(std::abs(ds - dv) <= 1e-13 * (1.0 + double(n)) * 4.0);

    std::size_t outn = n + 3;
    std::vector<cplx> os(outn), ov(outn);
    kernels::scalar_ops().conv(a.data(), n, b.data(), n, os.data(), outn);
    simd->conv(a.data(), n, b.data(), n, ov.data(), outn);
    for (std::size_t m = 0; m < outn; ++m)
      CHECK(std::abs(os[m] - ov[m]) <= 1e-13 * (1.0 + double(n)) * 4.0);

    auto c = random_vec(rng, n, 1.0);
    auto pts = random_vec(rng, 13, 0.9);
    std::vector<cplx> hs(pts.size()), hv(pts.size());
    kernels::scalar_ops().horner_many(c.data(), n, pts.data(), pts.size(), hs.data());
    simd->horner_many(c.data(), n, pts.data(), pts.size(), hv.data());
    double sc = vec_scale(hs) + 1.0;
    for (std::size_t j = 0; j < pts.size(); ++j)
      CHECK(std::abs(hs[j] - hv[j]) <= 1e-13 * sc);
  }
}

TEST_CASE("active dispatch returns a usable implementation") {
  const kernels::Ops& ops = kernels::active();
  std::vector<cplx> a{{2, 1}};
  std::vector<cplx> b{{3, -1}};
  cplx d = ops.dot_rev(a.data(), b.data(), 1);
  CHECK(std::abs(d - cplx{7, 1}) < 1e-15);
  if (kernels::avx2_supported()) CHECK(std::string(ops.name) == "avx2");
}
