#include "holofact/kernels.hpp"

#ifdef HOLOFACT_HAVE_AVX2

#include <immintrin.h>

#include <algorithm>

// AVX2 variants. A __m256d holds two interleaved complex doubles
// [re0, im0, re1, im1]; cmul below is the usual fmaddsub formulation:
//   re = ar*br - ai*bi,  im = ar*bi + ai*br.

namespace holofact::kernels {

namespace {

inline __m256d cmul(__m256d a, __m256d b) {
  __m256d ar = _mm256_movedup_pd(a);        // [ar, ar]
  __m256d ai = _mm256_permute_pd(a, 0xF);   // [ai, ai]
  __m256d bs = _mm256_permute_pd(b, 0x5);   // [bi, br]
  return _mm256_fmaddsub_pd(ar, b, _mm256_mul_pd(ai, bs));
}

inline cplx reduce2(__m256d v) {
  alignas(32) double t[4];
  _mm256_store_pd(t, v);
  return {t[0] + t[2], t[1] + t[3]};
}

cplx dot_rev_avx2(const cplx* a, const cplx* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d av = _mm256_loadu_pd(reinterpret_cast<const double*>(a + i));
    // pairs (b[n-1-i], b[n-2-i]) loaded forward then swapped to line up with a
    __m256d bv = _mm256_loadu_pd(reinterpret_cast<const double*>(b + (n - 2 - i)));
    bv = _mm256_permute2f128_pd(bv, bv, 0x01);
    acc = _mm256_add_pd(acc, cmul(av, bv));
  }
  cplx res = reduce2(acc);
  for (; i < n; ++i) res += a[i] * b[n - 1 - i];
  return res;
}

void conv_avx2(const cplx* a, std::size_t la, const cplx* b, std::size_t lb, cplx* out,
               std::size_t n) {
  for (std::size_t m = 0; m < n; ++m) {
    std::size_t klo = (m + 1 > lb) ? m + 1 - lb : 0;
    std::size_t khi = std::min(m, la - 1);
    out[m] = (khi < klo) ? cplx{} : dot_rev_avx2(a + klo, b + (m - khi), khi - klo + 1);
  }
}

void horner_avx2(const cplx* c, std::size_t n, const cplx* u, std::size_t npts, cplx* out) {
  std::size_t j = 0;
  if (n == 0) {
    for (; j < npts; ++j) out[j] = cplx{};
    return;
  }
  for (; j + 2 <= npts; j += 2) {
    __m256d uv = _mm256_loadu_pd(reinterpret_cast<const double*>(u + j));
    __m256d acc = _mm256_broadcast_pd(reinterpret_cast<const __m128d*>(c + (n - 1)));
    for (std::size_t k = n - 1; k-- > 0;) {
      __m256d ck = _mm256_broadcast_pd(reinterpret_cast<const __m128d*>(c + k));
      acc = _mm256_add_pd(cmul(acc, uv), ck);
    }
    _mm256_storeu_pd(reinterpret_cast<double*>(out + j), acc);
  }
  for (; j < npts; ++j) {
    cplx acc = c[n - 1];
    for (std::size_t k = n - 1; k-- > 0;) acc = acc * u[j] + c[k];
    out[j] = acc;
  }
}

}  // namespace

const Ops* avx2_ops_impl() {
  static const Ops ops{dot_rev_avx2, conv_avx2, horner_avx2, "avx2"};
  return &ops;
}

}  // namespace holofact::kernels

#endif  // HOLOFACT_HAVE_AVX2
