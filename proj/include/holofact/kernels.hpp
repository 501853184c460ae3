#pragma once

#include <complex>
#include <cstddef>

// Inner-loop kernels for truncated complex series arithmetic. Every kernel has
// a scalar reference implementation and, on x86-64, an AVX2 variant selected at
// runtime. The two are equivalence-tested against each other; summation order
// differs, so agreement is to rounding, not bit-exact.

namespace holofact::kernels {

using cplx = std::complex<double>;

// sum_{i=0}^{n-1} a[i] * b[n-1-i]  (one coefficient of a Cauchy product)
using DotRevFn = cplx (*)(const cplx* a, const cplx* b, std::size_t n);

// out[m] = sum_k a[k] * b[m-k] for m = 0..n-1, truncated product
using ConvFn = void (*)(const cplx* a, std::size_t la, const cplx* b, std::size_t lb,
                        cplx* out, std::size_t n);

// out[j] = sum_{k<n} c[k] * u[j]^k, Horner per point
using HornerFn = void (*)(const cplx* c, std::size_t n, const cplx* u, std::size_t npts,
                          cplx* out);

struct Ops {
  DotRevFn dot_rev;
  ConvFn conv;
  HornerFn horner_many;
  const char* name;
};

const Ops& scalar_ops();
bool avx2_compiled();
bool avx2_supported();
const Ops* avx2_ops();  // nullptr when not compiled in or not supported

// Runtime-selected implementation. HOLOFACT_SIMD=scalar|avx2|auto overrides;
// unknown or unavailable requests fall back to scalar.
const Ops& active();

inline cplx dot_rev(const cplx* a, const cplx* b, std::size_t n) {
  return active().dot_rev(a, b, n);
}
inline void conv(const cplx* a, std::size_t la, const cplx* b, std::size_t lb, cplx* out,
                 std::size_t n) {
  active().conv(a, la, b, lb, out, n);
}
inline void horner_many(const cplx* c, std::size_t n, const cplx* u, std::size_t npts,
                        cplx* out) {
  active().horner_many(c, n, u, npts, out);
}

// sum_{k=klo}^{khi} a[k] * b[m-k]; empty range yields 0
inline cplx conv_range(const cplx* a, const cplx* b, std::size_t m, std::size_t klo,
                       std::size_t khi) {
  if (khi < klo) return {};
  return dot_rev(a + klo, b + (m - khi), khi - klo + 1);
}

}  // namespace holofact::kernels
