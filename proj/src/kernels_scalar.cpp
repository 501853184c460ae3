#include "holofact/kernels.hpp"

#include <algorithm>

namespace holofact::kernels {

namespace {

cplx dot_rev_scalar(const cplx* a, const cplx* b, std::size_t n) {
  cplx acc{};
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[n - 1 - i];
  return acc;
}

void conv_scalar(const cplx* a, std::size_t la, const cplx* b, std::size_t lb, cplx* out,
                 std::size_t n) {
  for (std::size_t m = 0; m < n; ++m) {
    std::size_t klo = (m + 1 > lb) ? m + 1 - lb : 0;
    std::size_t khi = std::min(m, la - 1);
    if (khi < klo) {
      out[m] = cplx{};
      continue;
    }
    out[m] = dot_rev_scalar(a + klo, b + (m - khi), khi - klo + 1);
  }
}

void horner_scalar(const cplx* c, std::size_t n, const cplx* u, std::size_t npts, cplx* out) {
  for (std::size_t j = 0; j < npts; ++j) {
    if (n == 0) {
      out[j] = cplx{};
      continue;
    }
    cplx acc = c[n - 1];
    for (std::size_t k = n - 1; k-- > 0;) acc = acc * u[j] + c[k];
    out[j] = acc;
  }
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops ops{dot_rev_scalar, conv_scalar, horner_scalar, "scalar"};
  return ops;
}

}  // namespace holofact::kernels
