#pragma once

#include <complex>
#include <cstdint>
#include <vector>

// deterministic helpers shared by the test binaries

namespace hftest {

using cplx = std::complex<double>;

// splitmix64: identical stream on every platform
struct Rng {
  std::uint64_t state;
  explicit Rng(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform() { return double(next() >> 11) * 0x1.0p-53; }  // [0,1)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  cplx unit_disk() {
    for (;;) {
      cplx z{uniform(-1, 1), uniform(-1, 1)};
      if (std::abs(z) <= 1.0) return z;
    }
  }
};

inline double halton(int i, int base) {
  double f = 1.0, r = 0.0;
  for (int n = i + 1; n > 0; n /= base) {
    f /= base;
    r += f * (n % base);
  }
  return r;
}

// deterministic low-discrepancy points in the disk |z| <= radius
inline std::vector<cplx> halton_disk(int count, double radius) {
  std::vector<cplx> pts;
  pts.reserve(count);
  for (int i = 0; i < count; ++i) {
    double rho = radius * std::sqrt(halton(i, 2));
    double theta = 2 * 3.14159265358979323846 * halton(i, 3);
    pts.push_back(std::polar(rho, theta));
  }
  return pts;
}

}  // namespace hftest
