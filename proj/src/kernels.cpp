#include "holofact/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace holofact::kernels {

#ifdef HOLOFACT_HAVE_AVX2
const Ops* avx2_ops_impl();
#endif

bool avx2_compiled() {
#ifdef HOLOFACT_HAVE_AVX2
  return true;
#else
  return false;
#endif
}

bool avx2_supported() {
#if defined(HOLOFACT_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const Ops* avx2_ops() {
#ifdef HOLOFACT_HAVE_AVX2
  if (avx2_supported()) return avx2_ops_impl();
#endif
  return nullptr;
}

const Ops& active() {
  static const Ops* selected = [] {
    const char* env = std::getenv("HOLOFACT_SIMD");
    if (env && std::strcmp(env, "scalar") == 0) return &scalar_ops();
    if (env && std::strcmp(env, "avx2") == 0) {
      const Ops* v = avx2_ops();
      return v ? v : &scalar_ops();
    }
    const Ops* v = avx2_ops();
    return v ? v : &scalar_ops();
  }();
  return *selected;
}

}  // namespace holofact::kernels
