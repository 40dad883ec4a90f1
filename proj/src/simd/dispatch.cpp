#include <cstdlib>
#include <string>

#include "gla/simd.hpp"

namespace gla::simd {

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const Kernels& pick() {
  if (const char* env = std::getenv("GLA_SIMD")) {
    if (const Kernels* k = by_name(env)) return *k;
  }
  if (const Kernels* k = by_name("avx2")) return *k;
  if (const Kernels* k = by_name("neon")) return *k;
  return scalar_kernels();
}

}  // namespace

const Kernels* by_name(std::string_view name) {
  if (name == "scalar") return &scalar_kernels();
  if (name == "avx2") return cpu_has_avx2() ? avx2_kernels() : nullptr;
  if (name == "neon") return neon_kernels();
  return nullptr;
}

const Kernels& active() {
  static const Kernels& k = pick();
  return k;
}

}  // namespace gla::simd
