// NEON variants for aarch64 builds.
#include "gla/simd.hpp"

#if defined(__aarch64__) && defined(__ARM_NEON)
#include <arm_neon.h>

namespace gla::simd {

namespace {

inline std::uint64_t mix(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

void max_plus_shift_neon(double* dst, const double* src, std::size_t len, double add) {
  const float64x2_t a = vdupq_n_f64(add);
  std::size_t i = 0;
  for (; i + 2 <= len; i += 2) {
    const float64x2_t v = vaddq_f64(vld1q_f64(src + i), a);
    const float64x2_t d = vld1q_f64(dst + i + 1);
    // Select v where v > d, matching the scalar comparison exactly.
    vst1q_f64(dst + i + 1, vbslq_f64(vcgtq_f64(v, d), v, d));
  }
  for (; i < len; ++i) {
    const double v = src[i] + add;
    dst[i + 1] = v > dst[i + 1] ? v : dst[i + 1];
  }
}

void max_into_neon(double* dst, const double* src, std::size_t len) {
  std::size_t i = 0;
  for (; i + 2 <= len; i += 2) {
    const float64x2_t s = vld1q_f64(src + i);
    const float64x2_t d = vld1q_f64(dst + i);
    vst1q_f64(dst + i, vbslq_f64(vcgtq_f64(s, d), s, d));
  }
  for (; i < len; ++i) dst[i] = src[i] > dst[i] ? src[i] : dst[i];
}

// No 64-bit vector multiply on NEON; the hash stays scalar, the unit
// conversion is vectorised.
void hash_uniform_batch_neon(std::uint64_t seed, const std::uint64_t* keys, double* out, std::size_t n) {
  const std::uint64_t salt = mix(seed + 0x9e3779b97f4a7c15ULL);
  const uint64x2_t exponent = vdupq_n_u64(0x3FF0000000000000ULL);
  const float64x2_t one = vdupq_n_f64(1.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const std::uint64_t h[2] = {mix(keys[i] ^ salt), mix(keys[i + 1] ^ salt)};
    const uint64x2_t bits = vorrq_u64(vshrq_n_u64(vld1q_u64(h), 12), exponent);
    vst1q_f64(out + i, vsubq_f64(vreinterpretq_f64_u64(bits), one));
  }
  for (; i < n; ++i) {
    const std::uint64_t b = (mix(keys[i] ^ salt) >> 12) | 0x3FF0000000000000ULL;
    double v;
    __builtin_memcpy(&v, &b, sizeof v);
    out[i] = v - 1.0;
  }
}

void threshold_mask_neon(const double* scores, std::size_t n, double thr, std::uint8_t* out) {
  const float64x2_t t = vdupq_n_f64(thr);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const uint64x2_t m = vcgeq_f64(vld1q_f64(scores + i), t);
    out[i] = vgetq_lane_u64(m, 0) ? 1 : 0;
    out[i + 1] = vgetq_lane_u64(m, 1) ? 1 : 0;
  }
  for (; i < n; ++i) out[i] = scores[i] >= thr ? 1 : 0;
}

}  // namespace

const Kernels* neon_kernels() {
  static const Kernels k{"neon", max_plus_shift_neon, max_into_neon, hash_uniform_batch_neon,
                         threshold_mask_neon};
  return &k;
}

}  // namespace gla::simd

#else

namespace gla::simd {
const Kernels* neon_kernels() { return nullptr; }
}  // namespace gla::simd

#endif
