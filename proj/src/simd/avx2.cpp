// Built with -mavx2 (no FMA contraction) so results match the scalar path.
#include "gla/hash.hpp"
#include "gla/simd.hpp"

#if defined(__x86_64__) && defined(__AVX2__)
#include <immintrin.h>

namespace gla::simd {

namespace {

// Low 64 bits of a * b per lane.
inline __m256i mul64(__m256i a, __m256i b) {
  const __m256i lo = _mm256_mul_epu32(a, b);
  const __m256i a_hi = _mm256_srli_epi64(a, 32);
  const __m256i b_hi = _mm256_srli_epi64(b, 32);
  const __m256i cross = _mm256_add_epi64(_mm256_mul_epu32(a_hi, b), _mm256_mul_epu32(a, b_hi));
  return _mm256_add_epi64(lo, _mm256_slli_epi64(cross, 32));
}

inline __m256i mix64x4(__m256i z) {
  const __m256i c1 = _mm256_set1_epi64x(static_cast<long long>(0xbf58476d1ce4e5b9ULL));
  const __m256i c2 = _mm256_set1_epi64x(static_cast<long long>(0x94d049bb133111ebULL));
  z = _mm256_xor_si256(z, _mm256_srli_epi64(z, 30));
  z = mul64(z, c1);
  z = _mm256_xor_si256(z, _mm256_srli_epi64(z, 27));
  z = mul64(z, c2);
  return _mm256_xor_si256(z, _mm256_srli_epi64(z, 31));
}

void max_plus_shift_avx2(double* dst, const double* src, std::size_t len, double add) {
  const __m256d a = _mm256_set1_pd(add);
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    const __m256d v = _mm256_add_pd(_mm256_loadu_pd(src + i), a);
    const __m256d d = _mm256_loadu_pd(dst + i + 1);
    _mm256_storeu_pd(dst + i + 1, _mm256_max_pd(v, d));
  }
  for (; i < len; ++i) {
    const double v = src[i] + add;
    dst[i + 1] = v > dst[i + 1] ? v : dst[i + 1];
  }
}

void max_into_avx2(double* dst, const double* src, std::size_t len) {
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4)
    _mm256_storeu_pd(dst + i, _mm256_max_pd(_mm256_loadu_pd(src + i), _mm256_loadu_pd(dst + i)));
  for (; i < len; ++i) dst[i] = src[i] > dst[i] ? src[i] : dst[i];
}

void hash_uniform_batch_avx2(std::uint64_t seed, const std::uint64_t* keys, double* out, std::size_t n) {
  const std::uint64_t salt = seed_salt(seed);
  const __m256i s = _mm256_set1_epi64x(static_cast<long long>(salt));
  const __m256i exponent = _mm256_set1_epi64x(0x3FF0000000000000LL);
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256i k = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(keys + i));
    const __m256i h = mix64x4(_mm256_xor_si256(k, s));
    const __m256i bits = _mm256_or_si256(_mm256_srli_epi64(h, 12), exponent);
    _mm256_storeu_pd(out + i, _mm256_sub_pd(_mm256_castsi256_pd(bits), one));
  }
  for (; i < n; ++i) out[i] = to_unit(mix64(keys[i] ^ salt));
}

void threshold_mask_avx2(const double* scores, std::size_t n, double thr, std::uint8_t* out) {
  const __m256d t = _mm256_set1_pd(thr);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const int m = _mm256_movemask_pd(_mm256_cmp_pd(_mm256_loadu_pd(scores + i), t, _CMP_GE_OQ));
    out[i] = m & 1;
    out[i + 1] = (m >> 1) & 1;
    out[i + 2] = (m >> 2) & 1;
    out[i + 3] = (m >> 3) & 1;
  }
  for (; i < n; ++i) out[i] = scores[i] >= thr ? 1 : 0;
}

}  // namespace

const Kernels* avx2_kernels() {
  static const Kernels k{"avx2", max_plus_shift_avx2, max_into_avx2, hash_uniform_batch_avx2,
                         threshold_mask_avx2};
  return &k;
}

}  // namespace gla::simd

#else

namespace gla::simd {
const Kernels* avx2_kernels() { return nullptr; }
}  // namespace gla::simd

#endif
