#include "gla/hash.hpp"
#include "gla/simd.hpp"

namespace gla::simd {

namespace {

void max_plus_shift_scalar(double* dst, const double* src, std::size_t len, double add) {
  for (std::size_t i = 0; i < len; ++i) {
    const double v = src[i] + add;
    dst[i + 1] = v > dst[i + 1] ? v : dst[i + 1];
  }
}

void max_into_scalar(double* dst, const double* src, std::size_t len) {
  for (std::size_t i = 0; i < len; ++i) dst[i] = src[i] > dst[i] ? src[i] : dst[i];
}

void hash_uniform_batch_scalar(std::uint64_t seed, const std::uint64_t* keys, double* out, std::size_t n) {
  const std::uint64_t salt = seed_salt(seed);
  for (std::size_t i = 0; i < n; ++i) out[i] = to_unit(mix64(keys[i] ^ salt));
}

void threshold_mask_scalar(const double* scores, std::size_t n, double thr, std::uint8_t* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = scores[i] >= thr ? 1 : 0;
}

}  // namespace

const Kernels& scalar_kernels() {
  static const Kernels k{"scalar", max_plus_shift_scalar, max_into_scalar, hash_uniform_batch_scalar,
                         threshold_mask_scalar};
  return k;
}

}  // namespace gla::simd
