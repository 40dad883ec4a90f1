#pragma once

// Hot inner kernels with a scalar reference and vector variants picked at
// runtime. All variants produce bit-identical results.

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace gla::simd {

struct Kernels {
  const char* name;
  // dst[i + 1] = max(dst[i + 1], src[i] + add) for i in [0, len).
  void (*max_plus_shift)(double* dst, const double* src, std::size_t len, double add);
  // dst[i] = max(dst[i], src[i]).
  void (*max_into)(double* dst, const double* src, std::size_t len);
  // out[i] = to_unit(site_hash(seed, keys[i])).
  void (*hash_uniform_batch)(std::uint64_t seed, const std::uint64_t* keys, double* out, std::size_t n);
  // out[i] = scores[i] >= thr.
  void (*threshold_mask)(const double* scores, std::size_t n, double thr, std::uint8_t* out);
};

const Kernels& scalar_kernels();
// Null when the variant was not compiled in.
const Kernels* avx2_kernels();
const Kernels* neon_kernels();

// Best variant supported by the running CPU. GLA_SIMD=scalar forces the
// reference path.
const Kernels& active();

// Looks a variant up by name ("scalar", "avx2", "neon"); null when absent or
// unsupported on this CPU.
const Kernels* by_name(std::string_view name);

}  // namespace gla::simd
