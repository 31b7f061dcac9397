#pragma once

#include <cstddef>
#include <cstdint>

// Data-parallel inner loops. Every kernel has a scalar reference version and
// an AVX2 version; the active set is chosen once at runtime from CPUID and can
// be pinned to the scalar set with PDS_SIMD=scalar.
namespace pds::simd {

// Moduli must satisfy p < 2^24 so that products fit the exact-double reduction.
constexpr std::uint32_t max_modulus = 1u << 24;

struct Kernels
{
  char const *name;
  // sum a_i b_i mod p, inputs already reduced
  std::uint32_t (*dot_mod)(std::uint32_t const *a, std::uint32_t const *b, std::size_t n, std::uint32_t p);
  // y_i = (y_i + c x_i) mod p
  void (*axpy_mod)(std::uint32_t *y, std::uint32_t const *x, std::size_t n, std::uint32_t c, std::uint32_t p);
  // sum (a_i - b_i)^2
  std::int64_t (*sq_error)(std::int32_t const *a, std::int32_t const *b, std::size_t n);
  // y_i += c x_i (wrapping is the caller's responsibility)
  void (*axpy_i32)(std::int32_t *y, std::int32_t const *x, std::size_t n, std::int32_t c);
};

Kernels const &scalar_kernels();
// nullptr when not built for x86-64 or the CPU lacks AVX2
Kernels const *avx2_kernels();
Kernels const &active();

inline std::uint32_t dot_mod(std::uint32_t const *a, std::uint32_t const *b, std::size_t n, std::uint32_t p)
{ return active().dot_mod(a, b, n, p); }

inline void axpy_mod(std::uint32_t *y, std::uint32_t const *x, std::size_t n, std::uint32_t c, std::uint32_t p)
{ active().axpy_mod(y, x, n, c, p); }

inline std::int64_t sq_error(std::int32_t const *a, std::int32_t const *b, std::size_t n)
{ return active().sq_error(a, b, n); }

inline void axpy_i32(std::int32_t *y, std::int32_t const *x, std::size_t n, std::int32_t c)
{ active().axpy_i32(y, x, n, c); }

} // namespace pds::simd
