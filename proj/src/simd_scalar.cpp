#include "pds/simd.hpp"

#include <cstdlib>
#include <cstring>

namespace pds::simd {

namespace {

std::uint32_t dot_mod_scalar(std::uint32_t const *a, std::uint32_t const *b, std::size_t n, std::uint32_t p)
{
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += static_cast<std::uint64_t>(a[i]) * b[i];
    if ((i & 0x3fff) == 0x3fff)
      acc %= p;
  }
  return static_cast<std::uint32_t>(acc % p);
}

void axpy_mod_scalar(std::uint32_t *y, std::uint32_t const *x, std::size_t n, std::uint32_t c, std::uint32_t p)
{
  for (std::size_t i = 0; i < n; ++i)
    y[i] = static_cast<std::uint32_t>((y[i] + static_cast<std::uint64_t>(c) * x[i]) % p);
}

std::int64_t sq_error_scalar(std::int32_t const *a, std::int32_t const *b, std::size_t n)
{
  std::int64_t acc = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::int64_t d = static_cast<std::int64_t>(a[i]) - b[i];
    acc += d * d;
  }
  return acc;
}

void axpy_i32_scalar(std::int32_t *y, std::int32_t const *x, std::size_t n, std::int32_t c)
{
  for (std::size_t i = 0; i < n; ++i)
    y[i] = static_cast<std::int32_t>(static_cast<std::uint32_t>(y[i]) +
                                     static_cast<std::uint32_t>(c) * static_cast<std::uint32_t>(x[i]));
}

Kernels const scalar_set{"scalar", dot_mod_scalar, axpy_mod_scalar, sq_error_scalar, axpy_i32_scalar};

} // namespace

Kernels const &scalar_kernels()
{
  return scalar_set;
}

Kernels const &active()
{
  static Kernels const *chosen = [] {
    char const *force = std::getenv("PDS_SIMD");
    if (force && std::strcmp(force, "scalar") == 0)
      return &scalar_set;
    Kernels const *v = avx2_kernels();
    return v ? v : &scalar_set;
  }();
  return *chosen;
}

} // namespace pds::simd
