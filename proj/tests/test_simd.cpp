#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <vector>

#include "pds/simd.hpp"

using namespace pds::simd;

TEST_CASE("AVX2 kernels agree with the scalar reference")
{
  Kernels const &ref = scalar_kernels();
  Kernels const *vec = avx2_kernels();
  if (!vec) {
    MESSAGE("AVX2 unavailable; only the scalar set is exercised");
    vec = &ref;
  }
  std::mt19937_64 rng(42);
  for (std::uint32_t p : {3u, 367u, 65537u, 16777213u}) {
    std::uniform_int_distribution<std::uint32_t> el(0, p - 1);
    for (std::size_t n : {0u, 1u, 7u, 8u, 9u, 31u, 64u, 1000u, 70001u}) {
      std::vector<std::uint32_t> a(n), b(n);
      for (auto &x : a)
        x = el(rng);
      for (auto &x : b)
        x = el(rng);
      CHECK(ref.dot_mod(a.data(), b.data(), n, p) == vec->dot_mod(a.data(), b.data(), n, p));
      std::uint32_t c = el(rng);
      auto y1 = b, y2 = b;
      ref.axpy_mod(y1.data(), a.data(), n, c, p);
      vec->axpy_mod(y2.data(), a.data(), n, c, p);
      CHECK(y1 == y2);
    }
  }
  std::uniform_int_distribution<std::int32_t> small(-40000, 40000);
  for (std::size_t n : {0u, 3u, 8u, 17u, 1023u}) {
    std::vector<std::int32_t> a(n), b(n);
    for (auto &x : a)
      x = small(rng);
    for (auto &x : b)
      x = small(rng);
    CHECK(ref.sq_error(a.data(), b.data(), n) == vec->sq_error(a.data(), b.data(), n));
    std::int32_t c = small(rng);
    auto y1 = b, y2 = b;
    ref.axpy_i32(y1.data(), a.data(), n, c);
    vec->axpy_i32(y2.data(), a.data(), n, c);
    CHECK(y1 == y2);
  }
}

TEST_CASE("dot_mod is exact against a 128-bit reference")
{
  std::mt19937_64 rng(1);
  std::uint32_t p = 16777213u;
  std::uniform_int_distribution<std::uint32_t> el(0, p - 1);
  std::vector<std::uint32_t> a(100003), b(100003);
  unsigned __int128 acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = el(rng);
    b[i] = el(rng);
    acc += static_cast<unsigned __int128>(a[i]) * b[i];
  }
  auto want = static_cast<std::uint32_t>(acc % p);
  CHECK(active().dot_mod(a.data(), b.data(), a.size(), p) == want);
  CHECK(scalar_kernels().dot_mod(a.data(), b.data(), a.size(), p) == want);
}
