#include "pds/simd.hpp"

#if defined(__x86_64__) && defined(__AVX2__)
#include <immintrin.h>

namespace pds::simd {

namespace {

std::uint32_t dot_mod_avx2(std::uint32_t const *a, std::uint32_t const *b, std::size_t n, std::uint32_t p)
{
  std::uint64_t total = 0;
  std::size_t i = 0;
  while (i + 8 <= n) {
    __m256i acc_even = _mm256_setzero_si256();
    __m256i acc_odd = _mm256_setzero_si256();
    // 4096 rounds of products below 2^48 cannot overflow 64-bit lanes
    std::size_t stop = i + 8 * 4096 < n ? i + 8 * 4096 : n;
    for (; i + 8 <= stop; i += 8) {
      __m256i va = _mm256_loadu_si256(reinterpret_cast<__m256i const *>(a + i));
      __m256i vb = _mm256_loadu_si256(reinterpret_cast<__m256i const *>(b + i));
      acc_even = _mm256_add_epi64(acc_even, _mm256_mul_epu32(va, vb));
      acc_odd = _mm256_add_epi64(acc_odd, _mm256_mul_epu32(_mm256_srli_epi64(va, 32), _mm256_srli_epi64(vb, 32)));
    }
    alignas(32) std::uint64_t lanes[8];
    _mm256_store_si256(reinterpret_cast<__m256i *>(lanes), acc_even);
    _mm256_store_si256(reinterpret_cast<__m256i *>(lanes + 4), acc_odd);
    for (std::uint64_t l : lanes)
      total = (total + l % p) % p;
  }
  for (; i < n; ++i)
    total = (total + static_cast<std::uint64_t>(a[i]) * b[i] % p) % p;
  return static_cast<std::uint32_t>(total);
}

void axpy_mod_avx2(std::uint32_t *y, std::uint32_t const *x, std::size_t n, std::uint32_t c, std::uint32_t p)
{
  __m256d vc = _mm256_set1_pd(static_cast<double>(c));
  __m256d vp = _mm256_set1_pd(static_cast<double>(p));
  __m256d vinv = _mm256_set1_pd(1.0 / static_cast<double>(p));
  __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vx = _mm256_cvtepi32_pd(_mm_loadu_si128(reinterpret_cast<__m128i const *>(x + i)));
    __m256d vy = _mm256_cvtepi32_pd(_mm_loadu_si128(reinterpret_cast<__m128i const *>(y + i)));
    // exact: c*x < 2^48, sum < 2^49
    __m256d val = _mm256_add_pd(vy, _mm256_mul_pd(vc, vx));
    __m256d q = _mm256_floor_pd(_mm256_mul_pd(val, vinv));
    __m256d r = _mm256_sub_pd(val, _mm256_mul_pd(q, vp));
    r = _mm256_add_pd(r, _mm256_and_pd(_mm256_cmp_pd(r, zero, _CMP_LT_OQ), vp));
    r = _mm256_sub_pd(r, _mm256_and_pd(_mm256_cmp_pd(r, vp, _CMP_GE_OQ), vp));
    _mm_storeu_si128(reinterpret_cast<__m128i *>(y + i), _mm256_cvttpd_epi32(r));
  }
  for (; i < n; ++i)
    y[i] = static_cast<std::uint32_t>((y[i] + static_cast<std::uint64_t>(c) * x[i]) % p);
}

std::int64_t sq_error_avx2(std::int32_t const *a, std::int32_t const *b, std::size_t n)
{
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256i va = _mm256_loadu_si256(reinterpret_cast<__m256i const *>(a + i));
    __m256i vb = _mm256_loadu_si256(reinterpret_cast<__m256i const *>(b + i));
    __m256i d = _mm256_sub_epi32(va, vb);
    __m256i dodd = _mm256_srli_epi64(d, 32);
    acc = _mm256_add_epi64(acc, _mm256_mul_epi32(d, d));
    acc = _mm256_add_epi64(acc, _mm256_mul_epi32(dodd, dodd));
  }
  alignas(32) std::int64_t lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i *>(lanes), acc);
  std::int64_t total = lanes[0] + lanes[1] + lanes[2] + lanes[3];
  for (; i < n; ++i) {
    std::int64_t d = static_cast<std::int64_t>(a[i]) - b[i];
    total += d * d;
  }
  return total;
}

void axpy_i32_avx2(std::int32_t *y, std::int32_t const *x, std::size_t n, std::int32_t c)
{
  __m256i vc = _mm256_set1_epi32(c);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256i vx = _mm256_loadu_si256(reinterpret_cast<__m256i const *>(x + i));
    __m256i vy = _mm256_loadu_si256(reinterpret_cast<__m256i const *>(y + i));
    vy = _mm256_add_epi32(vy, _mm256_mullo_epi32(vx, vc));
    _mm256_storeu_si256(reinterpret_cast<__m256i *>(y + i), vy);
  }
  for (; i < n; ++i)
    y[i] = static_cast<std::int32_t>(static_cast<std::uint32_t>(y[i]) +
                                     static_cast<std::uint32_t>(c) * static_cast<std::uint32_t>(x[i]));
}

Kernels const avx2_set{"avx2", dot_mod_avx2, axpy_mod_avx2, sq_error_avx2, axpy_i32_avx2};

} // namespace

Kernels const *avx2_kernels()
{
  static bool const ok = __builtin_cpu_supports("avx2");
  return ok ? &avx2_set : nullptr;
}

} // namespace pds::simd

#else

namespace pds::simd {

Kernels const *avx2_kernels()
{
  return nullptr;
}

} // namespace pds::simd

#endif
