#include "pds/numtheory.hpp"

#include <algorithm>
#include <numeric>

namespace pds {

i64 PrimePower::value() const
{
  i64 r = 1;
  for (int i = 0; i < e; ++i)
    r *= p;
  return r;
}

bool is_prime(i64 n)
{
  if (n < 2)
    return false;
  for (i64 d = 2; d * d <= n; ++d)
    if (n % d == 0)
      return false;
  return true;
}

std::vector<PrimePower> factorize(i64 n)
{
  if (n < 1)
    throw InputError("factorize: nonpositive argument " + std::to_string(n));
  std::vector<PrimePower> out;
  for (i64 d = 2; d * d <= n; ++d) {
    if (n % d)
      continue;
    int e = 0;
    while (n % d == 0) {
      n /= d;
      ++e;
    }
    out.push_back({d, e});
  }
  if (n > 1)
    out.push_back({n, 1});
  return out;
}

std::vector<i64> prime_divisors(i64 n)
{
  std::vector<i64> out;
  for (auto const &pp : factorize(n))
    out.push_back(pp.p);
  return out;
}

std::vector<i64> divisors(i64 n)
{
  std::vector<i64> out{1};
  for (auto const &pp : factorize(n)) {
    std::size_t cur = out.size();
    i64 pk = 1;
    for (int e = 1; e <= pp.e; ++e) {
      pk *= pp.p;
      for (std::size_t i = 0; i < cur; ++i)
        out.push_back(out[i] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

i64 isqrt(i64 n)
{
  if (n < 0)
    throw InputError("isqrt of negative value");
  i64 r = static_cast<i64>(__builtin_sqrtl(static_cast<long double>(n)));
  while (r * r > n)
    --r;
  while ((r + 1) * (r + 1) <= n)
    ++r;
  return r;
}

std::optional<i64> exact_sqrt(i64 n)
{
  if (n < 0)
    return std::nullopt;
  i64 r = isqrt(n);
  if (r * r != n)
    return std::nullopt;
  return r;
}

u64 powmod(u64 base, u64 exp, u64 m)
{
  unsigned __int128 result = 1 % m, b = base % m;
  while (exp) {
    if (exp & 1)
      result = result * b % m;
    b = b * b % m;
    exp >>= 1;
  }
  return static_cast<u64>(result);
}

i64 mod(i64 a, i64 m)
{
  i64 r = a % m;
  return r < 0 ? r + m : r;
}

i64 invmod(i64 a, i64 m)
{
  i64 g = m, x = 0, x1 = 1, a1 = mod(a, m);
  while (a1) {
    i64 q = g / a1;
    std::tie(g, a1) = std::make_pair(a1, g - q * a1);
    std::tie(x, x1) = std::make_pair(x1, x - q * x1);
  }
  if (g != 1)
    throw InputError("invmod: " + std::to_string(a) + " not invertible mod " + std::to_string(m));
  return mod(x, m);
}

i64 multiplicative_order(i64 a, i64 m)
{
  if (m == 1)
    return 1;
  if (std::gcd(mod(a, m), m) != 1)
    throw InputError("multiplicative_order: gcd(" + std::to_string(a) + ", " + std::to_string(m) + ") != 1");
  i64 x = mod(a, m), n = 1;
  while (x != 1) {
    x = static_cast<i64>(static_cast<unsigned __int128>(x) * mod(a, m) % m);
    ++n;
  }
  return n;
}

i64 primitive_root(i64 p)
{
  if (p == 2)
    return 1;
  auto qs = prime_divisors(p - 1);
  for (i64 g = 2; g < p; ++g) {
    bool ok = true;
    for (i64 q : qs)
      if (powmod(g, (p - 1) / q, p) == 1) {
        ok = false;
        break;
      }
    if (ok)
      return g;
  }
  throw InternalError("no primitive root mod " + std::to_string(p));
}

std::pair<i64, i64> crt(i64 r1, i64 m1, i64 r2, i64 m2)
{
  // x = r1 + m1 * t, t = (r2 - r1) / m1 mod m2
  i64 t = m2 == 1 ? 0 : mod(mod(r2 - r1, m2) * invmod(m1, m2), m2);
  i64 m = m1 * m2;
  return {mod(r1 + m1 * t, m), m};
}

i64 coprime_part(i64 n, i64 c)
{
  if (n == 0)
    return 0;
  n = n < 0 ? -n : n;
  for (;;) {
    i64 g = std::gcd(n, c);
    if (g == 1)
      return n;
    n /= g;
  }
}

int valuation(i64 n, i64 p)
{
  if (n == 0)
    return 0;
  int e = 0;
  while (n % p == 0) {
    n /= p;
    ++e;
  }
  return e;
}

} // namespace pds
