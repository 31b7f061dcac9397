#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pds {

// Malformed user input (files, descriptors, arguments).
class InputError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// A self-check failed; never returned silently.
class InternalError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

using i64 = std::int64_t;
using u64 = std::uint64_t;

struct PrimePower
{
  i64 p;
  int e;
  i64 value() const;
};

bool is_prime(i64 n);
std::vector<PrimePower> factorize(i64 n);
std::vector<i64> prime_divisors(i64 n);
std::vector<i64> divisors(i64 n);

// floor(sqrt(n)) for n >= 0
i64 isqrt(i64 n);
std::optional<i64> exact_sqrt(i64 n);

u64 powmod(u64 base, u64 exp, u64 mod);
// inverse of a modulo m; requires gcd(a, m) = 1
i64 invmod(i64 a, i64 m);
i64 mod(i64 a, i64 m);
// least n >= 1 with a^n = 1 (mod m); requires gcd(a, m) = 1
i64 multiplicative_order(i64 a, i64 m);
i64 primitive_root(i64 p);

// x = r1 (mod m1), x = r2 (mod m2), coprime moduli; returns (r, m1*m2)
std::pair<i64, i64> crt(i64 r1, i64 m1, i64 r2, i64 m2);

// largest divisor of n coprime to c
i64 coprime_part(i64 n, i64 c);
int valuation(i64 n, i64 p);

} // namespace pds
