#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "pds/numtheory.hpp"

namespace pds {

// Exact element of Q(zeta_n), stored sparsely on a canonical basis:
// for every prime p^v || n an exponent e is kept only when the p-digit
// floor((e mod p^v) / p^(v-1)) differs from p - 1. Index 0 is always a basis
// element, so rationals live on it alone. The conductor is shrunk after every
// operation, which makes the textual form canonical.
class Cyclotomic
{
public:
  using Term = std::pair<std::uint32_t, mpq_class>;

  Cyclotomic() = default;
  Cyclotomic(long v) : Cyclotomic(mpq_class(v)) {}
  Cyclotomic(mpq_class const &r);

  // zeta_n^k
  static Cyclotomic root(u64 n, i64 k);
  // sum of c * zeta_n^e, any exponents
  static Cyclotomic from_terms(u64 n, std::vector<std::pair<i64, mpq_class>> const &terms);

  u64 conductor() const { return n_; }
  std::vector<Term> const &terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  // canonical coefficients after embedding into Q(zeta_m), n | m
  std::vector<Term> terms_in(u64 m) const;
  // dense integer coefficients in Q(zeta_m); absent if some coefficient is not an integer
  std::optional<std::vector<std::int64_t>> integer_coeffs(u64 m) const;

  Cyclotomic galois(i64 j) const;
  Cyclotomic conj() const { return galois(-1); }

  std::optional<mpq_class> as_rational() const;
  std::optional<mpz_class> as_integer() const;
  std::optional<i64> as_i64() const;

  std::string to_string() const;
  static Cyclotomic parse(std::string_view s);

  friend Cyclotomic operator+(Cyclotomic const &a, Cyclotomic const &b);
  friend Cyclotomic operator-(Cyclotomic const &a, Cyclotomic const &b);
  friend Cyclotomic operator*(Cyclotomic const &a, Cyclotomic const &b);
  Cyclotomic operator-() const;
  Cyclotomic &operator+=(Cyclotomic const &b) { return *this = *this + b; }
  Cyclotomic &operator*=(Cyclotomic const &b) { return *this = *this * b; }
  friend bool operator==(Cyclotomic const &a, Cyclotomic const &b);
  friend bool operator!=(Cyclotomic const &a, Cyclotomic const &b) { return !(a == b); }

private:
  u64 n_ = 1;
  std::vector<Term> terms_;

  static Cyclotomic reduced(u64 n, std::vector<std::pair<u64, mpq_class>> acc);
};

// Writes mpq as "p" or "p/q".
std::string rational_string(mpq_class const &q);

} // namespace pds
