#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pds/numtheory.hpp"

namespace pds {

struct SrgParams
{
  i64 v = 0, k = 0, lambda = 0, mu = 0;

  bool counting_ok() const;
  bool primitive() const;
  std::string to_string() const;
  bool operator==(SrgParams const &) const = default;
};

struct Eigendata
{
  i64 delta = 0;
  std::optional<i64> sqrt_delta;
  // sqrt_delta empty and parameters of shape (v,(v-1)/2,(v-5)/4,(v-1)/4)
  bool conference = false;
  // theta1 > theta2; meaningful only when sqrt_delta is set
  i64 theta1 = 0, theta2 = 0;
  i64 m1 = 0, m2 = 0;
  // empty when the parameters survive integrality
  std::optional<std::string> infeasible;
};

struct Factorization
{
  i64 mu1 = 0, mu2 = 0;
  i64 v1 = 0, v2 = 0;
  // largest divisors of v1, v2 coprime to sqrt_delta
  i64 pi_alpha = 1, pi_beta = 1;
  std::vector<i64> primes_alpha, primes_beta;
};

// Throws InputError unless the counting identity holds and 0 < mu < k.
Eigendata eigendata(SrgParams const &p);
SrgParams complement(SrgParams const &p);
// All mu = mu1*mu2 with mu1 | k-theta1, mu2 | k-theta2; requires integral sqrt_delta.
std::vector<Factorization> factorizations(SrgParams const &p);
// p divides exactly one of v1, v2
bool separates(Factorization const &f, i64 prime);

// Families: clapham, wilson(K), buratti5, fuji4, gq_even, hadamard_ds.
// Throws InputError naming the required congruence.
SrgParams family_params(std::string const &family, i64 arg);

struct BatchRow
{
  SrgParams p;
  int line = 0;
};

// One "v k lambda mu" per line; '#' starts a comment; trailing tokens ignored.
std::vector<BatchRow> read_param_batch(std::istream &in);
std::vector<BatchRow> read_param_batch_file(std::string const &path);

} // namespace pds
