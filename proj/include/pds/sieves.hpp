#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "pds/chartab.hpp"
#include "pds/srg.hpp"

namespace pds {

enum class Status
{
  unresolved,
  infeasible,
};

struct SieveVerdict
{
  Status status = Status::unresolved;
  std::string rule;
  std::string summary;
  // Replayable record; infeasible witnesses carry everything replay_witness needs.
  nlohmann::json witness = nlohmann::json::object();
};

// all_divide: every listed prime divides |L|. some_divides: at least one does.
enum class PrimeMode
{
  all_divide,
  some_divides,
};

// Primes p | v that divide |G/G'| for every solvable group of order v:
// no other prime q | v divides (p-1)(p^2-1)...(p^e-1), p^e || v.
std::vector<i64> forced_linear_primes(i64 v);

// Restriction on primes dividing |L| and coprime to sqrt(Delta).
// normalizer_orders maps p to |N_G(P)| for a Sylow p-subgroup P when a group is known.
SieveVerdict mod_restriction(SrgParams const &p, std::vector<i64> const &linear_order_primes,
                             bool solvable, PrimeMode mode,
                             std::map<i64, i64> const &normalizer_orders = {});

// gcd(theta1, theta2) | k for a regular PDS.
SieveVerdict gcd_rule(SrgParams const &p);

// (|N cap D|, coset quota) for a nonprincipal linear character of prime order q with xi(D) = theta.
std::optional<std::pair<i64, i64>> kernel_coset_check(i64 q, i64 theta, SrgParams const &p);

// Batch-mode verdict for a parameter row: integrality, gcd rule, then
// mod_restriction on the parameters and on the complement. Odd v only for the
// linear-character rules; forced primes switch on all_divide when they cover v.
// per_prime_forcing also applies all_divide to the forced primes alone.
SieveVerdict param_sieve(SrgParams const &p, bool per_prime_forcing = false);

struct LinearCharContext
{
  std::vector<std::size_t> H; // character indices, principal included
  std::vector<char> in_N;     // per class
  i64 h_order = 1;
  i64 n_order = 0;
  // surviving candidates for the common nonprincipal value xi(D), xi in H
  std::vector<i64> theta_alpha;
};

// H = all linear characters of order coprime to sqrt(Delta).
LinearCharContext linear_context(CharacterTable const &t, SrgParams const &p);

struct ValuePhi
{
  bool applicable = false;
  // allowed[j][b]: value forced on class j when xi(D) = theta_b (b = 0: theta1, 1: theta2);
  // empty when class j lies in N or the value is not an integer in [0, size]
  std::vector<std::array<std::optional<i64>, 2>> allowed;
  std::vector<char> outside_N;
};

ValuePhi value_phi_constraints(CharacterTable const &t, SrgParams const &p);

struct CosetQuota
{
  i64 theta_alpha = 0;
  i64 n_quota = 0;
  i64 coset_quota = 0;
};

// Surviving theta_alpha branches with their quotas; empty means infeasible.
std::vector<CosetQuota> coset_intersections(LinearCharContext const &ctx, SrgParams const &p);

struct ModResidue
{
  i64 residue = 0;
  i64 modulus = 1; // 1: vacuous
};

// |h^G cap D| mod M from Phi(h) = k - theta2 (or k + theta2(|G|-1) at the identity)
// over the prime powers of sqrt(Delta) coprime to |C_G(h)|.
ModResidue modular_phi(i64 centralizer, bool identity, i64 group_order, SrgParams const &p);

// sum of floor(size/q)*q below k => infeasible
SieveVerdict class_size_bound(std::vector<i64> const &class_sizes, i64 q, i64 k);

// First class violating D = D^(-1): odd value on a real non-involution class,
// or unequal values on an inverse pair.
std::optional<std::size_t> order2_check(ConjugacyData const &cd, std::vector<i64> const &d);

// Table-aware verdict: value_phi, coset quotas and modular residues combined per class,
// with order2 on forced values and mod_restriction on the primes of |L|.
SieveVerdict group_sieve(CharacterTable const &t, SrgParams const &p, bool solvable,
                         std::map<i64, i64> const &normalizer_orders = {});

// |N_G(P)| for a Sylow p-subgroup P, keyed by p.
std::map<i64, i64> sylow_normalizer_orders(FiniteGroup const &g);

// Re-derives the contradiction recorded in an infeasible witness.
bool replay_witness(nlohmann::json const &w);

std::string to_string(Status s);

} // namespace pds
