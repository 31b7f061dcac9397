#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pds/group.hpp"
#include "pds/srg.hpp"

namespace pds {

// GF(p^d); element x encodes the polynomial sum c_i X^i with x = sum c_i p^i.
class Gf
{
public:
  Gf(i64 p, int d);

  i64 p() const { return p_; }
  int d() const { return d_; }
  i64 q() const { return q_; }
  std::uint32_t alpha() const { return alpha_; }
  // monic irreducible modulus, low degree first (empty for d = 1)
  std::vector<i64> const &modulus() const { return modulus_; }

  std::uint32_t add(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t neg(std::uint32_t a) const;
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const { return add(a, neg(b)); }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t inv(std::uint32_t a) const;
  // log_alpha, for a != 0
  i64 log(std::uint32_t a) const { return log_[a]; }
  std::uint32_t exp(i64 e) const { return exp_[static_cast<std::size_t>(mod(e, q_ - 1))]; }

private:
  i64 p_;
  int d_;
  i64 q_;
  std::vector<i64> modulus_;
  std::uint32_t alpha_ = 1;
  std::vector<std::uint32_t> exp_;
  std::vector<i64> log_;
};

// Throws InputError unless p is prime, d >= 1 and q is small enough for dense tables.
Gf gf_build(i64 p, int d);

// A k-block containing 0 and 1 whose k(k-1) ordered differences meet each coset
// of the index-k(k-1) subgroup <alpha^{k(k-1)}> exactly once. Throws InputError
// unless q = k(k-1) + 1 (mod 2k(k-1)).
std::optional<std::vector<std::uint32_t>> find_base_block(Gf const &f, int k);

// Per-coset hit counts of the ordered differences of B, binned by discrete log mod k(k-1).
std::vector<i64> difference_coset_counts(Gf const &f, std::vector<std::uint32_t> const &block);

// Base blocks h B for h in <alpha^{k(k-1)}>, all translates included.
std::vector<std::vector<std::uint32_t>> design_blocks(Gf const &f, std::vector<std::uint32_t> const &block);

// Every pair of points lies in exactly one block.
bool steiner_check(i64 points, std::vector<std::vector<std::uint32_t>> const &blocks);

// q = 20t + 1, e = v_2(t): (11 + 5 sqrt 5)/2 is not a 2^{e+1}-th power.
// The choice of square root does not matter: the two values multiply to -1,
// itself a 2^{e+1}-th power. Throws InputError off the congruence.
bool buratti_condition(Gf const &f);

// Block-intersection graph parameters by explicit counting; nullopt when the
// graph is not strongly regular.
std::optional<SrgParams> block_graph_params(std::vector<std::vector<std::uint32_t>> const &blocks);

struct DesignPds
{
  i64 q = 0;
  int k = 0;
  std::vector<std::uint32_t> block;
  std::string descriptor; // host group, parseable by construct()
  GroupPtr group;
  std::string family;
  SrgParams params;
  std::vector<Elem> members;
};

// Host C_q x| C_{(q-1)/(k(k-1))} acting by x -> h x + a; D = {g != 1 : |g(B) cap B| = 1}.
// Throws InputError when no block is found or the parameters are degenerate,
// InternalError if the action is not regular or verification disagrees.
DesignPds pds_from_design(Gf const &f, int k);

// "q k", the base block, the group descriptor, then the PDS file payload.
void write_design(std::ostream &out, DesignPds const &d);
DesignPds read_design(std::istream &in);

} // namespace pds
