#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "pds/numtheory.hpp"

namespace pds {

using Elem = std::uint32_t;

// Finite group stored as a dense multiplication table; element 0 is the identity.
class FiniteGroup
{
public:
  // Builds from a row-major v*v table. Validation (Latin square, identity,
  // associativity) is performed unless `trusted`.
  FiniteGroup(std::size_t order, std::vector<Elem> mult, std::string label,
              bool trusted = false, u64 seed = 1);

  std::size_t order() const { return n_; }
  Elem mul(Elem a, Elem b) const { return mult_[static_cast<std::size_t>(a) * n_ + b]; }
  Elem inv(Elem a) const { return inv_[a]; }
  unsigned elt_order(Elem a) const { return order_[a]; }
  std::string const &label() const { return label_; }
  std::vector<Elem> const &table() const { return mult_; }
  u64 exponent() const { return exponent_; }
  bool is_abelian() const;
  Elem pow(Elem a, u64 e) const;

private:
  std::size_t n_;
  std::vector<Elem> mult_;
  std::vector<Elem> inv_;
  std::vector<unsigned> order_;
  u64 exponent_ = 1;
  std::string label_;
};

using GroupPtr = std::shared_ptr<const FiniteGroup>;

// Throws InputError naming the first violation.
void validate_table(std::size_t n, std::vector<Elem> const &mult, u64 seed = 1);

FiniteGroup cyclic(std::size_t n);
// order 2n
FiniteGroup dihedral(std::size_t n);
// C_q x| C_m with the generator of C_m acting as x -> x^t; element x^a y^b has index a + q*b.
FiniteGroup metacyclic(std::size_t q, std::size_t m, i64 t);
// (Z/n)^d x| C_m, generator acting by the d*d matrix (row-major) over Z/n;
// element (w, b) has index sum_i w_i n^i + n^d * b.
FiniteGroup matrix_semidirect(std::size_t n, std::size_t d, std::size_t m,
                              std::vector<i64> const &matrix);
// index i_0 + |G_0| * (i_1 + |G_1| * (...))
FiniteGroup direct_product(std::vector<FiniteGroup> const &factors);

// Parses e.g. "metacyclic(19,3,7)", "direct_product(cyclic(3),dihedral(4))",
// "semidirect(4,2,3,0,3,1,3)".
FiniteGroup construct(std::string_view descriptor);

FiniteGroup read_group_table(std::istream &in, std::string label = "ingested");
FiniteGroup ingest_table(std::string const &path);
void write_group_table(std::ostream &out, FiniteGroup const &g);

struct ConjugacyData
{
  std::size_t order = 0;
  std::size_t num_classes = 0;
  u64 exponent = 1;
  std::vector<u64> sizes;
  std::vector<u64> centralizer_orders;
  std::vector<std::uint32_t> inverse_class;
  std::vector<unsigned> rep_orders;
  // group-backed fields; empty in table-only mode
  std::vector<std::uint32_t> class_of;
  std::vector<Elem> reps;
  std::vector<std::vector<Elem>> members;
  // power_class[j][s] = class of reps[j]^s for s < exponent
  std::vector<std::vector<std::uint32_t>> power_class;

  bool has_group() const { return !class_of.empty(); }
  bool is_real(std::size_t j) const { return inverse_class[j] == j; }
};

ConjugacyData conjugacy(FiniteGroup const &g);

struct NormalStructure
{
  std::vector<char> derived_members;
  std::vector<char> center_members;
  std::vector<std::size_t> derived_series_lengths;
  bool is_solvable = false;
  // G/G' = Z/d_0 x ... x Z/d_{s-1}, d_0 | d_1 | ...
  std::vector<u64> abelian_invariants;
  // projection[g * s + i] = coordinate i of the image of g
  std::vector<std::uint32_t> projection;

  std::size_t derived_order() const;
  std::size_t abelianization_order() const;
  std::vector<std::uint32_t> project(Elem g) const;
};

NormalStructure normal_structure(FiniteGroup const &g);

std::vector<Elem> subgroup_closure(FiniteGroup const &g, std::vector<Elem> const &gens);

struct Coset
{
  std::vector<Elem> members;
  // classes wholly contained in this coset
  std::vector<std::uint32_t> classes;
};

// N first; other cosets ordered by smallest member.
std::vector<Coset> coset_partition(FiniteGroup const &g, ConjugacyData const &cd,
                                   std::vector<char> const &mask);

} // namespace pds
