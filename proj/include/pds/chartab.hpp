#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pds/cyclotomic.hpp"
#include "pds/group.hpp"

namespace pds {

// Irreducible characters of a finite group, exact over Q(zeta_exponent).
// Row 0 is always the principal character.
struct CharacterTable
{
  GroupPtr group; // null in table-only mode
  ConjugacyData classes;
  std::vector<std::vector<Cyclotomic>> chars; // chars[i][j] = chi_i(h_j)
  std::vector<i64> degrees;
  std::vector<std::uint32_t> conjugate_char;
  std::vector<std::uint32_t> linear_indices;
  std::vector<u64> linear_orders; // parallel to linear_indices
  std::size_t principal_index = 0;
  // metadata of the modular computation (0 when not computed here)
  u64 prime = 0;
  u64 seed = 0;

  std::size_t size() const { return chars.size(); }
  std::size_t order() const { return classes.order; }
  bool is_linear(std::size_t i) const { return degrees[i] == 1; }
  // classes on which chi_i takes the value chi_i(1)
  std::vector<std::uint32_t> kernel_classes(std::size_t i) const;
};

// The |G/G'| degree-1 characters, built from the abelianization.
CharacterTable linear_characters(FiniteGroup const &g);

// Dixon-Schneider: class-multiplication coefficients, simultaneous
// diagonalization mod a prime l = 1 (mod exponent), exact lifting through power maps.
CharacterTable compute_table(GroupPtr const &g, u64 seed = 1);

// Fills degrees, conjugates, linear data and sorts rows canonically.
CharacterTable assemble_table(ConjugacyData classes, std::vector<std::vector<Cyclotomic>> rows,
                              GroupPtr group = nullptr);

// First violated invariant (orthogonality, inverse/conjugate consistency), if any.
std::optional<std::string> check_table(CharacterTable const &t);

void write_chartab(std::ostream &out, CharacterTable const &t);
CharacterTable read_chartab(std::istream &in);
CharacterTable ingest_chartab(std::string const &path);

// sum_chi coeffs[chi] * chi(h_j) for every class j
std::vector<Cyclotomic> class_function_from_char_values(CharacterTable const &t,
                                                        std::vector<Cyclotomic> const &coeffs);

// Multiplicative order of a root of unity; throws InputError if x is not one.
u64 root_of_unity_order(Cyclotomic const &x);

// Structure recoverable from the table alone.
struct TableStructure
{
  std::vector<char> derived_classes; // classes inside G'
  std::vector<char> central_classes;
  std::size_t linear_count = 0;
  std::size_t derived_order = 0;
};

TableStructure table_structure(CharacterTable const &t);

// Character values as dense integer vectors over the basis zeta_e^0..zeta_e^{e-1}
// of Z[zeta_e], e = exponent; coeff(i, j) has length e.
class IntCharMatrix
{
public:
  explicit IntCharMatrix(CharacterTable const &t);
  std::size_t conductor() const { return e_; }
  std::int32_t const *coeff(std::size_t chi, std::size_t cls) const
  {
    return data_.data() + (chi * r_ + cls) * e_;
  }
  // coefficients of conj(chi(h_j))
  std::int32_t const *coeff_conj(std::size_t chi, std::size_t cls) const
  {
    return conj_.data() + (chi * r_ + cls) * e_;
  }

private:
  std::size_t e_, r_;
  std::vector<std::int32_t> data_, conj_;
};

// Reduces a dense exponent-space vector of length e to canonical form.
Cyclotomic from_exponent_vector(std::vector<i64> const &v);

} // namespace pds
