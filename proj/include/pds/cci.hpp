#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pds/chartab.hpp"
#include "pds/sieves.hpp"
#include "pds/srg.hpp"

namespace pds {

enum class CciMode
{
  regular_pds,
  reversible_ds, // lambda = mu, identity may lie in D
};

struct ClassConstraint
{
  enum class Kind
  {
    fixed_set,
    residue,
  };
  Kind kind = Kind::residue;
  i64 size = 0;
  std::vector<i64> fixed; // fixed_set: sorted, inside [0, size]
  i64 residue = 0;
  i64 modulus = 1; // residue: 1 means unconstrained within [0, size]
  std::string source;

  // explicit allowed values in [0, size]
  std::vector<i64> values() const;
};

struct IntersectionConstraints
{
  SrgParams params;
  CciMode mode = CciMode::regular_pds;
  std::vector<ClassConstraint> classes;
  std::vector<std::uint32_t> inverse_class;
  // first class with an empty allowed set
  std::optional<std::size_t> empty_class;
  std::string note;

  bool infeasible() const { return empty_class.has_value(); }
};

using IntersectionVector = std::vector<i64>;

// Per-class constraints: identity pinned, value_phi on classes outside N,
// CRT residues over prime powers of sqrt(Delta) coprime to |C_G(h)| elsewhere.
IntersectionConstraints build_constraints(CharacterTable const &t, SrgParams const &p,
                                          CciMode mode = CciMode::regular_pds);

struct EnumerateOptions
{
  unsigned jobs = 1;
  // stop after this many vectors; 0 = unlimited
  std::uint64_t limit = 0;
  std::atomic<bool> const *cancel = nullptr;
};

// All vectors meeting the per-class sets, inverse pairing and sum k, in
// lexicographic order of the class sequence. Returns false if stopped early.
bool enumerate_vectors(IntersectionConstraints const &c,
                       std::function<void(IntersectionVector const &)> const &sink,
                       EnumerateOptions const &opt = {});

std::vector<IntersectionVector> enumerate_all(IntersectionConstraints const &c,
                                              EnumerateOptions const &opt = {});

// Character sums of a class-weight vector on the canonical basis.
class CharacterSums
{
public:
  explicit CharacterSums(CharacterTable const &t);
  // S_chi = sum_j d_j chi(h_j) as a rational integer, or nullopt
  std::vector<std::optional<i64>> sums(std::vector<i64> const &d) const;
  std::size_t conductor() const { return m_.conductor(); }

private:
  IntCharMatrix m_;
  std::size_t n_chars_, r_;
};

struct FilterReport
{
  std::vector<IntersectionVector> survivors;
  // rejection counts by first failing check
  std::map<std::string, std::uint64_t> rejected;
};

// Keeps d iff every S_chi is a rational integer with a_chi in [0, chi(1)],
// sum chi(1) a_chi = m1, nonprincipal linear values in {theta1, theta2},
// order2_check passes and the coset quotas of some theta_alpha branch hold.
FilterReport filter_vectors(CharacterTable const &t, SrgParams const &p,
                            std::vector<IntersectionVector> const &vectors,
                            CciMode mode = CciMode::regular_pds);

struct PhiAssignment
{
  std::vector<i64> a;  // per character, dim of the theta1 eigenspace
  std::vector<i64> s;  // chi(D) = a theta1 + (chi(1) - a) theta2
  IntersectionVector d; // induced |h^G cap D|
};

struct PhiEnumeration
{
  // 0: linear sign patterns, 1: after linear-determined classes,
  // 2: full product, 3: Phi(1) admissible, 4: central classes, 5: every class
  std::vector<std::uint64_t> stage_counts;
  std::vector<PhiAssignment> survivors;
  std::vector<std::size_t> linear_determined_classes;
  bool budget_exhausted = false;

  bool infeasible() const { return !budget_exhausted && survivors.empty(); }
};

struct PhiOptions
{
  // cap on Phi(1)-admissible assignments examined; 0 = unlimited
  std::uint64_t max_candidates = 0;
};

// Enumerates a_chi with a_conj(chi) = a_chi and prunes through Phi(h) = sum_chi chi(D) chi(h).
PhiEnumeration phi_enumeration(CharacterTable const &t, SrgParams const &p, CciMode mode,
                               PhiOptions const &opt = {});

// Header "class size rep_order centralizer" then one survivor per line.
void write_vectors(std::ostream &out, CharacterTable const &t,
                   std::vector<IntersectionVector> const &vs);

// Classes grouped by coset of N (H-character values); the identity's coset first.
std::vector<std::vector<std::uint32_t>> n_coset_classes(CharacterTable const &t,
                                                        LinearCharContext const &ctx);

} // namespace pds
