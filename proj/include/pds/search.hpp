#pragma once

#include <atomic>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pds/cci.hpp"
#include "pds/group.hpp"
#include "pds/srg.hpp"

namespace pds {

struct PdsCandidate
{
  std::vector<Elem> members; // sorted, inverse-closed, identity excluded
  IntersectionVector profile;
};

struct SearchConfig
{
  u64 seed = 1;
  std::uint64_t max_restarts = 500;
  std::uint64_t max_steps = 20000; // per climb
  std::int64_t budget_ms = 60000;  // 0 = unlimited
  unsigned jobs = 1;
  std::uint64_t plateau = 50;
  // exact search: automorphism candidates tried before falling back to inner ones
  std::uint64_t automorphism_limit = 2000000;
  bool symmetry_breaking = true;
};

// Counts x y^-1 over ordered pairs of distinct members.
std::optional<SrgParams> verify_by_differences(FiniteGroup const &g, std::vector<Elem> const &members);
// Expands D * D in the group ring and matches k 1 + lambda D + mu (G - D - 1).
std::optional<SrgParams> verify_by_group_ring(FiniteGroup const &g, std::vector<Elem> const &members);
// Both routes; throws InputError for an identity-containing or non-inverse-closed set,
// InternalError if the routes disagree.
std::optional<SrgParams> verify_pds(FiniteGroup const &g, std::vector<Elem> const &members);

IntersectionVector class_profile(ConjugacyData const &cd, std::vector<Elem> const &members);
// G \ D \ {1}
std::vector<Elem> pds_complement(FiniteGroup const &g, std::vector<Elem> const &members);

// Inverse-closed pieces of D: {a, a^-1} or a single involution.
struct UnitGroup
{
  std::vector<std::uint32_t> classes; // a class and its inverse class
  std::vector<std::vector<Elem>> units;
  std::size_t quota = 0; // units to select
};

struct UnitLayout
{
  std::vector<UnitGroup> groups;
  std::vector<std::uint32_t> unit_of; // element -> flat unit index, UINT32_MAX for the identity
  std::vector<std::vector<Elem>> flat;
  std::vector<std::size_t> group_of_unit;
};

// Throws InputError when the vector cannot be realized by an identity-free inverse-closed k-set.
UnitLayout unit_layout(FiniteGroup const &g, ConjugacyData const &cd, SrgParams const &p,
                       IntersectionVector const &vec);

struct ClimbResult
{
  std::optional<PdsCandidate> found;
  std::uint64_t restarts = 0;
  std::uint64_t steps = 0;
  bool budget_exhausted = false;
};

// Tabu descent over swaps inside one unit group; restart after a plateau without a new best.
ClimbResult hill_climb(FiniteGroup const &g, ConjugacyData const &cd, SrgParams const &p,
                       IntersectionVector const &vec, SearchConfig const &cfg = {});

enum class ExactStatus
{
  exists,
  not_exists,
  budget_exhausted,
};

struct ExactOutcome
{
  ExactStatus status = ExactStatus::not_exists;
  std::optional<PdsCandidate> witness;
  std::uint64_t nodes = 0;
  std::size_t symmetries = 1;
};

// Complete backtracking over unit inclusion with difference-count pruning and
// lex-leader symmetry breaking under vector-preserving automorphisms.
ExactOutcome exact_search(FiniteGroup const &g, ConjugacyData const &cd, SrgParams const &p,
                          IntersectionVector const &vec, SearchConfig const &cfg = {});

// All automorphisms as element permutations, or nullopt when the image
// candidates for a minimal generating set exceed `limit`.
std::optional<std::vector<std::vector<Elem>>> automorphisms(FiniteGroup const &g, std::uint64_t limit);

struct MilpStats
{
  std::size_t unit_vars = 0;
  std::size_t product_vars = 0;
  std::size_t quota_rows = 0;
  std::size_t count_rows = 0;
  std::size_t link_rows = 0; // 3 per product variable
  std::size_t lines = 0;
};

// 0/1 feasibility model in LP file format.
MilpStats export_milp(std::ostream &out, FiniteGroup const &g, ConjugacyData const &cd,
                      SrgParams const &p, IntersectionVector const &vec);

struct PdsFile
{
  SrgParams params;
  std::vector<Elem> members;
};

void write_pds(std::ostream &out, SrgParams const &p, std::vector<Elem> const &members);
PdsFile read_pds(std::istream &in);

std::string to_string(ExactStatus s);

} // namespace pds
