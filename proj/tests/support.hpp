#pragma once

#include <algorithm>
#include <memory>
#include <set>
#include <vector>

#include "pds/group.hpp"
#include "pds/srg.hpp"

namespace pds::testing {

inline GroupPtr share(FiniteGroup g)
{
  return std::make_shared<FiniteGroup const>(std::move(g));
}

// Plain difference counts, independent of the library's verifiers.
inline bool is_regular_pds(FiniteGroup const &g, std::vector<Elem> const &d, SrgParams const &p)
{
  std::vector<char> in(g.order(), 0);
  for (Elem x : d)
    in[x] = 1;
  std::vector<i64> c(g.order(), 0);
  for (Elem a : d)
    for (Elem b : d)
      if (a != b)
        ++c[g.mul(a, g.inv(b))];
  for (Elem x = 1; x < g.order(); ++x)
    if (c[x] != (in[x] ? p.lambda : p.mu))
      return false;
  return true;
}

// Every identity-free inverse-closed k-subset that is a (v,k,lambda,mu)-PDS,
// by plain enumeration with a partial-count cutoff.
inline std::vector<std::vector<Elem>> brute_force_pds(FiniteGroup const &g, SrgParams const &p)
{
  std::vector<std::vector<Elem>> units;
  std::vector<char> seen(g.order(), 0);
  for (Elem x = 1; x < g.order(); ++x) {
    if (seen[x])
      continue;
    seen[x] = seen[g.inv(x)] = 1;
    units.push_back(x == g.inv(x) ? std::vector<Elem>{x} : std::vector<Elem>{x, g.inv(x)});
  }
  i64 cap = std::max(p.lambda, p.mu);
  std::vector<std::vector<Elem>> out;
  std::vector<Elem> cur;
  std::vector<i64> c(g.order(), 0);
  auto rec = [&](auto &&self, std::size_t i) -> void {
    if (static_cast<i64>(cur.size()) == p.k) {
      if (is_regular_pds(g, cur, p)) {
        auto s = cur;
        std::sort(s.begin(), s.end());
        out.push_back(std::move(s));
      }
      return;
    }
    if (i == units.size())
      return;
    auto const &u = units[i];
    if (static_cast<i64>(cur.size() + u.size()) <= p.k) {
      bool ok = true;
      std::vector<Elem> bumped;
      for (Elem a : u) {
        for (Elem b : cur) {
          for (Elem x : {g.mul(a, g.inv(b)), g.mul(b, g.inv(a))}) {
            bumped.push_back(x);
            ok = ++c[x] <= cap && ok;
          }
        }
        cur.push_back(a);
      }
      if (ok)
        self(self, i + 1);
      for (Elem x : bumped)
        --c[x];
      cur.resize(cur.size() - u.size());
    }
    self(self, i + 1);
  };
  rec(rec, 0);
  return out;
}

inline std::vector<i64> profile_of(ConjugacyData const &cd, std::vector<Elem> const &d)
{
  std::vector<i64> v(cd.num_classes, 0);
  for (Elem x : d)
    ++v[cd.class_of[x]];
  return v;
}

inline std::set<std::vector<i64>> realized_profiles(FiniteGroup const &g, ConjugacyData const &cd,
                                                    SrgParams const &p)
{
  std::set<std::vector<i64>> s;
  for (auto const &d : brute_force_pds(g, p))
    s.insert(profile_of(cd, d));
  return s;
}

} // namespace pds::testing
