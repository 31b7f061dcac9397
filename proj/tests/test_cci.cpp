#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <array>
#include <chrono>
#include <map>
#include <set>
#include <sstream>

#include "pds/cci.hpp"
#include "support.hpp"

using namespace pds;
using pds::testing::realized_profiles;
using pds::testing::share;

namespace {

std::map<i64, int> multiset(IntersectionVector const &v)
{
  std::map<i64, int> m;
  for (i64 x : v)
    ++m[x];
  return m;
}

std::set<IntersectionVector> cci_survivors(CharacterTable const &t, SrgParams const &p,
                                           CciMode mode = CciMode::regular_pds)
{
  auto c = build_constraints(t, p, mode);
  auto f = filter_vectors(t, p, enumerate_all(c), mode);
  return {f.survivors.begin(), f.survivors.end()};
}

} // namespace

TEST_CASE("(183,112,66,72) in C61 x| C3 has a single admissible vector")
{
  auto start = std::chrono::steady_clock::now();
  auto t = compute_table(share(metacyclic(61, 3, 13)));
  SrgParams p{183, 112, 66, 72};
  auto c = build_constraints(t, p);
  REQUIRE_FALSE(c.infeasible());
  for (std::size_t j = 0; j < c.classes.size(); ++j) {
    auto vals = c.classes[j].values();
    if (j == 0)
      CHECK(vals == std::vector<i64>{0});
    else if (c.classes[j].size == 61)
      CHECK(vals == std::vector<i64>{36});
    else
      CHECK(vals == std::vector<i64>{2});
  }
  auto vs = enumerate_all(c);
  auto f = filter_vectors(t, p, vs);
  REQUIRE(f.survivors.size() == 1);
  CHECK(multiset(f.survivors[0]) == std::map<i64, int>{{0, 1}, {2, 20}, {36, 2}});
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  CHECK(secs < 5.0);
}

TEST_CASE("(111,30,5,9) in C37 x| C3")
{
  auto t = compute_table(share(metacyclic(37, 3, 10)));
  auto s = cci_survivors(t, {111, 30, 5, 9});
  REQUIRE(s.size() == 1);
  CHECK(multiset(*s.begin()) == std::map<i64, int>{{0, 1}, {1, 12}, {9, 2}});
}

TEST_CASE("(100,33,14,9) in C25 x| C4 dies on the real size-4 classes")
{
  auto t = compute_table(share(metacyclic(25, 4, 7)));
  SrgParams p{100, 33, 14, 9};
  auto c = build_constraints(t, p);
  for (std::size_t j = 1; j < c.classes.size(); ++j)
    if (c.classes[j].size == 4) {
      CHECK(c.classes[j].residue == 1);
      CHECK(c.classes[j].modulus == 11);
      CHECK(c.classes[j].values() == std::vector<i64>{1});
    }
  auto vs = enumerate_all(c);
  auto f = filter_vectors(t, p, vs);
  CHECK(f.survivors.empty());
  CHECK(f.rejected["order2"] == vs.size());
  CHECK(phi_enumeration(t, p, CciMode::regular_pds).infeasible());
}

TEST_CASE("residue constraints list their values")
{
  ClassConstraint c;
  c.size = 20;
  c.residue = 3;
  c.modulus = 7;
  CHECK(c.values() == std::vector<i64>{3, 10, 17});
  c.modulus = 1;
  CHECK(c.values().size() == 21);
  c.kind = ClassConstraint::Kind::fixed_set;
  c.fixed = {4};
  CHECK(c.values() == std::vector<i64>{4});
}

TEST_CASE("enumeration respects sum, inverse pairing and order")
{
  auto t = compute_table(share(metacyclic(19, 3, 7)));
  SrgParams p{57, 24, 11, 9};
  auto c = build_constraints(t, p);
  // drop every constraint except the identity to get a large search space
  for (std::size_t j = 1; j < c.classes.size(); ++j) {
    c.classes[j].kind = ClassConstraint::Kind::residue;
    c.classes[j].modulus = 1;
  }
  auto vs = enumerate_all(c);
  REQUIRE(vs.size() > 20);
  CHECK(std::is_sorted(vs.begin(), vs.end()));
  for (auto const &v : vs) {
    i64 sum = 0;
    for (std::size_t j = 0; j < v.size(); ++j) {
      sum += v[j];
      CHECK(v[j] == v[c.inverse_class[j]]);
      CHECK(v[j] <= static_cast<i64>(t.classes.sizes[j]));
    }
    CHECK(sum == p.k);
  }
  EnumerateOptions par;
  par.jobs = 4;
  CHECK(enumerate_all(c, par) == vs);
  EnumerateOptions lim;
  lim.limit = 7;
  CHECK(enumerate_all(c, lim) == std::vector<IntersectionVector>(vs.begin(), vs.begin() + 7));
  std::atomic<bool> cancel{true};
  EnumerateOptions stop;
  stop.cancel = &cancel;
  CHECK_FALSE(enumerate_vectors(c, [](IntersectionVector const &) {}, stop));
}

TEST_CASE("character sums agree with exact cyclotomic arithmetic")
{
  auto t = compute_table(share(metacyclic(37, 3, 10)));
  CharacterSums cs(t);
  std::vector<std::vector<i64>> samples = {
      {0, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 9, 9},
      {0, 2, 0, 1, 3, 0, 0, 1, 2, 0, 0, 1, 1, 0, 5},
      {1, 3, 3, 3, 3, 3, 3, 3, 3, 3, 3, 3, 3, 0, 0},
  };
  for (auto const &d : samples) {
    REQUIRE(d.size() == t.classes.num_classes);
    auto fast = cs.sums(d);
    for (std::size_t i = 0; i < t.size(); ++i) {
      Cyclotomic s;
      for (std::size_t j = 0; j < d.size(); ++j)
        s += Cyclotomic(static_cast<long>(d[j])) * t.chars[i][j];
      CHECK(fast[i] == s.as_i64());
    }
  }
}

TEST_CASE("rejection reasons")
{
  {
    auto t = compute_table(share(cyclic(9)));
    IntersectionVector d(9, 0);
    for (Elem x : {1u, 8u, 3u, 6u})
      d[t.classes.class_of[x]] = 1;
    auto f = filter_vectors(t, {9, 4, 1, 2}, {d});
    CHECK(f.survivors.empty());
    CHECK(f.rejected["character_sum_irrational"] == 1);
  }
  {
    auto t = compute_table(share(direct_product({cyclic(2), cyclic(2), cyclic(2), cyclic(2)})));
    IntersectionVector d(16, 0);
    // e4 lies alone outside the kernel of the dual of e4: that character sums to 4
    for (Elem x : {1u, 2u, 4u, 8u, 3u, 5u})
      d[t.classes.class_of[x]] = 1;
    auto f = filter_vectors(t, {16, 6, 2, 2}, {d});
    CHECK(f.survivors.empty());
    CHECK(f.rejected["eigenspace_dimension"] == 1);
  }
}

TEST_CASE("every realized profile survives on small groups")
{
  struct Case
  {
    FiniteGroup g;
    SrgParams p;
  };
  std::vector<Case> cases;
  cases.push_back({direct_product({cyclic(3), cyclic(3)}), {9, 4, 1, 2}});
  cases.push_back({direct_product({cyclic(4), cyclic(4)}), {16, 6, 2, 2}});
  cases.push_back({direct_product({cyclic(2), cyclic(2), cyclic(2), cyclic(2)}), {16, 6, 2, 2}});
  cases.push_back({direct_product({cyclic(2), cyclic(2), cyclic(2), cyclic(2)}), {16, 5, 0, 2}});
  cases.push_back({direct_product({cyclic(2), cyclic(8)}), {16, 6, 2, 2}});
  cases.push_back({cyclic(16), {16, 6, 2, 2}});
  cases.push_back({direct_product({cyclic(5), cyclic(5)}), {25, 12, 5, 6}});
  cases.push_back({direct_product({cyclic(5), cyclic(5)}), {25, 8, 3, 2}});
  cases.push_back({metacyclic(7, 3, 2), {21, 10, 3, 6}});
  for (auto &cs : cases) {
    CAPTURE(cs.g.label());
    CAPTURE(cs.p.to_string());
    auto g = share(std::move(cs.g));
    auto t = compute_table(g);
    auto realized = realized_profiles(*g, t.classes, cs.p);
    auto surv = cci_survivors(t, cs.p);
    CAPTURE(realized.size());
    for (auto const &r : realized)
      CHECK(surv.count(r) == 1);
    auto ph = phi_enumeration(t, cs.p, CciMode::regular_pds);
    std::set<IntersectionVector> from_phi;
    for (auto const &a : ph.survivors)
      from_phi.insert(a.d);
    CHECK(from_phi == surv);
  }
}

TEST_CASE("Phi enumeration and the vector filter agree on (57,24,11,9)")
{
  auto t = compute_table(share(metacyclic(19, 3, 7)));
  SrgParams p{57, 24, 11, 9};
  auto surv = cci_survivors(t, p);
  auto ph = phi_enumeration(t, p, CciMode::regular_pds);
  REQUIRE(ph.stage_counts.size() == 6);
  std::set<IntersectionVector> from_phi;
  for (auto const &a : ph.survivors) {
    from_phi.insert(a.d);
    for (std::size_t i = 1; i < t.size(); ++i)
      CHECK(a.s[i] == a.a[i] * 5 + (t.degrees[i] - a.a[i]) * -3);
  }
  CHECK(from_phi == surv);
  CHECK(surv == std::set<IntersectionVector>{{0, 1, 1, 1, 1, 1, 1, 9, 9}});
}

TEST_CASE("reversible difference set mode admits the identity")
{
  auto t = compute_table(share(direct_product({cyclic(4), cyclic(4)})));
  auto c = build_constraints(t, {16, 6, 2, 2}, CciMode::reversible_ds);
  CHECK(c.classes[0].values() == std::vector<i64>{0, 1});
  CHECK_THROWS_AS(build_constraints(t, {16, 5, 0, 2}, CciMode::reversible_ds), InputError);
}

TEST_CASE("order-144 fixture stage counts")
{
  auto t = ingest_chartab(std::string(PDS_FIXTURE_DIR) + "/chartab_144.txt");
  REQUIRE(t.order() == 144);
  REQUIRE(t.size() == 24);
  auto ph = phi_enumeration(t, {144, 66, 30, 30}, CciMode::reversible_ds);
  // regression values of this implementation; the published chain is 16, 5, 15820, 0
  CHECK(ph.stage_counts == std::vector<std::uint64_t>{16, 5, 327680, 40096, 6555, 18});
  CHECK(ph.survivors.size() == 18);
  CHECK_FALSE(ph.infeasible());
}

TEST_CASE("order-144 fixture: structure and an independent Phi(1) count")
{
  auto t = ingest_chartab(std::string(PDS_FIXTURE_DIR) + "/chartab_144.txt");
  auto const &cd = t.classes;
  std::vector<std::size_t> central, x16;
  for (std::size_t j = 0; j < cd.num_classes; ++j) {
    if (cd.sizes[j] == 1)
      central.push_back(j);
    else if (cd.sizes[j] == 16 && cd.rep_orders[j] == 3)
      x16.push_back(j);
  }
  CHECK(central.size() == 3);
  REQUIRE(x16.size() == 6);
  REQUIRE(t.linear_indices.size() == 9);
  std::vector<std::size_t> lin_pairs, nl_real, nl_pairs;
  for (std::size_t i = 0; i < t.size(); ++i) {
    bool lead = t.conjugate_char[i] > i;
    if (t.is_linear(i)) {
      if (i != t.principal_index) {
        CHECK(t.conjugate_char[i] != i);
        if (lead)
          lin_pairs.push_back(i);
      }
      continue;
    }
    CHECK(t.degrees[i] == 3);
    for (auto j : x16)
      CHECK(t.chars[i][j].is_zero());
    if (t.conjugate_char[i] == i)
      nl_real.push_back(i);
    else if (lead)
      nl_pairs.push_back(i);
  }
  REQUIRE(lin_pairs.size() == 4);
  REQUIRE(nl_real.size() == 1);
  REQUIRE(nl_pairs.size() == 7);

  // sign patterns on the linear pairs with Phi(x) = 0 mod 9 on every size-16 class
  std::vector<i64> linear_part;
  for (int mask = 0; mask < 16; ++mask) {
    bool ok = true;
    for (auto j : x16) {
      Cyclotomic phi(66L);
      for (std::size_t b = 0; b < 4; ++b) {
        auto i = lin_pairs[b];
        long s = (mask >> b & 1) ? 6 : -6;
        phi += Cyclotomic(s) * (t.chars[i][j] + t.chars[i][j].conj());
      }
      auto v = phi.as_i64();
      REQUIRE(v);
      ok = ok && *v % 9 == 0;
    }
    if (ok) {
      i64 l = 66;
      for (int b = 0; b < 4; ++b)
        l += 2 * ((mask >> b & 1) ? 6 : -6);
      linear_part.push_back(l);
    }
  }
  CHECK(linear_part.size() == 5);
  // 8 nonlinear values in {-18,-6,6,18}; Phi(1) = linear part + 3 (s_real + 2 sum s_pair)
  std::uint64_t admissible = 0, total = 0;
  std::array<i64, 4> vals{-18, -6, 6, 18};
  for (i64 l : linear_part)
    for (int code = 0; code < (1 << 16); ++code) {
      i64 phi1 = l;
      for (int c = 0; c < 8; ++c)
        phi1 += 3 * vals[static_cast<std::size_t>(code >> (2 * c) & 3)] * (c == 0 ? 1 : 2);
      ++total;
      admissible += phi1 == 0 || phi1 == 144;
    }
  CHECK(total == 327680);
  // the published figure is 15820; this count disagrees
  CHECK(admissible == 40096);
}

TEST_CASE("write_vectors emits a header and one row per vector")
{
  auto t = compute_table(share(metacyclic(19, 3, 7)));
  std::ostringstream os;
  write_vectors(os, t, {{0, 1, 1, 1, 1, 1, 1, 9, 9}});
  std::string s = os.str();
  CHECK(s.rfind("#", 0) == 0);
  CHECK(std::count(s.begin(), s.end(), '\n') >= 2);
}
