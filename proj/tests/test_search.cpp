#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <random>
#include <set>
#include <sstream>

#include "pds/search.hpp"
#include "support.hpp"

using namespace pds;
using pds::testing::brute_force_pds;
using pds::testing::share;

namespace {

// LP rows as coefficient maps; every row is "terms op rhs".
struct LpRow
{
  std::map<std::string, i64> coef;
  std::string op;
  i64 rhs = 0;
};

struct Lp
{
  std::vector<LpRow> rows;
  std::vector<std::string> binaries;
  std::map<std::string, std::vector<Elem>> members;
};

Lp parse_lp(std::string const &text)
{
  Lp lp;
  std::istringstream in(text);
  std::string line, section;
  while (std::getline(in, line)) {
    if (line.rfind("\\ x", 0) == 0) {
      std::istringstream ls(line.substr(2));
      std::string name;
      ls >> name;
      name.pop_back();
      for (Elem e; ls >> e;)
        lp.members[name].push_back(e);
      continue;
    }
    if (line.empty() || line[0] == '\\')
      continue;
    if (line[0] != ' ') {
      section = line;
      continue;
    }
    std::istringstream ls(line);
    if (section == "Binary") {
      std::string v;
      ls >> v;
      lp.binaries.push_back(v);
      continue;
    }
    if (section != "Subject To")
      continue;
    LpRow r;
    std::string tok, name;
    ls >> name;
    i64 sign = 1, c = 1;
    while (ls >> tok) {
      if (tok == "+" || tok == "-") {
        sign = tok == "-" ? -1 : 1;
      } else if (tok == "=" || tok == "<=" || tok == ">=") {
        r.op = tok;
        ls >> r.rhs;
      } else if (std::isdigit(static_cast<unsigned char>(tok[0]))) {
        c = std::stoll(tok);
      } else {
        r.coef[tok] += sign * c;
        sign = 1;
        c = 1;
      }
    }
    lp.rows.push_back(r);
  }
  return lp;
}

bool satisfies(Lp const &lp, std::map<std::string, i64> const &val)
{
  for (auto const &r : lp.rows) {
    i64 s = 0;
    for (auto const &[n, c] : r.coef)
      s += c * (val.count(n) ? val.at(n) : 0);
    if ((r.op == "=" && s != r.rhs) || (r.op == "<=" && s > r.rhs) || (r.op == ">=" && s < r.rhs))
      return false;
  }
  return true;
}

// x from membership, y as the product
std::map<std::string, i64> assignment(Lp const &lp, std::vector<Elem> const &d)
{
  std::set<Elem> in(d.begin(), d.end());
  std::map<std::string, i64> val;
  for (auto const &[name, els] : lp.members)
    val[name] = in.count(els[0]) ? 1 : 0;
  for (auto const &b : lp.binaries)
    if (b[0] == 'y') {
      auto us = b.find('_');
      val[b] = val["x" + b.substr(1, us - 1)] * val["x" + b.substr(us + 1)];
    }
  return val;
}

} // namespace

TEST_CASE("verify_pds on small sets")
{
  auto g = cyclic(5);
  auto r = verify_pds(g, {1, 4});
  REQUIRE(r);
  CHECK(*r == SrgParams{5, 2, 0, 1});
  CHECK_THROWS_AS(verify_pds(g, {1, 2}), InputError);
  CHECK_THROWS_AS(verify_pds(g, {0, 1, 4}), InputError);
  CHECK_THROWS_AS(verify_pds(g, {1, 4, 7}), InputError);
  CHECK_THROWS_AS(verify_pds(g, {}), InputError);
  CHECK_FALSE(verify_pds(cyclic(7), {1, 2, 5, 6}));
  // quadratic residues mod 13
  auto q = verify_pds(cyclic(13), {1, 3, 4, 9, 10, 12});
  REQUIRE(q);
  CHECK(*q == SrgParams{13, 6, 2, 3});
}

TEST_CASE("complement of a PDS is a PDS with the complementary parameters")
{
  auto g = share(direct_product({cyclic(5), cyclic(5)}));
  auto all = brute_force_pds(*g, {25, 8, 3, 2});
  REQUIRE_FALSE(all.empty());
  for (auto const &d : all) {
    auto c = pds_complement(*g, d);
    CHECK(c.size() == 16);
    auto r = verify_pds(*g, c);
    REQUIRE(r);
    CHECK(*r == complement({25, 8, 3, 2}));
  }
}

TEST_CASE("the two verification routes agree on random inverse-closed sets")
{
  std::mt19937_64 rng(7);
  std::vector<FiniteGroup> gs;
  gs.push_back(metacyclic(7, 3, 2));
  gs.push_back(direct_product({cyclic(3), cyclic(3)}));
  gs.push_back(dihedral(6));
  gs.push_back(direct_product({cyclic(2), cyclic(2), cyclic(2), cyclic(2)}));
  for (auto const &g : gs) {
    for (int it = 0; it < 200; ++it) {
      std::vector<Elem> d;
      for (Elem x = 1; x < g.order(); ++x)
        if (x <= g.inv(x) && rng() % 2) {
          d.push_back(x);
          if (g.inv(x) != x)
            d.push_back(g.inv(x));
        }
      if (d.empty())
        continue;
      std::sort(d.begin(), d.end());
      CHECK(verify_by_differences(g, d) == verify_by_group_ring(g, d));
    }
  }
}

TEST_CASE("automorphism group orders")
{
  for (std::size_t n : {1, 2, 5, 8, 12, 30}) {
    auto a = automorphisms(cyclic(n), 1000000);
    REQUIRE(a);
    i64 phi = 0;
    for (std::size_t x = 1; x <= n; ++x)
      phi += std::gcd(x, n) == 1;
    CHECK(static_cast<i64>(a->size()) == phi);
  }
  // the holomorph of C_37: 37 * 36
  auto m = automorphisms(metacyclic(37, 3, 10), 10000000);
  REQUIRE(m);
  CHECK(m->size() == 1332);
  auto k = automorphisms(direct_product({cyclic(2), cyclic(2), cyclic(2)}), 1000000);
  REQUIRE(k);
  CHECK(k->size() == 168);
  auto d = automorphisms(dihedral(4), 1000000);
  REQUIRE(d);
  CHECK(d->size() == 8);
  auto g = metacyclic(7, 3, 2);
  auto auts = automorphisms(g, 1000000);
  REQUIRE(auts);
  CHECK(auts->size() == 42);
  for (auto const &perm : *auts) {
    std::set<Elem> img(perm.begin(), perm.end());
    CHECK(img.size() == g.order());
    for (Elem a = 0; a < g.order(); a += 2)
      for (Elem b = 0; b < g.order(); b += 3)
        CHECK(perm[g.mul(a, b)] == g.mul(perm[a], perm[b]));
  }
  CHECK_FALSE(automorphisms(direct_product({cyclic(2), cyclic(2), cyclic(2), cyclic(2)}), 10));
}

TEST_CASE("hill climbing finds the (57,24,11,9) set")
{
  auto g = share(metacyclic(19, 3, 7));
  auto t = compute_table(g);
  SrgParams p{57, 24, 11, 9};
  IntersectionVector vec{0, 1, 1, 1, 1, 1, 1, 9, 9};
  for (u64 seed = 1; seed <= 10; ++seed) {
    SearchConfig cfg;
    cfg.seed = seed;
    cfg.budget_ms = 20000;
    auto r = hill_climb(*g, t.classes, p, vec, cfg);
    REQUIRE(r.found);
    CHECK(verify_pds(*g, r.found->members) == p);
    CHECK(r.found->profile == vec);
  }
  SearchConfig a, b;
  a.seed = b.seed = 4;
  b.jobs = 3;
  CHECK(hill_climb(*g, t.classes, p, vec, a).found->members ==
        hill_climb(*g, t.classes, p, vec, b).found->members);
}

TEST_CASE("unit layout rejects unrealizable vectors")
{
  auto g = share(metacyclic(19, 3, 7));
  auto t = compute_table(g);
  SrgParams p{57, 24, 11, 9};
  CHECK_THROWS_AS(unit_layout(*g, t.classes, p, {1, 1, 1, 1, 1, 1, 1, 9, 8}), InputError);
  CHECK_THROWS_AS(unit_layout(*g, t.classes, p, {0, 2, 1, 1, 1, 1, 1, 9, 8}), InputError);
  CHECK_THROWS_AS(unit_layout(*g, t.classes, p, {0, 1, 1, 1, 1, 1, 1, 9}), InputError);
  CHECK_THROWS_AS(unit_layout(*g, t.classes, p, {0, 1, 1, 1, 1, 1, 1, 10, 10}), InputError);
  auto lay = unit_layout(*g, t.classes, p, {0, 1, 1, 1, 1, 1, 1, 9, 9});
  std::size_t total = 0;
  for (auto const &grp : lay.groups)
    for (std::size_t i = 0; i < grp.quota; ++i)
      total += grp.units[0].size();
  CHECK(total == 24);
}

TEST_CASE("exact search agrees with plain enumeration")
{
  struct Case
  {
    FiniteGroup g;
    SrgParams p;
  };
  std::vector<Case> cases;
  cases.push_back({direct_product({cyclic(3), cyclic(3)}), {9, 4, 1, 2}});
  cases.push_back({direct_product({cyclic(4), cyclic(4)}), {16, 6, 2, 2}});
  cases.push_back({direct_product({cyclic(2), cyclic(8)}), {16, 6, 2, 2}});
  cases.push_back({cyclic(16), {16, 6, 2, 2}});
  cases.push_back({direct_product({cyclic(2), cyclic(2), cyclic(2), cyclic(2)}), {16, 5, 0, 2}});
  cases.push_back({direct_product({cyclic(5), cyclic(5)}), {25, 8, 3, 2}});
  cases.push_back({metacyclic(7, 3, 2), {21, 10, 3, 6}});
  cases.push_back({dihedral(8), {16, 6, 2, 2}});
  for (auto &cs : cases) {
    CAPTURE(cs.p.to_string());
    auto g = share(std::move(cs.g));
    CAPTURE(g->label());
    auto t = compute_table(g);
    std::map<IntersectionVector, bool> realized;
    for (auto const &d : brute_force_pds(*g, cs.p))
      realized[pds::testing::profile_of(t.classes, d)] = true;
    auto cons = build_constraints(t, cs.p);
    auto surv = filter_vectors(t, cs.p, enumerate_all(cons)).survivors;
    for (auto const &vec : surv) {
      for (bool sym : {true, false}) {
        SearchConfig cfg;
        cfg.symmetry_breaking = sym;
        auto r = exact_search(*g, t.classes, cs.p, vec, cfg);
        CHECK(r.status == (realized.count(vec) ? ExactStatus::exists : ExactStatus::not_exists));
        if (r.witness) {
          CHECK(verify_pds(*g, r.witness->members) == cs.p);
          CHECK(r.witness->profile == vec);
        }
      }
    }
  }
}

TEST_CASE("exact search on the C37 x| C3 vector, with and without symmetry")
{
  auto g = share(metacyclic(37, 3, 10));
  auto t = compute_table(g);
  SrgParams p{111, 30, 5, 9};
  IntersectionVector vec{0, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 9, 9};
  SearchConfig cfg;
  auto r = exact_search(*g, t.classes, p, vec, cfg);
  CHECK(r.status == ExactStatus::not_exists);
  CHECK(r.symmetries == 1332);
  cfg.jobs = 3;
  CHECK(exact_search(*g, t.classes, p, vec, cfg).status == ExactStatus::not_exists);
  cfg.jobs = 1;
  cfg.budget_ms = 1;
  cfg.symmetry_breaking = false;
  CHECK(exact_search(*g, t.classes, p, vec, cfg).status == ExactStatus::budget_exhausted);
}

TEST_CASE("exact search finds the (57,24,11,9) set")
{
  auto g = share(metacyclic(19, 3, 7));
  auto t = compute_table(g);
  SrgParams p{57, 24, 11, 9};
  IntersectionVector vec{0, 1, 1, 1, 1, 1, 1, 9, 9};
  for (unsigned jobs : {1u, 2u}) {
    SearchConfig cfg;
    cfg.jobs = jobs;
    auto r = exact_search(*g, t.classes, p, vec, cfg);
    REQUIRE(r.status == ExactStatus::exists);
    CHECK(verify_pds(*g, r.witness->members) == p);
  }
}

TEST_CASE("LP export on (5,2,0,1) has exactly one solution")
{
  auto g = share(cyclic(5));
  auto t = compute_table(g);
  SrgParams p{5, 2, 0, 1};
  IntersectionVector vec(5, 0);
  vec[t.classes.class_of[1]] = vec[t.classes.class_of[4]] = 1;
  std::ostringstream os;
  auto st = export_milp(os, *g, t.classes, p, vec);
  auto text = os.str();
  CHECK(st.lines == static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')));
  CHECK(st.lines == 9 + 2 * st.unit_vars + st.quota_rows + st.count_rows + 4 * st.product_vars);
  CHECK(st.link_rows == 3 * st.product_vars);
  auto lp = parse_lp(text);
  REQUIRE(lp.binaries.size() == st.unit_vars + st.product_vars);
  std::vector<std::vector<Elem>> solutions;
  for (std::uint64_t mask = 0; mask < (1ull << lp.binaries.size()); ++mask) {
    std::map<std::string, i64> val;
    for (std::size_t i = 0; i < lp.binaries.size(); ++i)
      val[lp.binaries[i]] = (mask >> i) & 1;
    if (!satisfies(lp, val))
      continue;
    std::vector<Elem> d;
    for (auto const &[name, els] : lp.members)
      if (val[name])
        d.insert(d.end(), els.begin(), els.end());
    std::sort(d.begin(), d.end());
    solutions.push_back(d);
  }
  REQUIRE(solutions.size() == 1);
  CHECK(solutions[0] == std::vector<Elem>{1, 4});
}

TEST_CASE("LP export accepts a real PDS and rejects its perturbations")
{
  auto g = share(metacyclic(19, 3, 7));
  auto t = compute_table(g);
  SrgParams p{57, 24, 11, 9};
  IntersectionVector vec{0, 1, 1, 1, 1, 1, 1, 9, 9};
  auto found = hill_climb(*g, t.classes, p, vec).found;
  REQUIRE(found);
  std::ostringstream os;
  auto st = export_milp(os, *g, t.classes, p, vec);
  CHECK(st.quota_rows == 4);
  CHECK(st.count_rows == 28);
  auto lp = parse_lp(os.str());
  CHECK(satisfies(lp, assignment(lp, found->members)));
  auto lay = unit_layout(*g, t.classes, p, vec);
  std::set<Elem> in(found->members.begin(), found->members.end());
  // swap one unit for another inside a size-19 group: quotas hold, counts break
  for (auto const &grp : lay.groups) {
    if (grp.units.size() < 4)
      continue;
    std::vector<Elem> d(found->members);
    std::size_t out_u = 0, in_u = 0;
    for (std::size_t i = 0; i < grp.units.size(); ++i)
      (in.count(grp.units[i][0]) ? in_u : out_u) = i;
    for (Elem e : grp.units[in_u])
      d.erase(std::find(d.begin(), d.end(), e));
    d.insert(d.end(), grp.units[out_u].begin(), grp.units[out_u].end());
    CHECK_FALSE(verify_pds(*g, d));
    CHECK_FALSE(satisfies(lp, assignment(lp, d)));
  }
}

TEST_CASE("LP size on (111,30,5,9)")
{
  auto g = share(metacyclic(37, 3, 10));
  auto t = compute_table(g);
  std::ostringstream os;
  auto st = export_milp(os, *g, t.classes, {111, 30, 5, 9}, {0, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 9, 9});
  CHECK(st.unit_vars == 55);
  CHECK(st.count_rows == 55);
  CHECK(st.lines == 9 + 2 * st.unit_vars + st.quota_rows + st.count_rows + 4 * st.product_vars);
}

TEST_CASE("PDS file round trip")
{
  std::stringstream ss;
  write_pds(ss, {5, 2, 0, 1}, {4, 1});
  auto f = read_pds(ss);
  CHECK(f.params == SrgParams{5, 2, 0, 1});
  CHECK(f.members == std::vector<Elem>{1, 4});
  std::istringstream bad("5 2 0\n1 4\n");
  CHECK_THROWS_AS(read_pds(bad), InputError);
  std::istringstream wrong_k("5 3 0 1\n1 4\n");
  CHECK_THROWS_AS(read_pds(wrong_k), InputError);
  CHECK(to_string(ExactStatus::not_exists) == "not-exists");
  CHECK(class_profile(compute_table(share(cyclic(5))).classes, {1, 4}) ==
        IntersectionVector{0, 1, 0, 0, 1});
}
