#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <memory>
#include <numeric>

#include "pds/sieves.hpp"

using namespace pds;

namespace {

CharacterTable table_of(FiniteGroup g)
{
  return compute_table(std::make_shared<FiniteGroup const>(std::move(g)));
}

std::vector<SrgParams> fixture_rows(char const *name)
{
  std::vector<SrgParams> out;
  for (auto const &r : read_param_batch_file(std::string(PDS_FIXTURE_DIR) + "/" + name))
    out.push_back(r.p);
  return out;
}

bool covered(SrgParams const &p)
{
  if (p.v % 2 == 0)
    return false;
  auto e = eigendata(p);
  return e.sqrt_delta && std::gcd(p.v, *e.sqrt_delta) == 1 &&
         forced_linear_primes(p.v) == prime_divisors(p.v);
}

} // namespace

TEST_CASE("mod_restriction on (15,6,1,3)")
{
  SrgParams p{15, 6, 1, 3};
  for (auto mode : {PrimeMode::all_divide, PrimeMode::some_divides}) {
    auto r = mod_restriction(p, {3, 5}, true, mode);
    CHECK(r.status == Status::infeasible);
    CHECK(replay_witness(r.witness));
  }
  auto r = mod_restriction(p, {5}, true, PrimeMode::all_divide);
  REQUIRE(r.status == Status::infeasible);
  auto const &f = r.witness["failures"][0]["factorizations"][0];
  CHECK(f["side"] == "alpha");
  CHECK(f["pi_beta"] == 3);
  // without solvability only the normalizer half of the rule is available
  CHECK(mod_restriction(p, {3, 5}, false, PrimeMode::all_divide).status == Status::unresolved);
  CHECK(mod_restriction(p, {3, 5}, false, PrimeMode::all_divide, {{3, 15}, {5, 15}}).status ==
        Status::infeasible);
}

TEST_CASE("generalized quadrangles with q even are ruled out")
{
  for (i64 q : {2, 4, 8, 16}) {
    auto r = param_sieve(family_params("gq_even", q));
    CAPTURE(q);
    CHECK(r.status == Status::infeasible);
    CHECK(r.rule == "mod_restriction");
    CHECK(replay_witness(r.witness));
  }
}

TEST_CASE("Hadamard-type difference sets")
{
  for (i64 w : {2, 3, 5, 6, 8, 9}) {
    CAPTURE(w);
    auto r = param_sieve(family_params("hadamard_ds", w));
    CHECK(r.status == Status::infeasible);
    CHECK(replay_witness(r.witness));
  }
  for (i64 w : {4, 7}) {
    CAPTURE(w);
    auto p = family_params("hadamard_ds", w);
    auto r = param_sieve(p);
    REQUIRE(r.status == Status::unresolved);
    auto const &surv = r.witness["params"]["survivors"];
    REQUIRE_FALSE(surv.empty());
    for (auto const &s : surv) {
      CHECK(s["prime"] == 3);
      CHECK(s["theta_alpha"] == -w);
    }
    CHECK(kernel_coset_check(3, -w, p));
    CHECK_FALSE(kernel_coset_check(3, w, p));
  }
  // w = 7: 5 divides |G/G'| for every group of order 195 and fails the congruence
  auto r7 = param_sieve(family_params("hadamard_ds", 7), true);
  CHECK(r7.status == Status::infeasible);
  CHECK(replay_witness(r7.witness));
  auto rows = fixture_rows("excluded_theoretical.txt");
  CHECK(std::find(rows.begin(), rows.end(), complement(family_params("hadamard_ds", 7))) !=
        rows.end());
}

TEST_CASE("forced linear primes are sound on constructible odd groups")
{
  CHECK(forced_linear_primes(15) == std::vector<i64>{3, 5});
  CHECK(forced_linear_primes(21) == std::vector<i64>{3});
  CHECK(forced_linear_primes(63) == std::vector<i64>{3});
  CHECK(forced_linear_primes(195) == std::vector<i64>{3, 5});
  int checked = 0;
  for (std::size_t q = 3; q < 80; q += 2)
    for (std::size_t m = 3; q * m < 400; m += 2)
      for (i64 t = 2; t < static_cast<i64>(q); ++t) {
        if (std::gcd(t, static_cast<i64>(q)) != 1 ||
            multiplicative_order(t, static_cast<i64>(q)) != static_cast<i64>(m))
          continue;
        auto g = metacyclic(q, m, t);
        auto ns = normal_structure(g);
        for (i64 p : forced_linear_primes(static_cast<i64>(q * m)))
          CHECK(ns.abelianization_order() % p == 0);
        ++checked;
        break;
      }
  CHECK(checked > 20);
}

TEST_CASE("shipped exclusion rows covered by the parameter-only assumption are infeasible")
{
  int n = 0;
  for (auto const &p : fixture_rows("excluded_theoretical.txt")) {
    if (!covered(p))
      continue;
    ++n;
    CAPTURE(p.to_string());
    auto r = param_sieve(p);
    CHECK(r.status == Status::infeasible);
    CHECK(replay_witness(r.witness));
  }
  CHECK(n == 157);
}

TEST_CASE("constructed families are never marked infeasible")
{
  std::vector<SrgParams> rows;
  for (i64 q = 10; q < 2000; ++q)
    for (char const *fam : {"clapham", "wilson(4)", "buratti5", "wilson(6)"}) {
      try {
        rows.push_back(family_params(fam, q));
      } catch (InputError const &) {
      }
    }
  REQUIRE(rows.size() > 50);
  for (auto const &p : rows) {
    CAPTURE(p.to_string());
    CHECK(param_sieve(p).status == Status::unresolved);
    CHECK(param_sieve(p, true).status == Status::unresolved);
  }
}

TEST_CASE("gcd rule")
{
  auto r = gcd_rule({183, 112, 66, 72});
  CHECK(r.status == Status::unresolved);
  CHECK(r.witness["gcd"] == 2);
  // the trace identity k + m1 theta1 + m2 theta2 = 0 already forces gcd | k
  for (char const *name : {"excluded_theoretical.txt", "excluded_computational.txt"})
    for (auto const &p : fixture_rows(name))
      CHECK(gcd_rule(p).status == Status::unresolved);
}

TEST_CASE("kernel coset check")
{
  auto a = kernel_coset_check(3, -3, {57, 24, 11, 9});
  REQUIRE(a);
  CHECK(a->first == 6);
  CHECK(a->second == 9);
  CHECK_FALSE(kernel_coset_check(3, 5, {57, 24, 11, 9}));
}

TEST_CASE("value_phi and coset quotas on the metacyclic hosts")
{
  struct Case
  {
    FiniteGroup g;
    SrgParams p;
    i64 big_size, forced;
  };
  std::vector<Case> cases;
  cases.push_back({metacyclic(61, 3, 13), {183, 112, 66, 72}, 61, 36});
  cases.push_back({metacyclic(37, 3, 10), {111, 30, 5, 9}, 37, 9});
  cases.push_back({metacyclic(19, 3, 7), {57, 24, 11, 9}, 19, 9});
  for (auto &c : cases) {
    CAPTURE(c.p.to_string());
    auto t = table_of(c.g);
    auto vp = value_phi_constraints(t, c.p);
    REQUIRE(vp.applicable);
    int seen = 0;
    for (std::size_t j = 0; j < t.classes.num_classes; ++j) {
      if (static_cast<i64>(t.classes.sizes[j]) != c.big_size)
        continue;
      ++seen;
      CHECK(vp.outside_N[j]);
      std::vector<i64> vals;
      for (auto const &x : vp.allowed[j])
        if (x)
          vals.push_back(*x);
      CHECK(vals == std::vector<i64>{c.forced});
    }
    CHECK(seen == 2);
  }

  auto t57 = table_of(metacyclic(19, 3, 7));
  auto ctx = linear_context(t57, {57, 24, 11, 9});
  CHECK(ctx.h_order == 3);
  CHECK(ctx.n_order == 19);
  auto q = coset_intersections(ctx, {57, 24, 11, 9});
  REQUIRE(q.size() == 1);
  CHECK(q[0].theta_alpha == -3);
  CHECK(q[0].n_quota == 6);
  CHECK(q[0].coset_quota == 9);
  CHECK(q[0].n_quota + 2 * q[0].coset_quota == 24);

  auto t183 = table_of(metacyclic(61, 3, 13));
  auto q183 = coset_intersections(linear_context(t183, {183, 112, 66, 72}), {183, 112, 66, 72});
  REQUIRE(q183.size() == 1);
  CHECK(q183[0].theta_alpha == 4);
  CHECK(q183[0].n_quota == 40);
}

TEST_CASE("modular residues")
{
  auto m = modular_phi(25, false, 100, {100, 33, 14, 9});
  CHECK(m.modulus == 11);
  CHECK(m.residue == 1);
  for (i64 c : {1, 3, 7, 9, 21, 63})
    CHECK(modular_phi(c, false, 112, {112, 75, 50, 50}).residue % 5 == 0);
  CHECK(modular_phi(16, false, 112, {112, 75, 50, 50}).modulus == 5);
  CHECK(modular_phi(14, false, 112, {112, 75, 50, 50}).modulus == 5);
  // 2 | gcd(theta1, theta2), 2 coprime to 183: every class intersection is even
  for (i64 c : {3, 61, 183}) {
    auto r = modular_phi(c, false, 183, {183, 112, 66, 72});
    CHECK(r.modulus % 2 == 0);
    CHECK(r.residue % 2 == 0);
  }
  // 36 on the size-61 classes agrees with the residue mod 14
  auto r3 = modular_phi(3, false, 183, {183, 112, 66, 72});
  CHECK(r3.modulus == 14);
  CHECK((36 - r3.residue) % 14 == 0);
  // all prime powers share the centralizer: vacuous
  CHECK(modular_phi(12, false, 144, {144, 66, 30, 30}).modulus == 1);
}

TEST_CASE("class size bound")
{
  auto r = class_size_bound({1, 1, 8, 7, 8, 7, 8, 8, 8, 8, 8, 8, 8, 8, 8, 8}, 5, 75);
  CHECK(r.status == Status::infeasible);
  CHECK(r.witness["bound"] == 70);
  CHECK(replay_witness(r.witness));
  CHECK(class_size_bound({112}, 5, 75).status == Status::unresolved);
  CHECK(class_size_bound({1, 1, 8}, 1, 9).status == Status::unresolved);
}

TEST_CASE("order2 check")
{
  auto g = metacyclic(25, 4, 7);
  auto cd = conjugacy(g);
  std::vector<i64> d(cd.num_classes, 0);
  std::size_t real4 = cd.num_classes, inv = cd.num_classes, pair = cd.num_classes;
  for (std::size_t j = 0; j < cd.num_classes; ++j) {
    if (cd.sizes[j] == 4 && cd.is_real(j) && cd.rep_orders[j] > 2 && real4 == cd.num_classes)
      real4 = j;
    if (cd.rep_orders[j] == 2 && inv == cd.num_classes)
      inv = j;
    if (!cd.is_real(j) && pair == cd.num_classes)
      pair = j;
  }
  REQUIRE(real4 < cd.num_classes);
  REQUIRE(inv < cd.num_classes);
  REQUIRE(pair < cd.num_classes);
  CHECK_FALSE(order2_check(cd, d));
  d[inv] = 1;
  CHECK_FALSE(order2_check(cd, d));
  d[real4] = 1;
  CHECK(order2_check(cd, d) == real4);
  d[real4] = 2;
  d[pair] = 1;
  CHECK(order2_check(cd, d));
  d[cd.inverse_class[pair]] = 1;
  CHECK_FALSE(order2_check(cd, d));
}

TEST_CASE("group sieve verdicts")
{
  auto t100 = table_of(metacyclic(25, 4, 7));
  auto r = group_sieve(t100, {100, 33, 14, 9}, true);
  CHECK(r.status == Status::infeasible);
  CHECK(r.rule == "modular_order2");
  CHECK(r.witness["class"]["size"] == 4);
  CHECK(r.witness["residue"] == 1);
  CHECK(replay_witness(r.witness));

  auto t183 = table_of(metacyclic(61, 3, 13));
  CHECK(group_sieve(t183, {183, 112, 66, 72}, true).status == Status::unresolved);
  auto t57 = table_of(metacyclic(19, 3, 7));
  CHECK(group_sieve(t57, {57, 24, 11, 9}, true).status == Status::unresolved);
  auto t111 = table_of(metacyclic(37, 3, 10));
  CHECK(group_sieve(t111, {111, 30, 5, 9}, true).status == Status::unresolved);
  CHECK(group_sieve(t111, {111, 44, 19, 16}, true).status == Status::unresolved);

  // cyclic 15: every prime of |L| fails
  auto t15 = table_of(cyclic(15));
  auto r15 = group_sieve(t15, {15, 6, 1, 3}, true, sylow_normalizer_orders(cyclic(15)));
  CHECK(r15.status == Status::infeasible);
  CHECK(replay_witness(r15.witness));
}

TEST_CASE("Sylow normalizers satisfy n_p = 1 (mod p)")
{
  for (auto g : {dihedral(3), metacyclic(7, 3, 2), dihedral(6), metacyclic(19, 3, 7),
                 metacyclic(25, 4, 7), direct_product({metacyclic(7, 3, 2), cyclic(3)})}) {
    auto no = sylow_normalizer_orders(g);
    for (auto [p, n] : no) {
      CHECK(static_cast<i64>(g.order()) % n == 0);
      CHECK(mod(static_cast<i64>(g.order()) / n, p) == 1);
      CHECK(n % (static_cast<i64>(g.order()) / coprime_part(static_cast<i64>(g.order()), p)) == 0);
    }
  }
  auto s3 = sylow_normalizer_orders(dihedral(3));
  CHECK(s3[2] == 2);
  CHECK(s3[3] == 6);
}

TEST_CASE("tampered witnesses do not replay")
{
  auto r = param_sieve(family_params("gq_even", 2));
  REQUIRE(r.status == Status::infeasible);
  auto w = r.witness;
  w["params"] = {15, 8, 4, 4};
  CHECK_FALSE(replay_witness(w));
  auto b = class_size_bound({1, 1, 8, 7, 8, 7, 8, 8, 8, 8, 8, 8, 8, 8, 8, 8}, 5, 75).witness;
  b["k"] = 70;
  CHECK_FALSE(replay_witness(b));
  auto u = param_sieve({57, 24, 11, 9}).witness;
  CHECK_FALSE(replay_witness(u));
}
