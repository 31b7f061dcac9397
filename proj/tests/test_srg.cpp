#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <numeric>
#include <sstream>

#include "pds/srg.hpp"

using namespace pds;

namespace {

// Reads (v,k,lambda,mu) off an explicit regular graph.
SrgParams graph_params(std::vector<std::vector<int>> const &adj)
{
  int n = static_cast<int>(adj.size());
  SrgParams p{n, 0, -1, -1};
  for (int j = 0; j < n; ++j)
    p.k += adj[0][j];
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      int c = 0;
      for (int x = 0; x < n; ++x)
        c += adj[a][x] && adj[b][x];
      i64 &slot = adj[a][b] ? p.lambda : p.mu;
      if (slot >= 0 && slot != c)
        return {};
      slot = c;
    }
  return p;
}

std::vector<std::vector<int>> pair_graph(int m, bool disjoint)
{
  std::vector<std::pair<int, int>> pts;
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b)
      pts.emplace_back(a, b);
  std::size_t n = pts.size();
  std::vector<std::vector<int>> adj(n, std::vector<int>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j)
        continue;
      bool meet = pts[i].first == pts[j].first || pts[i].first == pts[j].second ||
                  pts[i].second == pts[j].first || pts[i].second == pts[j].second;
      adj[i][j] = disjoint ? !meet : meet;
    }
  return adj;
}

std::vector<std::vector<int>> paley(int q)
{
  std::vector<int> sq(q, 0);
  for (int x = 1; x < q; ++x)
    sq[x * x % q] = 1;
  std::vector<std::vector<int>> adj(q, std::vector<int>(q, 0));
  for (int a = 0; a < q; ++a)
    for (int b = 0; b < q; ++b)
      adj[a][b] = a != b && sq[((a - b) % q + q) % q];
  return adj;
}

std::vector<SrgParams> fixture_rows(char const *name)
{
  std::vector<SrgParams> out;
  for (auto const &r : read_param_batch_file(std::string(PDS_FIXTURE_DIR) + "/" + name))
    out.push_back(r.p);
  return out;
}

} // namespace

TEST_CASE("eigendata on worked parameter sets")
{
  auto e = eigendata({183, 112, 66, 72});
  CHECK(e.theta1 == 4);
  CHECK(e.theta2 == -10);
  CHECK(*e.sqrt_delta == 14);

  e = eigendata({100, 33, 14, 9});
  CHECK(*e.sqrt_delta == 11);
  CHECK(e.theta1 == 8);
  CHECK(e.theta2 == -3);

  e = eigendata({57, 24, 11, 9});
  CHECK(e.delta == 64);
  CHECK(e.theta1 == 5);
  CHECK(e.theta2 == -3);
  CHECK(e.m1 == 18);
  CHECK(e.m2 == 38);
  CHECK_FALSE(e.infeasible);
}

TEST_CASE("eigendata errors and conference detection")
{
  CHECK_THROWS_AS(eigendata({15, 6, 1, 2}), InputError);
  CHECK_THROWS_AS(eigendata({10, 3, 0, 0}), InputError);
  CHECK_THROWS_AS(eigendata({16, 15, 14, 0}), InputError);

  for (int q : {5, 13, 17, 29, 37}) {
    SrgParams g = graph_params(paley(q));
    auto e = eigendata(g);
    CHECK(e.conference);
    CHECK_FALSE(e.sqrt_delta);
    CHECK(e.m1 == (q - 1) / 2);
    CHECK_FALSE(e.infeasible);
  }
  // satisfies counting but has irrational eigenvalues and is not conference shaped
  SrgParams odd{9, 4, 0, 3};
  REQUIRE(odd.counting_ok());
  CHECK(eigendata(odd).infeasible);
  // (21,8,1,4) counts correctly but its multiplicities are not integral
  SrgParams bad{21, 8, 1, 4};
  REQUIRE(bad.counting_ok());
  CHECK(eigendata(bad).infeasible);
}

TEST_CASE("eigenvalues solve the quadratic and satisfy the trace identities")
{
  for (char const *name : {"excluded_theoretical.txt", "excluded_computational.txt"}) {
    auto rows = fixture_rows(name);
    REQUIRE(rows.size() > 100);
    for (auto const &p : rows) {
      CAPTURE(p.to_string());
      REQUIRE(p.counting_ok());
      auto e = eigendata(p);
      if (e.infeasible || !e.sqrt_delta)
        continue;
      for (i64 t : {e.theta1, e.theta2})
        CHECK(t * t - (p.lambda - p.mu) * t - (p.k - p.mu) == 0);
      CHECK(e.theta1 * e.theta2 == p.mu - p.k);
      CHECK(e.theta1 + e.theta2 == p.lambda - p.mu);
      CHECK(p.k + e.m1 * e.theta1 + e.m2 * e.theta2 == 0);
      CHECK(e.m1 + e.m2 == p.v - 1);
      // second moment: tr(A^2) = vk
      CHECK(p.k * p.k + e.m1 * e.theta1 * e.theta1 + e.m2 * e.theta2 * e.theta2 == p.v * p.k);
    }
  }
}

TEST_CASE("complement against explicit graphs")
{
  CHECK(complement({15, 6, 1, 3}) == SrgParams{15, 8, 4, 4});
  CHECK(complement({57, 24, 11, 9}) == SrgParams{57, 32, 16, 20});
  for (int m : {5, 6, 7, 8}) {
    auto kneser = graph_params(pair_graph(m, true));
    auto tri = graph_params(pair_graph(m, false));
    CHECK(complement(kneser) == tri);
    CHECK(complement(tri) == kneser);
  }
  CHECK(graph_params(pair_graph(6, true)) == SrgParams{15, 6, 1, 3});
  for (int q : {13, 17}) {
    auto g = graph_params(paley(q));
    CHECK(complement(g) == g);
  }
  for (char const *name : {"excluded_theoretical.txt", "excluded_computational.txt"})
    for (auto const &p : fixture_rows(name)) {
      CHECK(complement(complement(p)) == p);
      CHECK(complement(p).counting_ok());
    }
}

TEST_CASE("factorizations")
{
  auto fs = factorizations({15, 6, 1, 3});
  REQUIRE(fs.size() == 1);
  CHECK(fs[0].mu1 == 1);
  CHECK(fs[0].mu2 == 3);
  CHECK(fs[0].v1 == 5);
  CHECK(fs[0].v2 == 3);
  CHECK(fs[0].pi_alpha == 5);
  CHECK(fs[0].pi_beta == 3);

  fs = factorizations({183, 112, 66, 72});
  bool found = false;
  for (auto const &f : fs)
    if (f.mu1 == 36 && f.mu2 == 2) {
      found = true;
      CHECK(f.v1 == 3);
      CHECK(f.v2 == 61);
    }
  CHECK(found);
}

TEST_CASE("factorizations match an exhaustive scan and separate coprime primes")
{
  for (char const *name : {"excluded_theoretical.txt", "excluded_computational.txt"})
    for (auto const &p : fixture_rows(name)) {
      auto e = eigendata(p);
      if (e.infeasible || !e.sqrt_delta)
        continue;
      CAPTURE(p.to_string());
      auto fs = factorizations(p);
      std::vector<std::pair<i64, i64>> scan;
      for (i64 a = 1; a <= p.mu; ++a)
        for (i64 b = 1; a * b <= p.mu; ++b)
          if (a * b == p.mu && (p.k - e.theta1) % a == 0 && (p.k - e.theta2) % b == 0)
            scan.emplace_back(a, b);
      REQUIRE(fs.size() == scan.size());
      for (std::size_t i = 0; i < fs.size(); ++i) {
        CHECK(fs[i].mu1 == scan[i].first);
        CHECK(fs[i].v1 * fs[i].v2 == p.v);
        CHECK((p.k - e.theta1) * (p.k - e.theta2) == p.v * p.mu);
        CHECK(std::gcd(fs[i].pi_alpha, *e.sqrt_delta) == 1);
        CHECK(std::gcd(fs[i].pi_beta, *e.sqrt_delta) == 1);
        for (i64 q : prime_divisors(p.v))
          if (*e.sqrt_delta % q != 0)
            CHECK(separates(fs[i], q));
      }
    }
}

TEST_CASE("family parameters")
{
  CHECK(family_params("clapham", 19) == SrgParams{57, 24, 11, 9});
  CHECK(family_params("wilson(4)", 37) == SrgParams{111, 44, 19, 16});
  CHECK(family_params("buratti5", 61) == SrgParams{183, 70, 29, 25});
  CHECK(family_params("gq_even", 2) == SrgParams{15, 6, 1, 3});
  CHECK(family_params("hadamard_ds", 4) == SrgParams{63, 32, 16, 16});
  CHECK(family_params("fuji4", 37) == SrgParams{111, 44, 19, 16});
  CHECK(family_params("wilson(4)", 61) == SrgParams{305, 76, 27, 16});
  CHECK(family_params("wilson(4)", 109) == SrgParams{981, 140, 43, 16});

  CHECK_THROWS_AS(family_params("clapham", 7), InputError);
  CHECK_THROWS_AS(family_params("clapham", 25), InputError);
  CHECK_THROWS_AS(family_params("clapham", 55), InputError);
  CHECK_THROWS_AS(family_params("fuji4", 13), InputError);
  CHECK_THROWS_AS(family_params("buratti5", 41), InputError);
  CHECK_THROWS_AS(family_params("gq_even", 3), InputError);
  CHECK_THROWS_AS(family_params("wilson(x)", 37), InputError);
  CHECK_THROWS_AS(family_params("nope", 37), InputError);
  try {
    family_params("clapham", 13);
    FAIL("expected rejection");
  } catch (InputError const &e) {
    CHECK(std::string(e.what()).find("7 (mod 12)") != std::string::npos);
  }

  // GQ(s,t) has (s+1)(st+1) points, s(t+1) collinear neighbours
  for (i64 q : {2, 4, 8, 16}) {
    auto p = family_params("gq_even", q);
    i64 s = q, t = q * q - q;
    CHECK(p.v == (s + 1) * (s * t + 1));
    CHECK(p.k == s * (t + 1));
    CHECK(p.lambda == s - 1);
    CHECK(p.mu == t + 1);
    auto e = eigendata(p);
    CHECK(e.theta1 == q - 1);
    CHECK(e.theta2 == -q * q + q - 1);
    CHECK(*e.sqrt_delta == q * q);
  }
}

TEST_CASE("every generated family satisfies counting and integrality")
{
  for (i64 q = 2; q < 3000; ++q) {
    for (std::string fam : {"clapham", "wilson(3)", "wilson(4)", "wilson(5)", "wilson(6)", "buratti5",
                            "fuji4", "gq_even", "hadamard_ds"}) {
      SrgParams p;
      try {
        p = family_params(fam, q);
      } catch (InputError const &) {
        continue;
      }
      CAPTURE(fam);
      CAPTURE(q);
      CHECK(p.counting_ok());
      auto e = eigendata(p);
      CHECK_FALSE(e.infeasible);
      if (fam == "clapham")
        CHECK(p == family_params("wilson(3)", q));
    }
  }
}

TEST_CASE("batch reader")
{
  std::istringstream in("# header\n15 6 1 3\n\n  57 24 11 9 extra  # trailing\n");
  auto rows = read_param_batch(in);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].line == 2);
  CHECK(rows[1].p == SrgParams{57, 24, 11, 9});
  std::istringstream bad("15 6 1\n");
  CHECK_THROWS_AS(read_param_batch(bad), InputError);
  CHECK_THROWS_AS(read_param_batch_file("/nonexistent/file"), InputError);
}
