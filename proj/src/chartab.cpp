#include "pds/chartab.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "pds/simd.hpp"

namespace pds {

namespace {

using Row = std::vector<std::uint32_t>;
using Poly = std::vector<u64>; // low degree first

struct ModP
{
  u64 p;
  u64 add(u64 a, u64 b) const { return (a + b) % p; }
  u64 sub(u64 a, u64 b) const { return (a + p - b) % p; }
  u64 mul(u64 a, u64 b) const { return a * b % p; }
  u64 inv(u64 a) const { return powmod(a, p - 2, p); }
};

void trim(Poly &f)
{
  while (!f.empty() && f.back() == 0)
    f.pop_back();
}

Poly poly_mod(Poly a, Poly const &b, ModP const &F)
{
  trim(a);
  u64 lead_inv = F.inv(b.back());
  while (a.size() >= b.size()) {
    u64 c = F.mul(a.back(), lead_inv);
    std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i)
      a[shift + i] = F.sub(a[shift + i], F.mul(c, b[i]));
    trim(a);
  }
  return a;
}

Poly poly_mulmod(Poly const &a, Poly const &b, Poly const &m, ModP const &F)
{
  if (a.empty() || b.empty())
    return {};
  Poly c(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      c[i + j] = F.add(c[i + j], F.mul(a[i], b[j]));
  return poly_mod(std::move(c), m, F);
}

Poly poly_powmod(Poly base, u64 e, Poly const &m, ModP const &F)
{
  Poly r{1};
  base = poly_mod(std::move(base), m, F);
  while (e) {
    if (e & 1)
      r = poly_mulmod(r, base, m, F);
    base = poly_mulmod(base, base, m, F);
    e >>= 1;
  }
  return r;
}

Poly poly_gcd(Poly a, Poly b, ModP const &F)
{
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = poly_mod(a, b, F);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    u64 li = F.inv(a.back());
    for (auto &c : a)
      c = F.mul(c, li);
  }
  return a;
}

Poly poly_div(Poly a, Poly const &b, ModP const &F)
{
  trim(a);
  if (a.size() < b.size())
    return {};
  Poly q(a.size() - b.size() + 1, 0);
  u64 lead_inv = F.inv(b.back());
  while (a.size() >= b.size()) {
    u64 c = F.mul(a.back(), lead_inv);
    std::size_t shift = a.size() - b.size();
    q[shift] = c;
    for (std::size_t i = 0; i < b.size(); ++i)
      a[shift + i] = F.sub(a[shift + i], F.mul(c, b[i]));
    a.pop_back();
    trim(a);
    if (a.size() < b.size())
      break;
  }
  return q;
}

// Distinct roots of a monic polynomial that splits over F_p.
void split_roots(Poly const &f, ModP const &F, std::mt19937_64 &rng, std::vector<u64> &out)
{
  if (f.size() <= 1)
    return;
  if (f.size() == 2) {
    out.push_back(F.sub(0, F.mul(f[0], F.inv(f[1]))));
    return;
  }
  if (F.p == 2) {
    for (u64 x = 0; x < 2; ++x) {
      u64 acc = 0;
      for (std::size_t i = f.size(); i-- > 0;)
        acc = F.add(F.mul(acc, x), f[i]);
      if (acc == 0)
        out.push_back(x);
    }
    return;
  }
  std::uniform_int_distribution<u64> pick(0, F.p - 1);
  for (;;) {
    Poly lin{pick(rng), 1};
    Poly h = poly_powmod(lin, (F.p - 1) / 2, f, F);
    if (h.empty())
      h = {F.p - 1};
    else
      h[0] = F.sub(h[0], 1);
    Poly g = poly_gcd(f, h, F);
    if (g.size() > 1 && g.size() < f.size()) {
      split_roots(g, F, rng, out);
      split_roots(poly_div(f, g, F), F, rng, out);
      return;
    }
  }
}

std::vector<u64> distinct_roots(Poly f, ModP const &F, std::mt19937_64 &rng)
{
  // gcd with x^p - x keeps each root once
  Poly xp = poly_powmod(Poly{0, 1}, F.p, f, F);
  if (xp.size() < 2)
    xp.resize(2, 0);
  xp[1] = F.sub(xp[1], 1);
  Poly g = poly_gcd(f, xp, F);
  std::vector<u64> out;
  split_roots(g, F, rng, out);
  std::sort(out.begin(), out.end());
  return out;
}

// characteristic polynomial through Hessenberg form
Poly charpoly(std::vector<std::vector<u64>> H, ModP const &F)
{
  std::size_t n = H.size();
  for (std::size_t m = 1; m + 1 < n; ++m) {
    std::size_t piv = n;
    for (std::size_t i = m; i < n; ++i)
      if (H[i][m - 1]) {
        piv = i;
        break;
      }
    if (piv == n)
      continue;
    if (piv != m) {
      std::swap(H[piv], H[m]);
      for (std::size_t i = 0; i < n; ++i)
        std::swap(H[i][piv], H[i][m]);
    }
    u64 inv = F.inv(H[m][m - 1]);
    for (std::size_t i = m + 1; i < n; ++i) {
      u64 u = F.mul(H[i][m - 1], inv);
      if (!u)
        continue;
      for (std::size_t j = 0; j < n; ++j)
        H[i][j] = F.sub(H[i][j], F.mul(u, H[m][j]));
      for (std::size_t j = 0; j < n; ++j)
        H[j][m] = F.add(H[j][m], F.mul(u, H[j][i]));
    }
  }
  std::vector<Poly> P(n + 1);
  P[0] = {1};
  for (std::size_t k = 0; k < n; ++k) {
    Poly next(k + 2, 0);
    for (std::size_t i = 0; i < P[k].size(); ++i) {
      next[i + 1] = F.add(next[i + 1], P[k][i]);
      next[i] = F.sub(next[i], F.mul(H[k][k], P[k][i]));
    }
    u64 prod = 1;
    for (std::size_t i = k; i-- > 0;) {
      prod = F.mul(prod, H[i + 1][i]);
      u64 c = F.mul(prod, H[i][k]);
      if (!c)
        continue;
      for (std::size_t t = 0; t < P[i].size(); ++t)
        next[t] = F.sub(next[t], F.mul(c, P[i][t]));
    }
    P[k + 1] = std::move(next);
  }
  return P[n];
}

// In-place RREF; returns pivot columns. Zero rows removed.
std::vector<std::size_t> rref(std::vector<Row> &rows, ModP const &F)
{
  std::vector<std::size_t> pivots;
  if (rows.empty())
    return pivots;
  std::size_t ncol = rows[0].size(), r = 0;
  for (std::size_t c = 0; c < ncol && r < rows.size(); ++c) {
    std::size_t piv = rows.size();
    for (std::size_t i = r; i < rows.size(); ++i)
      if (rows[i][c]) {
        piv = i;
        break;
      }
    if (piv == rows.size())
      continue;
    std::swap(rows[r], rows[piv]);
    u64 inv = F.inv(rows[r][c]);
    for (auto &x : rows[r])
      x = static_cast<std::uint32_t>(F.mul(x, inv));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || !rows[i][c])
        continue;
      std::uint32_t f = static_cast<std::uint32_t>(F.sub(0, rows[i][c]));
      simd::axpy_mod(rows[i].data(), rows[r].data(), ncol, f, static_cast<std::uint32_t>(F.p));
    }
    pivots.push_back(c);
    ++r;
  }
  rows.resize(r);
  return pivots;
}

// basis of {c : M c = 0}
std::vector<std::vector<u64>> nullspace(std::vector<std::vector<u64>> M, ModP const &F)
{
  std::size_t n = M.size();
  std::vector<Row> rows(n, Row(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      rows[i][j] = static_cast<std::uint32_t>(M[i][j]);
  auto piv = rref(rows, F);
  std::vector<char> is_piv(n, 0);
  for (auto c : piv)
    is_piv[c] = 1;
  std::vector<std::vector<u64>> out;
  for (std::size_t f = 0; f < n; ++f) {
    if (is_piv[f])
      continue;
    std::vector<u64> v(n, 0);
    v[f] = 1;
    for (std::size_t i = 0; i < piv.size(); ++i)
      v[piv[i]] = F.sub(0, rows[i][f]);
    out.push_back(std::move(v));
  }
  return out;
}

u64 choose_prime(u64 exponent, u64 order)
{
  u64 bound = 2 * static_cast<u64>(isqrt(static_cast<i64>(order)));
  if (bound * bound < 4 * order)
    bound += 2; // 2 * ceil(sqrt(order))
  for (u64 l = exponent + 1; l < simd::max_modulus; l += exponent)
    if (l > bound && is_prime(static_cast<i64>(l)))
      return l;
  throw InternalError("no prime = 1 (mod " + std::to_string(exponent) + ") below 2^24");
}

std::vector<std::vector<Cyclotomic>> linear_rows(ConjugacyData const &cd, NormalStructure const &ns)
{
  auto const &inv = ns.abelian_invariants;
  std::size_t s = inv.size();
  u64 M = s ? inv.back() : 1;
  std::size_t count = ns.abelianization_order();
  std::vector<std::vector<Cyclotomic>> rows;
  std::vector<u64> tup(s, 0);
  for (std::size_t c = 0; c < count; ++c) {
    std::vector<Cyclotomic> row;
    for (std::size_t j = 0; j < cd.num_classes; ++j) {
      auto pr = ns.project(cd.reps[j]);
      u64 ex = 0;
      for (std::size_t i = 0; i < s; ++i)
        ex = (ex + tup[i] * pr[i] % inv[i] * (M / inv[i])) % M;
      row.push_back(Cyclotomic::root(M, static_cast<i64>(ex)));
    }
    rows.push_back(std::move(row));
    for (std::size_t i = 0; i < s; ++i) {
      if (++tup[i] < inv[i])
        break;
      tup[i] = 0;
    }
  }
  return rows;
}

// Sparse integer vectors in Z[C_e] for exact bilinear sums.
struct IntVec
{
  std::vector<std::pair<std::uint32_t, i64>> terms;
};

IntVec to_intvec(Cyclotomic const &x, u64 e)
{
  auto c = x.integer_coeffs(e);
  if (!c)
    throw InputError("character value " + x.to_string() + " is not an algebraic integer on the integral basis");
  IntVec out;
  for (std::size_t i = 0; i < c->size(); ++i)
    if ((*c)[i])
      out.terms.emplace_back(static_cast<std::uint32_t>(i), (*c)[i]);
  return out;
}

void accumulate_product(std::vector<i64> &acc, IntVec const &a, IntVec const &b, i64 scale)
{
  std::size_t e = acc.size();
  for (auto const &[ea, ca] : a.terms)
    for (auto const &[eb, cb] : b.terms)
      acc[(ea + eb) % e] += scale * ca * cb;
}

std::string value_key(std::vector<Cyclotomic> const &row)
{
  std::string s;
  for (auto const &x : row)
    s += x.to_string() + ";";
  return s;
}

} // namespace

Cyclotomic from_exponent_vector(std::vector<i64> const &v)
{
  std::vector<std::pair<i64, mpq_class>> terms;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i])
      terms.emplace_back(static_cast<i64>(i), mpq_class(static_cast<long>(v[i])));
  return Cyclotomic::from_terms(v.size(), terms);
}

u64 root_of_unity_order(Cyclotomic const &x)
{
  auto pow = [&](u64 e) {
    Cyclotomic r(1L), b = x;
    while (e) {
      if (e & 1)
        r *= b;
      b *= b;
      e >>= 1;
    }
    return r;
  };
  // a root of unity with conductor c is +-zeta_c^a, a a unit
  u64 c = x.conductor();
  Cyclotomic one(1L);
  if (pow(c) == one)
    return c;
  if (pow(2 * c) == one)
    return 2 * c;
  throw InputError("value " + x.to_string() + " is not a root of unity");
}

std::vector<std::uint32_t> CharacterTable::kernel_classes(std::size_t i) const
{
  std::vector<std::uint32_t> out;
  Cyclotomic d(static_cast<long>(degrees[i]));
  for (std::uint32_t j = 0; j < classes.num_classes; ++j)
    if (chars[i][j] == d)
      out.push_back(j);
  return out;
}

CharacterTable assemble_table(ConjugacyData classes, std::vector<std::vector<Cyclotomic>> rows,
                              GroupPtr group)
{
  std::size_t r = rows.size();
  for (auto const &row : rows)
    if (row.size() != classes.num_classes)
      throw InputError("character row has " + std::to_string(row.size()) + " entries, expected " +
                       std::to_string(classes.num_classes));
  std::vector<i64> deg(r);
  for (std::size_t i = 0; i < r; ++i) {
    auto d = rows[i].empty() ? std::optional<i64>() : rows[i][0].as_i64();
    if (!d || *d <= 0)
      throw InputError("character " + std::to_string(i) + " has no positive integer degree");
    deg[i] = *d;
  }
  std::vector<std::size_t> idx(r);
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<std::string> keys(r);
  std::vector<char> principal(r, 0);
  for (std::size_t i = 0; i < r; ++i) {
    keys[i] = value_key(rows[i]);
    principal[i] = std::all_of(rows[i].begin(), rows[i].end(),
                               [](Cyclotomic const &x) { return x == Cyclotomic(1L); });
  }
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (principal[a] != principal[b])
      return principal[a] > principal[b];
    if (deg[a] != deg[b])
      return deg[a] < deg[b];
    return keys[a] < keys[b];
  });

  CharacterTable t;
  t.group = std::move(group);
  t.classes = std::move(classes);
  for (std::size_t i : idx) {
    t.chars.push_back(std::move(rows[i]));
    t.degrees.push_back(deg[i]);
  }
  if (r == 0 || !principal[idx[0]])
    throw InputError("character table has no principal character");
  t.principal_index = 0;

  std::map<std::string, std::uint32_t> by_key;
  for (std::uint32_t i = 0; i < r; ++i)
    by_key[value_key(t.chars[i])] = i;
  t.conjugate_char.assign(r, 0);
  for (std::uint32_t i = 0; i < r; ++i) {
    std::vector<Cyclotomic> cj;
    for (auto const &x : t.chars[i])
      cj.push_back(x.conj());
    auto it = by_key.find(value_key(cj));
    if (it == by_key.end())
      throw InputError("complex conjugate of character " + std::to_string(i) + " is not a row");
    t.conjugate_char[i] = it->second;
  }
  for (std::uint32_t i = 0; i < r; ++i)
    if (t.degrees[i] == 1) {
      u64 o = 1;
      for (auto const &x : t.chars[i])
        o = std::lcm(o, root_of_unity_order(x));
      t.linear_indices.push_back(i);
      t.linear_orders.push_back(o);
    }
  return t;
}

CharacterTable linear_characters(FiniteGroup const &g)
{
  ConjugacyData cd = conjugacy(g);
  NormalStructure ns = normal_structure(g);
  auto rows = linear_rows(cd, ns);
  // partial table: rows need not be square
  CharacterTable t;
  t.classes = cd;
  std::sort(rows.begin(), rows.end(), [](auto const &a, auto const &b) {
    bool pa = std::all_of(a.begin(), a.end(), [](Cyclotomic const &x) { return x == Cyclotomic(1L); });
    bool pb = std::all_of(b.begin(), b.end(), [](Cyclotomic const &x) { return x == Cyclotomic(1L); });
    if (pa != pb)
      return pa;
    return value_key(a) < value_key(b);
  });
  for (auto &row : rows) {
    u64 o = 1;
    for (auto const &x : row)
      o = std::lcm(o, root_of_unity_order(x));
    t.linear_indices.push_back(static_cast<std::uint32_t>(t.chars.size()));
    t.linear_orders.push_back(o);
    t.degrees.push_back(1);
    t.chars.push_back(std::move(row));
  }
  return t;
}

CharacterTable compute_table(GroupPtr const &gp, u64 seed)
{
  FiniteGroup const &g = *gp;
  ConjugacyData cd = conjugacy(g);
  std::size_t r = cd.num_classes, v = g.order();

  if (g.is_abelian()) {
    NormalStructure ns = normal_structure(g);
    CharacterTable t = assemble_table(cd, linear_rows(cd, ns), gp);
    if (auto bad = check_table(t))
      throw InternalError("abelian character table failed verification: " + *bad);
    return t;
  }

  u64 e = cd.exponent;
  u64 ell = choose_prime(e, v);
  ModP F{ell};
  std::mt19937_64 rng(seed);

  // a[(i*r + j)*r + k] = #{(x,y) in C_i x C_j : xy = rep_k}
  std::vector<std::uint32_t> a(r * r * r, 0);
  for (std::size_t k = 0; k < r; ++k) {
    Elem z = cd.reps[k];
    for (Elem x = 0; x < v; ++x) {
      Elem y = g.mul(g.inv(x), z);
      ++a[(cd.class_of[x] * r + cd.class_of[y]) * r + k];
    }
  }

  struct Space
  {
    std::vector<Row> basis;
    std::vector<std::size_t> pivots;
  };
  std::vector<Space> done, todo;
  {
    Space s;
    for (std::size_t i = 0; i < r; ++i) {
      Row row(r, 0);
      row[i] = 1;
      s.basis.push_back(row);
      s.pivots.push_back(i);
    }
    todo.push_back(std::move(s));
  }
  // classes with larger size tend to separate characters sooner
  std::vector<std::size_t> order(r);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin() + 1, order.end(),
                   [&](std::size_t x, std::size_t y) { return cd.sizes[x] > cd.sizes[y]; });

  for (std::size_t oi = 1; oi < r && !todo.empty(); ++oi) {
    std::size_t i = order[oi];
    std::vector<Space> next;
    for (auto &sp : todo) {
      std::size_t m = sp.basis.size();
      std::vector<std::vector<u64>> R(m, std::vector<u64>(m));
      for (std::size_t t = 0; t < m; ++t) {
        std::uint32_t const *arow = a.data() + (i * r + sp.pivots[t]) * r;
        std::vector<std::uint32_t> red(arow, arow + r);
        for (auto &x : red)
          x = static_cast<std::uint32_t>(x % ell);
        for (std::size_t s = 0; s < m; ++s)
          R[t][s] = simd::dot_mod(red.data(), sp.basis[s].data(), r, static_cast<std::uint32_t>(ell));
      }
      auto roots = distinct_roots(charpoly(R, F), F, rng);
      if (roots.size() <= 1) {
        next.push_back(std::move(sp));
        continue;
      }
      std::size_t total = 0;
      for (u64 lam : roots) {
        auto M = R;
        for (std::size_t t = 0; t < m; ++t)
          M[t][t] = F.sub(M[t][t], lam);
        auto ns = nullspace(M, F);
        Space piece;
        for (auto const &c : ns) {
          Row w(r, 0);
          for (std::size_t t = 0; t < m; ++t)
            if (c[t])
              simd::axpy_mod(w.data(), sp.basis[t].data(), r, static_cast<std::uint32_t>(c[t]),
                             static_cast<std::uint32_t>(ell));
          piece.basis.push_back(std::move(w));
        }
        piece.pivots = rref(piece.basis, F);
        total += piece.basis.size();
        next.push_back(std::move(piece));
      }
      if (total != m)
        throw InternalError("class matrix restriction is not diagonalizable mod " + std::to_string(ell));
    }
    todo.clear();
    for (auto &sp : next)
      (sp.basis.size() == 1 ? done : todo).push_back(std::move(sp));
  }
  if (!todo.empty() || done.size() != r)
    throw InternalError("class matrices failed to separate all characters mod " + std::to_string(ell));

  // primitive e-th root of unity mod ell
  u64 zgen = powmod(static_cast<u64>(primitive_root(static_cast<i64>(ell))), (ell - 1) / e, ell);
  i64 root_v = isqrt(static_cast<i64>(v));
  std::vector<std::vector<Cyclotomic>> rows;
  for (auto const &sp : done) {
    Row const &w = sp.basis[0];
    if (w[0] == 0)
      throw InternalError("central character vanishes at the identity");
    u64 w0inv = F.inv(w[0]);
    std::vector<u64> omega(r);
    for (std::size_t j = 0; j < r; ++j)
      omega[j] = F.mul(w[j], w0inv);
    u64 s = 0;
    for (std::size_t j = 0; j < r; ++j)
      s = F.add(s, F.mul(F.mul(omega[j], omega[cd.inverse_class[j]]), F.inv(cd.sizes[j] % ell)));
    if (s == 0)
      throw InternalError("degree equation degenerate mod " + std::to_string(ell));
    u64 d2 = F.mul(v % ell, F.inv(s));
    i64 deg = 0;
    for (i64 d = 1; d <= root_v; ++d)
      if (static_cast<u64>(d * d) % ell == d2) {
        deg = d;
        break;
      }
    if (deg == 0)
      throw InternalError("no degree in [1, sqrt|G|] matches mod " + std::to_string(ell));
    std::vector<u64> chi(r);
    for (std::size_t j = 0; j < r; ++j)
      chi[j] = F.mul(F.mul(static_cast<u64>(deg), omega[j]), F.inv(cd.sizes[j] % ell));

    std::vector<Cyclotomic> row;
    for (std::size_t j = 0; j < r; ++j) {
      u64 o = cd.rep_orders[j];
      u64 zo = powmod(zgen, e / o, ell);
      u64 oinv = F.inv(o % ell);
      std::vector<std::pair<i64, mpq_class>> terms;
      for (u64 k = 0; k < o; ++k) {
        u64 acc = 0;
        u64 step = powmod(zo, (o - k) % o, ell); // z_o^{-k}
        u64 zp = 1;
        for (u64 s2 = 0; s2 < o; ++s2) {
          acc = F.add(acc, F.mul(chi[cd.power_class[j][s2]], zp));
          zp = F.mul(zp, step);
        }
        u64 mk = F.mul(acc, oinv);
        if (mk > static_cast<u64>(deg))
          throw InternalError("eigenvalue multiplicity out of range while lifting class " + std::to_string(j));
        if (mk)
          terms.emplace_back(static_cast<i64>(k), mpq_class(static_cast<long>(mk)));
      }
      row.push_back(Cyclotomic::from_terms(o, terms));
    }
    rows.push_back(std::move(row));
  }
  CharacterTable t = assemble_table(cd, std::move(rows), gp);
  t.prime = ell;
  t.seed = seed;
  if (auto bad = check_table(t))
    throw InternalError("computed character table failed verification: " + *bad);
  return t;
}

std::optional<std::string> check_table(CharacterTable const &t)
{
  auto const &cd = t.classes;
  std::size_t r = cd.num_classes;
  if (r == 0)
    return "no classes";
  if (cd.sizes.size() != r || cd.centralizer_orders.size() != r || cd.inverse_class.size() != r)
    return "class data has wrong length";
  u64 sum = 0;
  for (std::size_t j = 0; j < r; ++j) {
    if (cd.sizes[j] * cd.centralizer_orders[j] != cd.order)
      return "class " + std::to_string(j) + ": size * centralizer != order";
    if (cd.inverse_class[j] >= r || cd.inverse_class[cd.inverse_class[j]] != j)
      return "inverse-class map is not an involution at class " + std::to_string(j);
    if (cd.sizes[cd.inverse_class[j]] != cd.sizes[j])
      return "class " + std::to_string(j) + " and its inverse class differ in size";
    sum += cd.sizes[j];
  }
  if (sum != cd.order)
    return "class sizes do not sum to the group order";
  if (cd.sizes[0] != 1)
    return "class 0 is not the identity class";
  if (t.chars.size() != r)
    return "table has " + std::to_string(t.chars.size()) + " characters for " + std::to_string(r) + " classes";
  for (std::size_t i = 0; i < r; ++i)
    if (t.chars[i].size() != r)
      return "character " + std::to_string(i) + " has wrong length";

  u64 e = cd.exponent;
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) {
      if (e % t.chars[i][j].conductor() != 0)
        return "value of character " + std::to_string(i) + " at class " + std::to_string(j) +
               " lies outside Q(zeta_exponent)";
      if (t.chars[i][cd.inverse_class[j]] != t.chars[i][j].conj())
        return "character " + std::to_string(i) + ": value at inverse of class " + std::to_string(j) +
               " is not the complex conjugate";
    }

  std::vector<std::vector<IntVec>> iv(r, std::vector<IntVec>(r)), ivc(r, std::vector<IntVec>(r));
  try {
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j) {
        iv[i][j] = to_intvec(t.chars[i][j], e);
        ivc[i][j] = to_intvec(t.chars[i][cd.inverse_class[j]], e);
      }
  } catch (InputError const &err) {
    return std::string(err.what());
  }

  std::vector<i64> acc(e);
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = a; b < r; ++b) {
      std::fill(acc.begin(), acc.end(), 0);
      for (std::size_t j = 0; j < r; ++j)
        accumulate_product(acc, iv[a][j], ivc[b][j], static_cast<i64>(cd.sizes[j]));
      Cyclotomic got = from_exponent_vector(acc);
      Cyclotomic want(a == b ? static_cast<long>(cd.order) : 0L);
      if (got != want)
        return "row orthogonality fails for characters (" + std::to_string(a) + "," + std::to_string(b) +
               "): got " + got.to_string();
    }
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = a; b < r; ++b) {
      std::fill(acc.begin(), acc.end(), 0);
      for (std::size_t i = 0; i < r; ++i)
        accumulate_product(acc, iv[i][a], ivc[i][b], 1);
      Cyclotomic got = from_exponent_vector(acc);
      Cyclotomic want(a == b ? static_cast<long>(cd.centralizer_orders[a]) : 0L);
      if (got != want)
        return "column orthogonality fails for classes (" + std::to_string(a) + "," + std::to_string(b) +
               "): got " + got.to_string();
    }
  return std::nullopt;
}

void write_chartab(std::ostream &out, CharacterTable const &t)
{
  auto const &cd = t.classes;
  if (t.group)
    out << "# group " << t.group->label() << "\n";
  if (t.prime)
    out << "# prime " << t.prime << " seed " << t.seed << "\n";
  out << cd.order << " " << cd.num_classes << " " << cd.exponent << "\n";
  for (std::size_t j = 0; j < cd.num_classes; ++j)
    out << cd.sizes[j] << " " << cd.centralizer_orders[j] << " " << cd.rep_orders[j] << " "
        << cd.inverse_class[j] << "\n";
  for (auto const &row : t.chars) {
    for (std::size_t j = 0; j < row.size(); ++j)
      out << (j ? " " : "") << row[j].to_string();
    out << "\n";
  }
}

CharacterTable read_chartab(std::istream &in)
{
  std::vector<std::string> toks;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos)
      line.erase(hash);
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok)
      toks.push_back(tok);
  }
  std::size_t pos = 0;
  auto next_int = [&](char const *what) -> u64 {
    if (pos >= toks.size())
      throw InputError(std::string("character table: missing ") + what);
    std::string const &s = toks[pos++];
    try {
      std::size_t used = 0;
      long long x = std::stoll(s, &used);
      if (used != s.size() || x < 0)
        throw std::invalid_argument(s);
      return static_cast<u64>(x);
    } catch (std::exception const &) {
      throw InputError(std::string("character table: bad ") + what + " '" + s + "'");
    }
  };
  ConjugacyData cd;
  cd.order = next_int("order");
  cd.num_classes = next_int("class count");
  cd.exponent = next_int("exponent");
  if (cd.order == 0 || cd.num_classes == 0 || cd.exponent == 0)
    throw InputError("character table: header values must be positive");
  for (std::size_t j = 0; j < cd.num_classes; ++j) {
    cd.sizes.push_back(next_int("class size"));
    cd.centralizer_orders.push_back(next_int("centralizer order"));
    cd.rep_orders.push_back(static_cast<unsigned>(next_int("representative order")));
    u64 ic = next_int("inverse class");
    if (ic >= cd.num_classes)
      throw InputError("character table: inverse class index out of range");
    cd.inverse_class.push_back(static_cast<std::uint32_t>(ic));
  }
  std::vector<std::vector<Cyclotomic>> rows(cd.num_classes);
  for (auto &row : rows)
    for (std::size_t j = 0; j < cd.num_classes; ++j) {
      if (pos >= toks.size())
        throw InputError("character table: too few character values");
      row.push_back(Cyclotomic::parse(toks[pos++]));
    }
  if (pos != toks.size())
    throw InputError("character table: trailing data");
  CharacterTable t = assemble_table(std::move(cd), std::move(rows));
  if (auto bad = check_table(t))
    throw InputError("character table rejected: " + *bad);
  return t;
}

CharacterTable ingest_chartab(std::string const &path)
{
  std::ifstream in(path);
  if (!in)
    throw InputError("cannot open character table '" + path + "'");
  return read_chartab(in);
}

std::vector<Cyclotomic> class_function_from_char_values(CharacterTable const &t,
                                                        std::vector<Cyclotomic> const &coeffs)
{
  if (coeffs.size() != t.size())
    throw InputError("class function needs one coefficient per irreducible character");
  std::vector<Cyclotomic> out(t.classes.num_classes);
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (coeffs[i].is_zero())
      continue;
    for (std::size_t j = 0; j < out.size(); ++j)
      out[j] += coeffs[i] * t.chars[i][j];
  }
  return out;
}

TableStructure table_structure(CharacterTable const &t)
{
  TableStructure s;
  std::size_t r = t.classes.num_classes;
  s.derived_classes.assign(r, 1);
  for (std::uint32_t li : t.linear_indices) {
    std::vector<char> ker(r, 0);
    for (auto j : t.kernel_classes(li))
      ker[j] = 1;
    for (std::size_t j = 0; j < r; ++j)
      s.derived_classes[j] = s.derived_classes[j] && ker[j];
  }
  s.central_classes.assign(r, 0);
  for (std::size_t j = 0; j < r; ++j)
    s.central_classes[j] = t.classes.sizes[j] == 1;
  s.linear_count = t.linear_indices.size();
  for (std::size_t j = 0; j < r; ++j)
    if (s.derived_classes[j])
      s.derived_order += t.classes.sizes[j];
  return s;
}

IntCharMatrix::IntCharMatrix(CharacterTable const &t)
: e_(t.classes.exponent), r_(t.classes.num_classes)
{
  std::size_t n = t.size();
  data_.assign(n * r_ * e_, 0);
  conj_.assign(n * r_ * e_, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < r_; ++j) {
      auto c = t.chars[i][j].integer_coeffs(e_);
      auto cc = t.chars[i][j].conj().integer_coeffs(e_);
      if (!c || !cc)
        throw InputError("character value is not integral on the canonical basis");
      for (std::size_t x = 0; x < e_; ++x) {
        data_[(i * r_ + j) * e_ + x] = static_cast<std::int32_t>((*c)[x]);
        conj_[(i * r_ + j) * e_ + x] = static_cast<std::int32_t>((*cc)[x]);
      }
    }
}

} // namespace pds
