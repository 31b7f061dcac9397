#include "pds/designs.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

#include "pds/search.hpp"

namespace pds {

namespace {

using Poly = std::vector<i64>; // low degree first

Poly digits_of(std::uint32_t x, i64 p, int d)
{
  Poly c(d);
  for (int i = 0; i < d; ++i) {
    c[i] = x % p;
    x /= static_cast<std::uint32_t>(p);
  }
  return c;
}

std::uint32_t encode(Poly const &c, i64 p)
{
  std::uint32_t x = 0;
  for (std::size_t i = c.size(); i-- > 0;)
    x = static_cast<std::uint32_t>(x * p + c[i]);
  return x;
}

// a * b mod the monic f, coefficients mod p
Poly mulmod(Poly const &a, Poly const &b, Poly const &f, i64 p)
{
  std::size_t d = f.size() - 1;
  Poly r(2 * d, 0);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  for (std::size_t i = r.size(); i-- > d;) {
    i64 c = r[i];
    if (c == 0)
      continue;
    for (std::size_t j = 0; j <= d; ++j)
      r[i - d + j] = mod(r[i - d + j] - c * f[j], p);
  }
  r.resize(d);
  return r;
}

// lowest monic irreducible of degree d by sieving out all products
Poly irreducible(i64 p, int d)
{
  i64 q = 1;
  for (int i = 0; i < d; ++i)
    q *= p;
  std::vector<char> reducible(static_cast<std::size_t>(q), 0);
  auto monic = [&](int deg, i64 low) {
    Poly c(deg + 1, 0);
    for (int i = 0; i < deg; ++i) {
      c[i] = low % p;
      low /= p;
    }
    c[deg] = 1;
    return c;
  };
  for (int i = 1; i <= d / 2; ++i) {
    i64 ni = 1, nj = 1;
    for (int s = 0; s < i; ++s)
      ni *= p;
    for (int s = 0; s < d - i; ++s)
      nj *= p;
    for (i64 x = 0; x < ni; ++x)
      for (i64 y = 0; y < nj; ++y) {
        auto a = monic(i, x), b = monic(d - i, y);
        Poly c(d + 1, 0);
        for (std::size_t s = 0; s < a.size(); ++s)
          for (std::size_t t = 0; t < b.size(); ++t)
            c[s + t] = (c[s + t] + a[s] * b[t]) % p;
        reducible[encode(Poly(c.begin(), c.end() - 1), p)] = 1;
      }
  }
  for (i64 low = 0; low < q; ++low)
    if (!reducible[static_cast<std::size_t>(low)])
      return monic(d, low);
  throw InternalError("no irreducible polynomial of degree " + std::to_string(d) + " over GF(" +
                      std::to_string(p) + ")");
}

} // namespace

Gf::Gf(i64 p, int d) : p_(p), d_(d)
{
  if (!is_prime(p))
    throw InputError("GF: " + std::to_string(p) + " is not prime");
  if (d < 1)
    throw InputError("GF: degree must be >= 1");
  q_ = 1;
  for (int i = 0; i < d; ++i) {
    q_ *= p;
    if (q_ > (d == 1 ? 100000 : 10000))
      throw InputError("GF: order too large for dense tables");
  }
  std::size_t n = static_cast<std::size_t>(q_ - 1);
  exp_.assign(n, 0);
  log_.assign(static_cast<std::size_t>(q_), -1);
  if (d == 1) {
    alpha_ = static_cast<std::uint32_t>(primitive_root(p));
    u64 x = 1;
    for (std::size_t e = 0; e < n; ++e) {
      exp_[e] = static_cast<std::uint32_t>(x);
      x = x * alpha_ % static_cast<u64>(p);
    }
  } else {
    modulus_ = irreducible(p, d);
    auto power = [&](Poly const &a, i64 e) {
      Poly r(d, 0), b = a;
      r[0] = 1;
      for (; e > 0; e >>= 1) {
        if (e & 1)
          r = mulmod(r, b, modulus_, p);
        b = mulmod(b, b, modulus_, p);
      }
      return r;
    };
    Poly one(d, 0);
    one[0] = 1;
    auto primes = prime_divisors(q_ - 1);
    bool found = false;
    for (std::uint32_t x = 2; x < q_ && !found; ++x) {
      auto a = digits_of(x, p, d);
      found = std::all_of(primes.begin(), primes.end(),
                          [&](i64 r) { return power(a, (q_ - 1) / r) != one; });
      if (found)
        alpha_ = x;
    }
    if (!found)
      throw InternalError("GF: no primitive element");
    Poly cur = one, a = digits_of(alpha_, p, d);
    for (std::size_t e = 0; e < n; ++e) {
      exp_[e] = encode(cur, p);
      cur = mulmod(cur, a, modulus_, p);
    }
  }
  for (std::size_t e = 0; e < n; ++e) {
    if (log_[exp_[e]] != -1)
      throw InternalError("GF: alpha is not primitive");
    log_[exp_[e]] = static_cast<i64>(e);
  }
}

std::uint32_t Gf::add(std::uint32_t a, std::uint32_t b) const
{
  if (d_ == 1)
    return static_cast<std::uint32_t>((a + b) % p_);
  std::uint32_t r = 0, pw = 1;
  for (int i = 0; i < d_; ++i) {
    r += static_cast<std::uint32_t>((a % p_ + b % p_) % p_) * pw;
    a /= static_cast<std::uint32_t>(p_);
    b /= static_cast<std::uint32_t>(p_);
    pw *= static_cast<std::uint32_t>(p_);
  }
  return r;
}

std::uint32_t Gf::neg(std::uint32_t a) const
{
  std::uint32_t r = 0, pw = 1;
  for (int i = 0; i < d_; ++i) {
    r += static_cast<std::uint32_t>((p_ - a % p_) % p_) * pw;
    a /= static_cast<std::uint32_t>(p_);
    pw *= static_cast<std::uint32_t>(p_);
  }
  return r;
}

std::uint32_t Gf::mul(std::uint32_t a, std::uint32_t b) const
{
  if (a == 0 || b == 0)
    return 0;
  return exp(log_[a] + log_[b]);
}

std::uint32_t Gf::inv(std::uint32_t a) const
{
  if (a == 0)
    throw InputError("GF: zero has no inverse");
  return exp(-log_[a]);
}

Gf gf_build(i64 p, int d)
{
  return Gf(p, d);
}

std::optional<std::vector<std::uint32_t>> find_base_block(Gf const &f, int k)
{
  i64 kk1 = static_cast<i64>(k) * (k - 1);
  if (k < 3)
    throw InputError("base block: k must be >= 3");
  if (mod(f.q(), 2 * kk1) != kk1 + 1)
    throw InputError("base block: q = " + std::to_string(f.q()) + " is not " + std::to_string(kk1 + 1) +
                     " mod " + std::to_string(2 * kk1));
  // -1 lies in coset kk1/2 because (q-1)/kk1 is odd
  i64 half = kk1 / 2;
  std::vector<char> used(static_cast<std::size_t>(kk1), 0);
  std::vector<std::uint32_t> block{0, 1};
  used[0] = used[static_cast<std::size_t>(half)] = 1;
  auto rec = [&](auto &&self, std::uint32_t from) -> bool {
    if (static_cast<int>(block.size()) == k)
      return true;
    for (std::uint32_t x = from; x < f.q(); ++x) {
      std::vector<std::size_t> taken;
      bool ok = true;
      for (std::uint32_t b : block) {
        auto c = static_cast<std::size_t>(mod(f.log(f.sub(x, b)), kk1));
        auto c2 = static_cast<std::size_t>((static_cast<i64>(c) + half) % kk1);
        if (used[c] || used[c2]) {
          ok = false;
          break;
        }
        used[c] = used[c2] = 1;
        taken.push_back(c);
        taken.push_back(c2);
      }
      if (ok) {
        block.push_back(x);
        if (self(self, x + 1))
          return true;
        block.pop_back();
      }
      for (auto c : taken)
        used[c] = 0;
    }
    return false;
  };
  if (!rec(rec, 2))
    return std::nullopt;
  return block;
}

std::vector<i64> difference_coset_counts(Gf const &f, std::vector<std::uint32_t> const &block)
{
  i64 k = static_cast<i64>(block.size());
  i64 kk1 = k * (k - 1);
  std::vector<i64> counts(static_cast<std::size_t>(kk1), 0);
  for (auto a : block)
    for (auto b : block)
      if (a != b)
        ++counts[static_cast<std::size_t>(mod(f.log(f.sub(a, b)), kk1))];
  return counts;
}

std::vector<std::vector<std::uint32_t>> design_blocks(Gf const &f, std::vector<std::uint32_t> const &block)
{
  i64 k = static_cast<i64>(block.size());
  i64 kk1 = k * (k - 1);
  i64 t = (f.q() - 1) / kk1;
  std::vector<std::vector<std::uint32_t>> out;
  for (i64 j = 0; j < t; ++j) {
    std::uint32_t h = f.exp(kk1 * j);
    for (std::uint32_t a = 0; a < f.q(); ++a) {
      std::vector<std::uint32_t> b;
      for (auto x : block)
        b.push_back(f.add(f.mul(h, x), a));
      std::sort(b.begin(), b.end());
      out.push_back(std::move(b));
    }
  }
  return out;
}

bool steiner_check(i64 points, std::vector<std::vector<std::uint32_t>> const &blocks)
{
  auto n = static_cast<std::size_t>(points);
  std::vector<std::uint8_t> seen(n * n, 0);
  for (auto const &b : blocks)
    for (std::size_t i = 0; i < b.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) {
        if (i == j)
          continue;
        if (b[i] >= n || b[i] == b[j] || ++seen[b[i] * n + b[j]] > 1)
          return false;
      }
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      if (x != y && seen[x * n + y] != 1)
        return false;
  return true;
}

bool buratti_condition(Gf const &f)
{
  i64 q = f.q();
  if (mod(q, 20) != 1)
    throw InputError("Buratti condition needs q = 1 (mod 20), got " + std::to_string(q));
  i64 t = (q - 1) / 20;
  int e = valuation(t, 2);
  auto lift = [&](i64 n) {
    std::uint32_t r = 0;
    for (i64 i = 0; i < n; ++i)
      r = f.add(r, 1);
    return r;
  };
  std::optional<std::uint32_t> root;
  for (std::uint32_t x = 1; x < q && !root; ++x)
    if (f.mul(x, x) == lift(5))
      root = x;
  if (!root)
    throw InputError("Buratti condition: 5 is not a square in GF(" + std::to_string(q) + ")");
  std::uint32_t x = f.mul(f.add(lift(11), f.mul(lift(5), *root)), f.inv(lift(2)));
  if (x == 0)
    return true;
  i64 m = i64{1} << (e + 1);
  // x is an m-th power iff log x is divisible by gcd(m, q-1) = m
  return f.log(x) % m != 0;
}

std::optional<SrgParams> block_graph_params(std::vector<std::vector<std::uint32_t>> const &blocks)
{
  std::size_t n = blocks.size();
  if (n > 4000)
    throw InputError("block graph: " + std::to_string(n) + " blocks exceed the explicit-graph limit");
  std::size_t words = (n + 63) / 64;
  std::vector<std::uint64_t> adj(n * words, 0);
  std::vector<std::vector<std::uint32_t>> sorted(blocks);
  for (auto &b : sorted)
    std::sort(b.begin(), b.end());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      std::size_t common = 0;
      auto const &a = sorted[i], &b = sorted[j];
      for (std::size_t s = 0, t = 0; s < a.size() && t < b.size();) {
        if (a[s] == b[t]) {
          ++common;
          ++s;
          ++t;
        } else if (a[s] < b[t]) {
          ++s;
        } else {
          ++t;
        }
      }
      if (common == 1) {
        adj[i * words + j / 64] |= std::uint64_t{1} << (j % 64);
        adj[j * words + i / 64] |= std::uint64_t{1} << (i % 64);
      }
    }
  auto degree = [&](std::size_t i) {
    i64 d = 0;
    for (std::size_t w = 0; w < words; ++w)
      d += __builtin_popcountll(adj[i * words + w]);
    return d;
  };
  SrgParams p{static_cast<i64>(n), n ? degree(0) : 0, -1, -1};
  for (std::size_t i = 0; i < n; ++i) {
    if (degree(i) != p.k)
      return std::nullopt;
    for (std::size_t j = i + 1; j < n; ++j) {
      i64 c = 0;
      for (std::size_t w = 0; w < words; ++w)
        c += __builtin_popcountll(adj[i * words + w] & adj[j * words + w]);
      bool edge = (adj[i * words + j / 64] >> (j % 64)) & 1;
      i64 &slot = edge ? p.lambda : p.mu;
      if (slot == -1)
        slot = c;
      else if (slot != c)
        return std::nullopt;
    }
  }
  return p;
}

namespace {

std::string family_for(int k, int d)
{
  if (k == 3)
    return "clapham";
  if (k == 4 && d == 1)
    return "fuji4";
  if (k == 5)
    return "buratti5";
  return "wilson(" + std::to_string(k) + ")";
}

// C_q x| <h>, h = alpha^{k(k-1)} acting by multiplication
std::string host_descriptor(Gf const &f, i64 t, std::uint32_t h)
{
  if (f.d() == 1)
    return "metacyclic(" + std::to_string(f.q()) + "," + std::to_string(t) + "," + std::to_string(h) + ")";
  int d = f.d();
  // column j holds the coordinates of h X^j
  std::vector<i64> m(static_cast<std::size_t>(d * d));
  std::uint32_t xj = 1;
  for (int j = 0; j < d; ++j) {
    auto col = digits_of(f.mul(h, xj), f.p(), d);
    for (int i = 0; i < d; ++i)
      m[static_cast<std::size_t>(i * d + j)] = col[i];
    xj = static_cast<std::uint32_t>(xj * f.p());
  }
  std::string s = "semidirect(" + std::to_string(f.p()) + "," + std::to_string(d) + "," + std::to_string(t);
  for (i64 x : m)
    s += "," + std::to_string(x);
  return s + ")";
}

} // namespace

DesignPds pds_from_design(Gf const &f, int k)
{
  auto block = find_base_block(f, k);
  if (!block)
    throw InputError("no base block for q = " + std::to_string(f.q()) + ", k = " + std::to_string(k));
  i64 kk1 = static_cast<i64>(k) * (k - 1);
  i64 t = (f.q() - 1) / kk1;
  if (t == 1)
    throw InputError("q = k(k-1) + 1 gives a single base block: the block graph is complete");
  DesignPds out;
  out.q = f.q();
  out.k = k;
  out.block = *block;
  out.family = family_for(k, f.d());
  out.params = family_params(out.family, f.q());
  std::uint32_t h = f.exp(kk1);
  out.descriptor = host_descriptor(f, t, h);
  out.group = std::make_shared<FiniteGroup const>(construct(out.descriptor));
  auto const &g = *out.group;
  if (static_cast<i64>(g.order()) != out.params.v)
    throw InternalError("host order " + std::to_string(g.order()) + " differs from v");
  if (t > 1 && g.is_abelian())
    throw InternalError("host group is abelian");

  // element a + q b is x -> h^b x + a
  std::vector<char> in_b(static_cast<std::size_t>(f.q()), 0);
  for (auto x : *block)
    in_b[x] = 1;
  std::vector<std::vector<std::uint32_t>> images(g.order());
  for (Elem e = 0; e < g.order(); ++e) {
    std::uint32_t a = e % static_cast<std::uint32_t>(f.q());
    i64 b = e / f.q();
    std::uint32_t hb = f.exp(kk1 * b);
    for (auto x : *block)
      images[e].push_back(f.add(f.mul(hb, x), a));
    std::sort(images[e].begin(), images[e].end());
  }
  std::vector<std::vector<std::uint32_t>> sorted(images);
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    for (Elem e = 1; e < g.order(); ++e)
      if (images[e] == images[0])
        throw InternalError("element " + std::to_string(e) + " stabilizes the base block");
  }
  for (Elem e = 1; e < g.order(); ++e) {
    int common = 0;
    for (auto x : images[e])
      common += in_b[x];
    if (common == 1)
      out.members.push_back(e);
  }
  auto got = verify_pds(g, out.members);
  if (!got || *got != out.params)
    throw InternalError("constructed set does not verify as " + out.params.to_string());
  return out;
}

void write_design(std::ostream &out, DesignPds const &d)
{
  out << d.q << ' ' << d.k << '\n';
  for (std::size_t i = 0; i < d.block.size(); ++i)
    out << (i ? " " : "") << d.block[i];
  out << '\n' << d.descriptor << '\n';
  write_pds(out, d.params, d.members);
}

DesignPds read_design(std::istream &in)
{
  DesignPds d;
  std::string line;
  if (!std::getline(in, line) || !(std::istringstream(line) >> d.q >> d.k))
    throw InputError("design file: expected \"q k\" on line 1");
  if (!std::getline(in, line))
    throw InputError("design file: missing base block");
  std::istringstream bs(line);
  for (i64 x; bs >> x;) {
    if (x < 0 || x >= d.q)
      throw InputError("design file: block element " + std::to_string(x) + " outside [0, q)");
    d.block.push_back(static_cast<std::uint32_t>(x));
  }
  if (static_cast<int>(d.block.size()) != d.k)
    throw InputError("design file: base block has " + std::to_string(d.block.size()) + " elements");
  if (!std::getline(in, d.descriptor) || d.descriptor.empty())
    throw InputError("design file: missing group descriptor");
  auto f = read_pds(in);
  d.params = f.params;
  d.members = f.members;
  d.group = std::make_shared<FiniteGroup const>(construct(d.descriptor));
  auto fac = factorize(d.q);
  d.family = fac.size() == 1 ? family_for(d.k, fac[0].e) : family_for(d.k, 0);
  auto got = verify_pds(*d.group, d.members);
  if (!got || *got != d.params)
    throw InputError("design file: members do not verify as " + d.params.to_string());
  return d;
}

} // namespace pds
