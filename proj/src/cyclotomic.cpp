#include "pds/cyclotomic.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>

namespace pds {

namespace {

using Acc = std::map<u64, mpq_class>;

struct PrimeShape
{
  u64 p, pv, step;
};

std::vector<PrimeShape> shape_of(u64 n)
{
  std::vector<PrimeShape> out;
  for (auto const &pp : factorize(static_cast<i64>(n)))
    out.push_back({static_cast<u64>(pp.p), static_cast<u64>(pp.value()), n / static_cast<u64>(pp.p)});
  return out;
}

void reduce_in_place(u64 n, Acc &acc)
{
  for (auto const &ps : shape_of(n)) {
    u64 low = ps.pv / ps.p;
    std::vector<std::pair<u64, mpq_class>> bad;
    for (auto it = acc.begin(); it != acc.end();) {
      if (it->second != 0 && (it->first % ps.pv) / low == ps.p - 1) {
        bad.emplace_back(it->first, it->second);
        it = acc.erase(it);
      } else {
        ++it;
      }
    }
    for (auto const &[e, c] : bad)
      for (u64 i = 1; i < ps.p; ++i)
        acc[(e + i * ps.step) % n] -= c;
  }
  for (auto it = acc.begin(); it != acc.end();)
    it = it->second == 0 ? acc.erase(it) : std::next(it);
}

} // namespace

std::string rational_string(mpq_class const &q)
{
  return q.get_str();
}

Cyclotomic::Cyclotomic(mpq_class const &r)
{
  mpq_class c = r;
  c.canonicalize();
  if (c != 0)
    terms_.emplace_back(0u, c);
}

Cyclotomic Cyclotomic::reduced(u64 n, std::vector<std::pair<u64, mpq_class>> acc_list)
{
  Acc acc;
  for (auto &[e, c] : acc_list) {
    c.canonicalize();
    acc[e % n] += c;
  }
  reduce_in_place(n, acc);
  // shrink the conductor while every exponent shares a factor with n
  for (;;) {
    u64 g = n;
    for (auto const &kv : acc)
      g = std::gcd(g, kv.first);
    if (acc.empty())
      g = n;
    if (g <= 1)
      break;
    Acc next;
    for (auto const &[e, c] : acc)
      next[e / g] += c;
    n /= g;
    reduce_in_place(n, next);
    acc.swap(next);
    if (n == 1)
      break;
  }
  Cyclotomic out;
  out.n_ = n;
  for (auto &kv : acc)
    out.terms_.emplace_back(static_cast<std::uint32_t>(kv.first), kv.second);
  return out;
}

Cyclotomic Cyclotomic::root(u64 n, i64 k)
{
  if (n == 0)
    throw InputError("root of unity with conductor 0");
  return reduced(n, {{static_cast<u64>(mod(k, static_cast<i64>(n))), mpq_class(1)}});
}

Cyclotomic Cyclotomic::from_terms(u64 n, std::vector<std::pair<i64, mpq_class>> const &terms)
{
  if (n == 0)
    throw InputError("cyclotomic conductor must be positive");
  std::vector<std::pair<u64, mpq_class>> acc;
  for (auto const &[e, c] : terms)
    acc.emplace_back(static_cast<u64>(mod(e, static_cast<i64>(n))), c);
  return reduced(n, std::move(acc));
}

std::vector<Cyclotomic::Term> Cyclotomic::terms_in(u64 m) const
{
  if (m % n_ != 0)
    throw InputError("cannot embed conductor " + std::to_string(n_) + " into " + std::to_string(m));
  if (m == n_)
    return terms_;
  Acc acc;
  u64 f = m / n_;
  for (auto const &[e, c] : terms_)
    acc[e * f] += c;
  reduce_in_place(m, acc);
  std::vector<Term> out;
  for (auto &kv : acc)
    out.emplace_back(static_cast<std::uint32_t>(kv.first), kv.second);
  return out;
}

std::optional<std::vector<std::int64_t>> Cyclotomic::integer_coeffs(u64 m) const
{
  std::vector<std::int64_t> out(m, 0);
  for (auto const &[e, c] : terms_in(m)) {
    if (c.get_den() != 1 || !c.get_num().fits_slong_p())
      return std::nullopt;
    out[e] = c.get_num().get_si();
  }
  return out;
}

Cyclotomic operator+(Cyclotomic const &a, Cyclotomic const &b)
{
  u64 n = std::lcm(a.n_, b.n_);
  std::vector<std::pair<u64, mpq_class>> acc;
  for (auto const &[e, c] : a.terms_)
    acc.emplace_back(e * (n / a.n_), c);
  for (auto const &[e, c] : b.terms_)
    acc.emplace_back(e * (n / b.n_), c);
  return Cyclotomic::reduced(n, std::move(acc));
}

Cyclotomic Cyclotomic::operator-() const
{
  Cyclotomic out = *this;
  for (auto &t : out.terms_)
    t.second = -t.second;
  return out;
}

Cyclotomic operator-(Cyclotomic const &a, Cyclotomic const &b)
{
  return a + (-b);
}

Cyclotomic operator*(Cyclotomic const &a, Cyclotomic const &b)
{
  if (a.is_zero() || b.is_zero())
    return Cyclotomic();
  u64 n = std::lcm(a.n_, b.n_);
  u64 fa = n / a.n_, fb = n / b.n_;
  std::vector<std::pair<u64, mpq_class>> acc;
  acc.reserve(a.terms_.size() * b.terms_.size());
  for (auto const &[ea, ca] : a.terms_)
    for (auto const &[eb, cb] : b.terms_)
      acc.emplace_back((ea * fa + eb * fb) % n, ca * cb);
  return Cyclotomic::reduced(n, std::move(acc));
}

bool operator==(Cyclotomic const &a, Cyclotomic const &b)
{
  if (a.n_ == b.n_)
    return a.terms_ == b.terms_;
  u64 n = std::lcm(a.n_, b.n_);
  return a.terms_in(n) == b.terms_in(n);
}

Cyclotomic Cyclotomic::galois(i64 j) const
{
  i64 n = static_cast<i64>(n_);
  if (std::gcd(mod(j, n), n) != 1 && n > 1)
    throw InputError("galois: " + std::to_string(j) + " is not coprime to " + std::to_string(n));
  std::vector<std::pair<u64, mpq_class>> acc;
  for (auto const &[e, c] : terms_)
    acc.emplace_back(static_cast<u64>(mod(static_cast<i64>(e) * mod(j, n), n)), c);
  return reduced(n_, std::move(acc));
}

std::optional<mpq_class> Cyclotomic::as_rational() const
{
  if (terms_.empty())
    return mpq_class(0);
  if (terms_.size() == 1 && terms_[0].first == 0)
    return terms_[0].second;
  return std::nullopt;
}

std::optional<mpz_class> Cyclotomic::as_integer() const
{
  auto r = as_rational();
  if (!r || r->get_den() != 1)
    return std::nullopt;
  return r->get_num();
}

std::optional<i64> Cyclotomic::as_i64() const
{
  auto z = as_integer();
  if (!z || !z->fits_slong_p())
    return std::nullopt;
  return z->get_si();
}

std::string Cyclotomic::to_string() const
{
  std::string s = std::to_string(n_) + ":[";
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (i)
      s += ",";
    s += std::to_string(terms_[i].first) + "=" + rational_string(terms_[i].second);
  }
  return s + "]";
}

Cyclotomic Cyclotomic::parse(std::string_view s)
{
  auto bad = [&](std::string const &why) {
    return InputError("cyclotomic '" + std::string(s) + "': " + why);
  };
  auto colon = s.find(':');
  if (colon == std::string_view::npos)
    throw bad("missing ':'");
  u64 n;
  try {
    std::size_t used = 0;
    std::string head(s.substr(0, colon));
    long long nn = std::stoll(head, &used);
    if (used != head.size() || nn <= 0)
      throw bad("bad conductor");
    n = static_cast<u64>(nn);
  } catch (InputError const &) {
    throw;
  } catch (std::exception const &) {
    throw bad("bad conductor");
  }
  std::string_view body = s.substr(colon + 1);
  if (body.size() < 2 || body.front() != '[' || body.back() != ']')
    throw bad("expected [..]");
  body = body.substr(1, body.size() - 2);
  std::vector<std::pair<i64, mpq_class>> terms;
  while (!body.empty()) {
    auto comma = body.find(',');
    std::string_view item = body.substr(0, comma);
    body = comma == std::string_view::npos ? std::string_view() : body.substr(comma + 1);
    auto eq = item.find('=');
    if (eq == std::string_view::npos)
      throw bad("term without '='");
    i64 e;
    mpq_class c;
    try {
      std::size_t used = 0;
      std::string es(item.substr(0, eq));
      e = std::stoll(es, &used);
      if (used != es.size())
        throw bad("bad exponent");
      std::string cs(item.substr(eq + 1));
      if (cs.empty() || c.set_str(cs, 10) != 0)
        throw bad("bad coefficient '" + cs + "'");
      if (c.get_den() == 0)
        throw bad("zero denominator");
      c.canonicalize();
    } catch (InputError const &) {
      throw;
    } catch (std::exception const &) {
      throw bad("bad term");
    }
    terms.emplace_back(e, c);
  }
  return from_terms(n, terms);
}

} // namespace pds
