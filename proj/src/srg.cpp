#include "pds/srg.hpp"

#include <fstream>
#include <numeric>
#include <sstream>

namespace pds {

bool SrgParams::counting_ok() const
{
  using W = __int128;
  return W(k) * (k - lambda - 1) == W(v - k - 1) * mu;
}

bool SrgParams::primitive() const
{
  return 0 < mu && mu < k;
}

std::string SrgParams::to_string() const
{
  std::ostringstream os;
  os << "(" << v << "," << k << "," << lambda << "," << mu << ")";
  return os.str();
}

Eigendata eigendata(SrgParams const &p)
{
  if (p.v < 2 || p.k < 0 || p.lambda < 0 || p.mu < 0 || p.k >= p.v)
    throw InputError("parameters out of range: " + p.to_string());
  if (!p.counting_ok())
    throw InputError("counting identity k(k-lambda-1) = (v-k-1)mu fails for " + p.to_string());
  if (!p.primitive())
    throw InputError("imprimitive parameters (need 0 < mu < k): " + p.to_string());

  Eigendata e;
  i64 lm = p.lambda - p.mu;
  e.delta = lm * lm + 4 * (p.k - p.mu);
  e.sqrt_delta = exact_sqrt(e.delta);
  if (!e.sqrt_delta) {
    e.conference = (p.v - 1) % 4 == 0 && 2 * p.k == p.v - 1 && 4 * p.lambda == p.v - 5 &&
                   4 * p.mu == p.v - 1;
    if (!e.conference) {
      e.infeasible = "irrational eigenvalues without conference shape";
      return e;
    }
    e.m1 = e.m2 = (p.v - 1) / 2;
    return e;
  }
  i64 s = *e.sqrt_delta;
  e.theta1 = (lm + s) / 2;
  e.theta2 = (lm - s) / 2;
  if ((lm + s) % 2 != 0) {
    e.infeasible = "eigenvalues not integral";
    return e;
  }
  __int128 x = 2 * static_cast<__int128>(p.k) + static_cast<__int128>(p.v - 1) * lm;
  if (x % s != 0 || ((p.v - 1) - x / s) % 2 != 0) {
    e.infeasible = "multiplicities not integral";
    return e;
  }
  e.m1 = static_cast<i64>(((p.v - 1) - x / s) / 2);
  e.m2 = static_cast<i64>(((p.v - 1) + x / s) / 2);
  if (e.m1 < 0 || e.m2 < 0)
    e.infeasible = "negative multiplicity";
  return e;
}

SrgParams complement(SrgParams const &p)
{
  return {p.v, p.v - p.k - 1, p.v - 2 * p.k + p.mu - 2, p.v - 2 * p.k + p.lambda};
}

std::vector<Factorization> factorizations(SrgParams const &p)
{
  auto e = eigendata(p);
  if (!e.sqrt_delta)
    throw InputError("factorizations need integral sqrt(Delta): " + p.to_string());
  i64 s = *e.sqrt_delta;
  i64 a = p.k - e.theta1, b = p.k - e.theta2;
  std::vector<Factorization> out;
  for (i64 mu1 : divisors(p.mu)) {
    i64 mu2 = p.mu / mu1;
    if (a % mu1 != 0 || b % mu2 != 0)
      continue;
    Factorization f;
    f.mu1 = mu1;
    f.mu2 = mu2;
    f.v1 = a / mu1;
    f.v2 = b / mu2;
    if (f.v1 * f.v2 != p.v)
      throw InternalError("factorization product mismatch for " + p.to_string());
    f.pi_alpha = coprime_part(f.v1, s);
    f.pi_beta = coprime_part(f.v2, s);
    f.primes_alpha = prime_divisors(f.pi_alpha);
    f.primes_beta = prime_divisors(f.pi_beta);
    out.push_back(std::move(f));
  }
  return out;
}

bool separates(Factorization const &f, i64 prime)
{
  return (f.v1 % prime == 0) != (f.v2 % prime == 0);
}

namespace {

bool is_prime_power(i64 q)
{
  return q > 1 && factorize(q).size() == 1;
}

[[noreturn]] void reject(std::string const &family, i64 arg, std::string const &need)
{
  throw InputError(family + "(" + std::to_string(arg) + ") requires " + need);
}

SrgParams wilson(i64 kk, i64 q, std::string const &family)
{
  i64 kk1 = kk * (kk - 1);
  // q = k(k-1)+1 is a single block: one-element group quotient, no PDS
  if (!is_prime_power(q) || mod(q, 2 * kk1) != kk1 + 1 || q == kk1 + 1)
    reject(family, q,
           "a prime power q = " + std::to_string(kk1 + 1) + " (mod " + std::to_string(2 * kk1) +
               ") with q > " + std::to_string(kk1 + 1));
  return {q * (q - 1) / kk1, kk * (q - kk) / (kk - 1), (q - 1) / (kk - 1) + (kk - 1) * (kk - 1) - 2,
          kk * kk};
}

} // namespace

SrgParams family_params(std::string const &family, i64 arg)
{
  if (family == "clapham") {
    if (!is_prime_power(arg) || mod(arg, 12) != 7 || arg <= 9)
      reject(family, arg, "a prime power q = 7 (mod 12) with q > 9");
    return {arg * (arg - 1) / 6, 3 * (arg - 3) / 2, (arg + 3) / 2, 9};
  }
  if (family.rfind("wilson(", 0) == 0 && family.back() == ')') {
    i64 kk = 0;
    try {
      std::size_t used = 0;
      std::string inner = family.substr(7, family.size() - 8);
      kk = std::stoll(inner, &used);
      if (used != inner.size())
        throw InputError("");
    } catch (std::exception const &) {
      throw InputError("bad family name " + family);
    }
    if (kk < 3)
      throw InputError("wilson(K) needs K >= 3");
    return wilson(kk, arg, family);
  }
  if (family == "buratti5")
    return wilson(5, arg, family);
  if (family == "fuji4") {
    if (!is_prime(arg) || mod(arg, 24) != 13 || arg == 13)
      reject(family, arg, "a prime p = 13 (mod 24) with p != 13");
    return wilson(4, arg, family);
  }
  if (family == "gq_even") {
    if (arg < 2 || arg % 2 != 0)
      reject(family, arg, "an even q >= 2");
    i64 q = arg;
    return {(q + 1) * (q * q * q - q * q + 1), q * (q * q - q + 1), q - 1, q * q - q + 1};
  }
  if (family == "hadamard_ds") {
    if (arg < 1)
      reject(family, arg, "w >= 1");
    i64 w2 = arg * arg;
    return {4 * w2 - 1, 2 * w2, w2, w2};
  }
  throw InputError("unknown family " + family);
}

std::vector<BatchRow> read_param_batch(std::istream &in)
{
  std::vector<BatchRow> rows;
  std::string line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    if (auto h = line.find('#'); h != std::string::npos)
      line.resize(h);
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first))
      continue;
    ls.clear();
    ls.seekg(0);
    BatchRow r;
    r.line = no;
    if (!(ls >> r.p.v >> r.p.k >> r.p.lambda >> r.p.mu))
      throw InputError("line " + std::to_string(no) + ": expected \"v k lambda mu\"");
    rows.push_back(r);
  }
  return rows;
}

std::vector<BatchRow> read_param_batch_file(std::string const &path)
{
  std::ifstream in(path);
  if (!in)
    throw InputError("cannot open " + path);
  return read_param_batch(in);
}

} // namespace pds
