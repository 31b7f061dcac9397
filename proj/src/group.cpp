#include "pds/group.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>

namespace pds {

namespace {

std::string triple_str(Elem a, Elem b, Elem c)
{
  return "(" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + ")";
}

} // namespace

void validate_table(std::size_t n, std::vector<Elem> const &mult, u64 seed)
{
  if (n == 0)
    throw InputError("group table: order must be positive");
  if (mult.size() != n * n)
    throw InputError("group table: expected " + std::to_string(n * n) + " entries");
  for (Elem e : mult)
    if (e >= n)
      throw InputError("group table: entry " + std::to_string(e) + " out of range");

  std::vector<char> seen(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::fill(seen.begin(), seen.end(), 0);
    for (std::size_t j = 0; j < n; ++j) {
      if (seen[mult[i * n + j]]++)
        throw InputError("group table: row " + std::to_string(i) + " is not a permutation");
    }
    std::fill(seen.begin(), seen.end(), 0);
    for (std::size_t j = 0; j < n; ++j) {
      if (seen[mult[j * n + i]]++)
        throw InputError("group table: column " + std::to_string(i) + " is not a permutation");
    }
  }

  auto m = [&](Elem a, Elem b) { return mult[static_cast<std::size_t>(a) * n + b]; };
  auto check = [&](Elem a, Elem b, Elem c) {
    if (m(m(a, b), c) != m(a, m(b, c)))
      throw InputError("group table: associativity fails on triple " + triple_str(a, b, c));
  };
  if (n <= 200) {
    for (Elem a = 0; a < n; ++a)
      for (Elem b = 0; b < n; ++b)
        for (Elem c = 0; c < n; ++c)
          check(a, b, c);
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<Elem> pick(0, static_cast<Elem>(n - 1));
    for (std::size_t t = 0; t < 10 * n * n; ++t)
      check(pick(rng), pick(rng), pick(rng));
  }

  for (Elem i = 0; i < n; ++i)
    if (m(0, i) != i || m(i, 0) != i)
      throw InputError("group table: index 0 is not the identity (element " + std::to_string(i) + ")");
}

FiniteGroup::FiniteGroup(std::size_t order, std::vector<Elem> mult, std::string label,
                         bool trusted, u64 seed)
: n_(order), mult_(std::move(mult)), inv_(order), order_(order), label_(std::move(label))
{
  if (!trusted)
    validate_table(n_, mult_, seed);

  for (Elem a = 0; a < n_; ++a)
    for (Elem b = 0; b < n_; ++b)
      if (mul(a, b) == 0) {
        inv_[a] = b;
        break;
      }

  for (Elem a = 0; a < n_; ++a) {
    unsigned k = 1;
    for (Elem x = a; x != 0; x = mul(x, a))
      ++k;
    order_[a] = k;
    exponent_ = std::lcm(exponent_, static_cast<u64>(k));
  }
}

bool FiniteGroup::is_abelian() const
{
  for (Elem a = 0; a < n_; ++a)
    for (Elem b = a + 1; b < n_; ++b)
      if (mul(a, b) != mul(b, a))
        return false;
  return true;
}

Elem FiniteGroup::pow(Elem a, u64 e) const
{
  e %= order_[a];
  Elem r = 0;
  for (u64 i = 0; i < e; ++i)
    r = mul(r, a);
  return r;
}

FiniteGroup cyclic(std::size_t n)
{
  if (n == 0)
    throw InputError("cyclic(0) is not a group");
  std::vector<Elem> t(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      t[a * n + b] = static_cast<Elem>((a + b) % n);
  return FiniteGroup(n, std::move(t), "cyclic(" + std::to_string(n) + ")", true);
}

FiniteGroup dihedral(std::size_t n)
{
  if (n == 0)
    throw InputError("dihedral(0) is not a group");
  std::size_t v = 2 * n;
  std::vector<Elem> t(v * v);
  // r^a s^b * r^c s^d = r^(a + (-1)^b c) s^(b+d)
  for (std::size_t x = 0; x < v; ++x)
    for (std::size_t y = 0; y < v; ++y) {
      std::size_t a = x % n, b = x / n, c = y % n, d = y / n;
      std::size_t e = b ? (a + n - c) % n : (a + c) % n;
      t[x * v + y] = static_cast<Elem>(e + n * ((b + d) % 2));
    }
  return FiniteGroup(v, std::move(t), "dihedral(" + std::to_string(n) + ")", true);
}

FiniteGroup metacyclic(std::size_t q, std::size_t m, i64 t)
{
  if (q == 0 || m == 0)
    throw InputError("metacyclic: q and m must be positive");
  i64 qq = static_cast<i64>(q);
  if (std::gcd(mod(t, qq), qq) != 1 && q > 1)
    throw InputError("metacyclic: t = " + std::to_string(t) + " is not a unit mod " + std::to_string(q));
  i64 ord = multiplicative_order(t, qq);
  if (ord != static_cast<i64>(m))
    throw InputError("metacyclic: t = " + std::to_string(t) + " has order " + std::to_string(ord) +
                     " mod " + std::to_string(q) + ", expected " + std::to_string(m));
  std::vector<i64> tpow(m);
  tpow[0] = 1 % qq;
  for (std::size_t b = 1; b < m; ++b)
    tpow[b] = mod(tpow[b - 1] * t, qq);
  std::size_t v = q * m;
  std::vector<Elem> tab(v * v);
  for (std::size_t x = 0; x < v; ++x)
    for (std::size_t y = 0; y < v; ++y) {
      std::size_t a = x % q, b = x / q, c = y % q, d = y / q;
      std::size_t e = static_cast<std::size_t>((static_cast<i64>(a) + tpow[b] * static_cast<i64>(c)) % qq);
      tab[x * v + y] = static_cast<Elem>(e + q * ((b + d) % m));
    }
  return FiniteGroup(v, std::move(tab),
                     "metacyclic(" + std::to_string(q) + "," + std::to_string(m) + "," +
                       std::to_string(t) + ")",
                     true);
}

namespace {

using Mat = std::vector<i64>;

Mat mat_mul(Mat const &a, Mat const &b, std::size_t d, i64 n)
{
  Mat c(d * d, 0);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < d; ++k)
      for (std::size_t j = 0; j < d; ++j)
        c[i * d + j] = mod(c[i * d + j] + a[i * d + k] * b[k * d + j], n);
  return c;
}

Mat mat_identity(std::size_t d, i64 n)
{
  Mat c(d * d, 0);
  for (std::size_t i = 0; i < d; ++i)
    c[i * d + i] = 1 % n;
  return c;
}

} // namespace

FiniteGroup matrix_semidirect(std::size_t n, std::size_t d, std::size_t m,
                              std::vector<i64> const &matrix)
{
  if (n < 2 || d == 0 || m == 0)
    throw InputError("semidirect: need modulus >= 2, dimension >= 1, m >= 1");
  if (matrix.size() != d * d)
    throw InputError("semidirect: matrix must have d*d = " + std::to_string(d * d) + " entries");
  i64 nn = static_cast<i64>(n);
  Mat a(d * d);
  for (std::size_t i = 0; i < d * d; ++i)
    a[i] = mod(matrix[i], nn);

  std::vector<Mat> powers{mat_identity(d, nn)};
  for (std::size_t b = 1; b <= m; ++b)
    powers.push_back(mat_mul(powers.back(), a, d, nn));
  if (powers[m] != powers[0])
    throw InputError("semidirect: matrix^" + std::to_string(m) + " is not the identity");
  for (std::size_t b = 1; b < m; ++b)
    if (powers[b] == powers[0])
      throw InputError("semidirect: matrix has order " + std::to_string(b) + ", expected " +
                       std::to_string(m));

  std::size_t base = 1;
  for (std::size_t i = 0; i < d; ++i)
    base *= n;
  std::size_t v = base * m;
  if (v > 5000)
    throw InputError("semidirect: order " + std::to_string(v) + " too large");

  auto digits = [&](std::size_t w) {
    std::vector<i64> out(d);
    for (std::size_t i = 0; i < d; ++i) {
      out[i] = static_cast<i64>(w % n);
      w /= n;
    }
    return out;
  };
  // act[b][w] = A^b w
  std::vector<std::vector<std::size_t>> act(m, std::vector<std::size_t>(base));
  for (std::size_t b = 0; b < m; ++b)
    for (std::size_t w = 0; w < base; ++w) {
      auto x = digits(w);
      std::size_t out = 0, pw = 1;
      for (std::size_t i = 0; i < d; ++i) {
        i64 s = 0;
        for (std::size_t j = 0; j < d; ++j)
          s += powers[b][i * d + j] * x[j];
        out += static_cast<std::size_t>(mod(s, nn)) * pw;
        pw *= n;
      }
      act[b][w] = out;
    }
  auto add = [&](std::size_t x, std::size_t y) {
    std::size_t out = 0, pw = 1;
    for (std::size_t i = 0; i < d; ++i) {
      out += ((x % n + y % n) % n) * pw;
      x /= n;
      y /= n;
      pw *= n;
    }
    return out;
  };

  std::vector<Elem> tab(v * v);
  for (std::size_t x = 0; x < v; ++x)
    for (std::size_t y = 0; y < v; ++y) {
      std::size_t w1 = x % base, b1 = x / base, w2 = y % base, b2 = y / base;
      tab[x * v + y] = static_cast<Elem>(add(w1, act[b1][w2]) + base * ((b1 + b2) % m));
    }
  std::string label = "semidirect(" + std::to_string(n) + "," + std::to_string(d) + "," +
                      std::to_string(m);
  for (i64 e : a)
    label += "," + std::to_string(e);
  label += ")";
  return FiniteGroup(v, std::move(tab), label, true);
}

FiniteGroup direct_product(std::vector<FiniteGroup> const &factors)
{
  if (factors.empty())
    return cyclic(1);
  std::size_t v = 1;
  for (auto const &f : factors)
    v *= f.order();
  if (v > 5000)
    throw InputError("direct_product: order " + std::to_string(v) + " too large");
  std::vector<Elem> tab(v * v);
  for (std::size_t x = 0; x < v; ++x)
    for (std::size_t y = 0; y < v; ++y) {
      std::size_t xr = x, yr = y, out = 0, pw = 1;
      for (auto const &f : factors) {
        std::size_t o = f.order();
        out += f.mul(static_cast<Elem>(xr % o), static_cast<Elem>(yr % o)) * pw;
        xr /= o;
        yr /= o;
        pw *= o;
      }
      tab[x * v + y] = static_cast<Elem>(out);
    }
  std::string label = "direct_product(";
  for (std::size_t i = 0; i < factors.size(); ++i)
    label += (i ? "," : "") + factors[i].label();
  label += ")";
  return FiniteGroup(v, std::move(tab), label, true);
}

namespace {

class DescriptorParser
{
public:
  explicit DescriptorParser(std::string_view s) : s_(s) {}

  FiniteGroup parse()
  {
    FiniteGroup g = group();
    skip();
    if (pos_ != s_.size())
      fail("trailing characters");
    return g;
  }

private:
  std::string_view s_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(std::string const &msg) const
  {
    throw InputError("group descriptor '" + std::string(s_) + "': " + msg + " at position " +
                     std::to_string(pos_));
  }

  void skip()
  {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
  }

  bool peek(char c)
  {
    skip();
    return pos_ < s_.size() && s_[pos_] == c;
  }

  void expect(char c)
  {
    if (!peek(c))
      fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string ident()
  {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
      ++pos_;
    if (start == pos_)
      fail("expected a name");
    return std::string(s_.substr(start, pos_ - start));
  }

  i64 integer()
  {
    skip();
    std::size_t start = pos_;
    if (pos_ < s_.size() && s_[pos_] == '-')
      ++pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
    if (start == pos_ || (pos_ == start + 1 && s_[start] == '-'))
      fail("expected an integer");
    return std::stoll(std::string(s_.substr(start, pos_ - start)));
  }

  std::vector<i64> int_args()
  {
    std::vector<i64> out;
    expect('(');
    if (peek(')')) {
      ++pos_;
      return out;
    }
    for (;;) {
      out.push_back(integer());
      if (peek(',')) {
        ++pos_;
        continue;
      }
      expect(')');
      return out;
    }
  }

  static std::size_t positive(i64 x, char const *what)
  {
    if (x <= 0)
      throw InputError(std::string("group descriptor: ") + what + " must be positive");
    return static_cast<std::size_t>(x);
  }

  FiniteGroup group()
  {
    std::string name = ident();
    if (name == "direct_product") {
      std::vector<FiniteGroup> fs;
      expect('(');
      for (;;) {
        fs.push_back(group());
        if (peek(',')) {
          ++pos_;
          continue;
        }
        expect(')');
        break;
      }
      return direct_product(fs);
    }
    auto args = int_args();
    auto want = [&](std::size_t n) {
      if (args.size() != n)
        fail(name + " takes " + std::to_string(n) + " argument(s)");
    };
    if (name == "cyclic") {
      want(1);
      return cyclic(positive(args[0], "n"));
    }
    if (name == "dihedral") {
      want(1);
      return dihedral(positive(args[0], "n"));
    }
    if (name == "metacyclic") {
      want(3);
      return metacyclic(positive(args[0], "q"), positive(args[1], "m"), args[2]);
    }
    if (name == "semidirect") {
      if (args.size() < 4)
        fail("semidirect takes (n, d, m, matrix entries...)");
      std::size_t d = positive(args[1], "d");
      std::vector<i64> mat(args.begin() + 3, args.end());
      return matrix_semidirect(positive(args[0], "n"), d, positive(args[2], "m"), mat);
    }
    fail("unknown constructor '" + name + "'");
  }
};

} // namespace

FiniteGroup construct(std::string_view descriptor)
{
  return DescriptorParser(descriptor).parse();
}

FiniteGroup read_group_table(std::istream &in, std::string label)
{
  std::vector<long long> nums;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos)
      line.erase(hash);
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) {
      try {
        std::size_t used = 0;
        long long x = std::stoll(tok, &used);
        if (used != tok.size())
          throw std::invalid_argument(tok);
        nums.push_back(x);
      } catch (std::exception const &) {
        throw InputError("group table: bad token '" + tok + "'");
      }
    }
  }
  if (nums.empty())
    throw InputError("group table: empty file");
  if (nums[0] <= 0)
    throw InputError("group table: order must be positive");
  std::size_t n = static_cast<std::size_t>(nums[0]);
  if (nums.size() != 1 + n * n)
    throw InputError("group table: expected " + std::to_string(n * n) + " entries, found " +
                     std::to_string(nums.size() - 1));
  std::vector<Elem> t(n * n);
  for (std::size_t i = 0; i < n * n; ++i) {
    if (nums[i + 1] < 0 || static_cast<std::size_t>(nums[i + 1]) >= n)
      throw InputError("group table: entry " + std::to_string(nums[i + 1]) + " out of range");
    t[i] = static_cast<Elem>(nums[i + 1]);
  }
  return FiniteGroup(n, std::move(t), std::move(label));
}

FiniteGroup ingest_table(std::string const &path)
{
  std::ifstream in(path);
  if (!in)
    throw InputError("cannot open group table '" + path + "'");
  return read_group_table(in, path);
}

void write_group_table(std::ostream &out, FiniteGroup const &g)
{
  out << "# " << g.label() << "\n" << g.order() << "\n";
  std::size_t n = g.order();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j)
      out << (j ? " " : "") << g.mul(static_cast<Elem>(i), static_cast<Elem>(j));
    out << "\n";
  }
}

ConjugacyData conjugacy(FiniteGroup const &g)
{
  std::size_t n = g.order();
  std::vector<std::vector<Elem>> classes;
  std::vector<std::int64_t> tmp(n, -1);
  for (Elem x = 0; x < n; ++x) {
    if (tmp[x] >= 0)
      continue;
    std::vector<Elem> cls;
    for (Elem h = 0; h < n; ++h) {
      Elem y = g.mul(g.inv(h), g.mul(x, h));
      if (tmp[y] < 0) {
        tmp[y] = static_cast<std::int64_t>(classes.size());
        cls.push_back(y);
      }
    }
    std::sort(cls.begin(), cls.end());
    classes.push_back(std::move(cls));
  }
  std::sort(classes.begin(), classes.end(), [&](auto const &a, auto const &b) {
    auto ka = std::make_tuple(a.size(), g.elt_order(a[0]), a[0]);
    auto kb = std::make_tuple(b.size(), g.elt_order(b[0]), b[0]);
    return ka < kb;
  });

  ConjugacyData cd;
  cd.order = n;
  cd.num_classes = classes.size();
  cd.exponent = g.exponent();
  cd.class_of.assign(n, 0);
  for (std::uint32_t j = 0; j < classes.size(); ++j)
    for (Elem x : classes[j])
      cd.class_of[x] = j;
  for (auto const &cls : classes) {
    cd.reps.push_back(cls[0]);
    cd.sizes.push_back(cls.size());
    cd.centralizer_orders.push_back(n / cls.size());
    cd.rep_orders.push_back(g.elt_order(cls[0]));
    cd.inverse_class.push_back(cd.class_of[g.inv(cls[0])]);
  }
  cd.members = std::move(classes);
  cd.power_class.resize(cd.num_classes);
  for (std::size_t j = 0; j < cd.num_classes; ++j) {
    auto &pc = cd.power_class[j];
    pc.resize(cd.exponent);
    Elem x = 0;
    for (u64 s = 0; s < cd.exponent; ++s) {
      pc[s] = cd.class_of[x];
      x = g.mul(x, cd.reps[j]);
    }
  }
  return cd;
}

std::vector<Elem> subgroup_closure(FiniteGroup const &g, std::vector<Elem> const &gens)
{
  std::vector<char> in(g.order(), 0);
  std::vector<Elem> out{0};
  in[0] = 1;
  for (std::size_t i = 0; i < out.size(); ++i)
    for (Elem s : gens) {
      Elem y = g.mul(out[i], s);
      if (!in[y]) {
        in[y] = 1;
        out.push_back(y);
      }
    }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

std::vector<Elem> commutator_subgroup(FiniteGroup const &g, std::vector<Elem> const &k)
{
  std::vector<char> seen(g.order(), 0);
  std::vector<Elem> comms;
  for (Elem x : k)
    for (Elem y : k) {
      Elem c = g.mul(g.mul(g.inv(x), g.inv(y)), g.mul(x, y));
      if (!seen[c]) {
        seen[c] = 1;
        comms.push_back(c);
      }
    }
  return subgroup_closure(g, comms);
}

// Basis of a finite abelian group given by its table (index 0 = identity).
struct AbelianBasis
{
  std::vector<u64> invariants;
  std::vector<std::size_t> gens;
};

AbelianBasis abelian_basis(std::size_t m, std::function<std::size_t(std::size_t, std::size_t)> const &mul)
{
  std::vector<u64> ord(m, 1);
  for (std::size_t a = 0; a < m; ++a) {
    u64 k = 1;
    for (std::size_t x = a; x != 0; x = mul(x, a))
      ++k;
    ord[a] = k;
  }
  // cyclic-factor exponents per prime from counts of elements of p-power-dividing order
  std::vector<std::vector<int>> exps;
  std::vector<i64> primes;
  for (auto const &pp : factorize(static_cast<i64>(m))) {
    std::vector<int> rank_at;
    i64 pk = 1;
    int prev_log = 0;
    for (int k = 1; k <= pp.e; ++k) {
      pk *= pp.p;
      std::size_t c = 0;
      for (std::size_t a = 0; a < m; ++a)
        if (static_cast<i64>(pk) % static_cast<i64>(ord[a]) == 0)
          ++c;
      int lg = 0;
      for (std::size_t t = c; t > 1; t /= static_cast<std::size_t>(pp.p))
        ++lg;
      rank_at.push_back(lg - prev_log);
      prev_log = lg;
    }
    std::vector<int> es;
    for (int k = 1; k <= pp.e; ++k) {
      int next = k < pp.e ? rank_at[k] : 0;
      for (int c = 0; c < rank_at[k - 1] - next; ++c)
        es.push_back(k);
    }
    std::sort(es.rbegin(), es.rend());
    primes.push_back(pp.p);
    exps.push_back(es);
  }
  std::size_t s = 0;
  for (auto const &es : exps)
    s = std::max(s, es.size());
  std::vector<u64> inv(s, 1);
  for (std::size_t pi = 0; pi < primes.size(); ++pi)
    for (std::size_t i = 0; i < exps[pi].size(); ++i)
      for (int e = 0; e < exps[pi][i]; ++e)
        inv[s - 1 - i] *= static_cast<u64>(primes[pi]);

  AbelianBasis out;
  out.invariants = inv;
  out.gens.assign(s, 0);
  std::vector<char> sub(m, 0);
  sub[0] = 1;
  std::vector<std::size_t> subl{0};

  std::function<bool(std::size_t)> pick = [&](std::size_t idx) -> bool {
    if (idx == 0)
      return true;
    std::size_t i = idx - 1;
    for (std::size_t cand = 1; cand < m; ++cand) {
      if (ord[cand] != inv[i])
        continue;
      bool ok = true;
      for (std::size_t x = cand; x != 0; x = mul(x, cand))
        if (sub[x]) {
          ok = false;
          break;
        }
      if (!ok)
        continue;
      std::size_t old = subl.size();
      for (std::size_t t = 0; t < old; ++t) {
        std::size_t y = subl[t];
        for (u64 j = 1; j < inv[i]; ++j) {
          y = mul(y, cand);
          sub[y] = 1;
          subl.push_back(y);
        }
      }
      out.gens[i] = cand;
      if (pick(i))
        return true;
      for (std::size_t t = old; t < subl.size(); ++t)
        sub[subl[t]] = 0;
      subl.resize(old);
    }
    return false;
  };
  if (!pick(s))
    throw InternalError("abelian basis search failed");
  return out;
}

} // namespace

std::size_t NormalStructure::derived_order() const
{
  return static_cast<std::size_t>(std::count(derived_members.begin(), derived_members.end(), 1));
}

std::size_t NormalStructure::abelianization_order() const
{
  std::size_t o = 1;
  for (u64 d : abelian_invariants)
    o *= d;
  return o;
}

std::vector<std::uint32_t> NormalStructure::project(Elem g) const
{
  std::size_t s = abelian_invariants.size();
  return std::vector<std::uint32_t>(projection.begin() + static_cast<std::ptrdiff_t>(g * s),
                                    projection.begin() + static_cast<std::ptrdiff_t>((g + 1) * s));
}

NormalStructure normal_structure(FiniteGroup const &g)
{
  std::size_t n = g.order();
  NormalStructure ns;

  std::vector<Elem> all(n);
  std::iota(all.begin(), all.end(), 0);
  std::vector<Elem> cur = all;
  ns.derived_series_lengths.push_back(n);
  std::vector<Elem> derived;
  for (;;) {
    auto next = commutator_subgroup(g, cur);
    if (derived.empty())
      derived = next;
    if (next.size() == cur.size())
      break;
    ns.derived_series_lengths.push_back(next.size());
    cur = std::move(next);
  }
  ns.is_solvable = cur.size() == 1;
  ns.derived_members.assign(n, 0);
  for (Elem x : derived)
    ns.derived_members[x] = 1;

  ns.center_members.assign(n, 0);
  for (Elem a = 0; a < n; ++a) {
    bool central = true;
    for (Elem b = 0; b < n && central; ++b)
      central = g.mul(a, b) == g.mul(b, a);
    ns.center_members[a] = central;
  }

  // quotient by G'
  std::vector<std::size_t> coset(n, SIZE_MAX);
  std::vector<Elem> coset_rep;
  for (Elem a = 0; a < n; ++a) {
    if (coset[a] != SIZE_MAX)
      continue;
    for (Elem d : derived)
      coset[g.mul(a, d)] = coset_rep.size();
    coset_rep.push_back(a);
  }
  std::size_t m = coset_rep.size();
  auto qmul = [&](std::size_t x, std::size_t y) { return coset[g.mul(coset_rep[x], coset_rep[y])]; };
  auto basis = abelian_basis(m, qmul);
  ns.abelian_invariants = basis.invariants;
  std::size_t s = basis.invariants.size();

  std::vector<std::vector<std::uint32_t>> coords(m);
  std::vector<std::uint32_t> tup(s, 0);
  for (std::size_t count = 0; count < m; ++count) {
    std::size_t x = 0;
    for (std::size_t i = 0; i < s; ++i)
      for (std::uint32_t j = 0; j < tup[i]; ++j)
        x = qmul(x, basis.gens[i]);
    coords[x] = tup;
    for (std::size_t i = 0; i < s; ++i) {
      if (++tup[i] < basis.invariants[i])
        break;
      tup[i] = 0;
    }
  }
  ns.projection.assign(n * s, 0);
  for (Elem a = 0; a < n; ++a) {
    auto const &c = coords[coset[a]];
    if (c.size() != s)
      throw InternalError("abelianization projection incomplete");
    std::copy(c.begin(), c.end(), ns.projection.begin() + static_cast<std::ptrdiff_t>(a * s));
  }
  return ns;
}

std::vector<Coset> coset_partition(FiniteGroup const &g, ConjugacyData const &cd,
                                   std::vector<char> const &mask)
{
  std::size_t n = g.order();
  if (mask.size() != n)
    throw InputError("coset_partition: mask has wrong length");
  std::vector<Elem> nmem;
  for (Elem a = 0; a < n; ++a)
    if (mask[a])
      nmem.push_back(a);
  if (nmem.empty() || !mask[0])
    throw InputError("coset_partition: mask does not contain the identity");
  for (Elem a : nmem)
    for (Elem b : nmem)
      if (!mask[g.mul(a, b)])
        throw InputError("coset_partition: mask is not closed (" + std::to_string(a) + "*" +
                         std::to_string(b) + ")");
  for (Elem x = 0; x < n; ++x)
    for (Elem a : nmem)
      if (!mask[g.mul(g.inv(x), g.mul(a, x))])
        throw InputError("coset_partition: subgroup is not normal (conjugate of " +
                         std::to_string(a) + " by " + std::to_string(x) + ")");

  std::vector<std::size_t> which(n, SIZE_MAX);
  std::vector<Coset> out;
  for (Elem a = 0; a < n; ++a) {
    if (which[a] != SIZE_MAX)
      continue;
    Coset c;
    for (Elem b : nmem) {
      Elem y = g.mul(a, b);
      which[y] = out.size();
      c.members.push_back(y);
    }
    std::sort(c.members.begin(), c.members.end());
    out.push_back(std::move(c));
  }
  for (std::uint32_t j = 0; j < cd.num_classes; ++j) {
    std::size_t w = which[cd.members[j][0]];
    bool inside = std::all_of(cd.members[j].begin(), cd.members[j].end(),
                              [&](Elem x) { return which[x] == w; });
    if (inside)
      out[w].classes.push_back(j);
  }
  return out;
}

} // namespace pds
