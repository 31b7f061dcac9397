#include "pds/cci.hpp"

#include <algorithm>
#include <mutex>
#include <ostream>
#include <thread>

#include "pds/simd.hpp"

namespace pds {

std::vector<i64> ClassConstraint::values() const
{
  if (kind == Kind::fixed_set)
    return fixed;
  std::vector<i64> out;
  for (i64 x = mod(residue, modulus); x <= size; x += modulus)
    out.push_back(x);
  return out;
}

namespace {

Eigendata integral_eigendata(SrgParams const &p, CciMode mode)
{
  auto e = eigendata(p);
  if (e.infeasible)
    throw InputError("parameters fail integrality: " + *e.infeasible);
  if (!e.sqrt_delta)
    throw InputError("class intersections need integral sqrt(Delta): " + p.to_string());
  if (mode == CciMode::reversible_ds && p.lambda != p.mu)
    throw InputError("reversible difference set mode needs lambda = mu: " + p.to_string());
  return e;
}

void check_order(CharacterTable const &t, SrgParams const &p)
{
  if (static_cast<i64>(t.order()) != p.v)
    throw InputError("group order " + std::to_string(t.order()) + " differs from v = " +
                     std::to_string(p.v));
}

} // namespace

IntersectionConstraints build_constraints(CharacterTable const &t, SrgParams const &p, CciMode mode)
{
  check_order(t, p);
  auto e = integral_eigendata(p, mode);
  i64 s = *e.sqrt_delta;
  auto const &cd = t.classes;
  std::size_t r = cd.num_classes;

  IntersectionConstraints out;
  out.params = p;
  out.mode = mode;
  out.inverse_class = cd.inverse_class;
  out.classes.resize(r);

  ValuePhi vp;
  if (mode == CciMode::regular_pds)
    vp = value_phi_constraints(t, p);

  for (std::size_t j = 0; j < r; ++j) {
    auto &c = out.classes[j];
    c.size = static_cast<i64>(cd.sizes[j]);
    i64 cent = static_cast<i64>(cd.centralizer_orders[j]);
    if (j == 0) {
      c.kind = ClassConstraint::Kind::fixed_set;
      c.fixed = mode == CciMode::regular_pds ? std::vector<i64>{0} : std::vector<i64>{0, 1};
      c.source = "identity";
    } else if (vp.applicable && vp.outside_N[j]) {
      auto res = modular_phi(cent, false, p.v, p);
      i64 n1 = p.k - e.theta1, n2 = p.k - e.theta2;
      bool int1 = n1 % cent == 0, int2 = n2 % cent == 0;
      auto fits = [&](i64 x) {
        return 0 <= x && x <= c.size && mod(x - res.residue, res.modulus) == 0;
      };
      if (int1 && int2) {
        // sqrt(Delta) / |C| is integral here; keep the whole progression through both values
        c.kind = ClassConstraint::Kind::residue;
        c.residue = mod(n2 / cent, s / cent);
        c.modulus = s / cent;
        c.source = "value_phi_progression";
      } else {
        c.kind = ClassConstraint::Kind::fixed_set;
        c.source = "value_phi";
        if (int1 && fits(n1 / cent))
          c.fixed.push_back(n1 / cent);
        if (int2 && fits(n2 / cent))
          c.fixed.push_back(n2 / cent);
      }
    } else {
      auto res = modular_phi(cent, false, p.v, p);
      c.kind = ClassConstraint::Kind::residue;
      c.residue = res.residue;
      c.modulus = res.modulus;
      c.source = res.modulus > 1 ? "modular" : "unconstrained";
    }
    if (!out.empty_class && c.values().empty()) {
      out.empty_class = j;
      out.note = "class " + std::to_string(j) + " (size " + std::to_string(c.size) +
                 ") admits no value from " + c.source;
    }
  }
  return out;
}

namespace {

struct Unit
{
  std::size_t cls;
  std::size_t partner; // == cls for a real class
  i64 weight;          // 1 or 2
  std::vector<i64> values;
};

struct Plan
{
  std::vector<Unit> units;
  // reach[u] bit x: sum x attainable by units u..end
  std::vector<std::vector<std::uint64_t>> reach;
  i64 k = 0;

  bool reachable(std::size_t u, i64 x) const
  {
    if (x < 0 || x > k)
      return false;
    return (reach[u][static_cast<std::size_t>(x) >> 6] >> (x & 63)) & 1u;
  }
};

Plan make_plan(IntersectionConstraints const &c)
{
  Plan pl;
  pl.k = c.params.k;
  std::size_t r = c.classes.size();
  for (std::size_t j = 0; j < r; ++j) {
    std::size_t inv = c.inverse_class[j];
    if (inv < j)
      continue;
    Unit u{j, inv, inv == j ? 1 : 2, c.classes[j].values()};
    if (inv != j) {
      auto other = c.classes[inv].values();
      std::vector<i64> both;
      std::set_intersection(u.values.begin(), u.values.end(), other.begin(), other.end(),
                            std::back_inserter(both));
      u.values = std::move(both);
    }
    pl.units.push_back(std::move(u));
  }
  std::size_t words = static_cast<std::size_t>(pl.k) / 64 + 1;
  pl.reach.assign(pl.units.size() + 1, std::vector<std::uint64_t>(words, 0));
  pl.reach.back()[0] = 1;
  for (std::size_t u = pl.units.size(); u-- > 0;) {
    auto &cur = pl.reach[u];
    auto const &nxt = pl.reach[u + 1];
    for (i64 val : pl.units[u].values) {
      i64 sh = val * pl.units[u].weight;
      if (sh > pl.k)
        break;
      for (i64 x = 0; x + sh <= pl.k; ++x)
        if ((nxt[static_cast<std::size_t>(x) >> 6] >> (x & 63)) & 1u) {
          std::size_t y = static_cast<std::size_t>(x + sh);
          cur[y >> 6] |= std::uint64_t(1) << (y & 63);
        }
    }
  }
  return pl;
}

struct Walker
{
  Plan const &pl;
  std::function<bool(IntersectionVector const &)> emit; // false: stop
  std::atomic<bool> const *cancel;
  IntersectionVector d;

  bool run(std::size_t u, i64 remaining)
  {
    if (cancel && cancel->load(std::memory_order_relaxed))
      return false;
    if (u == pl.units.size())
      return remaining != 0 || emit(d);
    auto const &unit = pl.units[u];
    for (i64 val : unit.values) {
      i64 used = val * unit.weight;
      if (used > remaining)
        break;
      if (!pl.reachable(u + 1, remaining - used))
        continue;
      d[unit.cls] = val;
      d[unit.partner] = val;
      if (!run(u + 1, remaining - used))
        return false;
    }
    return true;
  }
};

} // namespace

bool enumerate_vectors(IntersectionConstraints const &c,
                       std::function<void(IntersectionVector const &)> const &sink,
                       EnumerateOptions const &opt)
{
  if (c.infeasible())
    return true;
  Plan pl = make_plan(c);
  if (!pl.reachable(0, pl.k))
    return true;
  std::size_t r = c.classes.size();
  std::uint64_t emitted = 0;

  // forced prefix, then the first unit with a choice splits the work
  std::size_t split = 0;
  while (split < pl.units.size() && pl.units[split].values.size() == 1)
    ++split;
  if (opt.jobs <= 1 || split == pl.units.size()) {
    Walker w{pl,
             [&](IntersectionVector const &v) {
               sink(v);
               ++emitted;
               return opt.limit == 0 || emitted < opt.limit;
             },
             opt.cancel, IntersectionVector(r, 0)};
    return w.run(0, pl.k);
  }

  IntersectionVector prefix(r, 0);
  i64 remaining = pl.k;
  for (std::size_t u = 0; u < split; ++u) {
    auto const &unit = pl.units[u];
    prefix[unit.cls] = prefix[unit.partner] = unit.values[0];
    remaining -= unit.values[0] * unit.weight;
  }
  auto const &su = pl.units[split];
  std::size_t parts = su.values.size();
  std::vector<std::vector<IntersectionVector>> results(parts);
  std::vector<char> complete(parts, 1);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < parts;) {
      i64 val = su.values[i];
      i64 rem = remaining - val * su.weight;
      if (rem < 0 || !pl.reachable(split + 1, rem))
        continue;
      Walker w{pl,
               [&, i](IntersectionVector const &v) {
                 results[i].push_back(v);
                 return !stop.load(std::memory_order_relaxed) &&
                        (opt.limit == 0 || results[i].size() < opt.limit);
               },
               opt.cancel, prefix};
      w.d[su.cls] = w.d[su.partner] = val;
      if (!w.run(split + 1, rem))
        complete[i] = 0;
    }
  };
  std::vector<std::thread> pool;
  unsigned n = std::min<unsigned>(opt.jobs, static_cast<unsigned>(parts));
  for (unsigned i = 0; i < n; ++i)
    pool.emplace_back(worker);
  for (auto &th : pool)
    th.join();

  for (std::size_t i = 0; i < parts; ++i) {
    for (auto const &v : results[i]) {
      if (opt.limit && emitted >= opt.limit)
        return false;
      sink(v);
      ++emitted;
    }
    if (!complete[i])
      return false;
  }
  return !(opt.cancel && opt.cancel->load());
}

std::vector<IntersectionVector> enumerate_all(IntersectionConstraints const &c,
                                              EnumerateOptions const &opt)
{
  std::vector<IntersectionVector> out;
  enumerate_vectors(c, [&](IntersectionVector const &v) { out.push_back(v); }, opt);
  return out;
}

CharacterSums::CharacterSums(CharacterTable const &t)
: m_(t), n_chars_(t.size()), r_(t.classes.num_classes)
{
}

std::vector<std::optional<i64>> CharacterSums::sums(std::vector<i64> const &d) const
{
  std::size_t e = m_.conductor();
  std::vector<std::int32_t> acc(e);
  std::vector<std::optional<i64>> out(n_chars_);
  for (std::size_t chi = 0; chi < n_chars_; ++chi) {
    std::fill(acc.begin(), acc.end(), 0);
    for (std::size_t j = 0; j < r_; ++j)
      if (d[j])
        simd::axpy_i32(acc.data(), m_.coeff(chi, j), e, static_cast<std::int32_t>(d[j]));
    // rationals live on basis index 0 alone
    if (std::all_of(acc.begin() + 1, acc.end(), [](std::int32_t x) { return x == 0; }))
      out[chi] = acc[0];
  }
  return out;
}

std::vector<std::vector<std::uint32_t>> n_coset_classes(CharacterTable const &t,
                                                        LinearCharContext const &ctx)
{
  std::size_t r = t.classes.num_classes;
  std::vector<std::vector<std::uint32_t>> groups;
  std::vector<std::vector<std::string>> keys;
  for (std::size_t j = 0; j < r; ++j) {
    std::vector<std::string> key;
    for (std::size_t chi : ctx.H)
      key.push_back(t.chars[chi][j].to_string());
    auto it = std::find(keys.begin(), keys.end(), key);
    if (it == keys.end()) {
      keys.push_back(key);
      groups.push_back({static_cast<std::uint32_t>(j)});
    } else {
      groups[static_cast<std::size_t>(it - keys.begin())].push_back(static_cast<std::uint32_t>(j));
    }
  }
  return groups;
}

namespace {

// Vector-level checks shared by filter_vectors and phi_enumeration.
class VectorChecker
{
public:
  VectorChecker(CharacterTable const &t, SrgParams const &p, CciMode mode)
  : t_(t), p_(p), mode_(mode), e_(integral_eigendata(p, mode)), sums_(t)
  {
    if (mode == CciMode::regular_pds) {
      ctx_ = linear_context(t, p);
      if (ctx_.h_order > 1) {
        quotas_ = coset_intersections(ctx_, p);
        cosets_ = n_coset_classes(t, ctx_);
      }
    }
  }

  // first failing check, or empty
  std::string check(IntersectionVector const &d) const
  {
    auto s = sums_.sums(d);
    i64 sd = *e_.sqrt_delta;
    i64 weighted = 0;
    for (std::size_t chi = 0; chi < s.size(); ++chi) {
      if (!s[chi])
        return "character_sum_irrational";
      i64 deg = t_.degrees[chi];
      if (chi == t_.principal_index) {
        if (*s[chi] != p_.k)
          return "principal_sum";
        continue;
      }
      i64 num = *s[chi] - deg * e_.theta2;
      if (num % sd != 0 || num / sd < 0 || num / sd > deg)
        return "eigenspace_dimension";
      weighted += deg * (num / sd);
      if (deg == 1 && *s[chi] != e_.theta1 && *s[chi] != e_.theta2)
        return "linear_value";
    }
    // derived filter: sum chi(1) a_chi = m1, shifted by the identity in D
    i64 want = e_.m1;
    if (mode_ == CciMode::reversible_ds && d[0] == 1) {
      // Phi(1) = v: k + theta2 (v - 1) + sqrt(Delta) A = v
      i64 num = p_.v - p_.k - e_.theta2 * (p_.v - 1);
      if (num % sd != 0)
        return "multiplicity";
      want = num / sd;
    }
    if (weighted != want)
      return "multiplicity";
    if (order2_check(t_.classes, d))
      return "order2";
    if (ctx_.h_order > 1 && !quotas_ok(d, s))
      return "coset_quota";
    return {};
  }

  CharacterSums const &sums() const { return sums_; }

private:
  bool quotas_ok(IntersectionVector const &d, std::vector<std::optional<i64>> const &s) const
  {
    for (auto const &q : quotas_) {
      bool ok = true;
      for (std::size_t chi : ctx_.H)
        if (chi != t_.principal_index && *s[chi] != q.theta_alpha)
          ok = false;
      for (std::size_t g = 0; g < cosets_.size() && ok; ++g) {
        i64 sum = 0;
        for (auto j : cosets_[g])
          sum += d[j];
        ok = sum == (g == 0 ? q.n_quota : q.coset_quota);
      }
      if (ok)
        return true;
    }
    return false;
  }

  CharacterTable const &t_;
  SrgParams p_;
  CciMode mode_;
  Eigendata e_;
  CharacterSums sums_;
  LinearCharContext ctx_;
  std::vector<CosetQuota> quotas_;
  std::vector<std::vector<std::uint32_t>> cosets_;
};

} // namespace

FilterReport filter_vectors(CharacterTable const &t, SrgParams const &p,
                            std::vector<IntersectionVector> const &vectors, CciMode mode)
{
  check_order(t, p);
  VectorChecker chk(t, p, mode);
  FilterReport rep;
  for (auto const &d : vectors) {
    if (d.size() != t.classes.num_classes)
      throw InputError("vector length " + std::to_string(d.size()) + " differs from class count");
    auto why = chk.check(d);
    if (why.empty())
      rep.survivors.push_back(d);
    else
      ++rep.rejected[why];
  }
  return rep;
}

namespace {

struct Orbit
{
  std::vector<std::size_t> chars; // chi and its conjugate when distinct
  i64 degree;
};

} // namespace

PhiEnumeration phi_enumeration(CharacterTable const &t, SrgParams const &p, CciMode mode,
                               PhiOptions const &opt)
{
  check_order(t, p);
  auto e = integral_eigendata(p, mode);
  i64 sd = *e.sqrt_delta;
  auto const &cd = t.classes;
  std::size_t r = cd.num_classes;
  IntCharMatrix m(t);
  std::size_t ce = m.conductor();
  VectorChecker chk(t, p, mode);

  std::vector<Orbit> lin, nonlin;
  for (std::size_t chi = 0; chi < t.size(); ++chi) {
    if (chi == t.principal_index || t.conjugate_char[chi] < chi)
      continue;
    Orbit o{{chi}, t.degrees[chi]};
    if (t.conjugate_char[chi] != chi)
      o.chars.push_back(t.conjugate_char[chi]);
    (o.degree == 1 ? lin : nonlin).push_back(o);
  }
  if (lin.size() > 40)
    throw InputError("too many linear character orbits for phi enumeration");

  // orbit contribution per class on the canonical basis
  auto orbit_vec = [&](Orbit const &o) {
    std::vector<std::int32_t> w(r * ce, 0);
    for (std::size_t chi : o.chars)
      for (std::size_t j = 0; j < r; ++j)
        simd::axpy_i32(w.data() + j * ce, m.coeff(chi, j), ce, 1);
    return w;
  };
  std::vector<std::vector<std::int32_t>> wl, wn;
  for (auto const &o : lin)
    wl.push_back(orbit_vec(o));
  for (auto const &o : nonlin)
    wn.push_back(orbit_vec(o));

  // Phi with every a = 0: chi(D) = chi(1) theta2 off the principal character
  std::vector<std::int32_t> base(r * ce, 0);
  for (std::size_t j = 0; j < r; ++j)
    simd::axpy_i32(base.data() + j * ce, m.coeff(t.principal_index, j), ce,
                   static_cast<std::int32_t>(p.k));
  for (std::size_t o = 0; o < lin.size(); ++o)
    simd::axpy_i32(base.data(), wl[o].data(), r * ce, static_cast<std::int32_t>(e.theta2));
  for (std::size_t o = 0; o < nonlin.size(); ++o)
    simd::axpy_i32(base.data(), wn[o].data(), r * ce,
                   static_cast<std::int32_t>(e.theta2 * nonlin[o].degree));

  PhiEnumeration out;
  for (std::size_t j = 1; j < r; ++j) {
    bool det = true;
    for (auto const &o : nonlin)
      for (std::size_t chi : o.chars)
        if (!t.chars[chi][j].is_zero())
          det = false;
    if (det)
      out.linear_determined_classes.push_back(j);
  }

  auto rational = [&](std::int32_t const *x) -> std::optional<i64> {
    for (std::size_t i = 1; i < ce; ++i)
      if (x[i] != 0)
        return std::nullopt;
    return x[0];
  };
  // Phi(h_j) = |C| d with 0 <= d <= size
  auto class_value = [&](std::vector<std::int32_t> const &phi, std::size_t j) -> std::optional<i64> {
    auto v = rational(phi.data() + j * ce);
    i64 c = static_cast<i64>(cd.centralizer_orders[j]);
    if (!v || *v % c != 0 || *v / c < 0 || *v / c > static_cast<i64>(cd.sizes[j]))
      return std::nullopt;
    return *v / c;
  };

  // stage 1: linear patterns
  std::uint64_t patterns = std::uint64_t(1) << lin.size();
  std::vector<std::uint64_t> live;
  std::vector<std::int32_t> phi;
  for (std::uint64_t mask = 0; mask < patterns; ++mask) {
    phi = base;
    for (std::size_t o = 0; o < lin.size(); ++o)
      if (mask >> o & 1u)
        simd::axpy_i32(phi.data(), wl[o].data(), r * ce, static_cast<std::int32_t>(sd));
    bool ok = true;
    for (std::size_t j : out.linear_determined_classes)
      if (!class_value(phi, j)) {
        ok = false;
        break;
      }
    if (ok)
      live.push_back(mask);
  }
  out.stage_counts.push_back(patterns);
  out.stage_counts.push_back(live.size());
  std::uint64_t product = live.size();
  for (auto const &o : nonlin)
    product *= static_cast<std::uint64_t>(o.degree + 1);
  out.stage_counts.push_back(product);

  std::vector<i64> targets{0};
  if (mode == CciMode::reversible_ds)
    targets.push_back(p.v);

  // Phi(1) per unit of a: weight chi(1) * |orbit| * sqrt(Delta)
  std::size_t nn = nonlin.size();
  std::vector<i64> step(nn), suffix_max(nn + 1, 0);
  for (std::size_t o = 0; o < nn; ++o)
    step[o] = nonlin[o].degree * static_cast<i64>(nonlin[o].chars.size()) * sd;
  for (std::size_t o = nn; o-- > 0;)
    suffix_max[o] = suffix_max[o + 1] + step[o] * nonlin[o].degree;

  std::vector<std::size_t> central;
  for (std::size_t j = 1; j < r; ++j)
    if (cd.sizes[j] == 1)
      central.push_back(j);

  std::uint64_t stage3 = 0, stage4 = 0;
  std::vector<i64> a_nonlin(nn, 0);
  std::vector<std::vector<std::int32_t>> acc(nn + 1);

  auto finish = [&](std::uint64_t mask) {
    ++stage3;
    auto const &ph = acc[nn];
    for (std::size_t j : central) {
      auto v = rational(ph.data() + j * ce);
      auto w = rational(ph.data() + cd.inverse_class[j] * ce);
      if (!v || !w || *v != *w || (*v != 0 && *v != p.v))
        return;
    }
    ++stage4;
    IntersectionVector d(r);
    for (std::size_t j = 0; j < r; ++j) {
      auto x = class_value(ph, j);
      if (!x)
        return;
      d[j] = *x;
    }
    if (mode == CciMode::regular_pds && d[0] != 0)
      return;
    if (!chk.check(d).empty())
      return;
    PhiAssignment pa;
    pa.a.assign(t.size(), 0);
    pa.a[t.principal_index] = 1;
    for (std::size_t o = 0; o < lin.size(); ++o)
      for (std::size_t chi : lin[o].chars)
        pa.a[chi] = static_cast<i64>(mask >> o & 1u);
    for (std::size_t o = 0; o < nn; ++o)
      for (std::size_t chi : nonlin[o].chars)
        pa.a[chi] = a_nonlin[o];
    pa.s.resize(t.size());
    for (std::size_t chi = 0; chi < t.size(); ++chi)
      pa.s[chi] = chi == t.principal_index
                      ? p.k
                      : pa.a[chi] * e.theta1 + (t.degrees[chi] - pa.a[chi]) * e.theta2;
    pa.d = std::move(d);
    out.survivors.push_back(std::move(pa));
  };

  bool stopped = false;
  std::function<void(std::size_t, i64, std::uint64_t)> dfs = [&](std::size_t o, i64 phi1,
                                                                  std::uint64_t mask) {
    if (stopped)
      return;
    if (o == nn) {
      if (std::find(targets.begin(), targets.end(), phi1) == targets.end())
        return;
      if (opt.max_candidates && stage3 >= opt.max_candidates) {
        stopped = true;
        return;
      }
      finish(mask);
      return;
    }
    bool any = false;
    for (i64 tgt : targets)
      if (tgt - phi1 >= 0 && tgt - phi1 <= suffix_max[o])
        any = true;
    if (!any)
      return;
    for (i64 a = 0; a <= nonlin[o].degree; ++a) {
      acc[o + 1] = acc[o];
      if (a)
        simd::axpy_i32(acc[o + 1].data(), wn[o].data(), r * ce, static_cast<std::int32_t>(a * sd));
      a_nonlin[o] = a;
      dfs(o + 1, phi1 + a * step[o], mask);
    }
  };

  for (std::uint64_t mask : live) {
    acc[0] = base;
    for (std::size_t o = 0; o < lin.size(); ++o)
      if (mask >> o & 1u)
        simd::axpy_i32(acc[0].data(), wl[o].data(), r * ce, static_cast<std::int32_t>(sd));
    auto phi1 = rational(acc[0].data());
    if (!phi1)
      throw InternalError("Phi(1) is not rational");
    dfs(0, *phi1, mask);
    if (stopped)
      break;
  }
  out.budget_exhausted = stopped;
  out.stage_counts.push_back(stage3);
  out.stage_counts.push_back(stage4);
  out.stage_counts.push_back(out.survivors.size());
  return out;
}

void write_vectors(std::ostream &out, CharacterTable const &t,
                   std::vector<IntersectionVector> const &vs)
{
  auto const &cd = t.classes;
  out << "# class size rep_order centralizer\n";
  for (std::size_t j = 0; j < cd.num_classes; ++j)
    out << "# " << j << ' ' << cd.sizes[j] << ' ' << cd.rep_orders[j] << ' '
        << cd.centralizer_orders[j] << '\n';
  for (auto const &d : vs) {
    for (std::size_t j = 0; j < d.size(); ++j)
      out << (j ? " " : "") << d[j];
    out << '\n';
  }
}

} // namespace pds
