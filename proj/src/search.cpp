#include "pds/search.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

namespace pds {

std::string to_string(ExactStatus s)
{
  switch (s) {
  case ExactStatus::exists:
    return "exists";
  case ExactStatus::not_exists:
    return "not-exists";
  case ExactStatus::budget_exhausted:
    return "budget-exhausted";
  }
  return "?";
}

namespace {

std::vector<char> member_mask(FiniteGroup const &g, std::vector<Elem> const &members)
{
  std::vector<char> in(g.order(), 0);
  for (Elem x : members) {
    if (x >= g.order())
      throw InputError("member " + std::to_string(x) + " outside the group");
    if (in[x])
      throw InputError("member " + std::to_string(x) + " listed twice");
    in[x] = 1;
  }
  return in;
}

// lambda from members, mu from non-members; nullopt if either is not constant
std::optional<SrgParams> params_from_counts(FiniteGroup const &g, std::vector<char> const &in,
                                            std::vector<i64> const &cnt, i64 k)
{
  std::optional<i64> lam, mu;
  for (Elem x = 1; x < g.order(); ++x) {
    auto &slot = in[x] ? lam : mu;
    if (!slot)
      slot = cnt[x];
    else if (*slot != cnt[x])
      return std::nullopt;
  }
  return SrgParams{static_cast<i64>(g.order()), k, lam.value_or(0), mu.value_or(0)};
}

} // namespace

std::optional<SrgParams> verify_by_differences(FiniteGroup const &g, std::vector<Elem> const &members)
{
  auto in = member_mask(g, members);
  std::vector<i64> cnt(g.order(), 0);
  for (Elem a : members)
    for (Elem b : members)
      if (a != b)
        ++cnt[g.mul(a, g.inv(b))];
  return params_from_counts(g, in, cnt, static_cast<i64>(members.size()));
}

std::optional<SrgParams> verify_by_group_ring(FiniteGroup const &g, std::vector<Elem> const &members)
{
  auto in = member_mask(g, members);
  i64 k = static_cast<i64>(members.size());
  // coefficient of x in D*D is #{a in D : a^-1 x in D}
  std::vector<i64> sq(g.order(), 0);
  for (Elem x = 0; x < g.order(); ++x)
    for (Elem a : members)
      sq[x] += in[g.mul(g.inv(a), x)];
  if (sq[0] != k)
    return std::nullopt;
  std::optional<i64> lam, mu;
  for (Elem x = 1; x < g.order(); ++x) {
    if (in[x] && !lam)
      lam = sq[x];
    if (!in[x] && !mu)
      mu = sq[x];
  }
  SrgParams p{static_cast<i64>(g.order()), k, lam.value_or(0), mu.value_or(0)};
  // D^2 = k 1 + lambda D + mu (G - D - 1)
  for (Elem x = 1; x < g.order(); ++x)
    if (sq[x] != (in[x] ? p.lambda : p.mu))
      return std::nullopt;
  return p;
}

std::optional<SrgParams> verify_pds(FiniteGroup const &g, std::vector<Elem> const &members)
{
  if (members.empty())
    throw InputError("empty candidate");
  auto in = member_mask(g, members);
  if (in[0])
    throw InputError("candidate contains the identity");
  for (Elem x : members)
    if (!in[g.inv(x)])
      throw InputError("candidate is not inverse-closed: " + std::to_string(x) + " lacks its inverse");
  auto a = verify_by_differences(g, members);
  auto b = verify_by_group_ring(g, members);
  if (a.has_value() != b.has_value() || (a && !(*a == *b)))
    throw InternalError("difference counting and group-ring squaring disagree");
  return a;
}

IntersectionVector class_profile(ConjugacyData const &cd, std::vector<Elem> const &members)
{
  IntersectionVector d(cd.num_classes, 0);
  for (Elem x : members)
    ++d[cd.class_of[x]];
  return d;
}

std::vector<Elem> pds_complement(FiniteGroup const &g, std::vector<Elem> const &members)
{
  auto in = member_mask(g, members);
  std::vector<Elem> out;
  for (Elem x = 1; x < g.order(); ++x)
    if (!in[x])
      out.push_back(x);
  return out;
}

UnitLayout unit_layout(FiniteGroup const &g, ConjugacyData const &cd, SrgParams const &p,
                       IntersectionVector const &vec)
{
  if (!cd.has_group())
    throw InputError("unit layout needs group-backed classes");
  if (static_cast<i64>(g.order()) != p.v)
    throw InputError("group order differs from v");
  std::size_t r = cd.num_classes;
  if (vec.size() != r)
    throw InputError("vector has " + std::to_string(vec.size()) + " entries for " + std::to_string(r) +
                     " classes");
  if (vec[0] != 0)
    throw InputError("a regular PDS excludes the identity");
  i64 sum = 0;
  for (std::size_t j = 0; j < r; ++j) {
    if (vec[j] < 0 || vec[j] > static_cast<i64>(cd.sizes[j]))
      throw InputError("entry " + std::to_string(j) + " outside [0, class size]");
    if (vec[j] != vec[cd.inverse_class[j]])
      throw InputError("entries of inverse classes differ at " + std::to_string(j));
    if (cd.is_real(j) && cd.rep_orders[j] > 2 && vec[j] % 2 != 0)
      throw InputError("odd entry on real class " + std::to_string(j));
    sum += vec[j];
  }
  if (sum != p.k)
    throw InputError("vector sums to " + std::to_string(sum) + ", k = " + std::to_string(p.k));

  UnitLayout lay;
  lay.unit_of.assign(g.order(), std::numeric_limits<std::uint32_t>::max());
  for (std::size_t j = 1; j < r; ++j) {
    std::size_t inv = cd.inverse_class[j];
    if (inv < j)
      continue;
    UnitGroup grp;
    grp.classes.push_back(static_cast<std::uint32_t>(j));
    if (inv != j)
      grp.classes.push_back(static_cast<std::uint32_t>(inv));
    auto mem = cd.members[j];
    std::sort(mem.begin(), mem.end());
    std::vector<char> seen(g.order(), 0);
    for (Elem x : mem) {
      if (seen[x])
        continue;
      Elem y = g.inv(x);
      seen[x] = seen[y] = 1;
      grp.units.push_back(x == y ? std::vector<Elem>{x} : std::vector<Elem>{x, y});
    }
    grp.quota = static_cast<std::size_t>(cd.is_real(j) && cd.rep_orders[j] > 2 ? vec[j] / 2 : vec[j]);
    lay.groups.push_back(std::move(grp));
  }
  for (std::size_t gi = 0; gi < lay.groups.size(); ++gi)
    for (auto const &u : lay.groups[gi].units) {
      for (Elem x : u)
        lay.unit_of[x] = static_cast<std::uint32_t>(lay.flat.size());
      lay.flat.push_back(u);
      lay.group_of_unit.push_back(gi);
    }
  return lay;
}

namespace {

using Clock = std::chrono::steady_clock;

std::optional<Clock::time_point> deadline_of(std::int64_t budget_ms)
{
  if (budget_ms <= 0)
    return std::nullopt;
  return Clock::now() + std::chrono::milliseconds(budget_ms);
}

// Difference counts of an inverse-closed set with the squared-error cost.
class Climber
{
public:
  Climber(FiniteGroup const &g, SrgParams const &p) : g_(g), p_(p), in_(g.order(), 0),
    pos_(g.order(), 0), c_(g.order(), 0)
  {
    cost_ = static_cast<i64>(g.order() - 1) * p.mu * p.mu;
  }

  void add(Elem a)
  {
    for (Elem b : d_) {
      bump(g_.mul(a, g_.inv(b)), 1);
      bump(g_.mul(b, g_.inv(a)), 1);
    }
    cost_ -= term(a);
    in_[a] = 1;
    cost_ += term(a);
    pos_[a] = d_.size();
    d_.push_back(a);
  }

  void remove(Elem a)
  {
    std::size_t i = pos_[a];
    d_[i] = d_.back();
    pos_[d_[i]] = i;
    d_.pop_back();
    cost_ -= term(a);
    in_[a] = 0;
    cost_ += term(a);
    for (Elem b : d_) {
      bump(g_.mul(a, g_.inv(b)), -1);
      bump(g_.mul(b, g_.inv(a)), -1);
    }
  }

  void add_unit(std::vector<Elem> const &u)
  {
    for (Elem a : u)
      add(a);
  }
  void remove_unit(std::vector<Elem> const &u)
  {
    for (auto it = u.rbegin(); it != u.rend(); ++it)
      remove(*it);
  }

  // cost change from adding unit u, without applying it
  i64 add_delta(std::vector<Elem> const &u)
  {
    ++stamp_;
    touched_.clear();
    auto touch = [&](Elem x, i64 d) {
      if (mark_[x] != stamp_) {
        mark_[x] = stamp_;
        inc_[x] = 0;
        touched_.push_back(x);
      }
      inc_[x] += d;
    };
    for (std::size_t i = 0; i < u.size(); ++i) {
      Elem a = u[i];
      for (Elem b : d_) {
        touch(g_.mul(a, g_.inv(b)), 1);
        touch(g_.mul(b, g_.inv(a)), 1);
      }
      for (std::size_t j = 0; j < i; ++j) {
        touch(g_.mul(a, g_.inv(u[j])), 1);
        touch(g_.mul(u[j], g_.inv(a)), 1);
      }
      touch(a, 0);
    }
    i64 delta = 0;
    for (Elem x : touched_) {
      bool joins = std::find(u.begin(), u.end(), x) != u.end();
      i64 t_old = in_[x] ? p_.lambda : p_.mu;
      i64 t_new = joins ? p_.lambda : t_old;
      i64 before = c_[x] - t_old, after = c_[x] + inc_[x] - t_new;
      delta += after * after - before * before;
    }
    return delta;
  }

  i64 cost() const { return cost_; }
  std::vector<Elem> members() const
  {
    auto m = d_;
    std::sort(m.begin(), m.end());
    return m;
  }

private:
  i64 term(Elem x) const
  {
    i64 t = in_[x] ? p_.lambda : p_.mu;
    return (c_[x] - t) * (c_[x] - t);
  }
  void bump(Elem x, i64 d)
  {
    cost_ -= term(x);
    c_[x] += d;
    cost_ += term(x);
  }

  FiniteGroup const &g_;
  SrgParams p_;
  std::vector<char> in_;
  std::vector<std::size_t> pos_;
  std::vector<i64> c_;
  std::vector<Elem> d_;
  i64 cost_ = 0;
  std::vector<std::uint64_t> mark_ = std::vector<std::uint64_t>(g_.order(), 0);
  std::vector<i64> inc_ = std::vector<i64>(g_.order(), 0);
  std::vector<Elem> touched_;
  std::uint64_t stamp_ = 0;
};

struct ClimbOnce
{
  std::optional<std::vector<Elem>> found;
  std::uint64_t steps = 0;
  bool timed_out = false;
};

ClimbOnce climb_once(FiniteGroup const &g, SrgParams const &p, UnitLayout const &lay,
                     SearchConfig const &cfg, std::uint64_t restart,
                     std::optional<Clock::time_point> deadline, std::atomic<bool> const &stop)
{
  std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                    static_cast<std::uint32_t>(restart), static_cast<std::uint32_t>(restart >> 32)};
  std::mt19937_64 rng(seq);
  Climber cl(g, p);
  std::size_t ng = lay.groups.size();
  std::vector<std::vector<std::size_t>> ins(ng), outs(ng);
  for (std::size_t gi = 0; gi < ng; ++gi) {
    std::vector<std::size_t> idx(lay.groups[gi].units.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
      idx[i] = i;
    std::shuffle(idx.begin(), idx.end(), rng);
    for (std::size_t i = 0; i < idx.size(); ++i)
      (i < lay.groups[gi].quota ? ins[gi] : outs[gi]).push_back(idx[i]);
    for (std::size_t u : ins[gi])
      cl.add_unit(lay.groups[gi].units[u]);
  }

  ClimbOnce res;
  // best non-tabu swap each step, even when it worsens; tabu blocks undoing a recent swap
  std::vector<std::uint64_t> tabu_until(lay.flat.size(), 0);
  std::vector<std::size_t> base_of(ng);
  for (std::size_t gi = 0; gi < ng; ++gi)
    base_of[gi] = lay.unit_of[lay.groups[gi].units[0][0]];
  i64 best_seen = cl.cost();
  std::uint64_t plateau = 0;
  for (; res.steps < cfg.max_steps; ++res.steps) {
    if (cl.cost() == 0) {
      res.found = cl.members();
      return res;
    }
    if (stop.load(std::memory_order_relaxed))
      return res;
    if (deadline && (res.steps & 15) == 0 && Clock::now() > *deadline) {
      res.timed_out = true;
      return res;
    }
    i64 base = cl.cost();
    i64 best = std::numeric_limits<i64>::max();
    std::size_t bg = 0, bi = 0, bo = 0, ties = 0;
    for (std::size_t gi = 0; gi < ng; ++gi) {
      auto const &units = lay.groups[gi].units;
      for (std::size_t i = 0; i < ins[gi].size(); ++i) {
        bool tabu_out = tabu_until[base_of[gi] + ins[gi][i]] > res.steps;
        cl.remove_unit(units[ins[gi][i]]);
        for (std::size_t o = 0; o < outs[gi].size(); ++o) {
          i64 delta = cl.cost() + cl.add_delta(units[outs[gi][o]]) - base;
          bool tabu = tabu_out || tabu_until[base_of[gi] + outs[gi][o]] > res.steps;
          // aspiration: a tabu move is allowed when it beats the best cost seen
          if (tabu && base + delta >= best_seen)
            continue;
          if (delta < best) {
            best = delta;
            ties = 1;
            bg = gi, bi = i, bo = o;
          } else if (delta == best && std::uniform_int_distribution<std::size_t>(0, ties++)(rng) == 0) {
            bg = gi, bi = i, bo = o;
          }
        }
        cl.add_unit(units[ins[gi][i]]);
      }
    }
    if (best == std::numeric_limits<i64>::max())
      return res;
    auto const &units = lay.groups[bg].units;
    cl.remove_unit(units[ins[bg][bi]]);
    cl.add_unit(units[outs[bg][bo]]);
    std::uint64_t tenure = 2 + std::uniform_int_distribution<std::uint64_t>(0, 4)(rng);
    tabu_until[base_of[bg] + ins[bg][bi]] = res.steps + 1 + tenure;
    tabu_until[base_of[bg] + outs[bg][bo]] = res.steps + 1 + tenure;
    std::swap(ins[bg][bi], outs[bg][bo]);
    if (cl.cost() < best_seen) {
      best_seen = cl.cost();
      plateau = 0;
    } else if (++plateau >= cfg.plateau) {
      return res;
    }
  }
  if (cl.cost() == 0)
    res.found = cl.members();
  return res;
}

} // namespace

ClimbResult hill_climb(FiniteGroup const &g, ConjugacyData const &cd, SrgParams const &p,
                       IntersectionVector const &vec, SearchConfig const &cfg)
{
  auto lay = unit_layout(g, cd, p, vec);
  auto deadline = deadline_of(cfg.budget_ms);
  ClimbResult out;
  std::mutex mu;
  std::atomic<std::uint64_t> next{0};
  std::atomic<bool> stop{false};
  std::uint64_t best_restart = std::numeric_limits<std::uint64_t>::max();
  std::optional<std::vector<Elem>> best;

  auto worker = [&] {
    for (;;) {
      std::uint64_t r = next.fetch_add(1);
      if (r >= cfg.max_restarts)
        return;
      {
        std::lock_guard<std::mutex> lk(mu);
        if (r > best_restart || out.budget_exhausted)
          return;
      }
      auto once = climb_once(g, p, lay, cfg, r, deadline, stop);
      std::lock_guard<std::mutex> lk(mu);
      out.steps += once.steps;
      ++out.restarts;
      if (once.timed_out)
        out.budget_exhausted = true;
      if (once.found && r < best_restart) {
        best_restart = r;
        best = once.found;
      }
    }
  };
  unsigned n = std::max(1u, cfg.jobs);
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < n; ++i)
      pool.emplace_back(worker);
    for (auto &t : pool)
      t.join();
  }
  if (best) {
    auto got = verify_pds(g, *best);
    if (!got || !(*got == p))
      throw InternalError("hill climb returned a set that does not verify");
    out.found = PdsCandidate{*best, class_profile(cd, *best)};
    out.budget_exhausted = false;
  }
  return out;
}

std::optional<std::vector<std::vector<Elem>>> automorphisms(FiniteGroup const &g, std::uint64_t limit)
{
  std::size_t n = g.order();
  std::vector<Elem> byorder(n);
  for (Elem x = 0; x < n; ++x)
    byorder[x] = x;
  std::stable_sort(byorder.begin(), byorder.end(),
                   [&](Elem a, Elem b) { return g.elt_order(a) > g.elt_order(b); });
  std::vector<Elem> gens;
  std::vector<char> inside(n, 0);
  inside[0] = 1;
  for (Elem x : byorder) {
    if (inside[x])
      continue;
    gens.push_back(x);
    std::fill(inside.begin(), inside.end(), 0);
    for (Elem y : subgroup_closure(g, gens))
      inside[y] = 1;
  }

  std::vector<std::vector<Elem>> cands(gens.size());
  double total = 1;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    for (Elem x = 0; x < n; ++x)
      if (g.elt_order(x) == g.elt_order(gens[i]))
        cands[i].push_back(x);
    total *= static_cast<double>(cands[i].size());
  }
  if (total > static_cast<double>(limit))
    return std::nullopt;

  // breadth-first spanning tree over the generators
  std::vector<Elem> order{0};
  std::vector<std::pair<Elem, std::size_t>> parent(n, {0, 0});
  std::vector<char> seen(n, 0);
  seen[0] = 1;
  for (std::size_t i = 0; i < order.size(); ++i)
    for (std::size_t s = 0; s < gens.size(); ++s) {
      Elem y = g.mul(order[i], gens[s]);
      if (!seen[y]) {
        seen[y] = 1;
        parent[y] = {order[i], s};
        order.push_back(y);
      }
    }

  std::vector<std::vector<Elem>> out;
  std::vector<std::size_t> idx(gens.size(), 0);
  std::vector<Elem> phi(n), img(gens.size());
  std::vector<char> hit(n);
  for (bool more = !gens.empty() || n == 1; more;) {
    for (std::size_t s = 0; s < gens.size(); ++s)
      img[s] = cands[s][idx[s]];
    phi[0] = 0;
    for (std::size_t i = 1; i < order.size(); ++i) {
      Elem y = order[i];
      phi[y] = g.mul(phi[parent[y].first], img[parent[y].second]);
    }
    bool ok = true;
    std::fill(hit.begin(), hit.end(), 0);
    for (Elem x = 0; x < n && ok; ++x) {
      if (hit[phi[x]])
        ok = false;
      hit[phi[x]] = 1;
      for (std::size_t s = 0; s < gens.size() && ok; ++s)
        if (phi[g.mul(x, gens[s])] != g.mul(phi[x], img[s]))
          ok = false;
    }
    if (ok)
      out.push_back(phi);
    // odometer
    more = false;
    for (std::size_t s = 0; s < gens.size(); ++s) {
      if (++idx[s] < cands[s].size()) {
        more = true;
        break;
      }
      idx[s] = 0;
    }
  }
  if (n == 1)
    out = {{0}};
  return out;
}

namespace {

class ExactWorker
{
public:
  struct Shared
  {
    FiniteGroup const &g;
    SrgParams p;
    UnitLayout const &lay;
    std::vector<std::size_t> seq;      // decision order -> flat unit
    std::vector<std::size_t> group_end; // per position, end of its group in seq
    std::vector<std::vector<std::uint32_t>> sym_inv; // per symmetry: position -> preimage position
    std::optional<Clock::time_point> deadline;
    std::atomic<bool> stop{false};
    std::atomic<bool> timed_out{false};
    std::atomic<std::uint64_t> nodes{0};
  };

  explicit ExactWorker(Shared &sh)
  : sh_(sh), state_(sh.g.order(), 0), c_(sh.g.order(), 0), val_(sh.seq.size(), 2),
    chosen_(sh.lay.groups.size(), 0), alive_(sh.seq.size() + 1)
  {
    tmax_undecided_ = std::max(sh.p.lambda, sh.p.mu);
    alive_[0].reserve(sh.sym_inv.size());
    for (std::uint32_t s = 0; s < sh.sym_inv.size(); ++s)
      alive_[0].push_back({s, 0});
  }

  // decide position `depth`; false on a pruned branch (state unchanged)
  bool decide(std::size_t depth, bool include)
  {
    auto const &unit = sh_.lay.flat[sh_.seq[depth]];
    std::size_t gi = sh_.lay.group_of_unit[sh_.seq[depth]];
    std::size_t left = sh_.group_end[depth] - depth - 1;
    auto quota = sh_.lay.groups[gi].quota;
    if (include ? chosen_[gi] >= quota : chosen_[gi] + left < quota)
      return false;
    bool ok = true;
    std::size_t applied = 0;
    for (Elem a : unit) {
      if (include) {
        ok = add(a);
      } else {
        state_[a] = 2;
        ok = c_[a] <= sh_.p.mu;
      }
      ++applied;
      if (!ok)
        break;
    }
    val_[depth] = include ? 0 : 1;
    if (ok)
      ok = symmetry_ok(depth);
    if (!ok) {
      undo_elems(unit, applied, include);
      val_[depth] = 2;
      return false;
    }
    if (include)
      ++chosen_[gi];
    return true;
  }

  void undo(std::size_t depth, bool include)
  {
    auto const &unit = sh_.lay.flat[sh_.seq[depth]];
    std::size_t gi = sh_.lay.group_of_unit[sh_.seq[depth]];
    if (include)
      --chosen_[gi];
    undo_elems(unit, unit.size(), include);
    val_[depth] = 2;
  }

  // true when a solution was found below depth
  bool dfs(std::size_t depth)
  {
    if (sh_.stop.load(std::memory_order_relaxed))
      return false;
    std::uint64_t n = sh_.nodes.fetch_add(1, std::memory_order_relaxed);
    if (sh_.deadline && (n & 1023) == 0 && Clock::now() > *sh_.deadline) {
      sh_.timed_out = true;
      sh_.stop = true;
      return false;
    }
    if (depth == sh_.seq.size())
      return complete();
    for (bool include : {true, false}) {
      if (!decide(depth, include))
        continue;
      if (dfs(depth + 1))
        return true;
      undo(depth, include);
    }
    return false;
  }

  // prefixes of length `depth` surviving all checks
  void frontier(std::size_t depth, std::size_t target, std::vector<std::vector<char>> &out)
  {
    if (depth == target || depth == sh_.seq.size()) {
      out.emplace_back(val_.begin(), val_.begin() + static_cast<std::ptrdiff_t>(depth));
      return;
    }
    for (bool include : {true, false}) {
      if (!decide(depth, include))
        continue;
      frontier(depth + 1, target, out);
      undo(depth, include);
    }
  }

  bool replay(std::vector<char> const &prefix)
  {
    for (std::size_t d = 0; d < prefix.size(); ++d)
      if (!decide(d, prefix[d] == 0))
        return false;
    return true;
  }

  std::vector<Elem> members() const
  {
    std::vector<Elem> m;
    for (Elem x = 1; x < sh_.g.order(); ++x)
      if (state_[x] == 1)
        m.push_back(x);
    return m;
  }

private:
  i64 tmax(Elem x) const
  {
    return state_[x] == 1 ? sh_.p.lambda : state_[x] == 2 ? sh_.p.mu : tmax_undecided_;
  }

  bool add(Elem a)
  {
    auto const &g = sh_.g;
    state_[a] = 1;
    d_.push_back(a);
    bool ok = c_[a] <= sh_.p.lambda;
    for (std::size_t i = 0; i + 1 < d_.size(); ++i) {
      Elem b = d_[i];
      Elem x = g.mul(a, g.inv(b)), y = g.mul(b, g.inv(a));
      ok = (++c_[x] <= tmax(x)) && ok;
      ok = (++c_[y] <= tmax(y)) && ok;
    }
    return ok;
  }

  void remove_last()
  {
    auto const &g = sh_.g;
    Elem a = d_.back();
    d_.pop_back();
    for (Elem b : d_) {
      --c_[g.mul(a, g.inv(b))];
      --c_[g.mul(b, g.inv(a))];
    }
    state_[a] = 0;
  }

  void undo_elems(std::vector<Elem> const &unit, std::size_t applied, bool include)
  {
    for (std::size_t i = applied; i-- > 0;) {
      if (include)
        remove_last();
      else
        state_[unit[i]] = 0;
    }
  }

  bool complete()
  {
    for (Elem x = 1; x < sh_.g.order(); ++x)
      if (c_[x] != (state_[x] == 1 ? sh_.p.lambda : sh_.p.mu))
        return false;
    return true;
  }

  // lex-leader over positions with in (0) < out (1)
  bool symmetry_ok(std::size_t depth)
  {
    auto const &parent = alive_[depth];
    auto &child = alive_[depth + 1];
    child.clear();
    std::size_t decided = depth + 1;
    for (auto [s, pos] : parent) {
      auto const &pre = sh_.sym_inv[s];
      bool keep = true;
      std::uint32_t p = pos;
      for (; p < decided; ++p) {
        std::uint32_t q = pre[p];
        if (q >= decided)
          break;
        if (val_[q] == val_[p])
          continue;
        if (val_[q] < val_[p])
          return false;
        keep = false;
        break;
      }
      if (keep)
        child.push_back({s, p});
    }
    return true;
  }

  Shared &sh_;
  std::vector<char> state_;
  std::vector<i64> c_;
  std::vector<Elem> d_;
  std::vector<char> val_;
  std::vector<std::size_t> chosen_;
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> alive_;
  i64 tmax_undecided_ = 0;
};

} // namespace

ExactOutcome exact_search(FiniteGroup const &g, ConjugacyData const &cd, SrgParams const &p,
                          IntersectionVector const &vec, SearchConfig const &cfg)
{
  auto lay = unit_layout(g, cd, p, vec);
  ExactWorker::Shared sh{g, p, lay, {}, {}, {}, deadline_of(cfg.budget_ms)};

  // most constrained groups first
  std::vector<std::size_t> gorder(lay.groups.size());
  for (std::size_t i = 0; i < gorder.size(); ++i)
    gorder[i] = i;
  auto weight = [&](std::size_t gi) {
    auto const &gr = lay.groups[gi];
    double n = static_cast<double>(gr.units.size()), q = static_cast<double>(gr.quota);
    return std::lgamma(n + 1) - std::lgamma(q + 1) - std::lgamma(n - q + 1);
  };
  std::stable_sort(gorder.begin(), gorder.end(),
                   [&](std::size_t a, std::size_t b) { return weight(a) < weight(b); });
  std::vector<std::size_t> first_flat(lay.groups.size(), 0);
  for (std::size_t u = lay.flat.size(); u-- > 0;)
    first_flat[lay.group_of_unit[u]] = u;
  for (std::size_t gi : gorder) {
    std::size_t end = sh.seq.size() + lay.groups[gi].units.size();
    for (std::size_t i = 0; i < lay.groups[gi].units.size(); ++i) {
      sh.seq.push_back(first_flat[gi] + i);
      sh.group_end.push_back(end);
    }
  }
  std::vector<std::uint32_t> pos_of(lay.flat.size());
  for (std::size_t i = 0; i < sh.seq.size(); ++i)
    pos_of[sh.seq[i]] = static_cast<std::uint32_t>(i);

  // vector-preserving automorphisms as position permutations
  auto auts = cfg.symmetry_breaking ? automorphisms(g, cfg.automorphism_limit)
                                    : std::optional<std::vector<std::vector<Elem>>>(std::vector<std::vector<Elem>>{});
  std::vector<std::vector<Elem>> perms;
  if (auts) {
    perms = std::move(*auts);
  } else {
    for (Elem h = 0; h < g.order(); ++h) {
      std::vector<Elem> c(g.order());
      for (Elem x = 0; x < g.order(); ++x)
        c[x] = g.mul(g.mul(h, x), g.inv(h));
      perms.push_back(std::move(c));
    }
    std::sort(perms.begin(), perms.end());
    perms.erase(std::unique(perms.begin(), perms.end()), perms.end());
  }
  ExactOutcome out;
  for (auto const &perm : perms) {
    bool ident = true, keeps = true;
    for (Elem x = 0; x < g.order(); ++x)
      ident = ident && perm[x] == x;
    for (std::size_t j = 1; j < cd.num_classes && keeps; ++j)
      keeps = vec[cd.class_of[perm[cd.reps[j]]]] == vec[j];
    if (!keeps)
      continue;
    ++out.symmetries;
    if (ident) {
      --out.symmetries;
      continue;
    }
    std::vector<std::uint32_t> pre(sh.seq.size());
    for (std::size_t q = 0; q < sh.seq.size(); ++q) {
      Elem img = perm[lay.flat[sh.seq[q]][0]];
      pre[pos_of[lay.unit_of[img]]] = static_cast<std::uint32_t>(q);
    }
    sh.sym_inv.push_back(std::move(pre));
  }

  std::optional<std::vector<Elem>> found;
  unsigned jobs = std::max(1u, cfg.jobs);
  if (jobs == 1) {
    ExactWorker w(sh);
    if (w.dfs(0))
      found = w.members();
  } else {
    std::vector<std::vector<char>> prefixes;
    for (std::size_t depth = 1; depth <= sh.seq.size(); ++depth) {
      prefixes.clear();
      ExactWorker w(sh);
      w.frontier(0, depth, prefixes);
      if (prefixes.size() >= 4 * jobs || depth == sh.seq.size())
        break;
    }
    std::atomic<std::size_t> next{0};
    std::mutex mu;
    std::size_t found_at = std::numeric_limits<std::size_t>::max();
    auto run = [&] {
      for (std::size_t i; (i = next.fetch_add(1)) < prefixes.size();) {
        if (sh.stop.load())
          return;
        ExactWorker w(sh);
        if (!w.replay(prefixes[i]))
          continue;
        if (w.dfs(prefixes[i].size())) {
          std::lock_guard<std::mutex> lk(mu);
          if (i < found_at) {
            found_at = i;
            found = w.members();
          }
          sh.stop = true;
        }
      }
    };
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < jobs; ++i)
      pool.emplace_back(run);
    for (auto &t : pool)
      t.join();
  }
  out.nodes = sh.nodes.load();
  if (found) {
    auto got = verify_pds(g, *found);
    if (!got || !(*got == p))
      throw InternalError("exact search returned a set that does not verify");
    out.status = ExactStatus::exists;
    out.witness = PdsCandidate{*found, class_profile(cd, *found)};
  } else {
    out.status = sh.timed_out ? ExactStatus::budget_exhausted : ExactStatus::not_exists;
  }
  return out;
}

MilpStats export_milp(std::ostream &out, FiniteGroup const &g, ConjugacyData const &cd,
                      SrgParams const &p, IntersectionVector const &vec)
{
  auto lay = unit_layout(g, cd, p, vec);
  MilpStats st;
  std::ostringstream body;
  auto x = [](std::size_t u) { return "x" + std::to_string(u); };
  auto y = [](std::size_t a, std::size_t b) { return "y" + std::to_string(a) + "_" + std::to_string(b); };

  st.unit_vars = lay.flat.size();
  std::vector<std::pair<std::size_t, std::size_t>> products;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> product_id;

  std::ostringstream rows;
  std::size_t row_lines = 0;
  for (std::size_t gi = 0; gi < lay.groups.size(); ++gi) {
    rows << " q" << gi << ":";
    auto base = static_cast<std::size_t>(lay.unit_of[lay.groups[gi].units[0][0]]);
    for (std::size_t i = 0; i < lay.groups[gi].units.size(); ++i)
      rows << (i ? " + " : " ") << x(base + i);
    rows << " = " << lay.groups[gi].quota << '\n';
    ++st.quota_rows;
    ++row_lines;
  }
  // one count row per {g, g^-1}: c(g) = c(g^-1) for an inverse-closed D
  for (Elem h = 1; h < g.order(); ++h) {
    if (g.inv(h) < h)
      continue;
    std::map<std::string, i64> coef;
    for (Elem a = 1; a < g.order(); ++a) {
      Elem b = g.mul(g.inv(h), a); // a b^-1 = h
      if (b == 0)
        continue;
      std::size_t ua = lay.unit_of[a], ub = lay.unit_of[b];
      if (ua == ub) {
        coef[x(ua)] += 1;
      } else {
        auto key = std::minmax(ua, ub);
        if (!product_id.count(key)) {
          product_id[key] = products.size();
          products.push_back(key);
        }
        coef[y(key.first, key.second)] += 1;
      }
    }
    coef[x(lay.unit_of[h])] -= p.lambda - p.mu;
    rows << " c" << h << ":";
    bool first = true;
    for (auto const &[name, c] : coef) {
      if (c == 0)
        continue;
      rows << (c < 0 ? " - " : first ? " " : " + ");
      if (std::abs(c) != 1)
        rows << std::abs(c) << ' ';
      rows << name;
      first = false;
    }
    if (first)
      rows << " 0 " << x(0);
    rows << " = " << p.mu << '\n';
    ++st.count_rows;
    ++row_lines;
  }
  st.product_vars = products.size();
  for (std::size_t i = 0; i < products.size(); ++i) {
    auto [a, b] = products[i];
    rows << " l" << i << "a: " << y(a, b) << " - " << x(a) << " <= 0\n";
    rows << " l" << i << "b: " << y(a, b) << " - " << x(b) << " <= 0\n";
    rows << " l" << i << "c: " << x(a) << " + " << x(b) << " - " << y(a, b) << " <= 1\n";
    st.link_rows += 3;
    row_lines += 3;
  }

  std::size_t lines = 0;
  auto line = [&](std::string const &s) {
    out << s << '\n';
    ++lines;
  };
  line("\\ partial difference set feasibility model");
  line("\\ params " + std::to_string(p.v) + " " + std::to_string(p.k) + " " + std::to_string(p.lambda) + " " +
       std::to_string(p.mu));
  line("\\ x<u> = 1 iff unit u lies in D; y<a>_<b> = x<a> x<b>");
  line("\\ unit members by element index:");
  for (std::size_t u = 0; u < lay.flat.size(); ++u) {
    std::string s = "\\ " + x(u) + ":";
    for (Elem e : lay.flat[u])
      s += " " + std::to_string(e);
    line(s);
  }
  line("Minimize");
  line(" obj: 0 " + x(0));
  line("Subject To");
  out << rows.str();
  lines += row_lines;
  line("Binary");
  for (std::size_t u = 0; u < lay.flat.size(); ++u)
    line(" " + x(u));
  for (auto [a, b] : products)
    line(" " + y(a, b));
  line("End");
  st.lines = lines;
  return st;
}

void write_pds(std::ostream &out, SrgParams const &p, std::vector<Elem> const &members)
{
  auto m = members;
  std::sort(m.begin(), m.end());
  out << p.v << ' ' << p.k << ' ' << p.lambda << ' ' << p.mu << '\n';
  for (std::size_t i = 0; i < m.size(); ++i)
    out << (i ? " " : "") << m[i];
  out << '\n';
}

PdsFile read_pds(std::istream &in)
{
  PdsFile f;
  std::string line;
  if (!std::getline(in, line))
    throw InputError("PDS file: missing parameter line");
  std::istringstream ps(line);
  if (!(ps >> f.params.v >> f.params.k >> f.params.lambda >> f.params.mu))
    throw InputError("PDS file: expected \"v k lambda mu\" on line 1");
  if (!std::getline(in, line))
    throw InputError("PDS file: missing member line");
  std::istringstream ms(line);
  i64 x;
  while (ms >> x) {
    if (x < 0 || x >= f.params.v)
      throw InputError("PDS file: member " + std::to_string(x) + " outside [0, v)");
    f.members.push_back(static_cast<Elem>(x));
  }
  if (!ms.eof())
    throw InputError("PDS file: malformed member line");
  if (static_cast<i64>(f.members.size()) != f.params.k)
    throw InputError("PDS file: " + std::to_string(f.members.size()) + " members, k = " +
                     std::to_string(f.params.k));
  return f;
}

} // namespace pds
