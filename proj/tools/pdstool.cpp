#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "pds/cci.hpp"
#include "pds/designs.hpp"
#include "pds/search.hpp"
#include "pds/sieves.hpp"
#include "pds/simd.hpp"

using namespace pds;
using nlohmann::json;

namespace {

enum Exit
{
  ok = 0,
  internal = 1,
  infeasible_exit = 2,
  input = 3,
  budget = 4,
};

constexpr char const *tool_version = "pdstool 1.0";

struct Common
{
  u64 seed = 1;
  unsigned jobs = 1;
  std::int64_t budget_ms = 60000;
  std::string mode = "regular";
  std::string manifest;
  std::string out;
};

struct Run
{
  std::ostringstream text;
  json inputs = json::object();
  json verdict = json::object();
  std::vector<std::string> outputs;
  int code = ok;
};

SrgParams parse_params(std::string const &s)
{
  std::string t = s;
  std::replace(t.begin(), t.end(), ',', ' ');
  std::istringstream in(t);
  SrgParams p;
  std::string rest;
  if (!(in >> p.v >> p.k >> p.lambda >> p.mu) || (in >> rest))
    throw InputError("parameters must be \"v,k,lambda,mu\", got \"" + s + "\"");
  return p;
}

IntersectionVector parse_vector(std::string const &s)
{
  std::string t = s;
  std::replace(t.begin(), t.end(), ',', ' ');
  std::istringstream in(t);
  IntersectionVector v;
  for (i64 x; in >> x;)
    v.push_back(x);
  if (!in.eof() || v.empty())
    throw InputError("vector must be comma-separated integers, got \"" + s + "\"");
  return v;
}

// descriptor, or a group table file
GroupPtr load_group(std::string const &arg)
{
  if (std::filesystem::is_regular_file(arg))
    return std::make_shared<FiniteGroup const>(ingest_table(arg));
  return std::make_shared<FiniteGroup const>(construct(arg));
}

// group descriptor, group table file or character table file
CharacterTable load_table(std::string const &arg, u64 seed)
{
  if (std::filesystem::is_regular_file(arg)) {
    try {
      return ingest_chartab(arg);
    } catch (InputError const &) {
      // not a character table: fall through to a group table
    }
  }
  return compute_table(load_group(arg), seed);
}

CciMode parse_mode(std::string const &m)
{
  if (m == "regular")
    return CciMode::regular_pds;
  if (m == "ds" || m == "reversible")
    return CciMode::reversible_ds;
  throw InputError("--mode must be regular or ds, got \"" + m + "\"");
}

void print_verdict(std::ostream &os, SieveVerdict const &v)
{
  os << "verdict " << to_string(v.status) << '\n';
  os << "rule " << (v.rule.empty() ? "-" : v.rule) << '\n';
  os << "summary " << v.summary << '\n';
  os << "witness " << v.witness.dump() << '\n';
}

std::string params_text(SrgParams const &p)
{
  return std::to_string(p.v) + " " + std::to_string(p.k) + " " + std::to_string(p.lambda) + " " +
         std::to_string(p.mu);
}

std::uint64_t fnv1a(std::string const &s)
{
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

void cmd_group(std::string const &action, std::string const &arg, Run &r)
{
  auto g = load_group(arg);
  if (action == "build" || action == "export" || action == "ingest") {
    if (action == "ingest")
      r.text << "# validated " << g->label() << '\n';
    write_group_table(r.text, *g);
    return;
  }
  auto cd = conjugacy(*g);
  auto ns = normal_structure(*g);
  r.text << "label " << g->label() << '\n';
  r.text << "order " << g->order() << '\n';
  r.text << "abelian " << (g->is_abelian() ? "yes" : "no") << '\n';
  r.text << "exponent " << g->exponent() << '\n';
  r.text << "classes " << cd.num_classes << '\n';
  r.text << "class_sizes";
  for (auto s : cd.sizes)
    r.text << ' ' << s;
  r.text << "\nderived_order " << ns.derived_order() << '\n';
  r.text << "abelian_invariants";
  for (auto d : ns.abelian_invariants)
    r.text << ' ' << d;
  r.text << "\nsolvable " << (ns.is_solvable ? "yes" : "no") << '\n';
}

void cmd_chartab(std::string const &action, std::string const &arg, Common const &c, Run &r)
{
  if (action == "compute") {
    auto t = compute_table(load_group(arg), c.seed);
    write_chartab(r.text, t);
    return;
  }
  auto t = ingest_chartab(arg);
  if (auto bad = check_table(t))
    throw InputError("table fails verification: " + *bad);
  if (action == "verify") {
    r.text << "ok " << t.size() << " characters, order " << t.order() << '\n';
    return;
  }
  write_chartab(r.text, t);
}

void cmd_params(std::string const &action, std::vector<std::string> const &args, Run &r)
{
  if (action == "family") {
    if (args.size() != 2)
      throw InputError("params family <name> <argument>");
    auto p = family_params(args[0], std::stoll(args[1]));
    r.text << params_text(p) << '\n';
    return;
  }
  if (args.size() != 1)
    throw InputError("params " + action + " <v,k,lambda,mu>");
  auto p = parse_params(args[0]);
  if (action == "complement") {
    r.text << params_text(complement(p)) << '\n';
    return;
  }
  auto e = eigendata(p);
  r.text << "delta " << e.delta << '\n';
  r.text << "sqrt_delta " << (e.sqrt_delta ? std::to_string(*e.sqrt_delta) : "irrational") << '\n';
  r.text << "conference " << (e.conference ? "yes" : "no") << '\n';
  if (e.sqrt_delta)
    r.text << "theta " << e.theta1 << ' ' << e.theta2 << "\nmultiplicities " << e.m1 << ' ' << e.m2
           << '\n';
  r.text << "integrality " << (e.infeasible ? *e.infeasible : std::string("ok")) << '\n';
  if (e.infeasible)
    r.code = infeasible_exit;
}

void cmd_sieve_params(std::string const &file, bool per_prime, Run &r)
{
  auto rows = read_param_batch_file(file);
  r.inputs["batch"] = file;
  std::size_t dead = 0;
  r.text << "# v k lambda mu verdict rule assumption\n";
  for (auto const &row : rows) {
    auto v = param_sieve(row.p, per_prime);
    dead += v.status == Status::infeasible;
    std::string assumption = v.witness.contains("assumption") ? v.witness["assumption"].get<std::string>() : "-";
    r.text << params_text(row.p) << ' ' << to_string(v.status) << ' ' << (v.rule.empty() ? "-" : v.rule)
           << " [" << assumption << "]\n";
  }
  r.text << "# rows " << rows.size() << " infeasible " << dead << '\n';
  r.verdict = {{"rows", rows.size()}, {"infeasible", dead}};
  if (!rows.empty() && dead == rows.size())
    r.code = infeasible_exit;
}

void cmd_sieve_group(std::string const &garg, std::string const &parg, Common const &c, Run &r)
{
  auto g = load_group(garg);
  auto p = parse_params(parg);
  auto t = compute_table(g, c.seed);
  auto ns = normal_structure(*g);
  auto v = group_sieve(t, p, ns.is_solvable, sylow_normalizer_orders(*g));
  print_verdict(r.text, v);
  r.verdict = {{"status", to_string(v.status)}, {"rule", v.rule}};
  if (v.status == Status::infeasible)
    r.code = infeasible_exit;
}

void cmd_cci(std::string const &garg, std::string const &parg, Common const &c, Run &r)
{
  auto t = load_table(garg, c.seed);
  auto p = parse_params(parg);
  auto mode = parse_mode(c.mode);
  auto cons = build_constraints(t, p, mode);
  r.text << "# parameters " << params_text(p) << '\n';
  for (std::size_t j = 0; j < cons.classes.size(); ++j) {
    auto const &cl = cons.classes[j];
    r.text << "# class " << j << " size " << cl.size << ' ' << cl.source << " {";
    auto vals = cl.values();
    for (std::size_t i = 0; i < vals.size(); ++i)
      r.text << (i ? "," : "") << vals[i];
    r.text << "}\n";
  }
  EnumerateOptions eo;
  eo.jobs = c.jobs;
  auto vs = enumerate_all(cons, eo);
  auto f = filter_vectors(t, p, vs, mode);
  r.text << "# enumerated " << vs.size() << " survivors " << f.survivors.size() << '\n';
  for (auto const &[why, n] : f.rejected)
    r.text << "# rejected " << why << ' ' << n << '\n';
  write_vectors(r.text, t, f.survivors);
  r.verdict = {{"enumerated", vs.size()}, {"survivors", f.survivors.size()}};
  if (f.survivors.empty())
    r.code = infeasible_exit;
}

void cmd_phi(std::string const &garg, std::string const &parg, Common const &c, std::uint64_t cap, Run &r)
{
  auto t = load_table(garg, c.seed);
  auto p = parse_params(parg);
  PhiOptions po;
  po.max_candidates = cap;
  auto e = phi_enumeration(t, p, parse_mode(c.mode), po);
  static char const *names[] = {"linear_patterns", "linear_determined", "product", "phi_identity",
                                "central", "all_classes"};
  r.text << "# parameters " << params_text(p) << " mode " << c.mode << '\n';
  for (std::size_t i = 0; i < e.stage_counts.size(); ++i)
    r.text << "stage " << names[i] << ' ' << e.stage_counts[i] << '\n';
  std::vector<IntersectionVector> ds;
  for (auto const &s : e.survivors)
    ds.push_back(s.d);
  write_vectors(r.text, t, ds);
  std::string verdict = e.budget_exhausted ? "budget-exhausted" : e.infeasible() ? "infeasible" : "unresolved";
  r.text << "verdict " << verdict << '\n';
  r.verdict = {{"stage_counts", e.stage_counts}, {"verdict", verdict}};
  if (e.budget_exhausted)
    r.code = budget;
  else if (e.infeasible())
    r.code = infeasible_exit;
}

std::vector<IntersectionVector> survivors_for(CharacterTable const &t, SrgParams const &p, Common const &c)
{
  auto cons = build_constraints(t, p);
  EnumerateOptions eo;
  eo.jobs = c.jobs;
  return filter_vectors(t, p, enumerate_all(cons, eo)).survivors;
}

void cmd_search(std::string const &how, std::string const &garg, std::string const &parg,
                std::string const &varg, Common const &c, std::uint64_t restarts, Run &r)
{
  auto g = load_group(garg);
  auto p = parse_params(parg);
  auto t = compute_table(g, c.seed);
  std::vector<IntersectionVector> vecs;
  if (!varg.empty())
    vecs.push_back(parse_vector(varg));
  else
    vecs = survivors_for(t, p, c);
  SearchConfig cfg;
  cfg.seed = c.seed;
  cfg.jobs = c.jobs;
  cfg.budget_ms = c.budget_ms;
  cfg.max_restarts = restarts;
  bool exhausted = false;
  json per = json::array();
  for (auto const &vec : vecs) {
    std::string vs;
    for (std::size_t i = 0; i < vec.size(); ++i)
      vs += (i ? "," : "") + std::to_string(vec[i]);
    std::optional<PdsCandidate> found;
    std::string status;
    if (how == "hill") {
      auto res = hill_climb(*g, t.classes, p, vec, cfg);
      found = res.found;
      status = found ? "exists" : "not-found";
      exhausted = exhausted || !found;
      r.text << "# vector " << vs << " hill " << status << " restarts " << res.restarts << " steps "
             << res.steps << '\n';
    } else {
      auto res = exact_search(*g, t.classes, p, vec, cfg);
      found = res.witness;
      status = to_string(res.status);
      exhausted = exhausted || res.status == ExactStatus::budget_exhausted;
      r.text << "# vector " << vs << " exact " << status << " nodes " << res.nodes << " symmetries "
             << res.symmetries << '\n';
    }
    per.push_back({{"vector", vec}, {"status", status}});
    if (found) {
      write_pds(r.text, p, found->members);
      r.verdict = {{"status", "exists"}, {"vectors", per}};
      return;
    }
  }
  r.verdict = {{"status", exhausted ? "budget-exhausted" : "not-exists"}, {"vectors", per}};
  r.text << "verdict " << (exhausted ? "budget-exhausted" : "not-exists") << '\n';
  r.code = exhausted ? budget : infeasible_exit;
}

void cmd_milp(std::string const &garg, std::string const &parg, std::string const &varg, Common const &c,
              Run &r)
{
  auto g = load_group(garg);
  auto p = parse_params(parg);
  auto t = compute_table(g, c.seed);
  IntersectionVector vec;
  if (!varg.empty()) {
    vec = parse_vector(varg);
  } else {
    auto s = survivors_for(t, p, c);
    if (s.empty()) {
      r.text << "\\ no admissible vector\n";
      r.code = infeasible_exit;
      return;
    }
    vec = s.front();
  }
  auto st = export_milp(r.text, *g, t.classes, p, vec);
  r.verdict = {{"unit_vars", st.unit_vars}, {"product_vars", st.product_vars}, {"lines", st.lines}};
}

void cmd_design(i64 p, int d, int k, Run &r)
{
  auto f = gf_build(p, d);
  auto des = pds_from_design(f, k);
  write_design(r.text, des);
  r.verdict = {{"params", params_text(des.params)}, {"family", des.family}, {"group", des.descriptor}};
}

} // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Partial difference sets in finite groups"};
  app.require_subcommand(1);
  app.fallthrough();
  Common c;
  app.add_option("--seed", c.seed, "random seed")->capture_default_str();
  app.add_option("--jobs", c.jobs, "worker threads")->capture_default_str();
  app.add_option("--budget-ms", c.budget_ms, "time budget, 0 = unlimited")->capture_default_str();
  app.add_option("--mode", c.mode, "regular | ds")->capture_default_str();
  app.add_option("--manifest", c.manifest, "write a JSON run manifest here");
  app.add_option("--out", c.out, "write the main output here instead of stdout");

  std::string action, a1, a2, vec;
  std::vector<std::string> rest;
  bool per_prime = false;
  std::uint64_t cap = 0, restarts = 500;
  i64 fp = 0;
  int fd = 1, fk = 3;

  auto *group = app.add_subcommand("group", "build, ingest, export or describe a group");
  group->add_option("action", action)->required()->check(CLI::IsMember({"build", "ingest", "export", "info"}));
  group->add_option("group", a1, "descriptor or table file")->required();

  auto *chartab = app.add_subcommand("chartab", "character tables");
  chartab->add_option("action", action)->required()->check(CLI::IsMember({"compute", "ingest", "verify"}));
  chartab->add_option("source", a1, "group for compute, table file otherwise")->required();

  auto *params = app.add_subcommand("params", "parameter reports");
  params->add_option("action", action)->required()->check(CLI::IsMember({"eigen", "complement", "family"}));
  params->add_option("args", rest)->required();

  auto *sieve = app.add_subcommand("sieve", "nonexistence sieves");
  sieve->require_subcommand(1);
  auto *sp = sieve->add_subcommand("params", "parameter-only rules over a batch file");
  sp->add_option("batch", a1)->required();
  sp->add_flag("--per-prime-forcing", per_prime, "apply all_divide to each forced prime alone");
  auto *sg = sieve->add_subcommand("group", "group-aware rules");
  sg->add_option("group", a1)->required();
  sg->add_option("params", a2)->required();

  auto *cci = app.add_subcommand("cci", "admissible class-intersection vectors");
  cci->add_option("group", a1, "descriptor, group table or character table")->required();
  cci->add_option("params", a2)->required();

  auto *phi = app.add_subcommand("phi-enum", "eigenvalue-pattern enumeration with stage counts");
  phi->add_option("table", a1, "character table file or group")->required();
  phi->add_option("params", a2)->required();
  phi->add_option("--max-candidates", cap, "cap on examined assignments, 0 = unlimited");

  auto *search = app.add_subcommand("search", "look for an explicit PDS");
  search->add_option("how", action)->required()->check(CLI::IsMember({"hill", "exact"}));
  search->add_option("group", a1)->required();
  search->add_option("params", a2)->required();
  search->add_option("vector", vec, "comma-separated; default: every cci survivor");
  search->add_option("--max-restarts", restarts)->capture_default_str();

  auto *milp = app.add_subcommand("export-milp", "0/1 feasibility model in LP format");
  milp->add_option("group", a1)->required();
  milp->add_option("params", a2)->required();
  milp->add_option("vector", vec, "comma-separated; default: first cci survivor");

  auto *design = app.add_subcommand("design", "Steiner 2-design constructions");
  design->require_subcommand(1);
  auto *dc = design->add_subcommand("construct", "verified PDS from a block-regular design");
  dc->add_option("p", fp)->required();
  dc->add_option("d", fd)->required();
  dc->add_option("k", fk)->required();

  try {
    app.parse(argc, argv);
  } catch (CLI::ParseError const &e) {
    int rc = app.exit(e);
    return rc == 0 ? ok : input;
  }

  Run r;
  std::string command;
  for (int i = 1; i < argc; ++i)
    command += (i > 1 ? " " : "") + std::string(argv[i]);
  auto start = std::chrono::steady_clock::now();
  try {
    if (*group)
      cmd_group(action, a1, r);
    else if (*chartab)
      cmd_chartab(action, a1, c, r);
    else if (*params)
      cmd_params(action, rest, r);
    else if (*sp)
      cmd_sieve_params(a1, per_prime, r);
    else if (*sg)
      cmd_sieve_group(a1, a2, c, r);
    else if (*cci)
      cmd_cci(a1, a2, c, r);
    else if (*phi)
      cmd_phi(a1, a2, c, cap, r);
    else if (*search)
      cmd_search(action, a1, a2, vec, c, restarts, r);
    else if (*milp)
      cmd_milp(a1, a2, vec, c, r);
    else if (*dc)
      cmd_design(fp, fd, fk, r);
  } catch (InputError const &e) {
    std::cerr << "input error: " << e.what() << '\n';
    r.code = input;
  } catch (std::invalid_argument const &e) {
    std::cerr << "input error: " << e.what() << '\n';
    r.code = input;
  } catch (std::out_of_range const &e) {
    std::cerr << "input error: " << e.what() << '\n';
    r.code = input;
  } catch (std::exception const &e) {
    std::cerr << "internal error: " << e.what() << '\n';
    r.code = internal;
  }
  double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

  std::string text = r.text.str();
  if (!c.out.empty()) {
    std::ofstream f(c.out, std::ios::binary);
    if (!f) {
      std::cerr << "input error: cannot write " << c.out << '\n';
      return input;
    }
    f << text;
    r.outputs.push_back(c.out);
  } else {
    std::cout << text;
  }
  if (!c.manifest.empty()) {
    json m = {
        {"command", command},
        {"inputs", r.inputs},
        {"seed", c.seed},
        {"jobs", c.jobs},
        {"budget_ms", c.budget_ms},
        {"mode", c.mode},
        {"versions", {{"tool", tool_version}, {"simd", simd::active().name}}},
        {"timing_ms", ms},
        {"exit_code", r.code},
        {"verdict", r.verdict},
        {"outputs", r.outputs},
        {"output_fnv1a", fnv1a(text)},
    };
    std::ofstream f(c.manifest);
    if (!f) {
      std::cerr << "input error: cannot write " << c.manifest << '\n';
      return input;
    }
    f << m.dump(2) << '\n';
  }
  return r.code;
}
