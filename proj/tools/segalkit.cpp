// segalkit: build, check and compute on simplicial sets and Segal
// precategories stored as JSON.
//
// Exit codes: 0 when the computation completed (whatever the verdict), 2 when
// some verdict is Unknown or a plan did not saturate, 1 on structural errors.

#include <chrono>
#include <iostream>
#include <regex>

#include "CLI11.hpp"
#include "segalkit/groupoid.hpp"
#include "segalkit/io.hpp"

using namespace segalkit;

namespace {

struct Report {
  Json verdicts = Json::object();
  Json witnesses = Json::object();
  bool undecided = false;
  std::vector<std::string> summary;

  void verdict(const std::string& key, const std::string& value, bool unknown = false) {
    Json v{{"value", value}};
    if (unknown) {
      v["budget"] = default_budget();
      undecided = true;
    }
    verdicts[key] = v;
    summary.push_back(key + ": " + value);
  }
  void verdict(const std::string& key, Verdict v) { verdict(key, verdict_name(v), v == Verdict::Unknown); }
  void verdict(const std::string& key, bool b) { verdict(key, std::string(b ? "true" : "false")); }
  void verdict(const std::string& key, Tri t) { verdict(key, tri_name(t), t == Tri::Undecided); }
};

SSetPtr shape(const std::string& s) {
  static const std::regex pat(R"((simplex|boundary|upsilon)(\d))");
  if (s == "empty") return empty_object<1>();
  if (s == "point") return standard_simplex(0);
  std::smatch m;
  if (!std::regex_match(s, m, pat)) throw IoError("unknown shape \"" + s + "\" (empty, point, simplexN, boundaryN, upsilonN)");
  int n = std::stoi(m[2].str());
  if (m[1] == "simplex") return standard_simplex(n);
  if (m[1] == "boundary") return boundary(n);
  return upsilon(n);
}

int int_arg(const std::vector<std::string>& args, std::size_t i, const std::string& what) {
  if (i >= args.size()) throw IoError("build: missing " + what);
  try {
    return std::stoi(args[i]);
  } catch (const std::exception&) {
    throw IoError("build: " + what + " must be an integer");
  }
}

struct Loaded {
  Json raw;
  std::string kind;
  SSetPtr sset;
  PrecatPtr precat;
};

Loaded load_object(const std::string& path) {
  Json j = read_json_file(path);
  Loaded l{j, json_kind(j), nullptr, nullptr};
  if (l.kind == "sset") l.sset = object_from_json<1>(j);
  else if (l.kind == "precat") l.precat = object_from_json<2>(j);
  else throw IoError(path + ": expected an sset or precat file, got \"" + l.kind + "\"");
  return l;
}

PrecatPtr load_precat(const std::string& path) {
  Loaded l = load_object(path);
  return l.precat ? l.precat : internally_discrete(*l.sset);
}

Json profile_json(const HomologyProfile& h) {
  Json out = Json::array();
  for (const auto& g : h) {
    Json t = Json::array();
    for (const auto& c : g.torsion) t.push_back(c.get_str());
    out.push_back(Json{{"rank", g.rank}, {"torsion", t}});
  }
  return out;
}

// Homology, recomputed with the other pivot order before it is reported.
HomologyProfile checked_homology(const SSet& x) {
  auto h = homology(x);
  SnfOptions other;
  other.reverse_pivots = true;
  if (!profiles_equal(h, homology(x, other))) throw StructuralError("homology: pivot orders disagree");
  return h;
}

Json category_json(const FiniteCategory& c) {
  Json mor = Json::array();
  for (const auto& m : c.morphisms)
    mor.push_back(Json{{"name", m.name}, {"source", c.objects[static_cast<std::size_t>(m.src)]},
                       {"target", c.objects[static_cast<std::size_t>(m.tgt)]}});
  return Json{{"objects", c.objects}, {"morphisms", mor}, {"identity", c.identity}, {"composition", c.comp}};
}

Json census_json(const Precat& a) {
  Json out = Json::object();
  for (const auto& [d, n] : census(a)) out["(" + std::to_string(d[0]) + "," + std::to_string(d[1]) + ")"] = n;
  return out;
}

void write_or_report(const std::string& out, const Json& j, Report& r) {
  if (out.empty()) r.witnesses["output"] = j;
  else {
    write_json_file(out, j);
    r.witnesses["written"] = out;
  }
}

// ---------------------------------------------------------------- build

void build(const std::string& what, const std::vector<std::string>& args, bool discrete, int trunc, int max_dim,
           const std::string& out, Report& r) {
  Json j;
  auto sset_out = [&](const SSetPtr& x) { j = discrete ? to_json(*internally_discrete(*x)) : to_json(*x); };
  if (what == "simplex" || what == "boundary" || what == "upsilon") {
    sset_out(shape(what + std::to_string(int_arg(args, 0, "dimension"))));
  } else if (what == "ibar") {
    j = to_json(*build_ibar(trunc));
    r.witnesses["truncation"] = trunc;
  } else if (what == "jpre") {
    j = to_json(*build_jpre(trunc));
    r.witnesses["truncation"] = trunc;
  } else if (what == "nerve-poset" || what == "nerve-cyclic" || what == "walking-iso") {
    FiniteCategory c = what == "walking-iso" ? walking_iso()
                       : what == "nerve-poset" ? poset_chain(int_arg(args, 0, "length"))
                                               : cyclic_group(int_arg(args, 0, "order"));
    j = to_json(*nerve_precat(c, max_dim));
  } else if (what == "theta" || what == "spine-theta") {
    int m = int_arg(args, 0, "m");
    if (args.size() < 2) throw IoError("build: missing fill shape");
    auto x = what == "theta" ? standard_simplex(m) : upsilon(m);
    j = to_json(*theta(x, shape(args[1])).obj);
  } else if (what == "boit") {
    j = map_to_json(boit(int_arg(args, 0, "m"), boundary_inclusion(int_arg(args, 1, "k"))).map);
  } else {
    throw IoError("build: unknown construction \"" + what + "\"");
  }
  auto errs = validate(j);
  if (!errs.empty()) throw StructuralError("build produced an invalid file: " + errs.front());
  r.verdict("valid", true);
  write_or_report(out, j, r);
}

// ---------------------------------------------------------------- check

void check(const std::string& what, const std::string& path, int max_level, bool strict, int trunc, Report& r) {
  if (what == "valid") {
    auto errs = validate(read_json_file(path));
    r.verdict("valid", errs.empty());
    r.witnesses["violations"] = errs;
    for (const auto& e : errs) r.summary.push_back("  " + e);
    return;
  }
  if (what == "we") {
    auto f = map_from_json<1>(read_json_file(path));
    r.verdict("we", we_oracle(f));
    return;
  }
  if (what == "equivalence") {
    auto f = map_from_json<2>(read_json_file(path));
    auto e = is_equivalence_of_segal_categories(f, max_level);
    r.verdict("essentially_surjective", e.essentially_surjective);
    Json homs = Json::array();
    for (const auto& h : e.homs)
      homs.push_back(Json{{"x", f.src->gen(h.x).name}, {"y", f.src->gen(h.y).name}, {"verdict", verdict_name(h.verdict)}});
    r.witnesses["homs"] = homs;
    r.verdict("equivalence", e.verdict);
    return;
  }
  PrecatPtr a = load_precat(path);
  if (what == "segal") {
    auto rep = is_segal_category(a, max_level);
    Json entries = Json::array();
    for (const auto& e : rep.entries) {
      std::vector<std::string> t;
      for (int o : e.tuple) t.push_back(a->gen(o).name);
      entries.push_back(Json{{"m", e.m}, {"tuple", t}, {"verdict", verdict_name(e.verdict)}});
    }
    r.witnesses["fibers"] = entries;
    r.verdict("segal", rep.overall);
  } else if (what == "free-ordered") {
    auto rep = is_free_ordered(a, numeric_order(*a), strict, max_level);
    r.witnesses["failures"] = rep.failures;
    if (rep.undecided) r.verdict("free_ordered", "Unknown", true);
    else r.verdict("free_ordered", rep.ok());
  } else if (what == "groupoid") {
    r.verdict("groupoid", is_groupoid(a, max_level));
  } else if (what == "proto") {
    auto rep = is_proto_groupoid(a, trunc);
    Json cells = Json::array();
    for (const auto& c : rep.cells) {
      Json cell{{"u", a->gen(c.u).name}, {"status", tri_name(c.status)}};
      if (c.witness) {
        if (!proto_witness_violations(a, *c.witness).empty()) throw StructuralError("proto: witness fails to validate");
        cell["v"] = elem_to_json(*a, c.witness->v);
        cell["t1"] = elem_to_json(*a, c.witness->t1);
        cell["t2"] = elem_to_json(*a, c.witness->t2);
      }
      cells.push_back(cell);
    }
    r.witnesses["cells"] = cells;
    r.witnesses["truncation"] = trunc;
    r.verdict("proto_groupoid", rep.overall);
  } else {
    throw IoError("check: unknown check \"" + what + "\"");
  }
}

// -------------------------------------------------------------- compute

void compute(const std::string& what, const std::string& path, bool use_diagonal, const std::string& basepoint,
             int max_level, int max_degree, Report& r) {
  Loaded l = load_object(path);
  auto as_sset = [&]() -> SSetPtr {
    if (l.sset) return l.sset;
    if (!use_diagonal) throw IoError(path + ": precategory input needs --diagonal");
    return diagonal(*l.precat);
  };
  if (what == "homology") {
    auto h = checked_homology(*as_sset());
    if (max_degree >= 0) {
      r.witnesses["full_profile"] = profile_string(h);
      h = profile_through(h, max_degree);
    }
    r.witnesses["homology"] = profile_json(h);
    r.verdict("homology", profile_string(h));
  } else if (what == "pi0") {
    auto x = as_sset();
    auto parts = pi0(*x);
    std::size_t covered = 0;
    Json out = Json::array();
    for (const auto& p : parts) {
      std::vector<std::string> names;
      for (int g : p) names.push_back(x->gen(g).name);
      covered += p.size();
      out.push_back(names);
    }
    if (covered != vertex_gens(*x).size()) throw StructuralError("pi0: partition does not exhaust the vertices");
    r.witnesses["components"] = out;
    r.verdict("pi0", std::to_string(parts.size()));
  } else if (what == "pi1") {
    auto x = as_sset();
    int base = basepoint.empty() ? vertex_gens(*x).at(0) : x->index_of(basepoint);
    auto p = pi1_presentation(*x, base);
    r.witnesses["presentation"] = Json{{"generators", p.generators}, {"relators", p.relators}};
    bool trivial = is_trivially_simplifiable(p);
    r.verdict("pi1_trivially_simplifiable", trivial);
  } else if (what == "tau1" || what == "tau0" || what == "homotopy") {
    PrecatPtr a = l.precat ? l.precat : internally_discrete(*l.sset);
    auto c = tau1(a, max_level);
    if (!category_violations(c).empty()) throw StructuralError("tau1: result is not a category");
    if (what == "tau1") {
      r.witnesses["category"] = category_json(c);
      r.verdict("morphisms", std::to_string(c.size()));
    } else if (what == "tau0") {
      Json classes = Json::array();
      std::size_t covered = 0;
      for (const auto& cls : tau0(c)) {
        std::vector<std::string> names;
        for (int x : cls) names.push_back(c.objects[static_cast<std::size_t>(x)]);
        covered += cls.size();
        classes.push_back(names);
      }
      if (covered != c.objects.size()) throw StructuralError("tau0: classes do not exhaust the objects");
      r.witnesses["classes"] = classes;
      r.verdict("tau0", std::to_string(classes.size()));
    } else {
      auto h = homotopy_groups(a, max_level);
      Json loops = Json::array();
      for (const auto& d : h.loops)
        loops.push_back(Json{{"object", a->gen(d.object).name},
                             {"pi1", d.pi1},
                             {"loop_pi1_trivial", d.loop_pi1_trivial},
                             {"loop_homology", profile_json(d.loop_homology)}});
      r.witnesses["loops"] = loops;
      r.verdict("pi0", std::to_string(h.pi0));
      r.verdict("simply_connected", h.simply_connected);
    }
  } else {
    throw IoError("compute: unknown invariant \"" + what + "\"");
  }
}

// ------------------------------------------------------------------ plan

void plan_run(const std::string& object, const std::string& plan, int steps, int max_dim, const std::string& out,
              Report& r) {
  PrecatPtr x = load_precat(object);
  PlanFile pf = plan_from_json(read_json_file(plan));
  Json result;
  PrecatPtr final_stage;
  if (!pf.steps.empty()) {
    Plan<2> p = run_plan_file(x, pf);
    for (const auto& res : p.results)
      for (const auto& copies : res.fillers)
        for (const auto& f : copies)
          if (!f.check().empty()) throw StructuralError("plan: filler fails to validate");
    r.witnesses["census"] = census_json(*p.result());
    r.verdict("rational", is_rational(p));
    final_stage = p.result();
    result = plan_to_json(p);
  } else {
    auto e = e_phi_marked(x, pf.arrows, steps, max_dim);
    if (!marking_violations(pf.arrows, e.marked).empty()) throw StructuralError("plan: marking fails to validate");
    r.witnesses["census"] = census_json(*e.plan.result());
    r.witnesses["unmarked"] = static_cast<int>(e.unmarked.size());
    r.verdict("saturated", e.saturated);
    if (!e.saturated) r.undecided = true;
    final_stage = e.plan.result();
    result = plan_to_json(e.plan);
  }
  r.witnesses["objects"] = static_cast<int>(objects(*final_stage).size());
  r.witnesses["delta2_shaped"] = find_iso<2>(final_stage, internally_discrete(*standard_simplex(2))).has_value();
  write_or_report(out, result, r);
}

// ------------------------------------------------------------------- hom

void hom_transpose_run(int m, const std::string& source, const std::string& target, Report& r) {
  Loaded c = load_object(source);
  if (!c.sset) throw IoError(source + ": expected an sset file");
  auto rep = hom_transpose(m, c.sset, load_precat(target));
  r.witnesses["counts"] = Json{{"direct", rep.direct},
                               {"by_fibers", rep.by_fibers},
                               {"constant_maps", rep.constant_maps},
                               {"spine_direct", rep.spine_direct},
                               {"spine_by_fibers", rep.spine_by_fibers},
                               {"round_trip_failures", rep.round_trip_failures},
                               {"compat_failures", rep.compat_failures}};
  r.verdict("transposition", rep.ok());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Segal precategories: constructions, checks and invariants"};
  app.require_subcommand(1);
  bool summary = false;
  long long budget = -1;
  app.add_flag("--summary", summary, "Human-readable summary instead of JSON");
  app.add_option("--budget", budget, "Search budget (overrides SEGALKIT_BUDGET)");

  std::string what, path, out, object, plan_path, basepoint, source, target;
  std::vector<std::string> args;
  int max_level = 3, max_degree = -1, steps = 1, max_dim = 2, trunc = kIntervalTruncation, m = 1, nerve_dim = 4;
  bool discrete = false, strict = false, use_diagonal = false;

  auto* b = app.add_subcommand("build", "Write a standard object");
  b->add_option("what", what, "simplex|boundary|upsilon|ibar|jpre|nerve-poset|nerve-cyclic|walking-iso|theta|spine-theta|boit")
      ->required();
  b->add_option("args", args, "Dimensions or shapes");
  b->add_option("-o,--output", out);
  b->add_flag("--discrete", discrete, "Internally discrete precategory");
  b->add_option("--truncation", trunc);
  b->add_option("--max-dim", nerve_dim, "Nerve dimension");

  auto* c = app.add_subcommand("check", "Check a property");
  c->add_option("what", what, "segal|free-ordered|groupoid|proto|equivalence|we|valid")->required();
  c->add_option("file", path)->required();
  c->add_option("--max-level", max_level);
  c->add_flag("--strict", strict);
  c->add_option("--truncation", trunc);

  auto* v = app.add_subcommand("validate", "Check every invariant of a file");
  v->add_option("file", path)->required();

  auto* k = app.add_subcommand("compute", "Compute an invariant");
  k->add_option("what", what, "homology|pi0|pi1|tau1|tau0|homotopy")->required();
  k->add_option("file", path)->required();
  k->add_flag("--diagonal", use_diagonal);
  k->add_option("--basepoint", basepoint);
  k->add_option("--max-level", max_level);
  k->add_option("--max-degree", max_degree, "Report homology through this degree");

  auto* p = app.add_subcommand("plan", "Execute a cell-addition plan");
  p->add_option("what", what, "run")->required()->check(CLI::IsMember({"run"}));
  p->add_option("--object", object)->required();
  p->add_option("--plan", plan_path)->required();
  p->add_option("--steps", steps);
  p->add_option("--max-dim", max_dim);
  p->add_option("-o,--output", out);

  auto* h = app.add_subcommand("hom", "Hom transposition counts");
  h->add_option("what", what, "transpose")->required()->check(CLI::IsMember({"transpose"}));
  h->add_option("--m", m)->required();
  h->add_option("--source", source)->required();
  h->add_option("--target", target)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }
  if (budget > 0) setenv("SEGALKIT_BUDGET", std::to_string(budget).c_str(), 1);

  std::vector<std::string> echo(argv + 1, argv + argc);
  Report r;
  auto t0 = std::chrono::steady_clock::now();
  int code = 0;
  try {
    if (*b) build(what, args, discrete, trunc, nerve_dim, out, r);
    else if (*c) check(what, path, max_level, strict, trunc, r);
    else if (*v) check("valid", path, max_level, strict, trunc, r);
    else if (*k) compute(what, path, use_diagonal, basepoint, max_level, max_degree, r);
    else if (*p) plan_run(object, plan_path, steps, max_dim, out, r);
    else if (*h) hom_transpose_run(m, source, target, r);
    code = r.undecided ? 2 : 0;
  } catch (const BudgetExceeded& e) {
    r.verdict("search", "Unknown", true);
    r.witnesses["exhausted"] = e.what();
    code = 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    Json err{{"command", echo}, {"error", e.what()}};
    if (!summary) std::cout << canonical_dump(err);
    return 1;
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (summary) {
    for (const auto& line : r.summary) std::cout << line << "\n";
  } else {
    Json report{{"command", echo},
                {"verdicts", r.verdicts},
                {"witnesses", r.witnesses},
                {"resources", {{"budget", default_budget()}, {"seconds", secs}}}};
    std::cout << canonical_dump(report);
  }
  return code;
}
