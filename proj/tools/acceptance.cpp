// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "segalkit/groupoid.hpp"
#include "segalkit/rs.hpp"

using namespace segalkit;

namespace {

// Wall-clock limits in seconds; 0 means none.
constexpr double kJpreSeconds = 60.0;
constexpr double kProtoSeconds = 30.0;
constexpr double kRoundtripSeconds = 10.0;
constexpr int kTruncation = kIntervalTruncation;
constexpr int kSegalLevels = 3;
constexpr int kDimBound = 100;
// Hom transposition pairs must stay within this many candidate maps.
constexpr long long kMaxCandidates = 200;
// Soundness audit: maps examined per ordered pair, and search nodes per pair.
constexpr int kAuditMapsPerPair = 25;
constexpr long long kAuditBudget = 50'000;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

std::string joined(const std::vector<std::string>& xs, const std::string& sep = ", ") {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? sep : "") + xs[i];
  return s;
}

// ------------------------------------------------------------------ 1

void sphere_interval(Outcome& o) {
  auto h = homology(*diagonal(*build_jpre(kTruncation)));
  o.require(profiles_equal(h, sphere_profile(2)), "diag(J̄^pre) is " + profile_string(h));
  // The same for neighbouring truncations, and an independent elimination order.
  for (int t = 2; t <= 6; ++t) {
    auto ht = homology(*diagonal(*build_jpre(t)), SnfOptions{true});
    o.require(profiles_equal(ht, sphere_profile(2)), "t=" + std::to_string(t) + " gives " + profile_string(ht));
  }
  o.detail << "homology " << profile_string(h) << " at truncation " << kTruncation << ", same for t=2..6";
}

// ------------------------------------------------------------------ 2

void proto_groupoid(Outcome& o) {
  auto j = build_jpre_parts(kTruncation);
  auto r = is_proto_groupoid(j.obj, kTruncation);
  o.require(r.overall == Tri::True, "J̄^pre is not a proto-groupoid");
  bool have_u = false;
  for (const auto& c : r.cells) {
    if (!c.witness) continue;
    auto bad = proto_witness_violations(j.obj, *c.witness);
    o.require(bad.empty(), "witness: " + joined(bad));
    if (c.u == j.u) have_u = c.witness->v == j.obj->gen_elem(j.v);
  }
  o.require(have_u, "no witness for u with v as inverse");
  auto d1 = is_proto_groupoid(internally_discrete(*standard_simplex(1)));
  o.require(d1.overall == Tri::False, "Δ[1] accepted");
  o.detail << r.cells.size() << " non-composite cells witnessed, u validated; Δ[1] rejected";
}

// ------------------------------------------------------------------ 3

void truncation_roundtrip(Outcome& o) {
  std::vector<std::pair<std::string, FiniteCategory>> cats{
      {"poset 0<1<2", poset_chain(2)}, {"Z/2", cyclic_group(2)}, {"walking iso", walking_iso()}};
  std::vector<std::string> done;
  for (const auto& [name, c] : cats) {
    auto back = tau1(nerve_precat(c, kSegalLevels + 1), kSegalLevels);
    auto iso = find_category_iso(c, back);
    bool same = iso && same_table(c, relabel(back, *iso)) && category_violations(back).empty();
    o.require(same, name);
    done.push_back(name + " (" + std::to_string(back.size()) + " morphisms)");
  }
  o.detail << "tables equal for " << joined(done);
}

// ------------------------------------------------------------------ 4

void hom_transposition(Outcome& o) {
  auto disc = [](const SSetPtr& x) { return internally_discrete(*x); };
  struct Pair {
    int m;
    SSetPtr c;
    PrecatPtr a;
  };
  std::vector<Pair> pairs{
      {1, standard_simplex(0), disc(standard_simplex(1))},
      {1, empty_object<1>(), disc(standard_simplex(1))},
      {2, standard_simplex(0), disc(standard_simplex(1))},
      {2, standard_simplex(0), disc(standard_simplex(2))},
      {1, boundary(1), theta(standard_simplex(1), boundary(1)).obj},
      {2, boundary(1), theta(standard_simplex(2), boundary(1)).obj},
      {1, standard_simplex(1), theta(standard_simplex(1), standard_simplex(1)).obj},
      {1, standard_simplex(0), theta(upsilon(2), boundary(1)).obj},
      {2, boundary(1), theta(upsilon(2), boundary(1)).obj},
      {2, standard_simplex(0), nerve_precat(cyclic_group(2), 3)},
  };
  long long total = 0;
  int mismatches = 0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& p = pairs[i];
    auto r = hom_transpose(p.m, p.c, p.a);
    std::string tag = "pair " + std::to_string(i + 1);
    o.require(r.direct <= kMaxCandidates, tag + " has " + std::to_string(r.direct) + " maps");
    if (!r.ok()) {
      ++mismatches;
      o.require(false, tag + ": direct " + std::to_string(r.direct) + ", fibers " + std::to_string(r.by_fibers) +
                           ", spine " + std::to_string(r.spine_direct) + "/" + std::to_string(r.spine_by_fibers));
    }
    total += r.direct;
  }
  o.detail << pairs.size() << " pairs, " << total << " maps, " << mismatches << " mismatches";
}

// ------------------------------------------------------------------ 5

std::vector<int> named(const Precat& a, const std::vector<int>& idx) {
  std::vector<int> t;
  for (int i : idx) t.push_back(a.index_of(std::to_string(i)));
  return t;
}

void generating_arrows(Outcome& o) {
  for (int m = 2; m <= 3; ++m) {
    auto b = boit(m, boundary_inclusion(0));
    auto source = internally_discrete(*upsilon(m));
    auto target = internally_discrete(*standard_simplex(m));
    std::vector<BElem> img;
    for (const auto& g : source->gens()) img.push_back(target->gen_elem(target->index_of(g.name)));
    o.require(arrows_isomorphic(b.map, make_map<2>(source, target, img)), "Boit_" + std::to_string(m) + "(g0)");
  }
  auto fam = generating_families(3, 2);
  int arrows = 0;
  for (const auto* list : {&fam.fg1_type1, &fam.fg1, &fam.fg2, &fam.i})
    for (const auto& a : *list) {
      ++arrows;
      o.require(is_mono<2>(a.map) && a.map.check().empty(), a.id + " is not a levelwise mono");
    }

  // B(m, g)_q(x_0..x_q): unordered -> ∅, constant -> point, adjacent ends -> target, else source.
  int tuples = 0;
  for (int k = 0; k <= 2; ++k)
    for (int m = 2; m <= 3; ++m) {
      auto g = boundary_inclusion(k);
      auto src = boit(m, g).map.src;
      for (int q = 0; q <= 3; ++q) {
        Level l = level(src, q);
        std::vector<int> t(static_cast<std::size_t>(q) + 1, 0);
        std::function<void(int)> rec = [&](int pos) {
          if (pos == q + 1) {
            ++tuples;
            auto f = fiber(l, named(*src, t)).obj;
            bool ordered = true;
            for (int i = 0; i < q; ++i) ordered = ordered && t[static_cast<std::size_t>(i)] <= t[static_cast<std::size_t>(i) + 1];
            bool ok = !ordered ? f->size() == 0
                      : t.front() == t.back() ? find_iso<1>(f, standard_simplex(0)).has_value()
                      : t.back() - t.front() == 1 ? find_iso<1>(f, g.tgt).has_value()
                                                  : find_iso<1>(f, g.src).has_value();
            if (!ok) {
              std::string s;
              for (int v : t) s += std::to_string(v);
              o.require(false, "B(" + std::to_string(m) + ",g" + std::to_string(k) + ") at " + s);
            }
            return;
          }
          for (int v = 0; v <= m; ++v) {
            t[static_cast<std::size_t>(pos)] = v;
            rec(pos + 1);
          }
        };
        rec(0);
      }
    }
  o.detail << "Boit_m(g0) for m=2,3 iso to spine inclusions; " << arrows << " arrows mono; " << tuples
           << " fiber tuples classified";
}

// ------------------------------------------------------------------ 6

void free_ordered(Outcome& o) {
  std::vector<std::pair<std::string, SSetPtr>> xs{
      {"∅", empty_object<1>()}, {"Δ0", standard_simplex(0)}, {"∂Δ1", boundary(1)}, {"Δ1", standard_simplex(1)}};
  struct Fixture {
    std::string name;
    PrecatPtr a;
  };
  std::vector<Fixture> strict;
  for (int m = 0; m <= 3; ++m)
    for (const auto& [xn, x] : xs) {
      strict.push_back({"Δ" + std::to_string(m) + "Θ" + xn, theta(standard_simplex(m), x).obj});
      if (m >= 1) strict.push_back({"Υ" + std::to_string(m) + "Θ" + xn, theta(upsilon(m), x).obj});
    }
  for (int m = 2; m <= 3; ++m)
    for (int k = 0; k <= 2; ++k)
      strict.push_back({"B(" + std::to_string(m) + ",g" + std::to_string(k) + ")", boit(m, boundary_inclusion(k)).map.src});
  int single_fail = 0;
  for (const auto& f : strict) {
    auto r = is_free_ordered(f.a, numeric_order(*f.a), true, kSegalLevels);
    if (!r.ok()) {
      ++single_fail;
      o.require(false, f.name + ": " + joined(r.failures));
    }
  }
  o.detail << strict.size() - static_cast<std::size_t>(single_fail) << "/" << strict.size() << " fixtures strict";

  // Products of two strict fixtures under the lexicographic order. Small
  // representatives keep the products tractable.
  std::vector<Fixture> reps;
  for (const auto& f : strict)
    if (f.name == "Δ0ΘΔ0" || f.name == "Δ1Θ∅" || f.name == "Δ1ΘΔ0" || f.name == "Δ1Θ∂Δ1" || f.name == "Δ2ΘΔ0" ||
        f.name == "Υ2ΘΔ0" || f.name == "B(2,g0)")
      reps.push_back(f);
  int pairs = 0;
  std::vector<std::string> failed;
  for (std::size_t i = 0; i < reps.size(); ++i)
    for (std::size_t j = i; j < reps.size(); ++j) {
      ++pairs;
      auto p = product(reps[i].a, reps[j].a);
      auto ord = lexicographic_order(p, numeric_order(*reps[i].a), numeric_order(*reps[j].a));
      auto r = is_free_ordered(p.obj, ord, true, kSegalLevels);
      if (!r.ok()) failed.push_back(reps[i].name + "×" + reps[j].name);
    }
  o.detail << "; lexicographic products " << pairs - static_cast<int>(failed.size()) << "/" << pairs << " strict";
  if (!failed.empty()) {
    o.require(false, std::to_string(failed.size()) + " products not free-ordered, e.g. " + failed.front() +
                         " (empty fiber over a lex-ordered tuple whose second coordinates are unordered)");
  }
}

// ------------------------------------------------------------------ 7

Family<2> point_family() { return {as_arrow(obj_inclusion())}; }
Family<2> fg1(int max_m, int max_k) { return as_family(generating_families(max_m, max_k).fg1); }

void marked_factorization(Outcome& o) {
  struct Case {
    std::string name;
    PrecatPtr x;
    Family<2> fam;
    int steps;
  };
  std::vector<Case> cases{{"∅, point", empty_object<2>(), point_family(), 2},
                          {"Υ2, FG1(2,0)", internally_discrete(*upsilon(2)), fg1(2, 0), 2},
                          {"Δ1, FG1(2,0)", internally_discrete(*standard_simplex(1)), fg1(2, 0), 1},
                          {"Υ3, FG1(3,0)", internally_discrete(*upsilon(3)), fg1(3, 0), 1},
                          {"Δ2, FG1(2,0)", internally_discrete(*standard_simplex(2)), fg1(2, 0), 2}};
  for (const auto& c : cases) {
    auto r = e_phi_marked<2>(c.x, c.fam, c.steps, kDimBound);
    long long n = count_marked_factorizations<2>(c.fam, r.marked, r.marked, r.can, r.can);
    o.require(n == 1, c.name + " has " + std::to_string(n) + " factorizations");
  }
  // A = ∅, B = point, λ = 2: two points attached, one marked.
  auto fam = point_family();
  auto e = empty_object<2>();
  auto s = e_step<2>(e, fam, 2, kDimBound);
  auto two = apply_simple<2>(e, fam, s);
  MarkedObject<2> marked{two.obj, {{key_of(s[0].diagram), two.fillers[0][0]}}};
  long long n = count_marked_factorizations<2>(fam, marked, marked, two.map, two.map);
  o.require(n == 2, "counterexample gives " + std::to_string(n));
  o.detail << cases.size() << " E_Φ outputs with exactly 1; counterexample instance " << n;
}

// ------------------------------------------------------------------ 8

int total_mult(const SimpleStep<1>& s) {
  int n = 0;
  for (const auto& e : s) n += e.mult;
  return n;
}

SSetPtr edge_and_point() { return coproduct<1>({standard_simplex(1), standard_simplex(0)}, {"a", "b"}).obj; }

void plan_calculus(Outcome& o) {
  auto fam = simplicial_cell_family();
  std::mt19937 rng(2024);
  std::vector<SSetPtr> seeds{standard_simplex(0), boundary(2), edge_and_point(), upsilon(2)};
  int rational = 0;
  for (int t = 0; t < 200; ++t) {
    auto p = random_rational_plan(seeds[static_cast<std::size_t>(t) % seeds.size()], fam, rng,
                                  std::uniform_int_distribution<int>(1, 5)(rng), 3);
    bool ok = is_rational(p);
    for (const auto& r : p.results) ok = ok && is_mono(r.map);
    rational += ok;
  }
  o.require(rational == 200, std::to_string(200 - rational) + " random plans not rational");

  int fixpoints = 0;
  for (int t = 0; t < 30; ++t) {
    auto p = random_rational_plan(t % 2 ? boundary(2) : edge_and_point(), fam, rng, 3, 3);
    auto r = rationalize(p);
    bool same = r.plan.length() == p.length();
    for (int j = 0; same && j < p.length(); ++j) {
      const auto& a = p.steps[static_cast<std::size_t>(j)];
      const auto& b = r.plan.steps[static_cast<std::size_t>(j)];
      same = a.size() == b.size();
      for (std::size_t k = 0; same && k < a.size(); ++k) same = a[k].mult == b[k].mult;
    }
    for (const auto& c : r.comparison) same = same && is_iso(c);
    fixpoints += same;
  }
  o.require(fixpoints == 30, std::to_string(30 - fixpoints) + " rationalizations moved");

  // Re-adding a cell later versus one more copy at once: equal rationalizations.
  int pairs = 0, iso = 0;
  for (int t = 0; pairs < 20 && t < 400; ++t) {
    auto p = random_rational_plan(t % 2 ? edge_and_point() : boundary(2), fam, rng, 3, 3);
    int n = p.length();
    if (p.steps[0].empty()) continue;
    int j = std::uniform_int_distribution<int>(1, n - 1)(rng);
    std::size_t pick = std::uniform_int_distribution<std::size_t>(0, p.steps[0].size() - 1)(rng);
    const auto& d = p.steps[0][pick];
    auto later = p.steps;
    later[static_cast<std::size_t>(j)].push_back(
        StepEntry<1>{Diagram<1>{d.diagram.arrow, compose(p.to_stage(0, j), d.diagram.attach)}, 1});
    auto bumped = p.steps;
    bumped[0][pick].mult += 1;
    auto p1 = replay(p, j, later).plan;
    auto p2 = replay(p, 0, bumped).plan;
    auto r1 = rationalize(p1).plan, r2 = rationalize(p2).plan;
    bool equal = true;
    for (int k = 0; k < n; ++k)
      equal = equal && total_mult(r1.steps[static_cast<std::size_t>(k)]) == total_mult(r2.steps[static_cast<std::size_t>(k)]);
    o.require(equal, "pair " + std::to_string(pairs + 1) + " rationalizes differently");
    ++pairs;
    iso += isomorphic_over(p1.to_stage(0, n), p2.to_stage(0, n)).has_value();
  }
  o.require(pairs == 20, "only " + std::to_string(pairs) + " pairs");
  o.require(iso == pairs, std::to_string(pairs - iso) + " pairs not isomorphic over X");
  o.detail << rational << "/200 rational, " << fixpoints << "/30 fixpoints, " << iso << "/" << pairs
           << " equal-rationalization pairs isomorphic over X";
}

// ------------------------------------------------------------------ 9

// Monotone maps [q] -> [p], enumerated directly.
long long monotone_count(int q, int p, const std::function<bool(const std::vector<int>&)>& keep) {
  long long n = 0;
  std::vector<int> v(static_cast<std::size_t>(q) + 1, 0);
  std::function<void(int, int)> rec = [&](int pos, int lo) {
    if (pos > q) {
      n += keep(v);
      return;
    }
    for (int x = lo; x <= p; ++x) {
      v[static_cast<std::size_t>(pos)] = x;
      rec(pos + 1, x);
    }
  };
  rec(0, 0);
  return n;
}

bool same_precat(const PrecatPtr& x, const PrecatPtr& y) { return census(*x) == census(*y) && find_iso<2>(x, y).has_value(); }

void rs_algebra(Outcome& o) {
  std::mt19937 rng(41);
  int factored = 0;
  for (int n = 0; n < 5; ++n) {
    auto in = random_reg_instance(rng);
    factored += reg_seg_factorization(in.a, in.lm, in.phi, in.psi).isomorphic;
  }
  o.require(factored == 5, std::to_string(5 - factored) + " Reg/Seg factorizations differ");
  int composed = 0;
  for (int n = 0; n < 5; ++n) {
    auto in = random_rs_instance(rng);
    auto first = rs(in.a, in.first);
    auto c = compose_rs_data(in.first, in.second);
    bool ok = rs_violations(first.out, in.second).empty() && rs_violations(in.a, c).empty() &&
              same_precat(rs(first.out, in.second).out.a, rs(in.a, c).out.a);
    composed += ok;
  }
  o.require(composed == 5, std::to_string(5 - composed) + " RS compositions differ");

  auto nonconstant = [](const std::vector<int>& v) { return v.front() != v.back(); };
  auto nonprincipal = [](int m) {
    return [m](const std::vector<int>& v) {
      for (int k = 0; k < m; ++k)
        if (v.front() >= k && v.back() <= k + 1) return false;
      return true;
    };
  };
  long long a = static_cast<long long>(delta_nonconstant(2, 1).size());
  long long b = static_cast<long long>(delta_nonconstant(1, 1).size());
  long long c = static_cast<long long>(delta_nonprincipal(2, 2).size());
  o.require(a == 2 && a == monotone_count(2, 1, nonconstant), "|Δ(2,1)⁰| = " + std::to_string(a));
  o.require(b == 1 && b == monotone_count(1, 1, nonconstant), "|Δ(1,1)⁰| = " + std::to_string(b));
  o.require(c == 3 && c == monotone_count(2, 2, nonprincipal(2)), "|Δ(2,2)¹| = " + std::to_string(c));
  o.detail << factored << "/5 factorizations, " << composed << "/5 compositions; index sets " << a << ", " << b << ", " << c;
}

// ----------------------------------------------------------------- 10

void oracle_sanity(Outcome& o) {
  o.require(profiles_equal(homology(*boundary(2)), sphere_profile(1)), "∂Δ2");
  o.require(profiles_equal(homology(*boundary(3)), sphere_profile(2)), "∂Δ3");
  auto hi = homology(*ibar_sset(kTruncation));
  o.require(profiles_equal(hi, point_profile()), "Ī is " + profile_string(hi));
  o.require(is_trivially_simplifiable(pi1_presentation(*boundary(3), 0)), "π1(∂Δ3)");

  auto sphere2 = [] {
    auto g = boundary_inclusion(2);
    return pushout<1>(g, g).obj;
  }();
  std::vector<SSetPtr> corpus{empty_object<1>(),
                              standard_simplex(0),
                              standard_simplex(1),
                              standard_simplex(2),
                              standard_simplex(3),
                              boundary(1),
                              boundary(2),
                              boundary(3),
                              upsilon(2),
                              upsilon(3),
                              sphere2,
                              product(standard_simplex(1), standard_simplex(1)).obj,
                              coproduct<1>({standard_simplex(0), standard_simplex(0)}, {"l", "r"}).obj,
                              ibar_sset(kTruncation),
                              nerve(walking_iso(), 3),
                              nerve(cyclic_group(2), 3),
                              nerve(poset_chain(2), 3),
                              diagonal(*theta(standard_simplex(1), boundary(1)).obj),
                              diagonal(*build_jpre(3))};
  std::vector<HomologyProfile> prof;
  for (const auto& x : corpus) prof.push_back(homology(*x));
  long long maps = 0, differing = 0, unsound = 0;
  for (std::size_t i = 0; i < corpus.size(); ++i)
    for (std::size_t j = 0; j < corpus.size(); ++j) {
      MapSearch<1> opts;
      opts.budget = kAuditBudget;
      int seen = 0;
      enumerate_maps<1>(
          corpus[i], corpus[j],
          [&](const SSetMap& f) {
            ++maps;
            if (!profiles_equal(prof[i], prof[j])) {
              ++differing;
              if (we_oracle(f) == Verdict::WE) ++unsound;
            }
            return ++seen < kAuditMapsPerPair;
          },
          opts);
    }
  o.require(unsound == 0, std::to_string(unsound) + " WE verdicts across differing homology");
  o.require(differing > 0, "audit saw no map between objects of differing homology");
  o.detail << "spheres and Ī exact; π1(∂Δ3) trivial; audit of " << maps << " maps (" << differing
           << " across differing homology), " << unsound << " unsound";
}

// ----------------------------------------------------------------- 11

void segal_checks(Outcome& o) {
  std::vector<std::pair<std::string, PrecatPtr>> nerves{
      {"N(0<1)", nerve_precat(poset_chain(1), 4)},       {"N(0<1<2)", nerve_precat(poset_chain(2), 4)},
      {"N(0<1<2<3)", nerve_precat(poset_chain(3), 4)},   {"N(Z/2)", nerve_precat(cyclic_group(2), 4)},
      {"N(Z/3)", nerve_precat(cyclic_group(3), 4)},      {"N(walking iso)", nerve_precat(walking_iso(), 4)},
      {"Ī", build_ibar(kTruncation)},                    {"discrete {a,b}", discrete_precat({"a", "b"})}};
  for (const auto& [name, a] : nerves)
    o.require(is_segal_category(a, kSegalLevels).overall == Verdict::WE, name + " not Segal");
  auto up = is_segal_category(internally_discrete(*upsilon(2)), 2);
  o.require(up.overall == Verdict::NotWE, "Υ(2) passes at m=2");

  auto ib = build_ibar(kTruncation);
  auto one = is_equivalence_of_segal_categories(full_subprecat(ib, {ib->index_of("0")}).incl);
  o.require(one.verdict == Verdict::WE, "Ī sub-precategory on 0 is not an equivalence");
  auto p = nerve_precat(poset_chain(1), 4);
  auto points = subobject<2>(p, objects(*p));
  auto two = is_equivalence_of_segal_categories(points.incl);
  o.require(two.verdict == Verdict::NotWE, "objects of N(0<1) give an equivalence");
  o.detail << nerves.size() << " nerves Segal to M=" << kSegalLevels << "; Υ(2) NotWE at m=2; {0} ⊂ Ī "
           << verdict_name(one.verdict) << ", objects ⊂ N(0<1) " << verdict_name(two.verdict);
}

// ----------------------------------------------------------------- 12

bool same_objects(const PrecatMap& f) {
  std::set<int> hit;
  for (int g : objects(*f.src)) {
    const auto& e = f.img[static_cast<std::size_t>(g)];
    if (!e.nondegenerate()) return false;
    hit.insert(e.gen);
  }
  auto to = objects(*f.tgt);
  return hit.size() == objects(*f.src).size() && hit == std::set<int>(to.begin(), to.end());
}

void bounded_cat(Outcome& o) {
  constexpr int kStages = 3;
  DegeneracyTable t(generating_families(3, 1).fg1);
  const auto& fam = t.family();
  auto u2 = internally_discrete(*upsilon(2));
  auto c = cat_c(t, u2, kStages, kDimBound);
  o.require(c.plan.length() == kStages, "plan has " + std::to_string(c.plan.length()) + " stages");
  std::vector<std::string> per;
  for (int j = 0; j < kStages && j < c.plan.length(); ++j) {
    auto x = c.plan.stages[static_cast<std::size_t>(j)];
    auto diagrams = enumerate_diagrams<2>(x, fam, kDimBound);
    auto open = unfilled_diagrams<2>(fam, x, c.plan.to_stage(j, j + 1), c.markings[static_cast<std::size_t>(j) + 1], kDimBound);
    o.require(open.empty(), std::to_string(open.size()) + " unfilled at stage " + std::to_string(j));
    per.push_back(std::to_string(diagrams.size()));
  }

  auto raj = raj_1m(paint_all(u2, 2), 1);
  o.require(same_objects(raj.from_a), "raj_1m moved objects");
  auto cat = cat_1m(u2, 2, 3, 1);
  o.require(same_objects(cat.from_a), "cat_1m moved objects");
  auto big = bigcat(u2, 1, 3, 1, 0);
  o.require(same_objects(big.from_a), "bigcat moved objects");

  auto ids = [](const PrecatPtr& x, const std::vector<std::string>& names) {
    std::vector<int> out;
    for (const auto& n : names) out.push_back(x->index_of(n));
    return out;
  };
  auto u3 = internally_discrete(*upsilon(3));
  auto d2 = internally_discrete(*standard_simplex(2));
  std::vector<IntersectionReport> inter{
      cat_c_intersection(u2, ids(u2, {"01"}), ids(u2, {"12"}), t, kStages, kDimBound),
      cat_c_intersection(u3, ids(u3, {"01", "12"}), ids(u3, {"12", "23"}), t, kStages, kDimBound),
      cat_c_intersection(d2, ids(d2, {"01", "12"}), ids(d2, {"02"}), t, kStages, kDimBound)};
  int good = 0;
  for (const auto& r : inter) good += r.ok();
  o.require(good == 3, std::to_string(3 - good) + " intersection pairs fail");
  o.detail << "diagrams per stage " << joined(per) << ", all filled by the next stage; objects kept by Raj, Cat, Bigcat; "
           << good << "/3 intersection pairs";
}

struct Check {
  int id;
  const char* name;
  double limit;
  void (*run)(Outcome&);
};

}  // namespace

int main() {
  const std::vector<Check> all{
      {1, "sphere interval", kJpreSeconds, sphere_interval},
      {2, "proto-groupoid", kProtoSeconds, proto_groupoid},
      {3, "truncation roundtrip", kRoundtripSeconds, truncation_roundtrip},
      {4, "hom transposition", 0, hom_transposition},
      {5, "generating arrows", 0, generating_arrows},
      {6, "free-ordered", 0, free_ordered},
      {7, "marked factorization", 0, marked_factorization},
      {8, "plan calculus", 0, plan_calculus},
      {9, "Reg/Seg/RS algebra", 0, rs_algebra},
      {10, "oracle sanity", 0, oracle_sanity},
      {11, "Segal and equivalence checks", 0, segal_checks},
      {12, "bounded Cat", 0, bounded_cat},
  };
  int failed = 0;
  for (const auto& c : all) {
    Outcome o;
    auto start = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit > 0) o.require(secs < c.limit, "over the " + std::to_string(static_cast<int>(c.limit)) + " s limit");
    failed += !o.pass;
    std::printf("%s %2d %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.str().c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria pass\n", static_cast<int>(all.size()) - failed, all.size());
  return failed == 0 ? 0 : 1;
}
