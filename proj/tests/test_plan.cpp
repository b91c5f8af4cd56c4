#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "segalkit/plan.hpp"

using namespace segalkit;

namespace {

constexpr int kL = 100;

Family<2> point_family() { return {as_arrow(obj_inclusion())}; }

Family<2> fg1(int max_m, int max_k) { return as_family(generating_families(max_m, max_k).fg1); }

int arrow_index(const Family<2>& fam, const std::string& id) {
  for (std::size_t i = 0; i < fam.size(); ++i)
    if (fam[i].id == id) return static_cast<int>(i);
  FAIL("no arrow " << id);
  return -1;
}

// Names of the nondegenerate generators of bidegree (1,0) hit by the attach map.
std::set<std::string> edges_hit(const Map<2>& attach) {
  std::set<std::string> out;
  for (const auto& e : attach.img)
    if (e.nondegenerate() && e.deg() == Deg<2>{1, 0}) out.insert(attach.tgt->gen(e.gen).name);
  return out;
}

std::optional<Diagram<2>> diagram_hitting(const PrecatPtr& x, const Family<2>& fam, int arrow,
                                          const std::set<std::string>& names) {
  for (auto& d : enumerate_diagrams<2>(x, fam, kL))
    if (d.arrow == arrow && edges_hit(d.attach) == names) return d;
  return std::nullopt;
}

template <int K>
std::set<int> image_set(const Map<K>& f) {
  std::set<int> s;
  for (const auto& e : f.img) s.insert(e.gen);
  return s;
}

// Diagram factors through a mono when every generator it hits is in the image.
template <int K>
bool lands_in(const Map<K>& attach, const Map<K>& mono) {
  auto img = image_set(mono);
  for (const auto& e : attach.img)
    if (!img.count(e.gen)) return false;
  return true;
}

int total_mult(const SimpleStep<1>& s) {
  int n = 0;
  for (const auto& e : s) n += e.mult;
  return n;
}

SSetPtr edge_and_point() {
  return coproduct<1>({standard_simplex(1), standard_simplex(0)}, {"a", "b"}).obj;
}

Family<1> edge_and_horn() {
  auto all = simplicial_cell_family();
  return {all[1], all[4]};
}

bool same_objects(const PrecatMap& f) {
  std::set<int> hit;
  for (int g : objects(*f.src)) {
    const auto& e = f.img[static_cast<std::size_t>(g)];
    if (!e.nondegenerate()) return false;
    hit.insert(e.gen);
  }
  auto to = objects(*f.tgt);
  return hit == std::set<int>(to.begin(), to.end());
}

bool has_two_cell(const PrecatPtr& x, int d2, int d0) {
  for (int g = 0; g < x->size(); ++g) {
    const auto& gen = x->gen(g);
    if (gen.deg != Deg<2>{2, 0}) continue;
    const auto& f = gen.faces[0];
    if (f[2].nondegenerate() && f[2].gen == d2 && f[0].nondegenerate() && f[0].gen == d0) return true;
  }
  return false;
}

}  // namespace

TEST_SUITE("plan") {
  TEST_CASE("empty step") {
    auto x = internally_discrete(*upsilon(2));
    auto r = apply_simple<2>(x, fg1(2, 0), {});
    CHECK(r.obj == x);
    CHECK(is_iso(r.map));
    auto s = e_step<2>(x, Family<2>{}, 3, kL);
    CHECK(s.empty());
  }

  TEST_CASE("two copies of a point on the empty object") {
    auto fam = point_family();
    auto e = empty_object<2>();
    auto s = e_step<2>(e, fam, 2, kL);
    REQUIRE(s.size() == 1);
    CHECK(s[0].mult == 2);
    auto r = apply_simple<2>(e, fam, s);
    CHECK(r.obj->size() == 2);
    CHECK(objects(*r.obj).size() == 2);
  }

  TEST_CASE("the spine diagram on Upsilon(2) gives Delta[2]") {
    Family<2> fam{as_arrow(boit(2, boundary_inclusion(0)))};
    auto u2 = internally_discrete(*upsilon(2));
    auto attach = find_iso<2>(fam[0].map.src, u2);
    REQUIRE(attach);
    auto r = apply_simple<2>(u2, fam, {StepEntry<2>{Diagram<2>{0, *attach}, 1}});
    auto d2 = internally_discrete(*standard_simplex(2));
    CHECK(census(*r.obj) == census(*d2));
    CHECK(find_iso<2>(r.obj, d2).has_value());
  }

  TEST_CASE("enumeration and fillers") {
    auto pt = internally_discrete(*standard_simplex(0));
    CHECK(enumerate_diagrams<2>(pt, point_family(), kL).size() == 1);

    auto fam = fg1(2, 0);
    int b2 = arrow_index(fam, "Boit_2(g0)");
    auto d2 = internally_discrete(*standard_simplex(2));
    auto on_d2 = diagram_hitting(d2, fam, b2, {"01", "12"});
    REQUIRE(on_d2);
    CHECK(has_filler<2>(d2, fam, *on_d2) == Tri::True);
    auto u2 = internally_discrete(*upsilon(2));
    auto on_u2 = diagram_hitting(u2, fam, b2, {"01", "12"});
    REQUIRE(on_u2);
    CHECK(has_filler<2>(u2, fam, *on_u2) == Tri::False);
  }

  TEST_CASE("rational composition drops what is already attached") {
    auto fam = edge_and_horn();
    auto x = edge_and_point();
    auto p = compose_rational(empty_plan<1>(x, fam), e_step<1>(x, fam, 1, 2));
    auto next = e_step<1>(p.result(), fam, 1, 2);
    auto f = p.to_stage(0, 1);
    std::size_t fresh = 0;
    for (const auto& e : next) fresh += lands_in(e.diagram.attach, f) ? 0 : 1;
    auto q = compose_rational(p, next);
    CHECK(q.steps[1].size() == fresh);
    for (const auto& e : q.steps[1]) CHECK_FALSE(lands_in(e.diagram.attach, f));
    CHECK(is_rational(q));

    // The last step again, pushed to the result: everything factors.
    SimpleStep<1> again;
    for (auto e : q.steps.back()) {
      e.diagram.attach = compose(q.to_stage(1, 2), e.diagram.attach);
      again.push_back(e);
    }
    auto r = compose_rational(q, again);
    CHECK(r.steps.back().empty());

    auto nq = compose_naive(q, empty_plan<1>(q.result(), fam));
    CHECK(nq.length() == q.length());
    CHECK(nq.result() == q.result());
  }

  TEST_CASE("randomized rational plans") {
    std::mt19937 rng(7);
    auto fam = simplicial_cell_family();
    std::vector<SSetPtr> seeds{standard_simplex(0), boundary(2), edge_and_point(), upsilon(2)};
    for (int t = 0; t < 200; ++t) {
      auto x = seeds[static_cast<std::size_t>(t) % seeds.size()];
      int steps = std::uniform_int_distribution<int>(1, 5)(rng);
      auto p = random_rational_plan(x, fam, rng, steps, 3);
      CHECK(is_rational(p));
      CHECK(has_rational_compositions(p));
      for (const auto& r : p.results) CHECK(is_mono(r.map));
    }
  }

  TEST_CASE("rationalize is a fixpoint on rational plans") {
    std::mt19937 rng(11);
    auto fam = simplicial_cell_family();
    for (int t = 0; t < 30; ++t) {
      auto p = random_rational_plan(t % 2 ? boundary(2) : edge_and_point(), fam, rng, 3, 3);
      auto r = rationalize(p);
      REQUIRE(r.plan.length() == p.length());
      for (int j = 0; j < p.length(); ++j) {
        const auto& a = p.steps[static_cast<std::size_t>(j)];
        const auto& b = r.plan.steps[static_cast<std::size_t>(j)];
        REQUIRE(a.size() == b.size());
        for (std::size_t e = 0; e < a.size(); ++e) CHECK(a[e].mult == b[e].mult);
      }
      for (const auto& c : r.comparison) CHECK(is_iso(c));
    }
  }

  TEST_CASE("rationalize regroups a naive double step") {
    auto fam = edge_and_horn();
    auto x = edge_and_point();
    REQUIRE(x->size() == 4);
    auto p = empty_plan<1>(x, fam);
    append_step(p, e_step<1>(x, fam, 1, 2));
    append_step(p, e_step<1>(p.result(), fam, 1, 2));
    CHECK_FALSE(is_rational(p));
    std::size_t fresh = 0;
    for (const auto& e : p.steps[1]) fresh += lands_in(e.diagram.attach, p.to_stage(0, 1)) ? 0 : 1;
    REQUIRE(fresh > 0);

    auto r = rationalize(p);
    CHECK(is_rational(r.plan));
    REQUIRE(r.plan.steps[0].size() == p.steps[0].size());
    for (const auto& e : r.plan.steps[0]) CHECK(e.mult == 2);
    CHECK(r.plan.steps[1].size() == fresh);
    for (const auto& e : r.plan.steps[1]) CHECK(e.mult == 1);
    CHECK(total_mult(r.plan.steps[0]) + total_mult(r.plan.steps[1]) ==
          total_mult(p.steps[0]) + total_mult(p.steps[1]));
    CHECK(is_iso(r.comparison.back()));
    CHECK(isomorphic_over(p.to_stage(0, 2), r.plan.to_stage(0, 2)).has_value());
  }

  TEST_CASE("equal rationalizations give isomorphic results") {
    std::mt19937 rng(23);
    auto fam = simplicial_cell_family();
    int pairs = 0;
    for (int t = 0; pairs < 20 && t < 200; ++t) {
      auto p = random_rational_plan(t % 2 ? edge_and_point() : boundary(2), fam, rng, 3, 3);
      int n = p.length();
      if (p.steps[0].empty()) continue;
      int j = std::uniform_int_distribution<int>(1, n - 1)(rng);
      std::size_t pick = std::uniform_int_distribution<std::size_t>(0, p.steps[0].size() - 1)(rng);
      const auto& d = p.steps[0][pick];

      // The same cell once more: re-added at step j, or one more copy at step 0.
      auto later = p.steps;
      later[static_cast<std::size_t>(j)].push_back(
          StepEntry<1>{Diagram<1>{d.diagram.arrow, compose(p.to_stage(0, j), d.diagram.attach)}, 1});
      auto bumped = p.steps;
      bumped[0][pick].mult += 1;
      auto p1 = replay(p, j, later).plan;
      auto p2 = replay(p, 0, bumped).plan;
      CHECK_FALSE(is_rational(p1));
      CHECK(is_rational(p2));

      auto r1 = rationalize(p1).plan;
      auto r2 = rationalize(p2).plan;
      for (int k = 0; k < n; ++k) {
        CHECK(total_mult(r1.steps[static_cast<std::size_t>(k)]) == total_mult(r2.steps[static_cast<std::size_t>(k)]));
        CHECK(r1.stages[static_cast<std::size_t>(k) + 1]->size() == r2.stages[static_cast<std::size_t>(k) + 1]->size());
      }
      CHECK(isomorphic_over(p1.to_stage(0, n), p2.to_stage(0, n)).has_value());
      ++pairs;
    }
    CHECK(pairs == 20);
  }

  TEST_CASE("a step after a chain equals the interleaved chain") {
    std::mt19937 rng(31);
    auto fam = simplicial_cell_family();
    for (int t = 0; t < 20; ++t) {
      auto x = t % 2 ? boundary(2) : edge_and_point();
      auto p = random_rational_plan(x, fam, rng, 3, 2);
      auto extra = random_step(x, fam, rng, 2, 2, 2);
      int n = p.length();
      auto steps = p.steps;
      for (const auto& e : extra) steps[0].push_back(e);
      auto inter = replay(p, 0, steps).plan;
      SimpleStep<1> moved;
      for (auto e : extra) {
        e.diagram.attach = compose(p.to_stage(0, n), e.diagram.attach);
        moved.push_back(e);
      }
      auto after = apply_simple<1>(p.result(), fam, moved);
      CHECK(isomorphic_over(inter.to_stage(0, n), compose(after.map, p.to_stage(0, n))).has_value());
    }
  }

  TEST_CASE("bounded E_Phi on Upsilon(2) attaches the composite") {
    auto fam = fg1(2, 0);
    auto u2 = internally_discrete(*upsilon(2));
    auto r = e_phi_marked<2>(u2, fam, 2, kL);
    CHECK(marking_violations(fam, r.marked).empty());
    REQUIRE(r.plan.length() == 2);
    auto f = r.plan.to_stage(0, 1);
    auto x1 = r.plan.stages[1];
    int e01 = f.img[static_cast<std::size_t>(u2->index_of("01"))].gen;
    int e12 = f.img[static_cast<std::size_t>(u2->index_of("12"))].gen;
    auto old = image_set(f);
    bool composite = false;
    for (int g = 0; g < x1->size(); ++g) {
      const auto& gen = x1->gen(g);
      if (gen.deg != Deg<2>{2, 0}) continue;
      const auto& fs = gen.faces[0];
      if (fs[2] == x1->gen_elem(e01) && fs[0] == x1->gen_elem(e12) && fs[1].nondegenerate() && !old.count(fs[1].gen))
        composite = true;
    }
    CHECK(composite);
    for (const auto& s : r.plan.results) CHECK(is_mono(s.map));
  }

  TEST_CASE("E_Phi stops on an injective object") {
    auto r = e_phi_marked<2>(empty_object<2>(), point_family(), 3, kL);
    CHECK(r.plan.steps[0].size() == 1);
    CHECK(r.plan.steps[1].empty());
    CHECK(r.plan.steps[2].empty());
    CHECK(r.saturated);
    CHECK(r.marked.marking.size() == 1);
  }

  TEST_CASE("marked factorizations") {
    struct Case {
      PrecatPtr x;
      Family<2> fam;
      int steps;
    };
    std::vector<Case> cases{{empty_object<2>(), point_family(), 2},
                            {internally_discrete(*upsilon(2)), fg1(2, 0), 2},
                            {internally_discrete(*standard_simplex(1)), fg1(2, 0), 1},
                            {internally_discrete(*upsilon(3)), fg1(3, 0), 1}};
    for (const auto& c : cases) {
      auto r = e_phi_marked<2>(c.x, c.fam, c.steps, kL);
      CHECK(count_marked_factorizations<2>(c.fam, r.marked, r.marked, r.can, r.can) == 1);
    }

    // Two points attached to the empty object, one of them marked.
    auto fam = point_family();
    auto e = empty_object<2>();
    auto s = e_step<2>(e, fam, 2, kL);
    auto two = apply_simple<2>(e, fam, s);
    MarkedObject<2> marked{two.obj, {{key_of(s[0].diagram), two.fillers[0][0]}}};
    CHECK(count_marked_factorizations<2>(fam, marked, marked, two.map, two.map) == 2);

    // Into two points with no marks at all.
    auto one = e_phi_marked<2>(e, fam, 1, kL);
    MarkedObject<2> bare{two.obj, {}};
    auto base = empty_map<2>(two.obj);
    CHECK(count_marked_factorizations<2>(fam, one.marked, bare, one.can, base, false) == 2);
    CHECK(count_marked_factorizations<2>(fam, one.marked, bare, one.can, base, true) == 0);
  }

  TEST_CASE("painted schedules keep the objects") {
    auto u2 = internally_discrete(*upsilon(2));
    auto raj = raj_1m(paint_all(u2, 2), 0);
    CHECK(raj.witness_checked);
    CHECK(raj.witness_ok);
    CHECK(same_objects(raj.from_a));
    CHECK(painting_violations(raj.out).empty());
    int e01 = raj.from_a.img[static_cast<std::size_t>(u2->index_of("01"))].gen;
    int e12 = raj.from_a.img[static_cast<std::size_t>(u2->index_of("12"))].gen;
    CHECK(has_two_cell(raj.out.a, e01, e12));

    auto c = cat_1m(u2, 2, 3, 1);
    CHECK(c.witnesses_ok);
    CHECK(c.saturated);
    CHECK(same_objects(c.from_a));
    CHECK(is_mono(c.from_a));

    auto b = bigcat(u2, 1, 3, 1, 0);
    CHECK(same_objects(b.from_a));

    auto none = cat_1m(empty_object<2>(), 2, 2, 0);
    CHECK(none.obj->size() == 0);
  }

  TEST_CASE("canonical Cat") {
    DegeneracyTable t(generating_families(3, 1).fg1);
    std::vector<PrecatPtr> inputs{internally_discrete(*upsilon(2)), theta(standard_simplex(1), boundary(1)).obj,
                                  theta(upsilon(2), standard_simplex(0)).obj};
    for (const auto& a : inputs) {
      auto c = cat_c(t, a, 6, kL);
      CHECK(c.saturated);
      CHECK(canonicity_violations(t, c.out, true).empty());
      CHECK(is_mono(c.from_a));
      CHECK(is_free_ordered(c.out.obj, numeric_order(*c.out.obj), true, 3).ok());

      auto again = raj_c(t, c.out, kL);
      CHECK(again.attached == 0);
      CHECK(again.inherited == 0);
      CHECK(is_iso(again.from_a));
    }
  }

  TEST_CASE("degenerate Boit diagrams") {
    DegeneracyTable t(generating_families(3, 0).fg1);
    const auto& fam = t.family();
    int b2 = arrow_index(fam, "Boit_2(g0)"), b3 = arrow_index(fam, "Boit_3(g0)");
    auto d2 = internally_discrete(*standard_simplex(2));
    auto spine = diagram_hitting(d2, fam, b2, {"01", "12"});
    REQUIRE(spine);
    int seen = 0;
    for (const auto& pr : t.presentations(b3)) {
      if (pr.parent != b2) continue;
      Diagram<2> d{b3, compose(spine->attach, pr.e)};
      CHECK(t.is_degenerate(d));
      auto back = t.factor(pr, d.attach);
      REQUIRE(back);
      CHECK(back->img == spine->attach.img);
      ++seen;
    }
    CHECK(seen == 3);

    auto d3 = internally_discrete(*standard_simplex(3));
    auto top = diagram_hitting(d3, fam, b3, {"01", "12", "23"});
    REQUIRE(top);
    CHECK_FALSE(t.is_degenerate(*top));
  }

  TEST_CASE("a non-canonical marking is rejected") {
    DegeneracyTable t(generating_families(3, 1).fg1);
    auto c = cat_c(t, internally_discrete(*upsilon(2)), 6, kL);
    const auto& fam = t.family();
    std::optional<DiagramKey<2>> parent;
    for (const auto& [key, fil] : c.out.marking) {
      Diagram<2> d{key.first, Map<2>{fam[static_cast<std::size_t>(key.first)].map.src, c.out.obj, key.second}};
      auto deg = t.degeneracy(d);
      if (!deg) continue;
      const auto& pr = t.presentations(d.arrow)[static_cast<std::size_t>(deg->first)];
      if (pr.parent >= 0) {
        parent = DiagramKey<2>{pr.parent, deg->second.img};
        break;
      }
    }
    REQUIRE(parent);
    MarkedObject<2> broken = c.out;
    broken.marking.erase(*parent);
    CHECK_FALSE(canonicity_violations(t, broken, false).empty());
    CHECK_THROWS_AS(raj_c(t, broken, kL), StructuralError);
  }

  TEST_CASE("Cat preserves intersections") {
    DegeneracyTable t(generating_families(3, 1).fg1);
    auto u2 = internally_discrete(*upsilon(2));
    auto u3 = internally_discrete(*upsilon(3));
    auto d2 = internally_discrete(*standard_simplex(2));
    auto ids = [](const PrecatPtr& x, const std::vector<std::string>& names) {
      std::vector<int> out;
      for (const auto& n : names) out.push_back(x->index_of(n));
      return out;
    };
    auto r1 = cat_c_intersection(u2, ids(u2, {"01"}), ids(u2, {"12"}), t, 3, kL);
    auto r2 = cat_c_intersection(u3, ids(u3, {"01", "12"}), ids(u3, {"12", "23"}), t, 3, kL);
    auto r3 = cat_c_intersection(d2, ids(d2, {"01", "12"}), ids(d2, {"02"}), t, 3, kL);
    CHECK(r1.ok());
    CHECK(r2.ok());
    CHECK(r3.ok());
    auto r4 = cat_intersection(u2, ids(u2, {"01"}), ids(u2, {"12"}), fg1(2, 0), 2, kL);
    CHECK(r4.ok());
  }

  TEST_CASE("sub-plan absorption, empty sub-plan") {
    auto r = e_phi_marked<2>(empty_object<2>(), point_family(), 3, kL);
    auto composed = compose_naive(empty_plan<2>(r.plan.source(), r.plan.family), r.plan);
    CHECK(isomorphic_over(composed.to_stage(0, composed.length()), r.can).has_value());
  }
}
