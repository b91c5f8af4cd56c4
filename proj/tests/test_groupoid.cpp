#include <set>

#include "doctest.h"
#include "segalkit/groupoid.hpp"

using namespace segalkit;

namespace {

// Composition table of ℤ/n computed by hand: z^a ∘ z^b = z^(a+b).
bool is_cyclic_table(const FiniteCategory& c, int n) {
  if (c.objects.size() != 1 || c.size() != n) return false;
  // Orders of elements pin the group for n = 2; also check closure.
  int e = c.identity[0];
  for (int f = 0; f < n; ++f)
    for (int g = 0; g < n; ++g)
      if (c.comp[static_cast<std::size_t>(g)][static_cast<std::size_t>(f)] < 0) return false;
  int others = 0;
  for (int f = 0; f < n; ++f)
    if (f != e) {
      ++others;
      int p = f, k = 1;
      while (p != e) p = c.comp[static_cast<std::size_t>(f)][static_cast<std::size_t>(p)], ++k;
      if (n == 2 && k != 2) return false;
    }
  return others == n - 1;
}

PrecatMap inclusion(const Sub<2>& s) { return s.incl; }

std::vector<PrecatPtr> groupoid_fixtures() {
  auto two = coproduct<2>({build_ibar(), discrete_precat({"p"})}, {"i:", "d:"}).obj;
  return {build_ibar(), nerve_precat(cyclic_group(2), 4), nerve_precat(cyclic_group(3), 3), discrete_precat({"a", "b", "c"}),
          two};
}

// 1-cells reachable from the non-composite ones by taking long edges.
std::set<int> composites_of(const Precat& a, const std::set<int>& base) {
  std::set<int> ok = base;
  auto good = [&](const BElem& e) { return !e.nondegenerate() || ok.count(e.gen); };
  for (bool grew = true; grew;) {
    grew = false;
    for (int t = 0; t < a.size(); ++t) {
      if (a.gen(t).deg != Deg<2>{2, 0}) continue;
      const auto& f = a.gen(t).faces[0];
      if (good(f[0]) && good(f[2]) && f[1].nondegenerate() && !ok.count(f[1].gen)) {
        ok.insert(f[1].gen);
        grew = true;
      }
    }
  }
  return ok;
}

}  // namespace

TEST_SUITE("groupoid") {
  TEST_CASE("finite categories") {
    for (const auto& c : {poset_chain(0), poset_chain(2), cyclic_group(1), cyclic_group(4), walking_iso()})
      CHECK(category_violations(c).empty());
    auto c = poset_chain(2);
    c.comp[4][1] = 0;
    CHECK_FALSE(category_violations(c).empty());
    CHECK(poset_chain(2).size() == 6);
    CHECK(is_cyclic_table(cyclic_group(2), 2));
    CHECK_FALSE(find_category_iso(poset_chain(1), walking_iso()).has_value());
    CHECK(find_category_iso(cyclic_group(3), cyclic_group(3)).has_value());
  }

  TEST_CASE("nerve cells") {
    // Nondegenerate n-simplices of N(walking iso) alternate 0 and 1: two per dimension.
    auto n = nerve(walking_iso(), 4);
    for (int d = 0; d <= 4; ++d) CHECK(n->elements({d}).size() >= 2);
    int top = 0;
    for (int g = 0; g < n->size(); ++g) top += n->gen(g).deg[0] == 4;
    CHECK(top == 2);
    // N(0<1<2) is Δ[2].
    CHECK(find_iso<1>(nerve(poset_chain(2), 3), standard_simplex(2)).has_value());
    CHECK(profiles_equal(homology(*nerve(poset_chain(3), 3)), point_profile()));
  }

  TEST_CASE("tau1 of nerves") {
    auto p = tau1(nerve_precat(poset_chain(2), 4));
    CHECK(p.objects.size() == 3);
    CHECK(p.size() == 6);
    auto i = tau1(build_ibar());
    CHECK(i.objects.size() == 2);
    CHECK(i.size() == 4);
    auto z = tau1(nerve_precat(cyclic_group(2), 4));
    CHECK(z.objects.size() == 1);
    CHECK(z.size() == 2);
    CHECK(is_cyclic_table(z, 2));
  }

  TEST_CASE("tau1 after nerve is the identity") {
    for (const auto& c : {poset_chain(1), poset_chain(2), cyclic_group(2), cyclic_group(3), walking_iso()}) {
      auto back = tau1(nerve_precat(c, 4));
      auto iso = find_category_iso(c, back);
      REQUIRE(iso.has_value());
      CHECK(same_table(c, relabel(back, *iso)));
    }
  }

  TEST_CASE("tau1 refuses non-Segal input") {
    CHECK_THROWS_AS(tau1(internally_discrete(*upsilon(2))), StructuralError);
  }

  TEST_CASE("tau0") {
    CHECK(tau0(build_ibar()).size() == 1);
    CHECK(tau0(nerve_precat(poset_chain(1), 4)).size() == 2);
    for (int k = 1; k <= 4; ++k) {
      std::vector<std::string> names;
      for (int i = 0; i < k; ++i) names.push_back("x" + std::to_string(i));
      CHECK(tau0(discrete_precat(names)).size() == static_cast<std::size_t>(k));
    }
    auto w = walking_iso();
    CHECK(is_iso_in(w, 2));
    CHECK_FALSE(is_iso_in(poset_chain(1), 1));
  }

  TEST_CASE("equivalences") {
    auto ib = build_ibar();
    CHECK(is_equivalence_of_segal_categories(identity_map<2>(ib)).verdict == Verdict::WE);
    auto r = is_equivalence_of_segal_categories(full_subprecat(ib, {ib->index_of("0")}).incl);
    CHECK(r.essentially_surjective);
    CHECK(r.verdict == Verdict::WE);

    auto p = nerve_precat(poset_chain(1), 4);
    auto points = subobject<2>(p, objects(*p));
    auto e = is_equivalence_of_segal_categories(inclusion(points));
    CHECK(e.essentially_surjective);
    CHECK(e.verdict == Verdict::NotWE);
    bool saw = false;
    for (const auto& h : e.homs)
      if (h.x == p->index_of("0") && h.y == p->index_of("1")) {
        saw = true;
        CHECK(h.verdict == Verdict::NotWE);
      }
    CHECK(saw);
    // Missing an isomorphism class.
    auto lone = full_subprecat(p, {p->index_of("0")});
    auto m = is_equivalence_of_segal_categories(lone.incl);
    CHECK_FALSE(m.essentially_surjective);
    CHECK(m.verdict == Verdict::NotWE);
  }

  TEST_CASE("equivalences compose") {
    auto ib = nerve_precat(walking_iso(), 4);
    MapSearch<2> o;
    o.fixed.resize(static_cast<std::size_t>(ib->size()));
    o.fixed[static_cast<std::size_t>(ib->index_of("0"))] = ib->gen_elem(ib->index_of("1"));
    auto swap = find_iso<2>(ib, ib, o);
    REQUIRE(swap.has_value());
    CHECK(is_iso(*swap));
    auto sub = full_subprecat(ib, {ib->index_of("0")}).incl;
    auto pt = discrete_precat({"p"});
    auto to_sub = make_map<2>(pt, sub.src, {sub.src->gen_elem(0)});
    std::vector<PrecatMap> chain{to_sub, sub, *swap};
    for (const auto& f : chain) REQUIRE(is_equivalence_of_segal_categories(f).verdict == Verdict::WE);
    CHECK(is_equivalence_of_segal_categories(compose(sub, to_sub)).verdict == Verdict::WE);
    CHECK(is_equivalence_of_segal_categories(compose(*swap, sub)).verdict == Verdict::WE);
    CHECK(is_equivalence_of_segal_categories(compose(*swap, compose(sub, to_sub))).verdict == Verdict::WE);
  }

  TEST_CASE("levelwise equivalences are equivalences") {
    // Δ[1]ΘX -> Δ[1]ΘΔ[0] for contractible X.
    std::vector<PrecatMap> maps;
    for (const auto& x : {standard_simplex(1), standard_simplex(2), upsilon(2)}) {
      auto from = theta(standard_simplex(1), x), to = theta(standard_simplex(1), standard_simplex(0));
      MapSearch<1> none;
      auto c = find_map<1>(x, standard_simplex(0), none);
      REQUIRE(c.has_value());
      maps.push_back(theta_map(from, to, identity_map<1>(standard_simplex(1)), *c));
    }
    for (const auto& f : maps) {
      bool bijective = objects(*f.src).size() == objects(*f.tgt).size();
      for (int m = 0; m <= 3; ++m) {
        Level a = level(f.src, m), b = level(f.tgt, m);
        CHECK(we_oracle(level_map(f, a, b)) == Verdict::WE);
      }
      REQUIRE(bijective);
      CHECK(is_equivalence_of_segal_categories(f).verdict == Verdict::WE);
    }
  }

  TEST_CASE("groupoids") {
    CHECK(is_groupoid(build_ibar()));
    CHECK_FALSE(is_groupoid(nerve_precat(poset_chain(1), 4)));
    CHECK(is_groupoid(discrete_precat({"a", "b"})));
    CHECK(is_groupoid(nerve_precat(cyclic_group(3), 4)));
  }

  TEST_CASE("homotopy groups") {
    auto h = homotopy_groups(build_ibar());
    CHECK(h.pi0 == 1);
    CHECK(h.simply_connected);
    for (const auto& l : h.loops) {
      CHECK(l.pi1 == 1);
      CHECK(l.loop_pi1_trivial);
      CHECK(profiles_equal(l.loop_homology, point_profile()));
    }
    auto d = homotopy_groups(discrete_precat({"a", "b", "c"}));
    CHECK(d.pi0 == 3);
    for (const auto& l : d.loops) CHECK(l.pi1 == 1);
    CHECK_FALSE(d.simply_connected);
    auto z = homotopy_groups(nerve_precat(cyclic_group(2), 4));
    CHECK(z.pi0 == 1);
    REQUIRE(z.loops.size() == 1);
    CHECK(z.loops[0].pi1 == 2);
    CHECK_FALSE(z.simply_connected);
    CHECK_THROWS_AS(homotopy_groups(nerve_precat(poset_chain(1), 4)), StructuralError);
  }

  TEST_CASE("tau0 matches the components of the diagonal") {
    for (const auto& a : groupoid_fixtures()) {
      auto h = homology(*diagonal(*a));
      CHECK(static_cast<int>(tau0(a).size()) == h[0].rank);
    }
  }

  TEST_CASE("the interval Ī") {
    for (int t = 2; t <= 6; ++t) {
      auto h = homology(*ibar_sset(t));
      CHECK(profiles_equal(h, point_profile()));
      // Everything below the top dimension is the nerve's.
      auto n = nerve(walking_iso(), t);
      CHECK(census(*ibar_sset(t)).size() == census(*n).size());
      CHECK(ibar_sset(t)->size() == n->size() - 1);
    }
    CHECK(ibar_sset(4) == ibar_sset(4));
    CHECK(precat_violations(*build_ibar()).empty());
  }

  TEST_CASE("J̄^pre") {
    auto j = build_jpre_parts();
    const Precat& a = *j.obj;
    auto objs = objects(a);
    REQUIRE(objs.size() == 2);
    std::set<std::string> names{a.gen(objs[0]).name, a.gen(objs[1]).name};
    CHECK(names == std::set<std::string>{"0", "1"});
    CHECK(precat_violations(a).empty());
    auto t1 = a.gen_elem(j.t1), t2 = a.gen_elem(j.t2);
    CHECK(a.face(0, 2, t1) == a.gen_elem(j.u));
    CHECK(a.face(0, 0, t1) == a.gen_elem(j.v));
    CHECK(a.face(0, 2, t2) == a.gen_elem(j.v));
    CHECK(a.face(0, 0, t2) == a.gen_elem(j.u));
    CHECK_FALSE(is_mono(j.alpha));  // both objects of Δ[1]ΘĪ go to 0
    for (int t = 2; t <= 5; ++t) {
      auto h = homology(*diagonal(*build_jpre(t)));
      CHECK(profiles_equal(h, sphere_profile(2)));
    }
  }

  TEST_CASE("proto-groupoids") {
    auto j = build_jpre_parts();
    auto r = is_proto_groupoid(j.obj);
    CHECK(r.overall == Tri::True);
    bool found_u = false;
    for (const auto& c : r.cells) {
      REQUIRE(c.witness.has_value());
      CHECK(proto_witness_violations(j.obj, *c.witness).empty());
      if (c.u == j.u) {
        found_u = true;
        CHECK(c.witness->v == j.obj->face(0, 0, j.obj->gen_elem(j.t1)));
        CHECK(c.witness->v == j.obj->gen_elem(j.v));
      }
    }
    CHECK(found_u);
    CHECK(is_proto_groupoid(internally_discrete(*standard_simplex(1))).overall == Tri::False);
    for (const auto& a : groupoid_fixtures()) CHECK(is_proto_groupoid(a).overall == Tri::True);
    // A spoiled witness.
    auto w = *r.cells.front().witness;
    std::swap(w.t1, w.t2);
    CHECK_FALSE(proto_witness_violations(j.obj, w).empty());
  }

  TEST_CASE("proto-groupoid stability along Cat stages") {
    DegeneracyTable t(generating_families(2, 0).fg1);
    auto r = cat_c(t, build_jpre(), 2, 3);
    REQUIRE(r.plan.stages.size() == 3);
    for (const auto& s : r.plan.stages) {
      auto rep = is_proto_groupoid(s);
      CHECK(rep.overall == Tri::True);
      std::set<int> base;
      for (const auto& c : rep.cells) base.insert(c.u);
      CHECK(base.size() == 2);
      auto ok = composites_of(*s, base);
      for (int g = 0; g < s->size(); ++g)
        if (s->gen(g).deg == Deg<2>{1, 0}) CHECK(ok.count(g) == 1);
    }
  }

  TEST_CASE("free-ordered criterion") {
    for (int m = 2; m <= 3; ++m)
      for (const auto& x : {standard_simplex(0), standard_simplex(1), boundary(1)}) {
        auto from = theta(upsilon(m), x), to = theta(standard_simplex(m), x);
        auto f = theta_map(from, to, spine_inclusion(m), identity_map<1>(x));
        auto r = free_ordered_we_criterion(f, numeric_order(*f.src), numeric_order(*f.tgt));
        CHECK(r.result == Criterion::Holds);
        CHECK(static_cast<int>(r.adjacent.size()) == m);
      }
    for (int k = 0; k <= 1; ++k) {
      auto b = boit(2, boundary_inclusion(k));
      auto r = free_ordered_we_criterion(b.map, numeric_order(*b.map.src), numeric_order(*b.map.tgt));
      CHECK(r.result == Criterion::Holds);
    }
    auto pts = discrete_precat({"0", "1"});
    auto d1 = internally_discrete(*standard_simplex(1));
    auto f = make_map<2>(pts, d1, {d1->gen_elem(d1->index_of("0")), d1->gen_elem(d1->index_of("1"))});
    auto r = free_ordered_we_criterion(f, numeric_order(*pts), numeric_order(*d1));
    CHECK(r.result == Criterion::Fails);
    REQUIRE(r.adjacent.size() == 1);
    CHECK(r.adjacent[0].verdict == Verdict::NotWE);
    // Not bijective on objects.
    auto pt = discrete_precat({"0"});
    auto g = make_map<2>(pt, d1, {d1->gen_elem(d1->index_of("0"))});
    CHECK_THROWS_AS(free_ordered_we_criterion(g, numeric_order(*pt), numeric_order(*d1)), StructuralError);
  }
}
