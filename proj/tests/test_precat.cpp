#include <set>

#include "doctest.h"
#include "segalkit/precat.hpp"
#include "segalkit/theta.hpp"

using namespace segalkit;

namespace {

PrecatPtr theta_of(const SSetPtr& x, const SSetPtr& y) { return theta(x, y).obj; }

int obj_named(const Precat& a, const std::string& n) { return a.index_of(n); }

std::vector<int> tuple_of(const Precat& a, std::initializer_list<const char*> names) {
  std::vector<int> t;
  for (const char* n : names) t.push_back(obj_named(a, n));
  return t;
}

}  // namespace

TEST_SUITE("precat") {
  TEST_CASE("levels") {
    auto disc = discrete_precat({"a", "b"});
    auto l7 = level(disc, 7);
    CHECK(l7.obj->size() == 2);
    CHECK(l7.obj->max_deg()[0] == 0);

    auto a = theta_of(standard_simplex(1), standard_simplex(0));
    CHECK(level(a, 1).obj->size() == 3);

    auto u = theta_of(upsilon(2), standard_simplex(0));
    for (const auto& g : u->gens()) CHECK(g.deg[0] <= 1);
    CHECK(level(u, 2).cell.size() > 0);
    for (const BElem& c : level(u, 2).cell) CHECK(u->gen(c.gen).deg[0] < 2);
  }

  TEST_CASE("fibers of Δ[2]ΘX") {
    auto x = boundary(1);
    auto a = theta_of(standard_simplex(2), x);
    auto f012 = fiber(a, 2, tuple_of(*a, {"0", "1", "2"}));
    CHECK(find_iso<1>(f012, x).has_value());
    CHECK(fiber(a, 2, tuple_of(*a, {"0", "2", "1"}))->size() == 0);
    auto f00 = fiber(a, 1, tuple_of(*a, {"0", "0"}));
    CHECK(f00->size() == 1);
    CHECK_THROWS_AS(fiber(a, 1, {obj_named(*a, "0"), a->size() - 1}), StructuralError);
  }

  TEST_CASE("fiber decomposition") {
    for (auto a : {theta_of(standard_simplex(2), standard_simplex(1)), theta_of(upsilon(3), boundary(1))}) {
      for (int m = 0; m <= 3; ++m) {
        Level l = level(a, m);
        int total = 0;
        for (auto [t, n] : fiber_sizes(l)) total += fiber(l, t).obj->size();
        CHECK(total == l.obj->size());
      }
    }
  }

  TEST_CASE("Segal maps") {
    auto nerve = internally_discrete(*standard_simplex(2));
    auto s = segal_map(nerve, 2);
    CHECK(is_iso(s.map));
    CHECK(is_segal_category(nerve, 3).overall == Verdict::WE);

    auto u = theta_of(upsilon(2), standard_simplex(0));
    auto sf = segal_map_fiber(u, 2, tuple_of(*u, {"0", "1", "2"}));
    CHECK(sf.source.obj->size() == 0);
    CHECK(sf.target->obj->size() == 1);
    auto rep = is_segal_category(u, 2);
    CHECK(rep.overall == Verdict::NotWE);

    CHECK(is_segal_category(discrete_precat({"a", "b", "c"}), 3).overall == Verdict::WE);

    // Recorded, not asserted: the Segal map of Δ[2]ΘX on (0,1,2).
    auto a = theta_of(standard_simplex(2), boundary(1));
    auto f = segal_map_fiber(a, 2, tuple_of(*a, {"0", "1", "2"}));
    CHECK(f.map.check().empty());
  }

  TEST_CASE("products and coproducts") {
    auto d = theta_of(standard_simplex(1), standard_simplex(0));
    auto p = product(d, d);
    CHECK(objects(*p.obj).size() == 4);
    auto lex = lexicographic_order(p, index_order(*d), index_order(*d));
    std::set<int> ranks;
    for (auto [o, r] : lex) ranks.insert(r);
    CHECK(ranks.size() == 4);
    // Lexicographic products are free-ordered when one factor has only
    // identity homs; with two nontrivial factors (ii) fails at the
    // lex-ordered tuple ((0,0),(0,1),(1,0)).
    auto rep = is_free_ordered(p.obj, lex, true, 3);
    CHECK_FALSE(rep.long_edge_we);
    CHECK(rep.unordered_empty);
    CHECK(rep.endo_point);
    auto e = theta_of(standard_simplex(1), empty_object<1>());
    auto q = product(e, theta_of(standard_simplex(2), boundary(1)));
    auto qo = lexicographic_order(q, numeric_order(*q.pr1.tgt), numeric_order(*q.pr2.tgt));
    CHECK(is_free_ordered(q.obj, qo, true, 3).ok());

    auto id = identity_map<2>(d);
    auto po = pushout<2>(id, id);
    CHECK(is_iso(po.inl));

    auto pt = point_object<2>();
    auto c = coproduct<2>({pt, pt}, {"l", "r"});
    CHECK(objects(*c.obj).size() == 2);
    CHECK(precat_violations(*c.obj).empty());
  }

  TEST_CASE("connectedness") {
    CHECK(is_connected(theta_of(upsilon(3), boundary(1))));
    CHECK(is_connected(theta_of(upsilon(2), empty_object<1>())) == false);
    CHECK_FALSE(is_connected(discrete_precat({"a", "b"})));
    CHECK(is_connected(empty_object<2>()));

    // Agreement with "every map to the 2-point discrete precategory is constant".
    auto two = discrete_precat({"a", "b"});
    for (auto a : {theta_of(upsilon(2), standard_simplex(0)), discrete_precat({"x", "y"}),
                   theta_of(standard_simplex(1), boundary(1))}) {
      bool all_constant = true;
      enumerate_maps<2>(a, two, [&](const PrecatMap& f) {
        std::set<int> used;
        for (int o : objects(*a)) used.insert(f.img[static_cast<std::size_t>(o)].gen);
        if (used.size() > 1) all_constant = false;
        return true;
      });
      CHECK(all_constant == is_connected(a));
    }
  }

  TEST_CASE("free-ordered") {
    for (int m = 1; m <= 3; ++m)
      for (auto x : {empty_object<1>(), standard_simplex(0), boundary(1), standard_simplex(1)}) {
        auto dm = theta_of(standard_simplex(m), x);
        auto um = theta_of(upsilon(m), x);
        CHECK(is_free_ordered(dm, numeric_order(*dm), true, 3).ok());
        CHECK(is_free_ordered(um, numeric_order(*um), true, 3).ok());
      }
    // The reversed order fails (i).
    auto d1 = theta_of(standard_simplex(1), standard_simplex(0));
    std::map<int, int> rev;
    for (auto [o, r] : numeric_order(*d1)) rev[o] = -r;
    auto rep = is_free_ordered(d1, rev, true, 2);
    CHECK_FALSE(rep.unordered_empty);
  }

  TEST_CASE("diagonal") {
    CHECK(diagonal(*discrete_precat({"a", "b", "c"}))->size() == 3);
    auto d = diagonal(*theta_of(standard_simplex(1), standard_simplex(0)));
    CHECK(profiles_equal(homology(*d), point_profile()));
    // Δ[1]ΘY realizes to the suspension of Y.
    auto d2 = diagonal(*theta_of(standard_simplex(1), boundary(1)));
    CHECK(profiles_equal(homology(*d2), sphere_profile(1)));
  }

  TEST_CASE("discreteness violation") {
    Precat bad;
    bad.add("x", {0, 0});
    int g = bad.add("e", {0, 1});
    bad.set_faces(g, 1, {bad.gen_elem(0), bad.gen_elem(0)});
    CHECK_THROWS_AS(seal(bad), StructuralError);
  }
}
