#include <algorithm>
#include <functional>

#include "doctest.h"
#include "segalkit/theta.hpp"

using namespace segalkit;

namespace {

std::vector<int> named(const Precat& a, const std::vector<int>& idx) {
  std::vector<int> t;
  for (int i : idx) t.push_back(a.index_of(std::to_string(i)));
  return t;
}

// Independent count of level elements of XΘY: X_0 plus one copy of Y_r per
// non-point-degenerate element of X_n.
long long theta_level_count(const SSet& x, const SSet& y, int n, int r) {
  long long count = 0;
  for (const SElem& e : x.elements({n})) {
    if (x.gen(e.gen).deg[0] == 0) ++count;
    else count += static_cast<long long>(y.elements({r}).size());
  }
  return count;
}

}  // namespace

TEST_SUITE("theta") {
  TEST_CASE("theta objects") {
    auto t0 = theta(standard_simplex(0), boundary(1));
    CHECK(t0.obj->size() == 1);

    auto y = boundary(1);
    auto t1 = theta(standard_simplex(1), y);
    for (int n = 0; n <= 4; ++n) {
      Level l = level(t1.obj, n);
      // Δ[1]_0 plus n copies of Y.
      CHECK(l.obj->size() == 2 + n * y->size());
    }
    auto te = theta(standard_simplex(2), empty_object<1>());
    CHECK(objects(*te.obj).size() == 3);
    CHECK(te.obj->size() == 3);
  }

  TEST_CASE("level counts against an independent count") {
    for (auto x : {standard_simplex(2), upsilon(3), boundary(2)})
      for (auto y : {standard_simplex(1), boundary(1), standard_simplex(0)}) {
        auto t = theta(x, y);
        for (int n = 0; n <= 3; ++n)
          for (int r = 0; r <= 2; ++r)
            CHECK(static_cast<long long>(t.obj->elements({n, r}).size()) == theta_level_count(*x, *y, n, r));
      }
  }

  TEST_CASE("bifunctoriality") {
    auto d1 = standard_simplex(1), d2 = standard_simplex(2);
    auto f1 = simplex_map(make_op(2, {0, 2}));  // Δ[1] -> Δ[2]
    auto g0 = boundary_inclusion(1);
    auto b1 = boundary(1);
    Theta a = theta(d1, b1), b = theta(d2, b1), c = theta(d2, d1), a2 = theta(d1, d1);
    auto id_b = identity_map<1>(b1);
    auto lhs = theta_map(a, c, f1, g0);
    auto via1 = compose(theta_map(b, c, identity_map<1>(d2), g0), theta_map(a, b, f1, id_b));
    auto via2 = compose(theta_map(a2, c, f1, identity_map<1>(d1)), theta_map(a, a2, identity_map<1>(d1), g0));
    CHECK(lhs == via1);
    CHECK(lhs == via2);
    CHECK(lhs.check().empty());
  }

  TEST_CASE("pushout preservation") {
    // Υ(2) = Δ[1] ⊔_{Δ[0]} Δ[1] in the first argument.
    auto d0 = standard_simplex(0), d1 = standard_simplex(1);
    auto v1 = yoneda_map(d0, d1, d1->gen_elem(d1->index_of("1")));
    auto v0 = yoneda_map(d0, d1, d1->gen_elem(d1->index_of("0")));
    for (auto y : {standard_simplex(0), boundary(1), standard_simplex(1)}) {
      Theta z = theta(d0, y), a = theta(d1, y);
      auto idy = identity_map<1>(y);
      auto po = pushout<2>(theta_map(z, a, v1, idy), theta_map(z, a, v0, idy));
      CHECK(find_iso<2>(po.obj, theta(upsilon(2), y).obj).has_value());
    }
    // S^1 = Δ[1] ⊔_{∂Δ[1]} Δ[1] in the second argument.
    auto g = boundary_inclusion(1);
    for (auto x : {standard_simplex(1), upsilon(2)}) {
      Theta b = theta(x, g.src), d = theta(x, g.tgt);
      auto idx = identity_map<1>(x);
      auto po = pushout<2>(theta_map(b, d, idx, g), theta_map(b, d, idx, g));
      auto sphere = pushout<1>(g, g);
      CHECK(find_iso<2>(po.obj, theta(x, sphere.obj).obj).has_value());
    }
  }

  TEST_CASE("spine") {
    CHECK(find_iso<1>(upsilon(1), standard_simplex(1)).has_value());
    CHECK(census(*upsilon(3)) == std::map<Deg<1>, int>{{{0}, 4}, {{1}, 3}});
    CHECK_FALSE(is_iso(spine_inclusion(2)));
  }

  TEST_CASE("Boit") {
    CHECK_THROWS_AS(boit(1, boundary_inclusion(0)), StructuralError);
    for (int m = 2; m <= 3; ++m) {
      auto b = boit(m, boundary_inclusion(0));
      auto target = internally_discrete(*standard_simplex(m));
      auto source = internally_discrete(*upsilon(m));
      auto expect = make_map<2>(source, target, [&] {
        std::vector<BElem> img;
        for (const auto& g : source->gens()) img.push_back(target->gen_elem(target->index_of(g.name)));
        return img;
      }());
      CHECK(arrows_isomorphic(b.map, expect));
      CHECK(is_mono<2>(b.map));
    }
    auto b = boit(2, boundary_inclusion(1));
    auto src = b.map.src;
    CHECK(find_iso<1>(fiber(src, 1, named(*src, {0, 1})), standard_simplex(1)).has_value());
    CHECK(find_iso<1>(fiber(src, 1, named(*src, {0, 2})), boundary(1)).has_value());
    CHECK(is_mono<2>(b.map));
    CHECK(is_free_ordered(src, numeric_order(*src), true, 3).ok());
  }

  TEST_CASE("Boit fiber table") {
    for (int k = 0; k <= 1; ++k)
      for (int m = 2; m <= 3; ++m) {
        auto g = boundary_inclusion(k);
        auto src = boit(m, g).map.src;
        for (int q = 0; q <= 3; ++q) {
          Level l = level(src, q);
          std::vector<int> t(static_cast<std::size_t>(q) + 1, 0);
          std::function<void(int)> rec = [&](int pos) {
            if (pos == q + 1) {
              auto f = fiber(l, named(*src, t)).obj;
              bool ordered = std::is_sorted(t.begin(), t.end());
              if (!ordered) CHECK(f->size() == 0);
              else if (t.front() == t.back()) CHECK(find_iso<1>(f, standard_simplex(0)).has_value());
              else if (t.back() - t.front() == 1) CHECK(find_iso<1>(f, g.tgt).has_value());
              else CHECK(find_iso<1>(f, g.src).has_value());
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
  }

  TEST_CASE("Attach") {
    auto a = attach(1, boundary_inclusion(0));
    CHECK(a.map.src->size() == 2);
    CHECK(objects(*a.map.src).size() == 2);
    CHECK(find_iso<2>(a.map.tgt, internally_discrete(*standard_simplex(1))).has_value());
    CHECK(is_mono<2>(a.map));

    for (int n = 1; n <= 2; ++n) CHECK(is_iso(attach(n, identity_map<1>(boundary(1))).map));

    auto a2 = attach(2, boundary_inclusion(0));
    CHECK(find_iso<2>(a2.map.tgt, internally_discrete(*standard_simplex(2))).has_value());
    int top = 0;
    for (const auto& g : a2.map.tgt->gens())
      if (g.deg == Deg<2>{2, 0}) ++top;
    CHECK(top == 1);
    CHECK_THROWS_AS(attach(1, to_point<1>(boundary(1), standard_simplex(0))), StructuralError);
  }

  TEST_CASE("generating families") {
    auto fam = generating_families(3, 2);
    CHECK(fam.fg1.size() == 6);
    CHECK(fam.fg1_type1.empty());
    CHECK(fam.fg2.size() == 4);
    CHECK(fam.i.size() == 1 + 3 * 3);
    for (const auto* list : {&fam.fg1, &fam.fg2, &fam.i})
      for (const auto& a : *list) {
        CHECK(is_mono<2>(a.map));
        CHECK(a.map.check().empty());
        if (a.tag != ArrowTag::ObjInclusion) CHECK(objects(*a.map.src).size() == objects(*a.map.tgt).size());
      }
  }

  TEST_CASE("hom transposition") {
    auto nerve01 = internally_discrete(*standard_simplex(1));
    auto r = hom_transpose(1, standard_simplex(0), nerve01);
    CHECK(r.direct == 3);
    CHECK(r.ok());

    auto a = theta(standard_simplex(2), boundary(1)).obj;
    auto self = hom_transpose(2, boundary(1), a);
    CHECK(self.direct >= 1);
    CHECK(self.ok());

    auto u = hom_transpose(2, standard_simplex(0), nerve01);
    CHECK(u.ok());
    CHECK(hom_transpose(1, empty_object<1>(), nerve01).ok());
  }
}
