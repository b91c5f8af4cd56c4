#include "doctest.h"
#include "segalkit/sset.hpp"

using namespace segalkit;

namespace {

std::vector<int> counts(const SSet& x) {
  std::vector<int> c;
  for (const auto& g : x.gens()) {
    if (static_cast<int>(c.size()) <= g.deg[0]) c.resize(static_cast<std::size_t>(g.deg[0]) + 1);
    ++c[static_cast<std::size_t>(g.deg[0])];
  }
  return c;
}

}  // namespace

TEST_SUITE("sset") {
TEST_CASE("act: identity, face of the top edge, d0 s0") {
  auto d1 = standard_simplex(1);
  SElem top = d1->gen_elem(d1->index_of("01"));
  CHECK(act(*d1, identity_op(1), top) == top);
  SElem v = act(*d1, face_op(1, 0), top);
  CHECK(d1->gen(v.gen).name == "1");
  SElem p = d1->gen_elem(d1->index_of("0"));
  CHECK(act(*d1, compose(degeneracy_op(0, 0), face_op(1, 0)), p) == p);
}

TEST_CASE("standard simplex and boundary counts") {
  CHECK(counts(*standard_simplex(2)) == std::vector<int>{3, 3, 1});
  CHECK(boundary(0)->size() == 0);
  CHECK(counts(*boundary(2)) == std::vector<int>{3, 3});
  for (int n = 0; n <= 5; ++n) {
    auto c = counts(*standard_simplex(n));
    for (int k = 0; k <= n; ++k) CHECK(c[static_cast<std::size_t>(k)] == binomial(n + 1, k + 1));
  }
}

TEST_CASE("homology of spheres and simplices") {
  CHECK(profiles_equal(homology(*boundary(2)), sphere_profile(1)));
  CHECK(profiles_equal(homology(*boundary(3)), sphere_profile(2)));
  CHECK(profiles_equal(homology(*standard_simplex(4)), point_profile()));
}

TEST_CASE("product of intervals") {
  auto pr = product(standard_simplex(1), standard_simplex(1));
  CHECK(counts(*pr.obj) == std::vector<int>{4, 5, 2});
  CHECK(profiles_equal(homology(*pr.obj), point_profile()));
  CHECK(pr.obj->check_identities().empty());
}

TEST_CASE("pushouts") {
  auto d0 = standard_simplex(0), d1 = standard_simplex(1);
  SSetMap at1 = yoneda_map(d0, d1, d1->gen_elem(d1->index_of("1")));
  SSetMap at0 = yoneda_map(d0, d1, d1->gen_elem(d1->index_of("0")));
  auto po = pushout<1>(at1, at0, "b");
  CHECK(counts(*po.obj) == std::vector<int>{3, 2});
  auto bi = boundary_inclusion(2);
  auto sph = pushout<1>(bi, bi, "b");
  CHECK(profiles_equal(homology(*sph.obj), sphere_profile(2)));
}

TEST_CASE("pi1") {
  auto c = boundary(2);
  auto p = pi1_presentation(*c, 0);
  CHECK(p.generators == 1);
  CHECK(p.relators.empty());
  CHECK_FALSE(is_trivially_simplifiable(p));
  CHECK(is_trivially_simplifiable(pi1_presentation(*boundary(3), 0)));
  CHECK(is_trivially_simplifiable(pi1_presentation(*standard_simplex(2), 0)));
}

TEST_CASE("we oracle") {
  CHECK(we_oracle(boundary_inclusion(2)) == Verdict::NotWE);
  auto d3 = standard_simplex(3);
  CHECK(we_oracle(yoneda_map(standard_simplex(0), d3, d3->gen_elem(2))) == Verdict::WE);
  CHECK(we_oracle(identity_map<1>(boundary(2))) == Verdict::WE);
}
}
