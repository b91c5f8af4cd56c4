#include <random>

#include "doctest.h"
#include "segalkit/rs.hpp"
#include "segalkit/theta.hpp"

using namespace segalkit;

namespace {

// Monotone maps [q] -> [p] by explicit enumeration, filtered by a predicate
// on the value sequence.
long long count_sequences(int q, int p, const std::function<bool(const std::vector<int>&)>& keep) {
  long long n = 0;
  std::vector<int> v(static_cast<std::size_t>(q) + 1, 0);
  std::function<void(int, int)> rec = [&](int pos, int lo) {
    if (pos > q) {
      if (keep(v)) ++n;
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

long long nonconstant_count(int q, int p) {
  return count_sequences(q, p, [](const std::vector<int>& v) { return v.front() != v.back(); });
}

long long nonprincipal_count(int q, int m) {
  return count_sequences(q, m, [m](const std::vector<int>& v) {
    for (int k = 0; k < m; ++k)
      if (v.front() >= k && v.back() <= k + 1) return false;
    return true;
  });
}

long long count(const SSet& x, int r) { return static_cast<long long>(x.elements({r}).size()); }
long long count(const Precat& a, int q, int r) { return static_cast<long long>(a.elements({q, r}).size()); }

std::vector<SSetMap> segal_components(const PrecatPtr& a, const Level& lm, const Level& l1) {
  std::vector<SSetMap> out;
  for (int k = 0; k < lm.m; ++k) out.push_back(level_operator(a, lm, l1, make_op(lm.m, {k, k + 1})));
  return out;
}

bool same_precat(const PrecatPtr& x, const PrecatPtr& y) {
  return census(*x) == census(*y) && find_iso<2>(x, y).has_value();
}

}  // namespace

TEST_SUITE("rs") {
  TEST_CASE("index sets against enumeration") {
    for (int q = 0; q <= 4; ++q)
      for (int p = 1; p <= 3; ++p) {
        CHECK(static_cast<long long>(delta_nonconstant(q, p).size()) == nonconstant_count(q, p));
        if (p >= 2) CHECK(static_cast<long long>(delta_nonprincipal(q, p).size()) == nonprincipal_count(q, p));
      }
    CHECK(nonprincipal_count(1, 2) == 1);
    CHECK(nonprincipal_count(0, 2) == 0);
  }

  TEST_CASE("Reg and Seg of identities") {
    for (auto x : {standard_simplex(2), upsilon(2)})
      for (auto y : {standard_simplex(0), boundary(1)}) {
        auto a = theta(x, y).obj;
        for (int p = 1; p <= 2; ++p) {
          Level lp = level(a, p);
          auto r = reg(a, lp, identity_map<1>(lp.obj), lp.tuple);
          CHECK(is_iso(r.from_a));
        }
        auto p = paint_all(a, 2);
        const Level &l2 = p.lm, &l1 = p.l1;
        auto s = seg(a, l2, l1, identity_map<1>(l2.obj), segal_components(a, l2, l1));
        CHECK(is_iso(s.from_a));
        auto t = rs(p, seg_as_rs(p, identity_map<1>(l2.obj), segal_components(a, l2, l1)));
        CHECK(is_iso(t.from_a));
      }
  }

  TEST_CASE("Reg level counts") {
    std::mt19937 rng(11);
    for (int n = 0; n < 5; ++n) {
      auto in = random_reg_instance(rng);
      auto r = reg(in.a, in.lm, in.phi, in.psi);
      CHECK(r.from_a.check().empty());
      CHECK(is_mono<2>(r.from_a));
      for (int q = 0; q <= 3; ++q)
        for (int d = 0; d <= 1; ++d)
          CHECK(count(*r.obj, q, d) == count(*in.a, q, d) + nonconstant_count(q, 2) * (count(*in.phi.tgt, d) - count(*in.lm.obj, d)));
    }
  }

  TEST_CASE("RS level counts and painting") {
    std::mt19937 rng(5);
    for (int n = 0; n < 5; ++n) {
      auto in = random_rs_instance(rng);
      REQUIRE(painting_violations(in.a).empty());
      REQUIRE(rs_violations(in.a, in.first).empty());
      auto r = rs(in.a, in.first);
      CHECK(painting_violations(r.out).empty());
      const auto& d = in.first;
      for (int q = 0; q <= 3; ++q)
        for (int k = 0; k <= 1; ++k)
          CHECK(count(*r.out.a, q, k) == count(*in.a.a, q, k) +
                                             nonconstant_count(q, 1) * (count(*d.eta.tgt, k) - count(*d.eta.src, k)) +
                                             nonprincipal_count(q, 2) * (count(*d.phi.tgt, k) - count(*d.phi.src, k)));
      CHECK(compose(r.out.i, d.eta) == compose(level_map(r.from_a, in.a.l1, r.out.l1), in.a.i));
      CHECK(compose(r.out.j, d.phi) == compose(level_map(r.from_a, in.a.lm, r.out.lm), in.a.j));
    }
  }

  TEST_CASE("Reg and Seg as RS") {
    std::mt19937 rng(3);
    for (int n = 0; n < 4; ++n) {
      auto in = random_rs_instance(rng);
      const Painted& pa = in.a;
      Painted p = pa;
      p.i = identity_map<1>(pa.l1.obj);
      p.j = identity_map<1>(pa.lm.obj);
      // Reg at level 1 along the pushout of the painting.
      auto pob = pushout<1>(pa.i, in.first.eta);
      VertexTuples nu;
      for (int g = 0; g < pob.obj->size(); ++g) {
        int idx = pob.rep_index[static_cast<std::size_t>(g)];
        nu.push_back(pob.rep_side[static_cast<std::size_t>(g)] == 0 ? p.l1.tuple[static_cast<std::size_t>(idx)]
                                                                     : in.first.nu[static_cast<std::size_t>(idx)]);
      }
      auto r = reg(pa.a, p.l1, pob.inl, nu);
      CHECK(same_precat(rs(p, reg_as_rs(p, pob.inl, nu)).out.a, r.obj));

      // Seg with Q = A_m plus vertices over composable chains of A_1.
      SSet q;
      for (const auto& g : p.lm.obj->gens()) q.add(g.name, g.deg);
      for (int g = 0; g < p.lm.obj->size(); ++g) q.set_faces(g, 0, p.lm.obj->gen(g).faces[0]);
      auto segs = segal_components(pa.a, p.lm, p.l1);
      std::vector<std::vector<SElem>> img(2);
      for (int k = 0; k < 2; ++k) img[static_cast<std::size_t>(k)] = segs[static_cast<std::size_t>(k)].img;
      std::vector<int> verts;
      for (int g = 0; g < p.l1.obj->size(); ++g)
        if (p.l1.obj->gen(g).deg[0] == 0) verts.push_back(g);
      for (int extra = 0; extra < 3; ++extra) {
        int u = verts[rng() % verts.size()];
        std::vector<int> next;
        for (int v : verts)
          if (p.l1.tuple[static_cast<std::size_t>(v)][0] == p.l1.tuple[static_cast<std::size_t>(u)][1]) next.push_back(v);
        int v = next[rng() % next.size()];
        q.add("q" + std::to_string(extra), {0});
        img[0].push_back(p.l1.obj->gen_elem(u));
        img[1].push_back(p.l1.obj->gen_elem(v));
      }
      q.finalize();
      auto qp = share(std::move(q));
      SSetMap f{p.lm.obj, qp, {}};
      for (int g = 0; g < p.lm.obj->size(); ++g) f.img.push_back(qp->gen_elem(g));
      std::vector<SSetMap> gs{make_map<1>(qp, p.l1.obj, img[0]), make_map<1>(qp, p.l1.obj, img[1])};
      auto s = seg(pa.a, p.lm, p.l1, f, gs);
      for (int d = 0; d <= 3; ++d)
        CHECK(count(*s.obj, d, 0) == count(*pa.a, d, 0) + 3 * nonprincipal_count(d, 2));
      CHECK(same_precat(rs(p, seg_as_rs(p, f, gs)).out.a, s.obj));
    }
  }

  TEST_CASE("Reg factors through Seg") {
    std::mt19937 rng(7);
    for (int n = 0; n < 5; ++n) {
      auto in = random_reg_instance(rng);
      auto f = reg_seg_factorization(in.a, in.lm, in.phi, in.psi);
      CHECK(f.isomorphic);
    }
  }

  TEST_CASE("RS direct against the two-step construction") {
    std::mt19937 rng(13);
    for (int n = 0; n < 5; ++n) {
      auto in = random_rs_instance(rng);
      auto a = rs(in.a, in.first);
      auto b = rs_by_definition(in.a, in.first);
      CHECK(same_precat(a.out.a, b.out.a));
      CHECK(painting_violations(b.out).empty());
    }
  }

  TEST_CASE("RS composition") {
    std::mt19937 rng(17);
    for (int n = 0; n < 5; ++n) {
      auto in = random_rs_instance(rng);
      auto first = rs(in.a, in.first);
      REQUIRE(rs_violations(first.out, in.second).empty());
      auto twice = rs(first.out, in.second);
      auto c = compose_rs_data(in.first, in.second);
      REQUIRE(rs_violations(in.a, c).empty());
      auto once = rs(in.a, c);
      CHECK(same_precat(twice.out.a, once.out.a));
    }
  }

  TEST_CASE("invalid data is rejected") {
    auto a = theta(standard_simplex(2), boundary(1)).obj;
    Level l1 = level(a, 1);
    VertexTuples bad = l1.tuple;
    bad[0].push_back(bad[0][0]);
    CHECK_THROWS_AS(reg(a, l1, identity_map<1>(l1.obj), bad), StructuralError);
    CHECK_THROWS_AS(seg(a, level(a, 2), l1, identity_map<1>(level(a, 2).obj), {}), StructuralError);
  }
}
