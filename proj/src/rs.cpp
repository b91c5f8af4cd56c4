#include "segalkit/rs.hpp"

#include <functional>

#include "segalkit/theta.hpp"

namespace segalkit {

namespace {

bool nonconstant(const Op& z) { return z.v[0] != z.v[z.src]; }
bool nonprincipal(const Op& z) { return !factors_through_principal(z); }

Op principal_edge(int m, int k) { return make_op(m, {k, k + 1}); }

BElem object_elem(int n, int r, int obj) { return BElem{{constant_op(n, 0, 0), constant_op(r, 0, 0)}, obj}; }

// The pre-result: A together with free copies of simplicial sets S indexed
// by admissible injective maps x : [q] -> [p]; external faces leaving the
// admissible maps are routed through a fallback.
class Builder {
 public:
  struct Block {
    SSetPtr s;
    int p = 0;
    std::function<bool(const Op&)> admissible;
    std::function<BElem(const Op&, int)> fallback;  // (z, generator of S)
    std::map<std::pair<Op, int>, int> gen;
  };

  explicit Builder(const PrecatPtr& a) : a_(a) {
    for (const auto& g : a->gens()) pre_.add(g.name, g.deg);
    for (int g = 0; g < a->size(); ++g)
      for (int d = 0; d < 2; ++d) pre_.set_faces(g, d, a->gen(g).faces[static_cast<std::size_t>(d)]);
  }

  int add_block(const SSetPtr& s, int p, std::string tag, std::function<bool(const Op&)> admissible) {
    // Iterated constructions reuse tags; prime until the names are fresh.
    auto taken = [&] {
      for (const auto& g : pre_.gens())
        if (g.name.rfind(tag + "[", 0) == 0) return true;
      return false;
    };
    while (taken()) tag += "'";
    Block b;
    b.s = s;
    b.p = p;
    b.admissible = std::move(admissible);
    for (int q = 1; q <= p; ++q)
      for (const Op& x : all_injections(q, p)) {
        if (!b.admissible(x)) continue;
        for (int y = 0; y < s->size(); ++y)
          b.gen[{x, y}] = pre_.add(tag + "[" + op_string(x) + "|" + s->gen(y).name + "]", {q, s->gen(y).deg[0]});
      }
    blocks_.push_back(std::move(b));
    return static_cast<int>(blocks_.size()) - 1;
  }
  void set_fallback(int b, std::function<BElem(const Op&, int)> fn) { blocks_[static_cast<std::size_t>(b)].fallback = std::move(fn); }

  // Copy x of the element y; x admissible, possibly degenerate.
  BElem elem(int b, const Op& x, const SElem& y) const {
    EpiMono em = epi_mono(x);
    return BElem{{em.epi, y.eta[0]}, blocks_[static_cast<std::size_t>(b)].gen.at({em.mono, y.gen})};
  }

  void relate(const BElem& u, const BElem& v) { rel_.emplace_back(u, v); }

  Quotient<2> finish() {
    for (const Block& b : blocks_)
      for (const auto& [key, g] : b.gen) {
        const Op& x = key.first;
        int y = key.second, q = x.src, r = b.s->gen(y).deg[0];
        std::vector<BElem> ext, in;
        for (int i = 0; i <= q; ++i) {
          Op z = compose(x, face_op(q, i));
          ext.push_back(b.admissible(z) ? elem(static_cast<int>(&b - blocks_.data()), z, b.s->gen_elem(y)) : b.fallback(z, y));
        }
        for (int j = 0; j < (r > 0 ? r + 1 : 0); ++j)
          in.push_back(elem(static_cast<int>(&b - blocks_.data()), x, b.s->face(0, j, b.s->gen_elem(y))));
        pre_.set_faces(g, 0, std::move(ext));
        pre_.set_faces(g, 1, std::move(in));
      }
    pre_.finalize(false);
    std::vector<int> rank(static_cast<std::size_t>(pre_.size()), 1);
    for (int g = 0; g < a_->size(); ++g) rank[static_cast<std::size_t>(g)] = 0;
    pre_ptr_ = share(std::move(pre_));
    auto q = quotient<2>(pre_ptr_, rel_, rank);
    auto errs = precat_violations(*q.obj);
    if (!errs.empty()) throw StructuralError("block construction: " + errs.front());
    return q;
  }

  PrecatMap from_a(const Quotient<2>& q) const {
    PrecatMap f{a_, q.obj, {}};
    for (int g = 0; g < a_->size(); ++g) f.img.push_back(q.proj.img[static_cast<std::size_t>(g)]);
    return f;
  }

  // S -> level(result, p) for the copy at the identity of [p].
  SSetMap block_map(int b, const Quotient<2>& q, const Level& top) const {
    const Block& blk = blocks_[static_cast<std::size_t>(b)];
    SSetMap f{blk.s, top.obj, {}};
    for (int y = 0; y < blk.s->size(); ++y) f.img.push_back(top.to_level(q.proj(elem(b, identity_op(blk.p), blk.s->gen_elem(y)))));
    return f;
  }

 private:
  PrecatPtr a_;
  Precat pre_;
  PrecatPtr pre_ptr_;
  std::vector<Block> blocks_;
  std::vector<std::pair<BElem, BElem>> rel_;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw StructuralError(what);
}

void check_tuples(const SSet& s, const VertexTuples& t, std::size_t len, const Precat& a, const std::string& what) {
  require(t.size() == static_cast<std::size_t>(s.size()), what + ": one tuple per generator expected");
  for (int g = 0; g < s.size(); ++g) {
    require(t[static_cast<std::size_t>(g)].size() == len, what + ": tuple of wrong length");
    for (int o : t[static_cast<std::size_t>(g)])
      require(o >= 0 && o < a.size() && a.gen(o).deg == Deg<2>{0, 0}, what + ": tuple entry is not an object");
    for (const SElem& f : s.gen(g).faces[0])
      require(t[static_cast<std::size_t>(f.gen)] == t[static_cast<std::size_t>(g)], what + ": tuples are not constant on faces");
  }
}

void check_map(const SSetMap& f, const std::string& what) {
  auto errs = f.check();
  require(errs.empty(), what + ": " + (errs.empty() ? "" : errs.front()));
}

}  // namespace

BlockResult reg(const PrecatPtr& a, const Level& lp, const SSetMap& f, const VertexTuples& g) {
  int p = lp.m;
  require(p >= 1, "Reg needs p >= 1");
  require(f.src == lp.obj, "Reg: f must start at A_p");
  check_map(f, "Reg: f");
  check_tuples(*f.tgt, g, static_cast<std::size_t>(p) + 1, *a, "Reg: g");
  for (std::size_t x = 0; x < lp.cell.size(); ++x)
    require(g[static_cast<std::size_t>(f.img[x].gen)] == lp.tuple[x], "Reg: g∘f is not the vertex map");
  Builder b(a);
  int blk = b.add_block(f.tgt, p, "R", nonconstant);
  b.set_fallback(blk, [&](const Op& z, int y) {
    return object_elem(z.src, f.tgt->gen(y).deg[0], g[static_cast<std::size_t>(y)][static_cast<std::size_t>(z.v[0])]);
  });
  for (int q = 1; q <= p; ++q)
    for (const Op& x : all_injections(q, p))
      for (std::size_t c = 0; c < lp.cell.size(); ++c) b.relate(a->act(0, x, lp.cell[c]), b.elem(blk, x, f.img[c]));
  auto quo = b.finish();
  BlockResult r;
  r.obj = quo.obj;
  r.from_a = b.from_a(quo);
  r.top = level(r.obj, p);
  r.block = b.block_map(blk, quo, r.top);
  return r;
}

BlockResult seg(const PrecatPtr& a, const Level& lm, const Level& l1, const SSetMap& f, const std::vector<SSetMap>& g) {
  int m = lm.m;
  require(m >= 2, "Seg needs m >= 2");
  require(f.src == lm.obj, "Seg: f must start at A_m");
  require(g.size() == static_cast<std::size_t>(m), "Seg: one component per principal edge expected");
  check_map(f, "Seg: f");
  for (int k = 0; k < m; ++k) {
    const SSetMap& gk = g[static_cast<std::size_t>(k)];
    require(gk.src == f.tgt && gk.tgt == l1.obj, "Seg: g components must map Q to A_1");
    check_map(gk, "Seg: g");
    require(compose(gk, f).img == level_operator(a, lm, l1, principal_edge(m, k)).img, "Seg: g∘f is not the Segal map");
  }
  for (int y = 0; y < f.tgt->size(); ++y)
    for (int k = 0; k + 1 < m; ++k)
      require(l1.tuple[static_cast<std::size_t>(g[static_cast<std::size_t>(k)].img[static_cast<std::size_t>(y)].gen)][1] ==
                  l1.tuple[static_cast<std::size_t>(g[static_cast<std::size_t>(k) + 1].img[static_cast<std::size_t>(y)].gen)][0],
              "Seg: g does not land in the fiber product");
  Builder b(a);
  int blk = b.add_block(f.tgt, m, "S", nonprincipal);
  b.set_fallback(blk, [&](const Op& z, int y) {
    int k = 0;
    factors_through_principal(z, &k);
    std::vector<int> tau;
    for (int i = 0; i <= z.src; ++i) tau.push_back(z.v[static_cast<std::size_t>(i)] - k);
    return a->act(0, make_op(1, tau), l1.to_precat(g[static_cast<std::size_t>(k)].img[static_cast<std::size_t>(y)]));
  });
  for (int q = 1; q <= m; ++q)
    for (const Op& x : all_injections(q, m)) {
      if (!nonprincipal(x)) continue;
      for (std::size_t c = 0; c < lm.cell.size(); ++c) b.relate(a->act(0, x, lm.cell[c]), b.elem(blk, x, f.img[c]));
    }
  auto quo = b.finish();
  BlockResult r;
  r.obj = quo.obj;
  r.from_a = b.from_a(quo);
  r.top = level(r.obj, m);
  r.block = b.block_map(blk, quo, r.top);
  return r;
}

// ------------------------------------------------------------ paintings

Painted paint_all(const PrecatPtr& a, int m) {
  Painted p;
  p.a = a;
  p.m = m;
  p.l1 = level(a, 1);
  p.lm = level(a, m);
  p.i = identity_map<1>(p.l1.obj);
  p.j = identity_map<1>(p.lm.obj);
  return p;
}

namespace {

// Inverse of a mono on elements; nullopt outside the image.
std::optional<SElem> preimage(const SSetMap& mono, const SElem& x) {
  for (int g = 0; g < mono.src->size(); ++g)
    if (mono.img[static_cast<std::size_t>(g)].gen == x.gen) {
      SElem y = x;
      y.gen = g;
      return y;
    }
  return std::nullopt;
}

}  // namespace

std::vector<std::string> painting_violations(const Painted& p) {
  std::vector<std::string> errs;
  if (p.m < 2) errs.push_back("painting: m must be at least 2");
  if (p.i.tgt != p.l1.obj || p.j.tgt != p.lm.obj) errs.push_back("painting: monos must land in A_1 and A_m");
  if (!errs.empty()) return errs;
  if (!is_mono<1>(p.i) || !is_mono<1>(p.j)) errs.push_back("painting: i and j must be monomorphisms");
  for (int k = 0; k < p.m; ++k) {
    SSetMap s = level_operator(p.a, p.lm, p.l1, principal_edge(p.m, k));
    for (const SElem& x : p.j.img)
      if (!preimage(p.i, s(x))) {
        errs.push_back("painting: the Segal map does not send A_m* into A_1*");
        return errs;
      }
  }
  return errs;
}

std::vector<std::string> rs_violations(const Painted& p, const RSData& d) {
  auto errs = painting_violations(p);
  if (!errs.empty()) return errs;
  auto fail = [&](const std::string& s) {
    errs.push_back("RS data: " + s);
    return errs;
  };
  if (d.eta.src != p.i.src) return fail("η must start at A_1*");
  if (d.phi.src != p.j.src) return fail("φ must start at A_m*");
  if (d.psi.size() != static_cast<std::size_t>(p.m)) return fail("ψ needs one component per principal edge");
  for (const auto* f : {&d.eta, &d.phi})
    if (!f->check().empty()) return fail("invalid map");
  if (d.nu.size() != static_cast<std::size_t>(d.eta.tgt->size())) return fail("ν needs one tuple per generator of B");
  try {
    check_tuples(*d.eta.tgt, d.nu, 2, *p.a, "ν");
  } catch (const StructuralError& e) {
    return fail(e.what());
  }
  for (int a = 0; a < p.i.src->size(); ++a)
    if (d.nu[static_cast<std::size_t>(d.eta.img[static_cast<std::size_t>(a)].gen)] !=
        p.l1.tuple[static_cast<std::size_t>(p.i.img[static_cast<std::size_t>(a)].gen)])
      return fail("ν∘η is not the source-target map");
  for (int k = 0; k < p.m; ++k) {
    const SSetMap& pk = d.psi[static_cast<std::size_t>(k)];
    if (pk.src != d.phi.tgt || pk.tgt != d.eta.tgt || !pk.check().empty()) return fail("ψ components must be maps P -> B");
    SSetMap s = level_operator(p.a, p.lm, p.l1, principal_edge(p.m, k));
    for (int a = 0; a < p.j.src->size(); ++a) {
      SElem lhs = pk(d.phi.img[static_cast<std::size_t>(a)]);
      auto pre = preimage(p.i, s(p.j.img[static_cast<std::size_t>(a)]));
      if (!pre || !(lhs == d.eta(*pre))) return fail("ψ∘φ is not η^m after the Segal map");
    }
  }
  for (int y = 0; y < d.phi.tgt->size(); ++y)
    for (int k = 0; k + 1 < p.m; ++k)
      if (d.nu[static_cast<std::size_t>(d.psi[static_cast<std::size_t>(k)].img[static_cast<std::size_t>(y)].gen)][1] !=
          d.nu[static_cast<std::size_t>(d.psi[static_cast<std::size_t>(k) + 1].img[static_cast<std::size_t>(y)].gen)][0])
        return fail("ψ does not land in the fiber product");
  return errs;
}

RSResult rs(const Painted& p, const RSData& d) {
  auto errs = rs_violations(p, d);
  if (!errs.empty()) throw StructuralError(errs.front());
  int m = p.m;
  const SSetPtr& bs = d.eta.tgt;
  const SSetPtr& ps = d.phi.tgt;
  Builder b(p.a);
  int bb = b.add_block(bs, 1, "B", nonconstant);
  int pb = b.add_block(ps, m, "P", nonprincipal);
  b.set_fallback(bb, [&](const Op& z, int y) {
    return object_elem(z.src, bs->gen(y).deg[0], d.nu[static_cast<std::size_t>(y)][static_cast<std::size_t>(z.v[0])]);
  });
  b.set_fallback(pb, [&](const Op& z, int y) {
    int k = 0;
    factors_through_principal(z, &k);
    std::vector<int> tau;
    for (int i = 0; i <= z.src; ++i) tau.push_back(z.v[static_cast<std::size_t>(i)] - k);
    Op t = make_op(1, tau);
    SElem target = d.psi[static_cast<std::size_t>(k)].img[static_cast<std::size_t>(y)];
    if (nonconstant(t)) return b.elem(bb, t, target);
    return object_elem(z.src, ps->gen(y).deg[0], d.nu[static_cast<std::size_t>(target.gen)][static_cast<std::size_t>(tau[0])]);
  });
  for (int a = 0; a < p.i.src->size(); ++a)
    b.relate(p.l1.to_precat(p.i.img[static_cast<std::size_t>(a)]), b.elem(bb, identity_op(1), d.eta.img[static_cast<std::size_t>(a)]));
  for (int q = 1; q <= m; ++q)
    for (const Op& x : all_injections(q, m)) {
      if (!nonprincipal(x)) continue;
      for (int a = 0; a < p.j.src->size(); ++a)
        b.relate(p.a->act(0, x, p.lm.to_precat(p.j.img[static_cast<std::size_t>(a)])),
                 b.elem(pb, x, d.phi.img[static_cast<std::size_t>(a)]));
    }
  auto quo = b.finish();
  RSResult r;
  r.from_a = b.from_a(quo);
  r.out.a = quo.obj;
  r.out.m = m;
  r.out.l1 = level(quo.obj, 1);
  r.out.lm = level(quo.obj, m);
  r.out.i = b.block_map(bb, quo, r.out.l1);
  r.out.j = b.block_map(pb, quo, r.out.lm);
  return r;
}

namespace {

VertexTuples tuples_from_pushout(const Pushout<1>& po, const VertexTuples& left, const VertexTuples& right) {
  VertexTuples out;
  for (int g = 0; g < po.obj->size(); ++g)
    out.push_back(po.rep_side[static_cast<std::size_t>(g)] == 0 ? left[static_cast<std::size_t>(po.rep_index[static_cast<std::size_t>(g)])]
                                                                 : right[static_cast<std::size_t>(po.rep_index[static_cast<std::size_t>(g)])]);
  return out;
}

}  // namespace

RSResult rs_by_definition(const Painted& p, const RSData& d) {
  auto errs = rs_violations(p, d);
  if (!errs.empty()) throw StructuralError(errs.front());
  int m = p.m;
  // η' : A_1 -> B' = A_1 ⊔_{A_1*} B and ν'.
  auto pob = pushout<1>(p.i, d.eta, "B");
  VertexTuples nup = tuples_from_pushout(pob, p.l1.tuple, d.nu);
  BlockResult r = reg(p.a, p.l1, pob.inl, nup);
  // φ' : A_m -> P' = A_m ⊔_{A_m*} P and ψ'.
  auto pop = pushout<1>(p.j, d.phi, "P");
  std::vector<SSetMap> psip;
  for (int k = 0; k < m; ++k) {
    SSetMap seg_k = compose(pob.inl, level_operator(p.a, p.lm, p.l1, principal_edge(m, k)));
    psip.push_back(pushout_universal<1>(pop, seg_k, compose(pob.inr, d.psi[static_cast<std::size_t>(k)])));
  }
  // φ'' : Reg_m -> P'' = Reg_m ⊔_{A_m} P' and ψ''.
  Level rm = level(r.obj, m);
  const Level& r1 = r.top;
  auto popp = pushout<1>(level_map(r.from_a, p.lm, rm), pop.inl, "Q");
  std::vector<SSetMap> psipp;
  for (int k = 0; k < m; ++k)
    psipp.push_back(pushout_universal<1>(popp, level_operator(r.obj, rm, r1, principal_edge(m, k)),
                                         compose(r.block, psip[static_cast<std::size_t>(k)])));
  BlockResult s = seg(r.obj, rm, r1, popp.inl, psipp);
  RSResult out;
  out.from_a = compose(s.from_a, r.from_a);
  out.out.a = s.obj;
  out.out.m = m;
  out.out.l1 = level(s.obj, 1);
  out.out.lm = s.top;
  out.out.i = compose(level_map(s.from_a, r1, out.out.l1), compose(r.block, pob.inr));
  out.out.j = compose(s.block, compose(popp.inr, pop.inr));
  return out;
}

RSData reg_as_rs(const Painted& p, const SSetMap& f, const VertexTuples& g) {
  RSData d;
  d.eta = f;
  d.nu = g;
  d.phi = identity_map<1>(p.lm.obj);
  for (int k = 0; k < p.m; ++k) d.psi.push_back(compose(f, level_operator(p.a, p.lm, p.l1, principal_edge(p.m, k))));
  return d;
}

RSData seg_as_rs(const Painted& p, const SSetMap& f, const std::vector<SSetMap>& g) {
  RSData d;
  d.eta = identity_map<1>(p.l1.obj);
  d.nu = p.l1.tuple;
  d.phi = f;
  d.psi = g;
  return d;
}

RSData compose_rs_data(const RSData& d, const RSData& e) {
  RSData c;
  c.eta = compose(e.eta, d.eta);
  c.nu = e.nu;
  c.phi = compose(e.phi, d.phi);
  c.psi = e.psi;
  return c;
}

RegSegFactorization reg_seg_factorization(const PrecatPtr& a, const Level& lm, const SSetMap& phi, const VertexTuples& psi) {
  int m = lm.m;
  RegSegFactorization out;
  out.direct = reg(a, lm, phi, psi);
  Level l1 = level(a, 1);
  // B = A_1 pushed out along m copies of φ indexed by the principal edges.
  std::vector<SSetPtr> lms(static_cast<std::size_t>(m), lm.obj), ps(static_cast<std::size_t>(m), phi.tgt);
  std::vector<std::string> prefixes;
  for (int k = 0; k < m; ++k) prefixes.push_back("e" + std::to_string(k) + ":");
  auto cl = coproduct<1>(lms, prefixes);
  auto cp = coproduct<1>(ps, prefixes);
  std::vector<SSetMap> faces, copies;
  for (int k = 0; k < m; ++k) {
    faces.push_back(level_operator(a, lm, l1, principal_edge(m, k)));
    copies.push_back(compose(cp.inj[static_cast<std::size_t>(k)], phi));
  }
  auto pob = pushout<1>(copair<1>(cl, faces, l1.obj), copair<1>(cl, copies, cp.obj), "B");
  VertexTuples nu;
  int psize = phi.tgt->size();
  for (int g = 0; g < pob.obj->size(); ++g) {
    int idx = pob.rep_index[static_cast<std::size_t>(g)];
    if (pob.rep_side[static_cast<std::size_t>(g)] == 0) {
      nu.push_back(l1.tuple[static_cast<std::size_t>(idx)]);
    } else {
      int k = idx / psize, y = idx % psize;
      nu.push_back({psi[static_cast<std::size_t>(y)][static_cast<std::size_t>(k)], psi[static_cast<std::size_t>(y)][static_cast<std::size_t>(k) + 1]});
    }
  }
  BlockResult r = reg(a, l1, pob.inl, nu);
  Level rm = level(r.obj, m);
  // Q = P ⊔_{A_m} Reg_m and ψ'.
  auto poq = pushout<1>(level_map(r.from_a, lm, rm), phi, "Q");
  std::vector<SSetMap> psip;
  for (int k = 0; k < m; ++k) {
    SSetMap pk = compose(r.block, compose(pob.inr, cp.inj[static_cast<std::size_t>(k)]));
    psip.push_back(pushout_universal<1>(poq, level_operator(r.obj, rm, r.top, principal_edge(m, k)), pk));
  }
  out.factored = seg(r.obj, rm, r.top, poq.inl, psip);
  out.isomorphic = find_iso<2>(out.direct.obj, out.factored.obj).has_value();
  return out;
}

// ------------------------------------------------------------ instances

namespace {

struct Extended {
  SSetPtr obj;
  SSetMap incl;
};

// Copy of X with room for more generators.
SSet copy_of(const SSet& x) {
  SSet out;
  for (const auto& g : x.gens()) out.add(g.name, g.deg);
  for (int g = 0; g < x.size(); ++g) out.set_faces(g, 0, x.gen(g).faces[0]);
  return out;
}

SSetMap inclusion_prefix(const SSetPtr& from, const SSetPtr& to) {
  SSetMap f{from, to, {}};
  for (int g = 0; g < from->size(); ++g) f.img.push_back(to->gen_elem(g));
  return f;
}

std::vector<int> vertices_of(const SSet& x) {
  std::vector<int> v;
  for (int g = 0; g < x.size(); ++g)
    if (x.gen(g).deg[0] == 0) v.push_back(g);
  return v;
}

int pick(std::mt19937& rng, int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

// An edge u -> v of X, if any.
std::optional<int> edge_between(const SSet& x, int u, int v) {
  for (int g = 0; g < x.size(); ++g)
    if (x.gen(g).deg[0] == 1 && x.gen(g).faces[0][1].gen == u && x.gen(g).faces[0][0].gen == v)
      return g;
  return std::nullopt;
}

// Extends (B0, ν0) and (P0, ψ0 : P0 -> B0) by random vertices and edges.
RSData extend_data(const SSetPtr& b0, const VertexTuples& nu0, const SSetPtr& p0, const std::vector<SSetMap>& psi0,
                   const std::vector<int>& objs, int m, std::mt19937& rng, int extra) {
  SSet b = copy_of(*b0);
  VertexTuples nu = nu0;
  for (int n = 0; n < extra; ++n) {
    if (pick(rng, 2) == 0 || vertices_of(b).empty()) {
      b.add("b" + std::to_string(b.size()), {0});
      nu.push_back({objs[static_cast<std::size_t>(pick(rng, static_cast<int>(objs.size())))],
                    objs[static_cast<std::size_t>(pick(rng, static_cast<int>(objs.size())))]});
    } else {
      auto vs = vertices_of(b);
      int u = vs[static_cast<std::size_t>(pick(rng, static_cast<int>(vs.size())))];
      std::vector<int> same;
      for (int v : vs)
        if (nu[static_cast<std::size_t>(v)] == nu[static_cast<std::size_t>(u)]) same.push_back(v);
      int v = same[static_cast<std::size_t>(pick(rng, static_cast<int>(same.size())))];
      int e = b.add("b" + std::to_string(b.size()), {1});
      b.set_faces(e, 0, {b.gen_elem(v), b.gen_elem(u)});
      nu.push_back(nu[static_cast<std::size_t>(u)]);
    }
  }
  b.finalize();
  auto bp = share(std::move(b));
  RSData d;
  d.eta = inclusion_prefix(b0, bp);
  d.nu = nu;

  SSet p = copy_of(*p0);
  std::vector<std::vector<SElem>> comp(static_cast<std::size_t>(m));
  for (int y = 0; y < p0->size(); ++y)
    for (int k = 0; k < m; ++k) comp[static_cast<std::size_t>(k)].push_back(d.eta(psi0[static_cast<std::size_t>(k)].img[static_cast<std::size_t>(y)]));
  const SSet& B = *bp;
  auto bv = vertices_of(B);
  if (bv.empty()) extra = 0;
  for (int n = 0; n < extra; ++n) {
    auto pv = vertices_of(p);
    if (pick(rng, 2) == 0 || pv.size() < 2) {
      // A vertex over a composable chain of vertices of B.
      std::vector<int> chain{bv[static_cast<std::size_t>(pick(rng, static_cast<int>(bv.size())))]};
      for (int k = 1; k < m; ++k) {
        std::vector<int> next;
        for (int v : bv)
          if (nu[static_cast<std::size_t>(v)][0] == nu[static_cast<std::size_t>(chain.back())][1]) next.push_back(v);
        if (next.empty()) break;
        chain.push_back(next[static_cast<std::size_t>(pick(rng, static_cast<int>(next.size())))]);
      }
      if (static_cast<int>(chain.size()) < m) continue;
      p.add("p" + std::to_string(p.size()), {0});
      for (int k = 0; k < m; ++k) comp[static_cast<std::size_t>(k)].push_back(B.gen_elem(chain[static_cast<std::size_t>(k)]));
    } else {
      int u = pv[static_cast<std::size_t>(pick(rng, static_cast<int>(pv.size())))];
      int v = pv[static_cast<std::size_t>(pick(rng, static_cast<int>(pv.size())))];
      std::vector<SElem> img;
      for (int k = 0; k < m; ++k) {
        int bu = comp[static_cast<std::size_t>(k)][static_cast<std::size_t>(u)].gen, bw = comp[static_cast<std::size_t>(k)][static_cast<std::size_t>(v)].gen;
        if (bu == bw) {
          img.push_back(B.degeneracy(0, 0, B.gen_elem(bu)));
        } else if (auto e = edge_between(B, bu, bw)) {
          img.push_back(B.gen_elem(*e));
        } else {
          break;
        }
      }
      if (static_cast<int>(img.size()) < m) continue;
      int e = p.add("p" + std::to_string(p.size()), {1});
      p.set_faces(e, 0, {p.gen_elem(v), p.gen_elem(u)});
      for (int k = 0; k < m; ++k) comp[static_cast<std::size_t>(k)].push_back(img[static_cast<std::size_t>(k)]);
    }
  }
  p.finalize();
  auto pp = share(std::move(p));
  d.phi = inclusion_prefix(p0, pp);
  for (int k = 0; k < m; ++k) d.psi.push_back(make_map<1>(pp, bp, comp[static_cast<std::size_t>(k)]));
  return d;
}

PrecatPtr random_base(std::mt19937& rng, int m) {
  SSetPtr shapes[] = {standard_simplex(m), upsilon(m)};
  SSetPtr fills[] = {standard_simplex(0), boundary(1), standard_simplex(1)};
  return theta(shapes[pick(rng, 2)], fills[pick(rng, 3)]).obj;
}

}  // namespace

RegInstance random_reg_instance(std::mt19937& rng) {
  int m = 2;
  RegInstance in;
  in.a = random_base(rng, m);
  in.lm = level(in.a, m);
  auto objs = objects(*in.a);
  SSet p = copy_of(*in.lm.obj);
  VertexTuples psi = in.lm.tuple;
  int extra = 2 + pick(rng, 3);
  for (int n = 0; n < extra; ++n) {
    auto vs = vertices_of(p);
    if (pick(rng, 2) == 0) {
      p.add("p" + std::to_string(p.size()), {0});
      std::vector<int> t;
      for (int k = 0; k <= m; ++k) t.push_back(objs[static_cast<std::size_t>(pick(rng, static_cast<int>(objs.size())))]);
      psi.push_back(t);
    } else {
      int u = vs[static_cast<std::size_t>(pick(rng, static_cast<int>(vs.size())))];
      std::vector<int> same;
      for (int v : vs)
        if (psi[static_cast<std::size_t>(v)] == psi[static_cast<std::size_t>(u)]) same.push_back(v);
      int v = same[static_cast<std::size_t>(pick(rng, static_cast<int>(same.size())))];
      int e = p.add("p" + std::to_string(p.size()), {1});
      p.set_faces(e, 0, {p.gen_elem(v), p.gen_elem(u)});
      psi.push_back(psi[static_cast<std::size_t>(u)]);
    }
  }
  p.finalize();
  auto pp = share(std::move(p));
  in.phi = inclusion_prefix(in.lm.obj, pp);
  in.psi = psi;
  return in;
}

RSInstance random_rs_instance(std::mt19937& rng) {
  int m = 2;
  RSInstance in;
  auto a = random_base(rng, m);
  Painted p;
  p.a = a;
  p.m = m;
  p.l1 = level(a, 1);
  p.lm = level(a, m);
  // A random face-closed part of A_1, and the part of A_m over it.
  std::vector<int> g1;
  for (int g = 0; g < p.l1.obj->size(); ++g)
    if (pick(rng, 3) != 0) g1.push_back(g);
  Sub<1> s1 = subobject<1>(p.l1.obj, g1);
  p.i = s1.incl;
  std::vector<SSetMap> segs;
  for (int k = 0; k < m; ++k) segs.push_back(level_operator(a, p.lm, p.l1, principal_edge(m, k)));
  std::vector<int> gm;
  for (int g = 0; g < p.lm.obj->size(); ++g) {
    bool inside = true;
    for (const auto& s : segs)
      if (s1.old_to_new[static_cast<std::size_t>(s.img[static_cast<std::size_t>(g)].gen)] < 0) inside = false;
    if (inside && pick(rng, 4) != 0) gm.push_back(g);
  }
  Sub<1> sm = subobject<1>(p.lm.obj, gm);
  p.j = sm.incl;
  in.a = p;
  VertexTuples nu0;
  for (const SElem& x : p.i.img) nu0.push_back(p.l1.tuple[static_cast<std::size_t>(x.gen)]);
  std::vector<SSetMap> psi0;
  for (const auto& s : segs) psi0.push_back(restrict_map<1>(s, sm, s1));
  auto objs = objects(*a);
  in.first = extend_data(s1.obj, nu0, sm.obj, psi0, objs, m, rng, 2 + pick(rng, 3));
  in.second = extend_data(in.first.eta.tgt, in.first.nu, in.first.phi.tgt, in.first.psi, objs, m, rng, 2 + pick(rng, 3));
  return in;
}

}  // namespace segalkit
