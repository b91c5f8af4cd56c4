#include "segalkit/theta.hpp"

#include <algorithm>
#include <cctype>

namespace segalkit {

BElem Theta::element(const SElem& xe, const SElem& ye) const {
  int n = xe.eta[0].src, r = ye.eta[0].src;
  int xg = xe.gen;
  if (x->gen(xg).deg[0] == 0) return BElem{{constant_op(n, 0, 0), constant_op(r, 0, 0)}, vertex[static_cast<std::size_t>(xg)]};
  return BElem{{xe.eta[0], ye.eta[0]}, cell.at({xg, ye.gen})};
}

Theta theta(const SSetPtr& x, const SSetPtr& y) {
  Theta t;
  t.x = x;
  t.y = y;
  Precat out;
  t.vertex.assign(static_cast<std::size_t>(x->size()), -1);
  for (int v = 0; v < x->size(); ++v)
    if (x->gen(v).deg[0] == 0) t.vertex[static_cast<std::size_t>(v)] = out.add(x->gen(v).name, {0, 0});
  for (int a = 0; a < x->size(); ++a) {
    int p = x->gen(a).deg[0];
    if (p == 0) continue;
    for (int b = 0; b < y->size(); ++b)
      t.cell[{a, b}] = out.add("(" + x->gen(a).name + "|" + y->gen(b).name + ")", {p, y->gen(b).deg[0]});
  }
  for (const auto& [key, g] : t.cell) {
    auto [a, b] = key;
    int p = x->gen(a).deg[0], q = y->gen(b).deg[0];
    std::vector<BElem> ext, in;
    for (int i = 0; i <= p; ++i) ext.push_back(t.element(x->face(0, i, x->gen_elem(a)), y->gen_elem(b)));
    if (q > 0)
      for (int j = 0; j <= q; ++j) in.push_back(t.element(x->gen_elem(a), y->face(0, j, y->gen_elem(b))));
    out.set_faces(g, 0, std::move(ext));
    out.set_faces(g, 1, std::move(in));
  }
  t.obj = seal(std::move(out));
  return t;
}

Theta theta_view(const SSetPtr& x, const SSetPtr& y, const PrecatPtr& obj) {
  Theta t = theta(x, y);
  bool same = t.obj->size() == obj->size();
  for (int g = 0; same && g < obj->size(); ++g) same = t.obj->gen(g).name == obj->gen(g).name && t.obj->gen(g).deg == obj->gen(g).deg;
  if (!same) throw StructuralError("theta_view: object is not XΘY");
  t.obj = obj;
  return t;
}

PrecatMap theta_map(const Theta& from, const Theta& to, const SSetMap& f, const SSetMap& g) {
  if (f.src != from.x || f.tgt != to.x || g.src != from.y || g.tgt != to.y)
    throw StructuralError("theta_map: maps do not match the Θ objects");
  PrecatMap h{from.obj, to.obj, std::vector<BElem>(static_cast<std::size_t>(from.obj->size()))};
  for (int v = 0; v < from.x->size(); ++v) {
    int o = from.vertex[static_cast<std::size_t>(v)];
    if (o < 0) continue;
    h.img[static_cast<std::size_t>(o)] = to.obj->gen_elem(to.vertex[static_cast<std::size_t>(f.img[static_cast<std::size_t>(v)].gen)]);
  }
  for (const auto& [key, c] : from.cell)
    h.img[static_cast<std::size_t>(c)] = to.element(f(from.x->gen_elem(key.first)), g(from.y->gen_elem(key.second)));
  return h;
}

const char* arrow_tag_name(ArrowTag t) {
  switch (t) {
    case ArrowTag::Attach: return "Attach";
    case ArrowTag::Boit: return "Boit";
    case ArrowTag::EquivTheta: return "EquivTheta";
    case ArrowTag::ObjInclusion: return "ObjInclusion";
  }
  return "?";
}

namespace {

std::string arrow_id(ArrowTag tag, int m, const SSetMap& g, int k) {
  std::string s = arrow_tag_name(tag);
  if (tag == ArrowTag::ObjInclusion) return s;
  if (tag != ArrowTag::EquivTheta) s += "_" + std::to_string(m);
  if (k >= 0) return s + "(g" + std::to_string(k) + ")";
  return s + "(" + std::to_string(g.src->size()) + "->" + std::to_string(g.tgt->size()) + ")";
}

// k with g = ∂Δ[k] -> Δ[k], or -1.
int boundary_index(const SSetMap& g) {
  for (int k = 0; k <= 6; ++k) {
    auto b = boundary_inclusion(k);
    if (b.tgt == g.tgt && b.src->size() == g.src->size() && b.img == g.img) return k;
  }
  return -1;
}

}  // namespace

GeneratingArrow boit(int m, const SSetMap& g) {
  if (m < 2) throw StructuralError("Boit_m needs m >= 2");
  SSetMap im = spine_inclusion(m);
  auto ups = im.src;
  auto dm = im.tgt;
  Theta ue = theta(ups, g.src), uf = theta(ups, g.tgt), de = theta(dm, g.src), df = theta(dm, g.tgt);
  PrecatMap left = theta_map(ue, uf, identity_map<1>(ups), g);
  PrecatMap right = theta_map(ue, de, im, identity_map<1>(g.src));
  auto po = pushout<2>(left, right);
  GeneratingArrow a;
  a.tag = ArrowTag::Boit;
  a.m = m;
  a.k = boundary_index(g);
  a.id = arrow_id(a.tag, m, g, a.k);
  a.map = pushout_universal<2>(po, theta_map(uf, df, im, identity_map<1>(g.tgt)),
                               theta_map(de, df, identity_map<1>(dm), g));
  return a;
}

GeneratingArrow attach(int n, const SSetMap& g) {
  if (n < 1) throw StructuralError("Attach_n needs n >= 1");
  if (!is_mono<1>(g)) throw StructuralError("Attach_n needs a monomorphism");
  auto dn = standard_simplex(n);
  SSetMap bn = boundary_inclusion(n);
  Theta bx = theta(bn.src, g.src), by = theta(bn.src, g.tgt), dx = theta(dn, g.src), dy = theta(dn, g.tgt);
  PrecatMap left = theta_map(bx, dx, bn, identity_map<1>(g.src));
  PrecatMap right = theta_map(bx, by, identity_map<1>(bn.src), g);
  auto po = pushout<2>(left, right);
  GeneratingArrow a;
  a.tag = ArrowTag::Attach;
  a.m = n;
  a.k = boundary_index(g);
  a.id = arrow_id(a.tag, n, g, a.k);
  a.map = pushout_universal<2>(po, theta_map(dx, dy, identity_map<1>(dn), g), theta_map(by, dy, bn, identity_map<1>(g.tgt)));
  return a;
}

GeneratingArrow equiv_theta(const SSetMap& g) {
  auto d1 = standard_simplex(1);
  Theta a = theta(d1, g.src), b = theta(d1, g.tgt);
  GeneratingArrow out;
  out.tag = ArrowTag::EquivTheta;
  out.m = 1;
  out.k = boundary_index(g);
  out.id = arrow_id(out.tag, 1, g, out.k);
  out.map = theta_map(a, b, identity_map<1>(d1), g);
  return out;
}

GeneratingArrow obj_inclusion() {
  GeneratingArrow out;
  out.tag = ArrowTag::ObjInclusion;
  out.id = arrow_id(out.tag, 0, SSetMap{}, -1);
  out.map = empty_map<2>(point_object<2>());
  return out;
}

GeneratingFamilies generating_families(int max_m, int max_k) {
  GeneratingFamilies fam;
  for (int m = 2; m <= max_m; ++m)
    for (int k = 0; k <= max_k; ++k) fam.fg1.push_back(boit(m, boundary_inclusion(k)));
  fam.fg2.push_back(obj_inclusion());
  for (int k = 0; k <= max_k; ++k) fam.fg2.push_back(equiv_theta(boundary_inclusion(k)));
  fam.i.push_back(obj_inclusion());
  for (int n = 1; n <= max_m; ++n)
    for (int k = 0; k <= max_k; ++k) fam.i.push_back(attach(n, boundary_inclusion(k)));
  return fam;
}

std::map<int, int> numeric_order(const Precat& a) {
  std::map<int, int> r;
  auto objs = objects(a);
  bool numeric = true;
  for (int o : objs) {
    const auto& n = a.gen(o).name;
    if (n.empty() || !std::all_of(n.begin(), n.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
      numeric = false;
  }
  for (int o : objs) r[o] = numeric ? std::stoi(a.gen(o).name) : o;
  return r;
}

bool arrows_isomorphic(const PrecatMap& f, const PrecatMap& g) {
  if (census(*f.src) != census(*g.src) || census(*f.tgt) != census(*g.tgt)) return false;
  bool found = false;
  MapSearch<2> inj;
  inj.injective_gens = true;
  enumerate_maps<2>(
      f.tgt, g.tgt,
      [&](const PrecatMap& t) {
        if (!is_iso(t)) return true;
        PrecatMap tf = compose(t, f);
        enumerate_maps<2>(
            f.src, g.src,
            [&](const PrecatMap& s) {
              if (is_iso(s) && compose(g, s) == tf) found = true;
              return !found;
            },
            inj);
        return !found;
      },
      inj);
  return found;
}

// -------------------------------------------------------- hom transposition

namespace {

int top_simplex(const SSet& dm, int m) {
  std::vector<int> all;
  for (int i = 0; i <= m; ++i) all.push_back(i);
  return dm.index_of(simplex_name(all, m));
}

// Vertex k of X as a generator index, by name.
int vertex_gen(const SSet& x, int k, int m) { return x.index_of(simplex_name({k}, m)); }

Op vertex_inclusion(const SSet& dm, int gen, int m) {
  int p = dm.gen(gen).deg[0];
  std::vector<int> vals;
  for (int i = 0; i <= p; ++i) vals.push_back(std::stoi(dm.gen(dm.act(0, constant_op(0, p, i), dm.gen_elem(gen)).gen).name));
  return make_op(m, vals);
}

}  // namespace

Transposed transpose(const Theta& dc, const Level& lm, const PrecatMap& phi) {
  int m = lm.m;
  const SSet& dm = *dc.x;
  Transposed out;
  for (int k = 0; k <= m; ++k)
    out.tuple.push_back(phi.img[static_cast<std::size_t>(dc.vertex[static_cast<std::size_t>(vertex_gen(dm, k, m))])].gen);
  Sub<1> fib = fiber(lm, out.tuple);
  out.map = SSetMap{dc.y, fib.obj, {}};
  int top = top_simplex(dm, m);
  for (int c = 0; c < dc.y->size(); ++c) {
    SElem x = lm.to_level(phi.img[static_cast<std::size_t>(dc.cell.at({top, c}))]);
    int ng = fib.old_to_new[static_cast<std::size_t>(x.gen)];
    if (ng < 0) throw StructuralError("transpose: image leaves the fiber");
    x.gen = ng;
    out.map.img.push_back(x);
  }
  return out;
}

PrecatMap untranspose(const Theta& dc, const PrecatPtr& a, const Level& lm, const std::vector<int>& t, const SSetMap& psi) {
  int m = lm.m;
  const SSet& dm = *dc.x;
  Sub<1> fib = fiber(lm, t);
  if (psi.tgt->size() != fib.obj->size()) throw StructuralError("untranspose: map does not land in the fiber");
  PrecatMap phi{dc.obj, a, std::vector<BElem>(static_cast<std::size_t>(dc.obj->size()))};
  for (int k = 0; k <= m; ++k)
    phi.img[static_cast<std::size_t>(dc.vertex[static_cast<std::size_t>(vertex_gen(dm, k, m))])] =
        a->gen_elem(t[static_cast<std::size_t>(k)]);
  for (const auto& [key, g] : dc.cell) {
    SElem y = psi.img[static_cast<std::size_t>(key.second)];
    SElem inl = fib.incl(y);
    BElem e = lm.to_precat(inl);
    phi.img[static_cast<std::size_t>(g)] = a->act(0, vertex_inclusion(dm, key.first, m), e);
  }
  return phi;
}

namespace {

void for_tuples(const std::vector<int>& objs, int len, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> cur;
  std::function<void()> rec = [&]() {
    if (static_cast<int>(cur.size()) == len) {
      fn(cur);
      return;
    }
    for (int o : objs) {
      cur.push_back(o);
      rec();
      cur.pop_back();
    }
  };
  rec();
}

long long count_or_throw(const SSetPtr& s, const SSetPtr& t, long long budget) {
  MapSearch<1> o;
  o.budget = budget;
  auto n = count_maps<1>(s, t, o);
  if (!n) throw BudgetExceeded("hom_transpose: enumeration budget exceeded");
  return *n;
}

}  // namespace

HomTransposeReport hom_transpose(int m, const SSetPtr& c, const PrecatPtr& a, long long budget) {
  if (m < 1) throw StructuralError("hom_transpose needs m >= 1");
  HomTransposeReport rep;
  auto dm = standard_simplex(m);
  SSetMap im = spine_inclusion(m);
  auto ups = im.src;
  Theta dc = theta(dm, c), uc = theta(ups, c);
  PrecatMap incl = theta_map(uc, dc, im, identity_map<1>(c));
  Level lm = level(a, m), l1 = level(a, 1);
  auto objs = objects(*a);
  MapSearch<2> o2;
  o2.budget = budget;
  MapSearch<1> o1;
  o1.budget = budget;

  auto st = enumerate_maps<2>(
      dc.obj, a,
      [&](const PrecatMap& phi) {
        ++rep.direct;
        Transposed tr = transpose(dc, lm, phi);
        if (!tr.map.check().empty() || !(untranspose(dc, a, lm, tr.tuple, tr.map) == phi)) ++rep.round_trip_failures;
        // Part 3: φ ∘ (i_mΘC) transposes to the Segal map after ψ.
        PrecatMap res = compose(phi, incl);
        auto seg = segal_map_fiber(a, lm, l1, tr.tuple);
        for (int g = 0; g < c->size(); ++g) {
          auto parts = seg.target->split(seg.map(tr.map.img[static_cast<std::size_t>(g)]));
          for (int k = 0; k < m; ++k) {
            int edge = ups->index_of(simplex_name({k, k + 1}, m));
            SElem y = l1.to_level(res.img[static_cast<std::size_t>(uc.cell.at({edge, g}))]);
            y.gen = seg.hom[static_cast<std::size_t>(k)].old_to_new[static_cast<std::size_t>(y.gen)];
            if (!(y == parts[static_cast<std::size_t>(k)])) {
              ++rep.compat_failures;
              return true;
            }
          }
        }
        return true;
      },
      o2);
  if (st.status == SearchStatus::BudgetExceeded) throw BudgetExceeded("hom_transpose: enumeration budget exceeded");

  for_tuples(objs, m + 1, [&](const std::vector<int>& t) {
    Sub<1> fib = fiber(lm, t);
    auto s = enumerate_maps<1>(
        c, fib.obj,
        [&](const SSetMap& psi) {
          ++rep.by_fibers;
          PrecatMap phi = untranspose(dc, a, lm, t, psi);
          if (!phi.check().empty()) {
            ++rep.round_trip_failures;
            return true;
          }
          Transposed back = transpose(dc, lm, phi);
          if (back.tuple != t || !(back.map.img == psi.img)) ++rep.round_trip_failures;
          return true;
        },
        o1);
    if (s.status == SearchStatus::BudgetExceeded) throw BudgetExceeded("hom_transpose: enumeration budget exceeded");
    std::vector<SSetPtr> homs;
    for (int k = 0; k < m; ++k)
      homs.push_back(fiber(l1, {t[static_cast<std::size_t>(k)], t[static_cast<std::size_t>(k) + 1]}).obj);
    MultiProduct prod(homs);
    rep.spine_by_fibers += count_or_throw(c, prod.obj, budget);
  });

  // Constancy filtering: maps C -> A_m whose vertex tuple is constant.
  auto s = enumerate_maps<1>(
      c, lm.obj,
      [&](const SSetMap& f) {
        bool constant = true;
        for (std::size_t g = 1; g < f.img.size() && constant; ++g)
          if (lm.tuple[static_cast<std::size_t>(f.img[g].gen)] != lm.tuple[static_cast<std::size_t>(f.img[0].gen)]) constant = false;
        if (constant) ++rep.constant_maps;
        return true;
      },
      o1);
  if (s.status == SearchStatus::BudgetExceeded) throw BudgetExceeded("hom_transpose: enumeration budget exceeded");
  // The empty map is constant at every tuple.
  if (c->size() == 0) {
    rep.constant_maps = 1;
    for (int k = 0; k <= m; ++k) rep.constant_maps *= static_cast<long long>(objs.size());
  }

  MapSearch<2> o3;
  o3.budget = budget;
  auto n = count_maps<2>(uc.obj, a, o3);
  if (!n) throw BudgetExceeded("hom_transpose: enumeration budget exceeded");
  rep.spine_direct = *n;
  return rep;
}

}  // namespace segalkit
