#include "segalkit/precat.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace segalkit {

std::vector<std::string> precat_violations(const Precat& a) {
  std::vector<std::string> errs;
  for (const auto& g : a.gens())
    if (g.deg[0] == 0 && g.deg[1] != 0)
      errs.push_back("generator " + g.name + ": bidegree (0," + std::to_string(g.deg[1]) +
                     ") violates discreteness of the object level");
  auto ids = a.check_identities();
  errs.insert(errs.end(), ids.begin(), ids.end());
  return errs;
}

PrecatPtr seal(Precat a) {
  a.finalize(false);
  auto errs = precat_violations(a);
  if (!errs.empty()) throw StructuralError(errs.front());
  return share(std::move(a));
}

std::vector<int> objects(const Precat& a) {
  std::vector<int> out;
  for (int g = 0; g < a.size(); ++g)
    if (a.gen(g).deg == Deg<2>{0, 0}) out.push_back(g);
  return out;
}

std::vector<int> vertex_tuple(const Precat& a, const BElem& e) {
  int m = e.eta[0].src;
  std::vector<int> t;
  for (int i = 0; i <= m; ++i) t.push_back(a.act(0, constant_op(0, m, i), e).gen);
  return t;
}

SElem Level::to_level(const BElem& e) const {
  SElem x;
  x.eta[0] = e.eta[1];
  x.gen = index.at({e.eta[0], e.gen});
  return x;
}

BElem Level::to_precat(const SElem& x) const {
  BElem e = cell[static_cast<std::size_t>(x.gen)];
  e.eta[1] = x.eta[0];
  return e;
}

Level level(const PrecatPtr& ap, int m) {
  const Precat& a = *ap;
  Level l;
  l.m = m;
  SSet out;
  for (int g = 0; g < a.size(); ++g) {
    const auto& d = a.gen(g).deg;
    if (d[0] > m) continue;
    for (const Op& s : all_surjections(m, d[0])) {
      BElem e;
      e.eta[0] = s;
      e.eta[1] = identity_op(d[1]);
      e.gen = g;
      int id = out.add(a.label(e), {d[1]});
      l.index.emplace(std::make_pair(s, g), id);
      l.cell.push_back(e);
      l.tuple.push_back(vertex_tuple(a, e));
    }
  }
  for (int x = 0; x < out.size(); ++x) {
    const BElem& e = l.cell[static_cast<std::size_t>(x)];
    int q = e.eta[1].src;
    if (q == 0) continue;
    std::vector<SElem> fs;
    for (int j = 0; j <= q; ++j) fs.push_back(l.to_level(a.face(1, j, e)));
    out.set_faces(x, 0, std::move(fs));
  }
  out.finalize(false);
  l.obj = share(std::move(out));
  return l;
}

SSetMap level_operator(const PrecatPtr& a, const Level& from, const Level& to, const Op& alpha) {
  SSetMap f{from.obj, to.obj, {}};
  for (const BElem& c : from.cell) f.img.push_back(to.to_level(a->act(0, alpha, c)));
  return f;
}

SSetMap level_map(const PrecatMap& f, const Level& from, const Level& to) {
  SSetMap g{from.obj, to.obj, {}};
  for (const BElem& c : from.cell) g.img.push_back(to.to_level(f(c)));
  return g;
}

Sub<1> fiber(const Level& l, const std::vector<int>& t) {
  std::vector<int> gens;
  for (std::size_t x = 0; x < l.cell.size(); ++x)
    if (l.tuple[x] == t) gens.push_back(static_cast<int>(x));
  return subobject<1>(l.obj, gens);
}

SSetPtr fiber(const PrecatPtr& a, int m, const std::vector<int>& t) {
  if (static_cast<int>(t.size()) != m + 1) throw StructuralError("fiber: tuple length must be m+1");
  for (int o : t)
    if (o < 0 || o >= a->size() || a->gen(o).deg != Deg<2>{0, 0}) throw StructuralError("fiber: tuple entry is not an object");
  return fiber(level(a, m), t).obj;
}

std::map<std::vector<int>, int> fiber_sizes(const Level& l) {
  std::map<std::vector<int>, int> out;
  for (const auto& t : l.tuple) ++out[t];
  return out;
}

// ----------------------------------------------------------- MultiProduct

MultiProduct::MultiProduct(std::vector<SSetPtr> factors) : factors_(std::move(factors)) {
  if (factors_.empty()) {
    obj = point_object<1>();
    return;
  }
  if (factors_.size() == 1) {
    obj = factors_[0];
    return;
  }
  stages_.emplace_back(factors_[0], factors_[1]);
  for (std::size_t i = 2; i < factors_.size(); ++i) stages_.emplace_back(stages_.back().obj, factors_[i]);
  obj = stages_.back().obj;
}

SElem MultiProduct::tuple(const std::vector<SElem>& xs) const {
  if (xs.size() != factors_.size() || xs.empty()) throw StructuralError("MultiProduct: wrong number of components");
  if (xs.size() == 1) return xs[0];
  SElem acc = stages_[0].pair(xs[0], xs[1]);
  for (std::size_t i = 2; i < xs.size(); ++i) acc = stages_[i - 1].pair(acc, xs[i]);
  return acc;
}

std::vector<SElem> MultiProduct::split(const SElem& x) const {
  if (factors_.size() <= 1) return {x};
  std::vector<SElem> out(factors_.size());
  SElem cur = x;
  for (std::size_t i = stages_.size(); i-- > 0;) {
    out[i + 1] = stages_[i].pr2(cur);
    cur = stages_[i].pr1(cur);
  }
  out[0] = cur;
  return out;
}

// --------------------------------------------------------------- Segal maps

namespace {

Op edge_op(int m, int i, int j) { return make_op(m, {i, j}); }

}  // namespace

SegalFiberMap segal_map_fiber(const PrecatPtr& a, const Level& lm, const Level& l1, const std::vector<int>& t) {
  int m = lm.m;
  SegalFiberMap s;
  s.source = fiber(lm, t);
  std::vector<SSetPtr> homs;
  for (int i = 0; i < m; ++i) {
    s.hom.push_back(fiber(l1, {t[static_cast<std::size_t>(i)], t[static_cast<std::size_t>(i) + 1]}));
    homs.push_back(s.hom.back().obj);
  }
  s.target = std::make_shared<MultiProduct>(homs);
  s.map = SSetMap{s.source.obj, s.target->obj, {}};
  for (const SElem& inc : s.source.incl.img) {
    const BElem& c = lm.cell[static_cast<std::size_t>(inc.gen)];
    std::vector<SElem> parts;
    for (int i = 0; i < m; ++i) {
      SElem y = l1.to_level(a->act(0, edge_op(m, i, i + 1), c));
      y.gen = s.hom[static_cast<std::size_t>(i)].old_to_new[static_cast<std::size_t>(y.gen)];
      parts.push_back(y);
    }
    s.map.img.push_back(s.target->tuple(parts));
  }
  return s;
}

SegalFiberMap segal_map_fiber(const PrecatPtr& a, int m, const std::vector<int>& t) {
  if (m < 2) throw StructuralError("Segal map needs m >= 2");
  return segal_map_fiber(a, level(a, m), level(a, 1), t);
}

namespace {

void all_tuples(const std::vector<int>& objs, int len, const std::function<void(const std::vector<int>&)>& fn) {
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

}  // namespace

SegalMap segal_map(const PrecatPtr& a, int m) {
  if (m < 2) throw StructuralError("Segal map needs m >= 2");
  Level lm = level(a, m), l1 = level(a, 1);
  std::vector<std::vector<int>> tuples;
  std::vector<SegalFiberMap> parts;
  all_tuples(objects(*a), m + 1, [&](const std::vector<int>& t) {
    auto s = segal_map_fiber(a, lm, l1, t);
    if (s.target->obj->size() == 0) return;
    tuples.push_back(t);
    parts.push_back(std::move(s));
  });
  std::vector<SSetPtr> objs;
  std::vector<std::string> prefixes;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    objs.push_back(parts[i].target->obj);
    std::string p = "[";
    for (int o : tuples[i]) p += a->gen(o).name + ";";
    prefixes.push_back(p + "]");
  }
  auto cop = coproduct<1>(objs, prefixes);
  SegalMap out;
  out.source = lm.obj;
  out.target = cop.obj;
  out.map = SSetMap{lm.obj, cop.obj, std::vector<SElem>(lm.cell.size())};
  for (std::size_t i = 0; i < parts.size(); ++i)
    for (std::size_t k = 0; k < parts[i].source.incl.img.size(); ++k) {
      int old = parts[i].source.incl.img[k].gen;
      out.map.img[static_cast<std::size_t>(old)] = cop.inj[i](parts[i].map.img[k]);
    }
  return out;
}

SegalReport is_segal_category(const PrecatPtr& a, int max_level) {
  SegalReport r;
  Level l1 = level(a, 1);
  auto objs = objects(*a);
  for (int m = 2; m <= max_level; ++m) {
    Level lm = level(a, m);
    all_tuples(objs, m + 1, [&](const std::vector<int>& t) {
      Verdict v = Verdict::Unknown;
      try {
        auto s = segal_map_fiber(a, lm, l1, t);
        v = s.source.obj->size() == 0 && s.target->obj->size() == 0 ? Verdict::WE : we_oracle(s.map);
      } catch (const BudgetExceeded&) {
        // Fiber product too large to build; the tuple stays undecided.
      }
      r.entries.push_back({m, t, v});
      if (v == Verdict::NotWE) r.overall = Verdict::NotWE;
      else if (v == Verdict::Unknown && r.overall == Verdict::WE) r.overall = Verdict::Unknown;
    });
  }
  return r;
}

// ----------------------------------------------------------------- diagonal

SSetPtr diagonal(const Precat& a) {
  using Key = std::tuple<Op, Op, int>;
  std::map<Key, int> index;
  std::vector<Key> keys;
  for (int g = 0; g < a.size(); ++g) {
    int p = a.gen(g).deg[0], q = a.gen(g).deg[1];
    for (int n = std::max(p, q); n <= p + q; ++n)
      for (const Op& s : all_surjections(n, p))
        for (const Op& t : all_surjections(n, q)) {
          bool disjoint = true;
          for (int j = 0; j < n && disjoint; ++j)
            if (s(j) == s(j + 1) && t(j) == t(j + 1)) disjoint = false;
          if (disjoint) keys.emplace_back(s, t, g);
        }
  }
  SSet out;
  for (const Key& k : keys) {
    BElem e{{std::get<0>(k), std::get<1>(k)}, std::get<2>(k)};
    index.emplace(k, out.add(a.label(e), {std::get<0>(k).src}));
  }
  for (std::size_t i = 0; i < keys.size(); ++i) {
    const Key& k = keys[i];
    BElem e{{std::get<0>(k), std::get<1>(k)}, std::get<2>(k)};
    int n = std::get<0>(k).src;
    if (n == 0) continue;
    std::vector<SElem> fs;
    for (int j = 0; j <= n; ++j) {
      BElem f = a.act(1, face_op(n, j), a.act(0, face_op(n, j), e));
      auto cf = factor_common(f.eta[0], f.eta[1]);
      SElem x;
      x.eta[0] = cf.common;
      x.gen = index.at(Key{cf.left, cf.right, f.gen});
      fs.push_back(x);
    }
    out.set_faces(static_cast<int>(i), 0, std::move(fs));
  }
  out.finalize(false);
  return share(std::move(out));
}

PrecatPtr internally_discrete(const SSet& x) {
  Precat out;
  for (const auto& g : x.gens()) out.add(g.name, {g.deg[0], 0});
  for (int g = 0; g < x.size(); ++g) {
    std::vector<BElem> fs;
    for (const SElem& f : x.gen(g).faces[0]) fs.push_back(BElem{{f.eta[0], identity_op(0)}, f.gen});
    out.set_faces(g, 0, std::move(fs));
  }
  return seal(std::move(out));
}

PrecatPtr discrete_precat(const std::vector<std::string>& names) {
  Precat out;
  for (const auto& n : names) out.add(n, {0, 0});
  return seal(std::move(out));
}

bool is_connected(const PrecatPtr& a) {
  std::vector<int> parent(static_cast<std::size_t>(a->size()));
  std::iota(parent.begin(), parent.end(), 0);
  auto root = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)];
    return x;
  };
  for (int g = 0; g < a->size(); ++g)
    if (a->gen(g).deg[0] == 1) {
      auto t = vertex_tuple(*a, a->gen_elem(g));
      int x = root(t[0]), y = root(t[1]);
      if (x != y) parent[static_cast<std::size_t>(std::max(x, y))] = std::min(x, y);
    }
  std::set<int> roots;
  for (int o : objects(*a)) roots.insert(root(o));
  return roots.size() <= 1;
}

// ------------------------------------------------------------ free-ordered

std::map<int, int> index_order(const Precat& a) {
  std::map<int, int> r;
  for (int o : objects(a)) r[o] = o;
  return r;
}

std::map<int, int> lexicographic_order(const Product<2>& p, const std::map<int, int>& ra, const std::map<int, int>& rb) {
  int width = 1;
  for (auto& [o, r] : rb) width = std::max(width, r + 1);
  std::map<int, int> out;
  for (int o : objects(*p.obj)) {
    BElem e = p.obj->gen_elem(o);
    out[o] = ra.at(p.pr1(e).gen) * width + rb.at(p.pr2(e).gen);
  }
  return out;
}

FreeOrderedReport is_free_ordered(const PrecatPtr& a, const std::map<int, int>& rank, bool strict, int max_level) {
  FreeOrderedReport rep;
  auto objs = objects(*a);
  for (int o : objs)
    if (!rank.count(o)) throw StructuralError("free-ordered check: object " + a->gen(o).name + " has no rank");
  std::sort(objs.begin(), objs.end(), [&](int x, int y) { return rank.at(x) < rank.at(y); });
  auto name_of = [&](const std::vector<int>& t) {
    std::string s = "(";
    for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + a->gen(t[i]).name;
    return s + ")";
  };
  Level l1 = level(a, 1);
  for (int m = 1; m <= max_level; ++m) {
    Level lm = m == 1 ? l1 : level(a, m);
    std::set<std::vector<int>> bad;
    for (const auto& t : lm.tuple)
      for (std::size_t i = 0; i + 1 < t.size(); ++i)
        if (rank.at(t[i]) > rank.at(t[i + 1])) bad.insert(t);
    for (const auto& t : bad) {
      rep.unordered_empty = false;
      rep.failures.push_back("(i) nonempty fiber over unordered tuple " + name_of(t));
    }
    if (m < 2) continue;
    Op alpha = edge_op(m, 0, m);
    SSetMap long_edge = level_operator(a, lm, l1, alpha);
    // Weakly increasing tuples of length m+1.
    std::vector<std::size_t> idx(static_cast<std::size_t>(m) + 1, 0);
    std::function<void(int, std::size_t)> rec = [&](int pos, std::size_t lo) {
      if (pos == m + 1) {
        std::vector<int> t;
        for (std::size_t k : idx) t.push_back(objs[k]);
        Sub<1> src = fiber(lm, t), tgt = fiber(l1, {t.front(), t.back()});
        SSetMap f = restrict_map<1>(long_edge, src, tgt);
        bool good;
        if (strict) {
          good = is_iso(f);
        } else {
          Verdict v = we_oracle(f);
          if (v == Verdict::Unknown) {
            rep.undecided = true;
            rep.failures.push_back("(ii) undecided at " + name_of(t));
            return;
          }
          good = v == Verdict::WE;
        }
        if (!good) {
          rep.long_edge_we = false;
          rep.failures.push_back(std::string("(ii) long edge map is not ") + (strict ? "an isomorphism" : "a weak equivalence") +
                                 " at " + name_of(t));
        }
        return;
      }
      for (std::size_t k = lo; k < objs.size(); ++k) {
        idx[static_cast<std::size_t>(pos)] = k;
        rec(pos + 1, k);
      }
    };
    if (!objs.empty()) rec(0, 0);
  }
  for (int o : objs) {
    Sub<1> f = fiber(l1, {o, o});
    if (!(f.obj->size() == 1 && f.obj->gen(0).deg[0] == 0)) {
      rep.endo_point = false;
      rep.failures.push_back("(iii) endomorphisms of " + a->gen(o).name + " are not a point");
    }
  }
  return rep;
}

}  // namespace segalkit
