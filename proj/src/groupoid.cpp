#include "segalkit/groupoid.hpp"

#include <algorithm>
#include <functional>
#include <mutex>
#include <numeric>
#include <set>

namespace segalkit {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw StructuralError(msg);
}

FiniteCategory& with_table(FiniteCategory& c, const std::function<int(int, int)>& product) {
  int n = c.size();
  c.comp.assign(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n), -1));
  for (int g = 0; g < n; ++g)
    for (int f = 0; f < n; ++f)
      if (c.morphisms[static_cast<std::size_t>(f)].tgt == c.morphisms[static_cast<std::size_t>(g)].src)
        c.comp[static_cast<std::size_t>(g)][static_cast<std::size_t>(f)] = product(g, f);
  return c;
}

int add_morphism(FiniteCategory& c, std::string name, int s, int t) {
  c.morphisms.push_back({std::move(name), s, t});
  return c.size() - 1;
}

}  // namespace

std::vector<std::string> category_violations(const FiniteCategory& c) {
  std::vector<std::string> errs;
  int n = c.size();
  int k = static_cast<int>(c.objects.size());
  if (static_cast<int>(c.identity.size()) != k) return {"identity list has the wrong size"};
  if (static_cast<int>(c.comp.size()) != n) return {"composition table has the wrong size"};
  auto src = [&](int f) { return c.morphisms[static_cast<std::size_t>(f)].src; };
  auto tgt = [&](int f) { return c.morphisms[static_cast<std::size_t>(f)].tgt; };
  auto comp = [&](int g, int f) { return c.comp[static_cast<std::size_t>(g)][static_cast<std::size_t>(f)]; };
  for (int x = 0; x < k; ++x) {
    int i = c.identity[static_cast<std::size_t>(x)];
    if (i < 0 || i >= n || src(i) != x || tgt(i) != x) errs.push_back("bad identity at " + c.objects[static_cast<std::size_t>(x)]);
  }
  if (!errs.empty()) return errs;
  for (int g = 0; g < n; ++g)
    for (int f = 0; f < n; ++f) {
      int h = comp(g, f);
      bool composable = tgt(f) == src(g);
      if (composable != (h >= 0)) {
        errs.push_back("composition defined off composable pairs or missing: " + c.morphisms[static_cast<std::size_t>(g)].name +
                       " after " + c.morphisms[static_cast<std::size_t>(f)].name);
        continue;
      }
      if (h >= 0 && (src(h) != src(f) || tgt(h) != tgt(g))) errs.push_back("composite has the wrong ends");
    }
  if (!errs.empty()) return errs;
  for (int f = 0; f < n; ++f) {
    if (comp(c.identity[static_cast<std::size_t>(tgt(f))], f) != f) errs.push_back("left unit fails");
    if (comp(f, c.identity[static_cast<std::size_t>(src(f))]) != f) errs.push_back("right unit fails");
  }
  for (int f = 0; f < n; ++f)
    for (int g = 0; g < n; ++g) {
      if (tgt(f) != src(g)) continue;
      for (int h = 0; h < n; ++h)
        if (tgt(g) == src(h) && comp(h, comp(g, f)) != comp(comp(h, g), f)) errs.push_back("associativity fails");
    }
  return errs;
}

FiniteCategory poset_chain(int n) {
  FiniteCategory c;
  for (int i = 0; i <= n; ++i) c.objects.push_back(std::to_string(i));
  std::map<std::pair<int, int>, int> arrow;
  for (int i = 0; i <= n; ++i)
    for (int j = i; j <= n; ++j)
      arrow[{i, j}] = add_morphism(c, i == j ? "id" + std::to_string(i) : std::to_string(i) + std::to_string(j), i, j);
  for (int i = 0; i <= n; ++i) c.identity.push_back(arrow.at({i, i}));
  return with_table(c, [&](int g, int f) {
    return arrow.at({c.morphisms[static_cast<std::size_t>(f)].src, c.morphisms[static_cast<std::size_t>(g)].tgt});
  });
}

FiniteCategory cyclic_group(int n) {
  FiniteCategory c;
  c.objects.push_back("*");
  for (int i = 0; i < n; ++i) add_morphism(c, i == 0 ? "e" : "z" + std::to_string(i), 0, 0);
  c.identity.push_back(0);
  return with_table(c, [n](int g, int f) { return (g + f) % n; });
}

FiniteCategory walking_iso() {
  FiniteCategory c;
  c.objects = {"0", "1"};
  add_morphism(c, "id0", 0, 0);
  add_morphism(c, "id1", 1, 1);
  add_morphism(c, "01", 0, 1);
  add_morphism(c, "10", 1, 0);
  c.identity = {0, 1};
  // Exactly one morphism between any two objects.
  return with_table(c, [&c](int g, int f) {
    int s = c.morphisms[static_cast<std::size_t>(f)].src, t = c.morphisms[static_cast<std::size_t>(g)].tgt;
    return s == t ? s : (s == 0 ? 2 : 3);
  });
}

std::optional<CategoryIso> find_category_iso(const FiniteCategory& c, const FiniteCategory& d) {
  if (c.objects.size() != d.objects.size() || c.size() != d.size()) return std::nullopt;
  std::size_t k = c.objects.size();
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    CategoryIso iso{perm, std::vector<int>(static_cast<std::size_t>(c.size()), -1)};
    std::vector<char> used(static_cast<std::size_t>(d.size()), 0);
    bool found = false;
    std::function<void(int)> rec = [&](int f) {
      if (found) return;
      if (f == c.size()) {
        found = true;
        return;
      }
      const auto& m = c.morphisms[static_cast<std::size_t>(f)];
      int s = perm[static_cast<std::size_t>(m.src)], t = perm[static_cast<std::size_t>(m.tgt)];
      for (int h = 0; h < d.size(); ++h) {
        const auto& dm = d.morphisms[static_cast<std::size_t>(h)];
        if (used[static_cast<std::size_t>(h)] || dm.src != s || dm.tgt != t) continue;
        iso.morphisms[static_cast<std::size_t>(f)] = h;
        bool ok = true;
        for (int x = 0; x < static_cast<int>(k) && ok; ++x)
          if (c.identity[static_cast<std::size_t>(x)] <= f)
            ok = iso.morphisms[static_cast<std::size_t>(c.identity[static_cast<std::size_t>(x)])] ==
                 d.identity[static_cast<std::size_t>(perm[static_cast<std::size_t>(x)])];
        for (int a = 0; a <= f && ok; ++a)
          for (int b = 0; b <= f && ok; ++b) {
            int ab = c.comp[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
            if (ab < 0 || ab > f) continue;
            ok = d.comp[static_cast<std::size_t>(iso.morphisms[static_cast<std::size_t>(a)])]
                       [static_cast<std::size_t>(iso.morphisms[static_cast<std::size_t>(b)])] ==
                 iso.morphisms[static_cast<std::size_t>(ab)];
          }
        if (!ok) continue;
        used[static_cast<std::size_t>(h)] = 1;
        rec(f + 1);
        if (found) return;
        used[static_cast<std::size_t>(h)] = 0;
      }
    };
    rec(0);
    if (found) return iso;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::nullopt;
}

FiniteCategory relabel(const FiniteCategory& d, const CategoryIso& iso) {
  std::vector<int> inv_obj(iso.objects.size()), inv_mor(iso.morphisms.size());
  for (std::size_t i = 0; i < iso.objects.size(); ++i) inv_obj[static_cast<std::size_t>(iso.objects[i])] = static_cast<int>(i);
  for (std::size_t i = 0; i < iso.morphisms.size(); ++i)
    inv_mor[static_cast<std::size_t>(iso.morphisms[i])] = static_cast<int>(i);
  FiniteCategory out;
  for (std::size_t i = 0; i < iso.objects.size(); ++i) out.objects.push_back(d.objects[static_cast<std::size_t>(iso.objects[i])]);
  for (std::size_t i = 0; i < iso.morphisms.size(); ++i) {
    auto m = d.morphisms[static_cast<std::size_t>(iso.morphisms[i])];
    m.src = inv_obj[static_cast<std::size_t>(m.src)];
    m.tgt = inv_obj[static_cast<std::size_t>(m.tgt)];
    out.morphisms.push_back(m);
  }
  for (std::size_t x = 0; x < iso.objects.size(); ++x)
    out.identity.push_back(inv_mor[static_cast<std::size_t>(d.identity[static_cast<std::size_t>(iso.objects[x])])]);
  std::size_t n = iso.morphisms.size();
  out.comp.assign(n, std::vector<int>(n, -1));
  for (std::size_t g = 0; g < n; ++g)
    for (std::size_t f = 0; f < n; ++f) {
      int h = d.comp[static_cast<std::size_t>(iso.morphisms[g])][static_cast<std::size_t>(iso.morphisms[f])];
      out.comp[g][f] = h < 0 ? -1 : inv_mor[static_cast<std::size_t>(h)];
    }
  return out;
}

bool same_table(const FiniteCategory& c, const FiniteCategory& d) {
  if (c.objects.size() != d.objects.size() || c.size() != d.size() || c.identity != d.identity || c.comp != d.comp)
    return false;
  for (int f = 0; f < c.size(); ++f)
    if (c.morphisms[static_cast<std::size_t>(f)].src != d.morphisms[static_cast<std::size_t>(f)].src ||
        c.morphisms[static_cast<std::size_t>(f)].tgt != d.morphisms[static_cast<std::size_t>(f)].tgt)
      return false;
  return true;
}

// ------------------------------------------------------------------ Nerves

SSetPtr nerve(const FiniteCategory& c, int max_dim) {
  require(category_violations(c).empty(), "nerve: not a category");
  require(max_dim >= 0 && max_dim <= kMaxDim, "nerve: dimension out of range");
  std::vector<char> is_id(static_cast<std::size_t>(c.size()), 0);
  for (int i : c.identity) is_id[static_cast<std::size_t>(i)] = 1;
  SSet x;
  std::vector<int> vertex;
  for (const auto& o : c.objects) vertex.push_back(x.add(o, {0}));
  std::map<std::vector<int>, int> index;
  std::vector<std::vector<int>> strings;
  std::function<void(std::vector<int>&)> grow = [&](std::vector<int>& s) {
    std::string name;
    for (std::size_t i = 0; i < s.size(); ++i) name += (i ? "," : "") + c.morphisms[static_cast<std::size_t>(s[i])].name;
    index[s] = x.add(name, {static_cast<int>(s.size())});
    strings.push_back(s);
    if (static_cast<int>(s.size()) == max_dim) return;
    for (int f = 0; f < c.size(); ++f)
      if (!is_id[static_cast<std::size_t>(f)] &&
          c.morphisms[static_cast<std::size_t>(f)].src == c.morphisms[static_cast<std::size_t>(s.back())].tgt) {
        s.push_back(f);
        grow(s);
        s.pop_back();
      }
  };
  if (max_dim >= 1)
    for (int f = 0; f < c.size(); ++f)
      if (!is_id[static_cast<std::size_t>(f)]) {
        std::vector<int> s{f};
        grow(s);
      }
  // A string that may contain identities, as a degeneracy of its reduced string.
  auto elem = [&](const std::vector<int>& t, int first_object) {
    std::vector<int> vals{0}, reduced;
    for (int f : t) {
      if (!is_id[static_cast<std::size_t>(f)]) reduced.push_back(f);
      vals.push_back(static_cast<int>(reduced.size()));
    }
    int k = static_cast<int>(reduced.size());
    int g = k == 0 ? vertex[static_cast<std::size_t>(first_object)] : index.at(reduced);
    return SElem{{make_op(k, vals)}, g};
  };
  for (const auto& s : strings) {
    int n = static_cast<int>(s.size());
    std::vector<SElem> fs;
    if (n == 1) {
      const auto& m = c.morphisms[static_cast<std::size_t>(s[0])];
      fs = {x.gen_elem(vertex[static_cast<std::size_t>(m.tgt)]), x.gen_elem(vertex[static_cast<std::size_t>(m.src)])};
    } else {
      for (int i = 0; i <= n; ++i) {
        std::vector<int> t;
        for (int j = 0; j < n; ++j) {
          if (i > 0 && i < n && j == i) continue;
          if ((i == 0 && j == 0) || (i == n && j == n - 1)) continue;
          if (i > 0 && i < n && j == i - 1)
            t.push_back(c.comp[static_cast<std::size_t>(s[static_cast<std::size_t>(i)])][static_cast<std::size_t>(s[static_cast<std::size_t>(i) - 1])]);
          else
            t.push_back(s[static_cast<std::size_t>(j)]);
        }
        int first = c.morphisms[static_cast<std::size_t>(t.front())].src;
        fs.push_back(elem(t, first));
      }
    }
    x.set_faces(index.at(s), 0, std::move(fs));
  }
  x.finalize(true);
  return share(std::move(x));
}

PrecatPtr nerve_precat(const FiniteCategory& c, int max_dim) { return internally_discrete(*nerve(c, max_dim)); }

namespace {

// The nerve cells below dimension t together with the single alternating
// t-simplex 0 -> 1 -> 0 -> ... . It bounds the top cycle that plain truncation
// leaves behind, so the result is contractible.
SSetPtr build_ibar_sset(int t) {
  if (t < 1) throw StructuralError("ibar: truncation must be at least 1");
  auto n = nerve(walking_iso(), t);
  std::string top;
  for (int i = 0; i < t; ++i) top += std::string(i ? "," : "") + (i % 2 ? "10" : "01");
  return subobject<1>(n, {n->index_of(top)}).obj;
}

}  // namespace

SSetPtr ibar_sset(int truncation) {
  static std::mutex mu;
  static std::map<int, SSetPtr> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(truncation);
  if (it == cache.end()) it = cache.emplace(truncation, build_ibar_sset(truncation)).first;
  return it->second;
}

PrecatPtr build_ibar(int truncation) { return internally_discrete(*ibar_sset(truncation)); }

JPre build_jpre_parts(int truncation) {
  SSet s;
  int o0 = s.add("0", {0}), o1 = s.add("1", {0});
  int u = s.add("u", {1}), v = s.add("v", {1}), c1 = s.add("vu", {1}), c2 = s.add("uv", {1});
  int t1 = s.add("T1", {2}), t2 = s.add("T2", {2});
  auto e = [&](int g) { return s.gen_elem(g); };
  s.set_faces(u, 0, {e(o1), e(o0)});
  s.set_faces(v, 0, {e(o0), e(o1)});
  s.set_faces(c1, 0, {e(o0), e(o0)});
  s.set_faces(c2, 0, {e(o1), e(o1)});
  s.set_faces(t1, 0, {e(v), e(c1), e(u)});
  s.set_faces(t2, 0, {e(u), e(c2), e(v)});
  s.finalize(true);
  auto x = internally_discrete(s);

  auto ibar = ibar_sset(truncation);
  Theta disk = theta(standard_simplex(1), ibar);
  Theta rim = theta(standard_simplex(1), boundary(1));
  SSetMap ends = make_map<1>(boundary(1), ibar, {ibar->gen_elem(ibar->index_of("0")), ibar->gen_elem(ibar->index_of("1"))});
  PrecatMap incl = theta_map(rim, disk, identity_map<1>(standard_simplex(1)), ends);

  // The rim edge over 0 goes to the long edge, the one over 1 to an identity.
  auto attach = [&](int obj, int long_edge) {
    std::vector<BElem> img(static_cast<std::size_t>(rim.obj->size()));
    BElem o = x->gen_elem(obj);
    img[static_cast<std::size_t>(rim.obj->index_of("0"))] = o;
    img[static_cast<std::size_t>(rim.obj->index_of("1"))] = o;
    img[static_cast<std::size_t>(rim.obj->index_of("(01|0)"))] = x->gen_elem(long_edge);
    img[static_cast<std::size_t>(rim.obj->index_of("(01|1)"))] = x->degeneracy(0, 0, o);
    return make_map<2>(rim.obj, x, std::move(img));
  };
  auto rims = coproduct<2>({rim.obj, rim.obj}, {"a:", "b:"});
  auto disks = coproduct<2>({disk.obj, disk.obj}, {"alpha:", "beta:"});
  auto f = copair<2>(rims, {attach(o0, c1), attach(o1, c2)}, x);
  auto g = copair<2>(rims, {compose(disks.inj[0], incl), compose(disks.inj[1], incl)}, disks.obj);
  auto po = pushout<2>(f, g);
  require(precat_violations(*po.obj).empty(), "build_jpre: the colimit is not a precategory");
  JPre j;
  j.obj = po.obj;
  j.u = po.inl.img[static_cast<std::size_t>(u)].gen;
  j.v = po.inl.img[static_cast<std::size_t>(v)].gen;
  j.t1 = po.inl.img[static_cast<std::size_t>(t1)].gen;
  j.t2 = po.inl.img[static_cast<std::size_t>(t2)].gen;
  j.alpha = compose(po.inr, disks.inj[0]);
  j.beta = compose(po.inr, disks.inj[1]);
  return j;
}

Sub<2> full_subprecat(const PrecatPtr& a, const std::vector<int>& objs) {
  std::set<int> keep(objs.begin(), objs.end());
  std::vector<int> gens;
  for (int g = 0; g < a->size(); ++g) {
    auto t = vertex_tuple(*a, a->gen_elem(g));
    if (std::all_of(t.begin(), t.end(), [&](int o) { return keep.count(o) > 0; })) gens.push_back(g);
  }
  return subobject<2>(a, gens);
}

// ------------------------------------------------------------- Truncations

FiniteCategory tau1(const PrecatPtr& a, int max_level) {
  require(max_level >= 2, "tau1: composition needs level 2");
  // Level 2 alone settles most non-Segal inputs cheaply.
  for (int m : {2, max_level}) {
    auto rep = is_segal_category(a, m);
    require(rep.overall == Verdict::WE, std::string("tau1: Segal check is ") + verdict_name(rep.overall));
  }
  FiniteCategory c;
  auto objs = objects(*a);
  std::map<int, int> obj_index;
  for (int o : objs) {
    obj_index[o] = static_cast<int>(c.objects.size());
    c.objects.push_back(a->gen(o).name);
  }
  Level l1 = level(a, 1), l2 = level(a, 2);
  auto lab = component_labels(*l1.obj);
  std::map<int, int> class_of;  // component label -> morphism
  for (int g = 0; g < l1.obj->size(); ++g) {
    int l = lab[static_cast<std::size_t>(g)];
    if (l < 0 || class_of.count(l)) continue;
    const auto& t = l1.tuple[static_cast<std::size_t>(g)];
    class_of[l] = add_morphism(c, a->label(l1.cell[static_cast<std::size_t>(g)]), obj_index.at(t[0]), obj_index.at(t[1]));
  }
  auto cls = [&](const SElem& e) { return class_of.at(lab[static_cast<std::size_t>(e.gen)]); };
  for (int o : objs) {
    int id = cls(l1.to_level(a->degeneracy(0, 0, a->gen_elem(o))));
    c.morphisms[static_cast<std::size_t>(id)].name = "id_" + a->gen(o).name;
    c.identity.push_back(id);
  }
  std::size_t n = static_cast<std::size_t>(c.size());
  c.comp.assign(n, std::vector<int>(n, -1));
  std::array<SSetMap, 3> d;
  for (int i = 0; i < 3; ++i) d[static_cast<std::size_t>(i)] = level_operator(a, l2, l1, face_op(2, i));
  for (int w = 0; w < l2.obj->size(); ++w) {
    if (l2.obj->gen(w).deg[0] != 0) continue;
    SElem we = l2.obj->gen_elem(w);
    int f = cls(d[2](we)), g = cls(d[0](we)), h = cls(d[1](we));
    int& slot = c.comp[static_cast<std::size_t>(g)][static_cast<std::size_t>(f)];
    require(slot < 0 || slot == h, "tau1: composition is not well defined");
    slot = h;
  }
  auto errs = category_violations(c);
  require(errs.empty(), "tau1: " + (errs.empty() ? std::string() : errs.front()));
  return c;
}

bool is_iso_in(const FiniteCategory& c, int f) {
  const auto& m = c.morphisms[static_cast<std::size_t>(f)];
  for (int g = 0; g < c.size(); ++g) {
    const auto& n = c.morphisms[static_cast<std::size_t>(g)];
    if (n.src != m.tgt || n.tgt != m.src) continue;
    if (c.comp[static_cast<std::size_t>(g)][static_cast<std::size_t>(f)] == c.identity[static_cast<std::size_t>(m.src)] &&
        c.comp[static_cast<std::size_t>(f)][static_cast<std::size_t>(g)] == c.identity[static_cast<std::size_t>(m.tgt)])
      return true;
  }
  return false;
}

std::vector<std::vector<int>> tau0(const FiniteCategory& c) {
  std::vector<int> parent(c.objects.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> root = [&](int x) {
    return parent[static_cast<std::size_t>(x)] == x ? x : parent[static_cast<std::size_t>(x)] = root(parent[static_cast<std::size_t>(x)]);
  };
  for (int f = 0; f < c.size(); ++f)
    if (is_iso_in(c, f)) {
      int a = root(c.morphisms[static_cast<std::size_t>(f)].src), b = root(c.morphisms[static_cast<std::size_t>(f)].tgt);
      if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
    }
  std::map<int, std::vector<int>> classes;
  for (int x = 0; x < static_cast<int>(c.objects.size()); ++x) classes[root(x)].push_back(x);
  std::vector<std::vector<int>> out;
  for (auto& [r, xs] : classes) out.push_back(xs);
  return out;
}

std::vector<std::vector<int>> tau0(const PrecatPtr& a, int max_level) { return tau0(tau1(a, max_level)); }

EquivalenceReport is_equivalence_of_segal_categories(const PrecatMap& f, int max_level) {
  const PrecatPtr& a = f.src;
  const PrecatPtr& b = f.tgt;
  FiniteCategory ta = tau1(a, max_level), tb = tau1(b, max_level);
  auto oa = objects(*a), ob = objects(*b);
  std::map<int, int> b_index;
  for (std::size_t i = 0; i < ob.size(); ++i) b_index[ob[i]] = static_cast<int>(i);
  auto classes = tau0(tb);
  std::vector<int> class_of(ob.size());
  for (std::size_t k = 0; k < classes.size(); ++k)
    for (int x : classes[k]) class_of[static_cast<std::size_t>(x)] = static_cast<int>(k);
  std::set<int> hit;
  for (int o : oa) hit.insert(class_of[static_cast<std::size_t>(b_index.at(f.img[static_cast<std::size_t>(o)].gen))]);
  EquivalenceReport rep;
  rep.essentially_surjective = hit.size() == classes.size();

  Level la = level(a, 1), lb = level(b, 1);
  SSetMap f1 = level_map(f, la, lb);
  bool unknown = false, bad = false;
  for (int x : oa)
    for (int y : oa) {
      int fx = f.img[static_cast<std::size_t>(x)].gen, fy = f.img[static_cast<std::size_t>(y)].gen;
      Sub<1> sa = fiber(la, {x, y}), sb = fiber(lb, {fx, fy});
      Verdict v = we_oracle(restrict_map<1>(f1, sa, sb));
      rep.homs.push_back({x, y, v});
      if (v == Verdict::NotWE) bad = true;
      if (v == Verdict::Unknown) unknown = true;
    }
  rep.verdict = (!rep.essentially_surjective || bad) ? Verdict::NotWE : unknown ? Verdict::Unknown : Verdict::WE;
  return rep;
}

bool is_groupoid(const PrecatPtr& a, int max_level) {
  auto c = tau1(a, max_level);
  for (int f = 0; f < c.size(); ++f)
    if (!is_iso_in(c, f)) return false;
  return true;
}

namespace {

Sub<1> component_of(const SSetPtr& x, int vertex) {
  auto lab = component_labels(*x);
  auto first_vertex = [&](int g) {
    while (x->gen(g).deg[0] > 0) g = x->gen(g).faces[0][0].gen;
    return g;
  };
  std::vector<int> gens;
  for (int g = 0; g < x->size(); ++g)
    if (lab[static_cast<std::size_t>(first_vertex(g))] == lab[static_cast<std::size_t>(vertex)]) gens.push_back(g);
  return subobject<1>(x, gens);
}

}  // namespace

SegalGroupoidHomotopy homotopy_groups(const PrecatPtr& a, int max_level) {
  require(is_groupoid(a, max_level), "homotopy_groups: not a Segal groupoid");
  SegalGroupoidHomotopy h;
  h.pi0 = static_cast<int>(tau0(a, max_level).size());
  Level l1 = level(a, 1);
  h.simply_connected = h.pi0 == 1;
  for (int o : objects(*a)) {
    LoopData d;
    d.object = o;
    Sub<1> loops = fiber(l1, {o, o});
    d.pi1 = pi0_count(*loops.obj);
    int base = loops.old_to_new[static_cast<std::size_t>(l1.to_level(a->degeneracy(0, 0, a->gen_elem(o))).gen)];
    Sub<1> identity_component = component_of(loops.obj, base);
    d.loop_pi1 = pi1_presentation(*identity_component.obj,
                                  identity_component.old_to_new[static_cast<std::size_t>(base)]);
    d.loop_pi1_trivial = is_trivially_simplifiable(d.loop_pi1);
    d.loop_homology = homology(*loops.obj);
    if (d.pi1 != 1) h.simply_connected = false;
    h.loops.push_back(std::move(d));
  }
  return h;
}

// ---------------------------------------------------------- Proto-groupoids

namespace {

bool is_long_edge(const Precat& a, int u) {
  BElem ue = a.gen_elem(u);
  for (int g = 0; g < a.size(); ++g)
    if (a.gen(g).deg == Deg<2>{2, 0} && a.gen(g).faces[0][1] == ue) return true;
  return false;
}

struct IntervalSearch {
  std::optional<SSetMap> map;
  bool exhausted = false;
};

IntervalSearch interval_from(const SSetPtr& ibar, const Level& l1, const SElem& at0, const SElem& at1, long long budget) {
  MapSearch<1> o;
  o.fixed.resize(static_cast<std::size_t>(ibar->size()));
  o.fixed[static_cast<std::size_t>(ibar->index_of("0"))] = at0;
  o.fixed[static_cast<std::size_t>(ibar->index_of("1"))] = at1;
  o.budget = budget;
  IntervalSearch r;
  auto out = enumerate_maps<1>(ibar, l1.obj, [&](const SSetMap& m) { r.map = m; return false; }, o);
  r.exhausted = out.status == SearchStatus::BudgetExceeded;
  return r;
}

}  // namespace

std::vector<std::string> proto_witness_violations(const PrecatPtr& a, const ProtoWitness& w) {
  std::vector<std::string> errs;
  const Precat& A = *a;
  auto d = [&](int i, const BElem& t) { return A.face(0, i, t); };
  if (w.u.deg() != Deg<2>{1, 0} || w.v.deg() != Deg<2>{1, 0}) errs.push_back("u and v must be 1-cells");
  if (w.t1.deg() != Deg<2>{2, 0} || w.t2.deg() != Deg<2>{2, 0}) return {"T1 and T2 must be 2-cells"};
  if (!(d(2, w.t1) == w.u && d(0, w.t2) == w.u)) errs.push_back("u = δ01(T1) = δ12(T2) fails");
  if (!(d(0, w.t1) == w.v && d(2, w.t2) == w.v)) errs.push_back("v = δ12(T1) = δ01(T2) fails");
  Level l1 = level(a, 1);
  if (l1.cell != w.l1.cell) return {"the witness uses another level"};
  auto check = [&](const SSetMap& m, const BElem& at0, const BElem& at1, const std::string& name) {
    try {
      make_map<1>(m.src, w.l1.obj, m.img);
    } catch (const StructuralError& e) {
      errs.push_back(name + " is not a map: " + e.what());
      return;
    }
    const SSet& I = *m.src;
    if (I.find("0") < 0 || I.find("1") < 0) {
      errs.push_back(name + " is not defined on an interval");
      return;
    }
    if (w.l1.to_precat(m.img[static_cast<std::size_t>(I.index_of("0"))]) != at0) errs.push_back(name + "(0) is wrong");
    if (w.l1.to_precat(m.img[static_cast<std::size_t>(I.index_of("1"))]) != at1) errs.push_back(name + "(1) is wrong");
  };
  BElem su = d(1, w.u), sv = d(1, w.v);
  check(w.alpha, d(1, w.t1), A.degeneracy(0, 0, su), "alpha");
  check(w.beta, d(1, w.t2), A.degeneracy(0, 0, sv), "beta");
  return errs;
}

ProtoReport is_proto_groupoid(const PrecatPtr& a, int truncation, long long budget) {
  const Precat& A = *a;
  long long per = budget > 0 ? budget : default_budget();
  ProtoReport rep;
  rep.truncation = truncation;
  auto ibar = ibar_sset(truncation);
  Level l1 = level(a, 1);
  for (int u = 0; u < A.size(); ++u) {
    if (A.gen(u).deg != Deg<2>{1, 0} || is_long_edge(A, u)) continue;
    ProtoCell cell;
    cell.u = u;
    BElem ue = A.gen_elem(u);
    bool exhausted = false;
    for (const BElem& t1 : A.with_face({2, 0}, 0, ue, 2)) {
      BElem v = A.face(0, 0, t1);
      for (const BElem& t2 : A.with_face({2, 0}, 0, v, 2)) {
        if (A.face(0, 0, t2) != ue) continue;
        auto al = interval_from(ibar, l1, l1.to_level(A.face(0, 1, t1)), l1.to_level(A.degeneracy(0, 0, A.face(0, 1, ue))), per);
        exhausted = exhausted || al.exhausted;
        if (!al.map) continue;
        auto be = interval_from(ibar, l1, l1.to_level(A.face(0, 1, t2)), l1.to_level(A.degeneracy(0, 0, A.face(0, 1, v))), per);
        exhausted = exhausted || be.exhausted;
        if (!be.map) continue;
        cell.witness = ProtoWitness{ue, v, t1, t2, l1, *al.map, *be.map};
        break;
      }
      if (cell.witness) break;
    }
    cell.status = cell.witness ? Tri::True : exhausted ? Tri::Undecided : Tri::False;
    if (cell.status == Tri::False) rep.overall = Tri::False;
    else if (cell.status == Tri::Undecided && rep.overall == Tri::True) rep.overall = Tri::Undecided;
    rep.cells.push_back(std::move(cell));
  }
  return rep;
}

// ------------------------------------------------------ Free-ordered criterion

const char* criterion_name(Criterion c) {
  switch (c) {
    case Criterion::Holds: return "CriterionHolds";
    case Criterion::Fails: return "CriterionFails";
    case Criterion::Undecided: return "Undecided";
  }
  return "?";
}

CriterionReport free_ordered_we_criterion(const PrecatMap& f, const std::map<int, int>& rank_a,
                                          const std::map<int, int>& rank_b, int max_level) {
  require(is_free_ordered(f.src, rank_a, false, max_level).ok(), "free_ordered_we_criterion: the source is not free-ordered");
  require(is_free_ordered(f.tgt, rank_b, false, max_level).ok(), "free_ordered_we_criterion: the target is not free-ordered");
  auto oa = objects(*f.src);
  auto ob = objects(*f.tgt);
  std::set<int> hit;
  for (int o : oa) hit.insert(f.img[static_cast<std::size_t>(o)].gen);
  require(hit.size() == oa.size() && hit.size() == ob.size(), "free_ordered_we_criterion: f is not bijective on objects");
  std::sort(oa.begin(), oa.end(), [&](int x, int y) { return rank_a.at(x) < rank_a.at(y); });
  for (std::size_t i = 0; i + 1 < oa.size(); ++i)
    require(rank_b.at(f.img[static_cast<std::size_t>(oa[i])].gen) < rank_b.at(f.img[static_cast<std::size_t>(oa[i + 1])].gen),
            "free_ordered_we_criterion: f does not preserve the order");
  CriterionReport rep;
  Level la = level(f.src, 1), lb = level(f.tgt, 1);
  SSetMap f1 = level_map(f, la, lb);
  for (std::size_t i = 0; i + 1 < oa.size(); ++i) {
    int x = oa[i], y = oa[i + 1];
    Sub<1> sa = fiber(la, {x, y});
    Sub<1> sb = fiber(lb, {f.img[static_cast<std::size_t>(x)].gen, f.img[static_cast<std::size_t>(y)].gen});
    Verdict v = we_oracle(restrict_map<1>(f1, sa, sb));
    rep.adjacent.push_back({x, y, v});
    if (v == Verdict::NotWE) rep.result = Criterion::Fails;
    else if (v == Verdict::Unknown && rep.result == Criterion::Holds) rep.result = Criterion::Undecided;
  }
  return rep;
}

}  // namespace segalkit
