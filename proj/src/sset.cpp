#include "segalkit/sset.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <queue>
#include <set>

namespace segalkit {

std::string simplex_name(const std::vector<int>& verts, int n) {
  std::string s;
  for (std::size_t i = 0; i < verts.size(); ++i) {
    if (n > 9 && i) s += '.';
    s += std::to_string(verts[i]);
  }
  return s;
}

namespace {

std::vector<int> parse_vertices(const std::string& name) {
  std::vector<int> v;
  if (name.find('.') != std::string::npos) {
    std::size_t pos = 0;
    while (pos <= name.size()) {
      std::size_t dot = name.find('.', pos);
      if (dot == std::string::npos) dot = name.size();
      v.push_back(std::stoi(name.substr(pos, dot - pos)));
      pos = dot + 1;
    }
  } else {
    for (char c : name) v.push_back(c - '0');
  }
  return v;
}

std::vector<std::vector<int>> subsets_of_size(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int start) {
    if (static_cast<int>(cur.size()) == k) {
      out.push_back(cur);
      return;
    }
    for (int v = start; v <= n; ++v) {
      cur.push_back(v);
      rec(v + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

int find_with_parent(std::vector<int>& parent, int x) {
  while (parent[static_cast<std::size_t>(x)] != x) {
    parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
    x = parent[static_cast<std::size_t>(x)];
  }
  return x;
}

}  // namespace

SSetPtr standard_simplex(int n) {
  static std::mutex mu;
  static std::map<int, SSetPtr> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  if (n < 0 || n > kMaxDim) throw StructuralError("standard simplex dimension out of range");
  SSet x;
  for (int k = 0; k <= n; ++k)
    for (const auto& s : subsets_of_size(n, k + 1)) x.add(simplex_name(s, n), {k});
  for (int g = 0; g < x.size(); ++g) {
    auto verts = parse_vertices(x.gen(g).name);
    if (verts.size() < 2) continue;
    std::vector<SElem> fs;
    for (std::size_t i = 0; i < verts.size(); ++i) {
      auto w = verts;
      w.erase(w.begin() + static_cast<long>(i));
      fs.push_back(x.gen_elem(x.index_of(simplex_name(w, n))));
    }
    x.set_faces(g, 0, std::move(fs));
  }
  x.finalize(false);
  auto p = share(std::move(x));
  cache.emplace(n, p);
  return p;
}

SSetPtr simplex_sub(int n, const std::vector<std::vector<int>>& faces) {
  auto d = standard_simplex(n);
  std::vector<int> gens;
  for (const auto& f : faces) gens.push_back(d->index_of(simplex_name(f, n)));
  return subobject<1>(d, gens).obj;
}

namespace {

// Shapes are cached so that repeated calls return the same pointer.
SSetPtr cached_shape(int kind, int n, const std::function<SSetPtr()>& make) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, SSetPtr> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find({kind, n});
    if (it != cache.end()) return it->second;
  }
  SSetPtr p = make();
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(std::make_pair(kind, n), p).first->second;
}

SSetPtr make_boundary(int n) {
  if (n == 0) return empty_object<1>();
  std::vector<std::vector<int>> faces;
  for (int i = 0; i <= n; ++i) {
    std::vector<int> f;
    for (int k = 0; k <= n; ++k)
      if (k != i) f.push_back(k);
    faces.push_back(f);
  }
  return simplex_sub(n, faces);
}

SSetPtr make_upsilon(int m) {
  if (m == 0) return standard_simplex(0);
  std::vector<std::vector<int>> faces;
  for (int k = 0; k < m; ++k) faces.push_back({k, k + 1});
  return simplex_sub(m, faces);
}

}  // namespace

SSetPtr boundary(int n) {
  return cached_shape(0, n, [n] { return make_boundary(n); });
}
SSetPtr upsilon(int m) {
  return cached_shape(1, m, [m] { return make_upsilon(m); });
}

SSetMap inclusion_by_name(const SSetPtr& sub, const SSetPtr& whole) {
  SSetMap m{sub, whole, {}};
  for (const auto& g : sub->gens()) m.img.push_back(whole->gen_elem(whole->index_of(g.name)));
  return m;
}

SSetMap spine_inclusion(int m) { return inclusion_by_name(upsilon(m), standard_simplex(m)); }
SSetMap boundary_inclusion(int n) { return inclusion_by_name(boundary(n), standard_simplex(n)); }

SElem simplex_element(const SSet& simplex_n, const Op& f) {
  EpiMono em = epi_mono(f);
  std::vector<int> verts;
  for (int i = 0; i <= em.mono.src; ++i) verts.push_back(em.mono(i));
  SElem e;
  e.eta[0] = em.epi;
  e.gen = simplex_n.index_of(simplex_name(verts, f.tgt));
  return e;
}

SSetMap yoneda_map(const SSetPtr& simplex_n, const SSetPtr& x, const SElem& e) {
  int n = simplex_n->max_total_degree();
  SSetMap m{simplex_n, x, {}};
  for (const auto& g : simplex_n->gens()) {
    auto verts = parse_vertices(g.name);
    m.img.push_back(x->act(0, make_op(n, verts), e));
  }
  return m;
}

SSetMap simplex_map(const Op& f) {
  auto target = standard_simplex(f.tgt);
  return yoneda_map(standard_simplex(f.src), target, simplex_element(*target, f));
}

SElem act(const SSet& x, const Op& op, const SElem& e) { return x.act(0, op, e); }

std::vector<int> vertex_gens(const SSet& x) {
  std::vector<int> v;
  for (int g = 0; g < x.size(); ++g)
    if (x.gen(g).deg[0] == 0) v.push_back(g);
  return v;
}

std::vector<int> component_labels(const SSet& x) {
  std::vector<int> parent(static_cast<std::size_t>(x.size()));
  std::iota(parent.begin(), parent.end(), 0);
  for (int g = 0; g < x.size(); ++g)
    if (x.gen(g).deg[0] == 1) {
      int a = find_with_parent(parent, x.gen(g).faces[0][0].gen);
      int b = find_with_parent(parent, x.gen(g).faces[0][1].gen);
      if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
    }
  std::vector<int> label(static_cast<std::size_t>(x.size()), -1);
  std::map<int, int> ids;
  for (int g = 0; g < x.size(); ++g) {
    if (x.gen(g).deg[0] != 0) continue;
    int r = find_with_parent(parent, g);
    auto it = ids.emplace(r, static_cast<int>(ids.size())).first;
    label[static_cast<std::size_t>(g)] = it->second;
  }
  return label;
}

std::vector<std::vector<int>> pi0(const SSet& x) {
  auto label = component_labels(x);
  std::vector<std::vector<int>> parts;
  for (int g = 0; g < x.size(); ++g) {
    int l = label[static_cast<std::size_t>(g)];
    if (l < 0) continue;
    if (static_cast<int>(parts.size()) <= l) parts.resize(static_cast<std::size_t>(l) + 1);
    parts[static_cast<std::size_t>(l)].push_back(g);
  }
  return parts;
}

int pi0_count(const SSet& x) { return static_cast<int>(pi0(x).size()); }

namespace {

// Position of each nondegenerate cell within its dimension.
std::vector<int> cell_positions(const SSet& x, std::vector<int>& dims) {
  int top = x.max_total_degree();
  dims.assign(static_cast<std::size_t>(top + 1), 0);
  std::vector<int> pos(static_cast<std::size_t>(x.size()));
  for (int g = 0; g < x.size(); ++g) pos[static_cast<std::size_t>(g)] = dims[static_cast<std::size_t>(x.gen(g).deg[0])]++;
  return pos;
}

}  // namespace

ChainComplex normalized_chains(const SSet& x) {
  ChainComplex c;
  auto pos = cell_positions(x, c.dims);
  c.bd.resize(c.dims.size());
  for (std::size_t n = 0; n < c.dims.size(); ++n) {
    c.bd[n].rows = n ? c.dims[n - 1] : 0;
    c.bd[n].cols = c.dims[n];
    c.bd[n].col.resize(static_cast<std::size_t>(c.dims[n]));
  }
  for (int g = 0; g < x.size(); ++g) {
    auto n = static_cast<std::size_t>(x.gen(g).deg[0]);
    if (n == 0) continue;
    auto& col = c.bd[n].col[static_cast<std::size_t>(pos[static_cast<std::size_t>(g)])];
    const auto& fs = x.gen(g).faces[0];
    for (std::size_t i = 0; i < fs.size(); ++i)
      if (fs[i].nondegenerate()) col.emplace_back(pos[static_cast<std::size_t>(fs[i].gen)], i % 2 ? -1 : 1);
  }
  return c;
}

HomologyProfile homology(const SSet& x, const SnfOptions& opts) { return homology(normalized_chains(x), opts); }

ChainComplex mapping_cone(const SSetMap& f) {
  ChainComplex cx = normalized_chains(*f.src), cy = normalized_chains(*f.tgt);
  std::vector<int> dx, dy;
  auto px = cell_positions(*f.src, dx);
  auto py = cell_positions(*f.tgt, dy);
  std::size_t top = std::max(cx.dims.size() + 1, cy.dims.size());
  auto dimx = [&](std::size_t n) { return n < cx.dims.size() ? cx.dims[n] : 0; };
  auto dimy = [&](std::size_t n) { return n < cy.dims.size() ? cy.dims[n] : 0; };
  ChainComplex c;
  c.dims.resize(top);
  for (std::size_t n = 0; n < top; ++n) c.dims[n] = (n ? dimx(n - 1) : 0) + dimy(n);
  c.bd.resize(top);
  for (std::size_t n = 0; n < top; ++n) {
    c.bd[n].cols = c.dims[n];
    c.bd[n].rows = n ? c.dims[n - 1] : 0;
    c.bd[n].col.resize(static_cast<std::size_t>(c.dims[n]));
    if (n == 0) continue;
    int off_prev = n >= 2 ? dimx(n - 2) : 0;  // Y-part offset in C_{n-1}
    // X_{n-1} part.
    for (int j = 0; j < dimx(n - 1); ++j) {
      auto& col = c.bd[n].col[static_cast<std::size_t>(j)];
      if (n - 1 >= 1 && n - 1 < cx.bd.size())
        for (auto [r, v] : cx.bd[n - 1].col[static_cast<std::size_t>(j)]) col.emplace_back(r, -v);
    }
    // f on X_{n-1} cells.
    for (int g = 0; g < f.src->size(); ++g) {
      if (static_cast<std::size_t>(f.src->gen(g).deg[0]) != n - 1) continue;
      const SElem& y = f.img[static_cast<std::size_t>(g)];
      if (!y.nondegenerate()) continue;
      c.bd[n].col[static_cast<std::size_t>(px[static_cast<std::size_t>(g)])].emplace_back(
          off_prev + py[static_cast<std::size_t>(y.gen)], 1);
    }
    // Y_n part.
    for (int j = 0; j < dimy(n); ++j) {
      auto& col = c.bd[n].col[static_cast<std::size_t>(dimx(n - 1) + j)];
      if (n < cy.bd.size())
        for (auto [r, v] : cy.bd[n].col[static_cast<std::size_t>(j)]) col.emplace_back(off_prev + r, v);
    }
  }
  return c;
}

// ------------------------------------------------------------------ π₁

namespace {

GroupPresentation pi1_component(const SSet& x, int base) {
  // Spanning tree by BFS over nondegenerate edges.
  std::vector<std::vector<std::pair<int, int>>> adj(static_cast<std::size_t>(x.size()));
  for (int g = 0; g < x.size(); ++g)
    if (x.gen(g).deg[0] == 1) {
      int a = x.gen(g).faces[0][1].gen, b = x.gen(g).faces[0][0].gen;
      adj[static_cast<std::size_t>(a)].emplace_back(b, g);
      adj[static_cast<std::size_t>(b)].emplace_back(a, g);
    }
  std::vector<char> seen(static_cast<std::size_t>(x.size()), 0), tree(static_cast<std::size_t>(x.size()), 0);
  std::queue<int> q;
  q.push(base);
  seen[static_cast<std::size_t>(base)] = 1;
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (auto [w, e] : adj[static_cast<std::size_t>(v)])
      if (!seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = 1;
        tree[static_cast<std::size_t>(e)] = 1;
        q.push(w);
      }
  }
  std::vector<int> letter(static_cast<std::size_t>(x.size()), 0);
  GroupPresentation p;
  for (int g = 0; g < x.size(); ++g)
    if (x.gen(g).deg[0] == 1 && seen[static_cast<std::size_t>(x.gen(g).faces[0][0].gen)] && !tree[static_cast<std::size_t>(g)])
      letter[static_cast<std::size_t>(g)] = ++p.generators;
  auto edge_letter = [&](const SElem& e) { return e.nondegenerate() ? letter[static_cast<std::size_t>(e.gen)] : 0; };
  for (int g = 0; g < x.size(); ++g) {
    if (x.gen(g).deg[0] != 2) continue;
    const auto& fs = x.gen(g).faces[0];
    SElem v0 = x.face(0, 1, fs[1]);
    int vg = v0.gen;
    if (!seen[static_cast<std::size_t>(vg)]) continue;
    std::vector<int> r;
    if (int a = edge_letter(fs[2])) r.push_back(a);
    if (int b = edge_letter(fs[0])) r.push_back(b);
    if (int c = edge_letter(fs[1])) r.push_back(-c);
    p.relators.push_back(std::move(r));
  }
  return p;
}

void free_reduce(std::vector<int>& w) {
  std::vector<int> out;
  for (int a : w) {
    if (!out.empty() && out.back() == -a) out.pop_back();
    else out.push_back(a);
  }
  while (out.size() >= 2 && out.front() == -out.back()) {
    out.erase(out.begin());
    out.pop_back();
  }
  w = std::move(out);
}

void drop_generator(GroupPresentation& p, int x) {
  for (auto& r : p.relators) {
    std::vector<int> out;
    for (int a : r) {
      int g = std::abs(a);
      if (g == x) continue;
      out.push_back(g > x ? (a > 0 ? a - 1 : a + 1) : a);
    }
    r = std::move(out);
  }
  --p.generators;
}

}  // namespace

GroupPresentation pi1_presentation(const SSet& x, int basepoint_gen) {
  if (basepoint_gen < 0 || basepoint_gen >= x.size() || x.gen(basepoint_gen).deg[0] != 0)
    throw StructuralError("pi1: basepoint is not a vertex");
  if (pi0_count(x) != 1) throw StructuralError("pi1: simplicial set is not connected");
  return pi1_component(x, basepoint_gen);
}

bool is_trivially_simplifiable(GroupPresentation p, long long budget) {
  const std::size_t max_length = 4096;
  for (long long step = 0; step < budget; ++step) {
    std::size_t total = 0;
    for (auto& r : p.relators) {
      free_reduce(r);
      total += r.size();
    }
    p.relators.erase(std::remove_if(p.relators.begin(), p.relators.end(), [](const auto& r) { return r.empty(); }),
                     p.relators.end());
    if (p.generators == 0) return true;
    if (total > max_length) return false;
    bool moved = false;
    for (const auto& r : p.relators)
      if (r.size() == 1) {
        drop_generator(p, std::abs(r[0]));
        moved = true;
        break;
      }
    if (moved) continue;
    // Eliminate a generator occurring exactly once in a relator, preferring short relators.
    std::size_t best_r = p.relators.size();
    int best_x = 0;
    for (std::size_t i = 0; i < p.relators.size(); ++i) {
      std::map<int, int> occ;
      for (int a : p.relators[i]) ++occ[std::abs(a)];
      for (auto [g, c] : occ)
        if (c == 1 && (best_r == p.relators.size() || p.relators[i].size() < p.relators[best_r].size())) {
          best_r = i;
          best_x = g;
        }
    }
    if (best_r == p.relators.size()) return false;
    std::vector<int> r = p.relators[best_r];
    auto it = std::find_if(r.begin(), r.end(), [&](int a) { return std::abs(a) == best_x; });
    std::rotate(r.begin(), it, r.end());
    int eps = r[0] > 0 ? 1 : -1;
    std::vector<int> w(r.begin() + 1, r.end());
    // x^eps w = 1, so x = w^{-1} when eps = 1 and x = w when eps = -1.
    std::vector<int> xval, xinv;
    if (eps == 1) {
      for (auto jt = w.rbegin(); jt != w.rend(); ++jt) xval.push_back(-*jt);
    } else {
      xval = w;
    }
    for (auto jt = xval.rbegin(); jt != xval.rend(); ++jt) xinv.push_back(-*jt);
    p.relators.erase(p.relators.begin() + static_cast<long>(best_r));
    for (auto& rel : p.relators) {
      std::vector<int> out;
      for (int a : rel) {
        if (a == best_x) out.insert(out.end(), xval.begin(), xval.end());
        else if (a == -best_x) out.insert(out.end(), xinv.begin(), xinv.end());
        else out.push_back(a);
      }
      rel = std::move(out);
    }
    drop_generator(p, best_x);
  }
  return false;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::WE: return "WE";
    case Verdict::NotWE: return "NotWE";
    default: return "Unknown";
  }
}

namespace {

bool simply_connected_components(const SSet& x) {
  for (const auto& comp : pi0(x))
    if (!is_trivially_simplifiable(pi1_component(x, comp.front()))) return false;
  return true;
}

}  // namespace

Verdict we_oracle(const SSetMap& f) {
  const SSet& X = *f.src;
  const SSet& Y = *f.tgt;
  auto lx = component_labels(X), ly = component_labels(Y);
  int cx = pi0_count(X), cy = pi0_count(Y);
  if (cx != cy) return Verdict::NotWE;
  if (!profiles_equal(homology(X), homology(Y))) return Verdict::NotWE;
  std::vector<int> comp_map(static_cast<std::size_t>(cx), -1);
  std::set<int> hit;
  for (int g = 0; g < X.size(); ++g) {
    if (X.gen(g).deg[0] != 0) continue;
    int c = ly[static_cast<std::size_t>(f.img[static_cast<std::size_t>(g)].gen)];
    comp_map[static_cast<std::size_t>(lx[static_cast<std::size_t>(g)])] = c;
    hit.insert(c);
  }
  if (static_cast<int>(hit.size()) != cy) return Verdict::NotWE;
  auto cone = homology(mapping_cone(f));
  for (const auto& h : cone)
    if (!h.trivial()) return Verdict::NotWE;
  if (is_iso(f)) return Verdict::WE;
  if (simply_connected_components(X) && simply_connected_components(Y)) return Verdict::WE;
  if (X.max_total_degree() <= 1 && Y.max_total_degree() <= 1 && is_mono(f)) return Verdict::WE;
  return Verdict::Unknown;
}

SequentialColimit sequential_colimit(const std::vector<SSetMap>& chain, int budget) {
  SequentialColimit out;
  if (chain.empty()) throw StructuralError("sequential colimit of an empty chain");
  std::size_t used = std::min(chain.size(), static_cast<std::size_t>(std::max(budget, 0)));
  out.truncated = used < chain.size();
  out.obj = used == 0 ? chain.front().src : chain[used - 1].tgt;
  std::vector<SSetMap> legs(used + 1);
  legs[used] = identity_map<1>(out.obj);
  for (std::size_t i = used; i-- > 0;) legs[i] = compose<1>(legs[i + 1], chain[i]);
  out.legs = std::move(legs);
  return out;
}

}  // namespace segalkit
