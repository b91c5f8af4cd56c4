#include "segalkit/presented.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <set>

namespace segalkit {

long long default_budget() {
  if (const char* env = std::getenv("SEGALKIT_BUDGET")) {
    char* end = nullptr;
    long long v = std::strtoll(env, &end, 10);
    if (end != env && v > 0) return v;
  }
  return 2'000'000;
}

namespace {

template <int K>
bool leq(const Deg<K>& a, const Deg<K>& b) {
  for (int i = 0; i < K; ++i)
    if (a[static_cast<std::size_t>(i)] > b[static_cast<std::size_t>(i)]) return false;
  return true;
}

std::string word_string(const Op& s) {
  std::string out;
  for (int j : degeneracy_word(s)) {
    if (!out.empty()) out += ',';
    out += std::to_string(j);
  }
  return out;
}

template <int K>
void cartesian(const std::array<const std::vector<Op>*, K>& lists, const std::function<void(const std::array<Op, K>&)>& fn) {
  std::array<Op, K> cur{};
  std::function<void(int)> rec = [&](int d) {
    if (d == K) {
      fn(cur);
      return;
    }
    for (const Op& o : *lists[static_cast<std::size_t>(d)]) {
      cur[static_cast<std::size_t>(d)] = o;
      rec(d + 1);
    }
  };
  rec(0);
}

}  // namespace

// ---------------------------------------------------------------- Presented

template <int K>
Presented<K>::Presented(const Presented& o) : gens_(o.gens_), index_(o.index_), tables_(o.tables_) {}

template <int K>
Presented<K>& Presented<K>::operator=(const Presented& o) {
  if (this != &o) {
    gens_ = o.gens_;
    index_ = o.index_;
    tables_ = o.tables_;
    caches_ = std::make_unique<Caches>();
  }
  return *this;
}

template <int K>
int Presented<K>::add(std::string name, Deg<K> deg) {
  for (int d : deg)
    if (d < 0 || d > kMaxDim) throw StructuralError("generator " + name + ": degree out of range");
  if (index_.count(name)) throw StructuralError("duplicate generator id " + name);
  int id = size();
  index_.emplace(name, id);
  Gen g;
  g.name = std::move(name);
  g.deg = deg;
  gens_.push_back(std::move(g));
  return id;
}

template <int K>
void Presented<K>::set_faces(int g, int dir, std::vector<Elem<K>> faces) {
  gens_.at(static_cast<std::size_t>(g)).faces[static_cast<std::size_t>(dir)] = std::move(faces);
}

template <int K>
int Presented<K>::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  return it == index_.end() ? -1 : it->second;
}

template <int K>
int Presented<K>::index_of(std::string_view name) const {
  int i = find(name);
  if (i < 0) throw StructuralError("unknown generator id " + std::string(name));
  return i;
}

template <int K>
Deg<K> Presented<K>::max_deg() const {
  Deg<K> m{};
  for (const Gen& g : gens_)
    for (int d = 0; d < K; ++d)
      m[static_cast<std::size_t>(d)] = std::max(m[static_cast<std::size_t>(d)], g.deg[static_cast<std::size_t>(d)]);
  return m;
}

template <int K>
int Presented<K>::max_total_degree() const {
  int m = -1;
  for (const Gen& g : gens_) m = std::max(m, total_degree<K>(g.deg));
  return m;
}

template <int K>
Elem<K> Presented<K>::gen_elem(int g) const {
  Elem<K> e;
  e.gen = g;
  for (int d = 0; d < K; ++d)
    e.eta[static_cast<std::size_t>(d)] = identity_op(gens_[static_cast<std::size_t>(g)].deg[static_cast<std::size_t>(d)]);
  return e;
}

template <int K>
void Presented<K>::finalize(bool check) {
  std::size_t first = tables_.size();
  for (std::size_t g = first; g < gens_.size(); ++g) {
    const Gen& gen = gens_[g];
    for (int d = 0; d < K; ++d) {
      int p = gen.deg[static_cast<std::size_t>(d)];
      const auto& fs = gen.faces[static_cast<std::size_t>(d)];
      std::size_t want = p == 0 ? 0 : static_cast<std::size_t>(p) + 1;
      if (fs.size() != want)
        throw StructuralError("generator " + gen.name + ": expected " + std::to_string(want) + " faces in direction " +
                              std::to_string(d) + ", got " + std::to_string(fs.size()));
      Deg<K> fd = gen.deg;
      fd[static_cast<std::size_t>(d)] -= 1;
      for (const Elem<K>& f : fs) {
        if (f.gen < 0 || f.gen >= size())
          throw StructuralError("generator " + gen.name + ": face refers to an unknown generator");
        if (f.deg() != fd) throw StructuralError("generator " + gen.name + ": face has the wrong degree");
        const Gen& h = gens_[static_cast<std::size_t>(f.gen)];
        for (int e = 0; e < K; ++e) {
          const Op& o = f.eta[static_cast<std::size_t>(e)];
          if (o.tgt != h.deg[static_cast<std::size_t>(e)] || !is_surjective(o))
            throw StructuralError("generator " + gen.name + ": face is not in normal form");
        }
      }
    }
  }
  std::vector<int> pending(gens_.size() - first);
  std::iota(pending.begin(), pending.end(), static_cast<int>(first));
  std::stable_sort(pending.begin(), pending.end(), [&](int a, int b) {
    return total_degree<K>(gens_[static_cast<std::size_t>(a)].deg) < total_degree<K>(gens_[static_cast<std::size_t>(b)].deg);
  });
  tables_.resize(gens_.size());
  std::vector<char> ready(gens_.size(), 0);
  for (std::size_t g = 0; g < first; ++g) ready[g] = 1;
  for (int g : pending) {
    const Gen& gen = gens_[static_cast<std::size_t>(g)];
    for (int d = 0; d < K; ++d)
      for (const Elem<K>& f : gen.faces[static_cast<std::size_t>(d)])
        if (!ready[static_cast<std::size_t>(f.gen)]) throw StructuralError("generator " + gen.name + ": cyclic face reference");
    for (int d = 0; d < K; ++d) {
      int p = gen.deg[static_cast<std::size_t>(d)];
      unsigned full = (1u << (p + 1)) - 1;
      Table t(static_cast<std::size_t>(full) + 1);
      for (unsigned mask = 1; mask < full; ++mask) {
        int missing = p;
        while (mask & (1u << missing)) --missing;
        Op delta = mono_from_mask(p, mask);
        std::vector<int> vals;
        for (int j = 0; j <= delta.src; ++j) {
          int x = delta(j);
          vals.push_back(x < missing ? x : x - 1);
        }
        Op rest = make_op(p - 1, vals);
        t[mask] = act(d, rest, gen.faces[static_cast<std::size_t>(d)][static_cast<std::size_t>(missing)]);
      }
      tables_[static_cast<std::size_t>(g)][static_cast<std::size_t>(d)] = std::move(t);
    }
    ready[static_cast<std::size_t>(g)] = 1;
  }
  caches_ = std::make_unique<Caches>();
  if (check) {
    auto errs = check_identities();
    if (!errs.empty()) throw StructuralError(errs.front());
  }
}

template <int K>
Elem<K> Presented<K>::mono_face(int g, int dir, unsigned mask) const {
  int p = gens_[static_cast<std::size_t>(g)].deg[static_cast<std::size_t>(dir)];
  unsigned full = (1u << (p + 1)) - 1;
  if (mask == full) return gen_elem(g);
  if (static_cast<std::size_t>(g) >= tables_.size()) throw StructuralError("operator applied before finalize");
  return tables_[static_cast<std::size_t>(g)][static_cast<std::size_t>(dir)][mask];
}

template <int K>
Elem<K> Presented<K>::act(int dir, const Op& alpha, const Elem<K>& e) const {
  const Op& eta = e.eta[static_cast<std::size_t>(dir)];
  if (alpha.tgt != eta.src) throw StructuralError("act: arity mismatch");
  EpiMono em = epi_mono(compose(eta, alpha));
  Elem<K> f = mono_face(e.gen, dir, image_mask(em.mono));
  Elem<K> r;
  r.gen = f.gen;
  for (int d = 0; d < K; ++d) {
    auto sd = static_cast<std::size_t>(d);
    r.eta[sd] = d == dir ? compose(f.eta[sd], em.epi) : compose(f.eta[sd], e.eta[sd]);
  }
  return r;
}

template <int K>
Elem<K> Presented<K>::face(int dir, int i, const Elem<K>& e) const {
  int n = e.eta[static_cast<std::size_t>(dir)].src;
  if (n == 0) throw StructuralError("face of a degree-0 element");
  return act(dir, face_op(n, i), e);
}

template <int K>
Elem<K> Presented<K>::degeneracy(int dir, int j, const Elem<K>& e) const {
  Elem<K> r = e;
  auto sd = static_cast<std::size_t>(dir);
  r.eta[sd] = compose(e.eta[sd], degeneracy_op(e.eta[sd].src, j));
  return r;
}

template <int K>
Elem<K> Presented<K>::degenerate(const std::array<Op, K>& s, const Elem<K>& e) const {
  Elem<K> r = e;
  for (int d = 0; d < K; ++d) {
    auto sd = static_cast<std::size_t>(d);
    if (is_identity(s[sd])) continue;
    if (s[sd].tgt != e.eta[sd].src) throw StructuralError("degenerate: arity mismatch");
    r.eta[sd] = compose(e.eta[sd], s[sd]);
  }
  return r;
}

template <int K>
Elem<K> Presented<K>::act_all(const std::array<Op, K>& ops, const Elem<K>& e) const {
  Elem<K> r = e;
  for (int d = 0; d < K; ++d) r = act(d, ops[static_cast<std::size_t>(d)], r);
  return r;
}

template <int K>
const std::vector<Elem<K>>& Presented<K>::elements(const Deg<K>& b) const {
  std::lock_guard<std::mutex> lock(caches_->mu);
  auto it = caches_->elems.find(b);
  if (it != caches_->elems.end()) return it->second;
  std::vector<Elem<K>> out;
  for (int g = 0; g < size(); ++g) {
    const Gen& gen = gens_[static_cast<std::size_t>(g)];
    if (!leq<K>(gen.deg, b)) continue;
    std::array<const std::vector<Op>*, K> lists{};
    for (int d = 0; d < K; ++d)
      lists[static_cast<std::size_t>(d)] = &all_surjections(b[static_cast<std::size_t>(d)], gen.deg[static_cast<std::size_t>(d)]);
    cartesian<K>(lists, [&](const std::array<Op, K>& s) { out.push_back(Elem<K>{s, g}); });
  }
  return caches_->elems.emplace(b, std::move(out)).first->second;
}

template <int K>
const std::vector<Elem<K>>& Presented<K>::with_face(const Deg<K>& b, int dir, const Elem<K>& f, int i) const {
  static const std::vector<Elem<K>> none;
  const auto& all = elements(b);
  std::lock_guard<std::mutex> lock(caches_->mu);
  auto key = std::make_tuple(b, dir, i);
  auto it = caches_->by_face.find(key);
  if (it == caches_->by_face.end()) {
    std::unordered_map<Elem<K>, std::vector<Elem<K>>, ElemHash<K>> idx;
    for (const Elem<K>& e : all) idx[face(dir, i, e)].push_back(e);
    it = caches_->by_face.emplace(key, std::move(idx)).first;
  }
  auto jt = it->second.find(f);
  return jt == it->second.end() ? none : jt->second;
}

template <int K>
std::vector<std::string> Presented<K>::check_identities() const {
  std::vector<std::string> errs;
  for (int g = 0; g < size(); ++g) {
    const Gen& gen = gens_[static_cast<std::size_t>(g)];
    for (int d = 0; d < K; ++d) {
      int p = gen.deg[static_cast<std::size_t>(d)];
      const auto& fs = gen.faces[static_cast<std::size_t>(d)];
      if (p >= 2)
        for (int i = 0; i < p; ++i)
          for (int j = i + 1; j <= p; ++j)
            if (face(d, i, fs[static_cast<std::size_t>(j)]) != face(d, j - 1, fs[static_cast<std::size_t>(i)]))
              errs.push_back("generator " + gen.name + ": simplicial identity d" + std::to_string(i) + "d" +
                             std::to_string(j) + " = d" + std::to_string(j - 1) + "d" + std::to_string(i) +
                             " fails in direction " + std::to_string(d));
    }
    if constexpr (K == 2) {
      int p = gen.deg[0], q = gen.deg[1];
      if (p >= 1 && q >= 1)
        for (int i = 0; i <= p; ++i)
          for (int j = 0; j <= q; ++j)
            if (face(1, j, gen.faces[0][static_cast<std::size_t>(i)]) != face(0, i, gen.faces[1][static_cast<std::size_t>(j)]))
              errs.push_back("generator " + gen.name + ": external face " + std::to_string(i) +
                             " and internal face " + std::to_string(j) + " do not commute");
    }
  }
  return errs;
}

template <int K>
std::string Presented<K>::label(const Elem<K>& e) const {
  const std::string& name = gens_[static_cast<std::size_t>(e.gen)].name;
  if (e.nondegenerate()) return name;
  std::string w;
  for (int d = 0; d < K; ++d) {
    if (d) w += '|';
    w += word_string(e.eta[static_cast<std::size_t>(d)]);
  }
  return "s{" + w + "}" + name;
}

// --------------------------------------------------------------------- Maps

template <int K>
std::vector<std::string> Map<K>::check() const {
  std::vector<std::string> errs;
  if (!src || !tgt) return {"map without endpoints"};
  if (static_cast<int>(img.size()) != src->size()) return {"map assigns " + std::to_string(img.size()) + " images for " +
                                                            std::to_string(src->size()) + " generators"};
  for (int g = 0; g < src->size(); ++g) {
    const auto& gen = src->gen(g);
    const Elem<K>& y = img[static_cast<std::size_t>(g)];
    if (y.gen < 0 || y.gen >= tgt->size()) {
      errs.push_back("generator " + gen.name + ": image is not a target element");
      continue;
    }
    bool shape_ok = y.deg() == gen.deg;
    for (int d = 0; d < K && shape_ok; ++d) {
      const Op& o = y.eta[static_cast<std::size_t>(d)];
      if (o.tgt != tgt->gen(y.gen).deg[static_cast<std::size_t>(d)] || !is_surjective(o)) shape_ok = false;
    }
    if (!shape_ok) {
      errs.push_back("generator " + gen.name + ": image has the wrong degree");
      continue;
    }
    for (int d = 0; d < K; ++d) {
      const auto& fs = gen.faces[static_cast<std::size_t>(d)];
      for (std::size_t i = 0; i < fs.size(); ++i) {
        const Elem<K>& fi = fs[i];
        if (img[static_cast<std::size_t>(fi.gen)].gen < 0) continue;
        if (tgt->face(d, static_cast<int>(i), y) != (*this)(fi))
          errs.push_back("generator " + gen.name + ": face " + std::to_string(i) + " in direction " + std::to_string(d) +
                         " not preserved");
      }
    }
  }
  return errs;
}

template <int K>
Map<K> compose(const Map<K>& g, const Map<K>& f) {
  if (f.tgt != g.src && (f.tgt->size() != g.src->size())) throw StructuralError("compose: maps not composable");
  Map<K> h{f.src, g.tgt, {}};
  h.img.reserve(f.img.size());
  for (const Elem<K>& e : f.img) h.img.push_back(g(e));
  return h;
}

template <int K>
Map<K> identity_map(const Ptr<K>& x) {
  Map<K> m{x, x, {}};
  for (int g = 0; g < x->size(); ++g) m.img.push_back(x->gen_elem(g));
  return m;
}

template <int K>
bool is_mono(const Map<K>& f) {
  std::vector<char> used(static_cast<std::size_t>(f.tgt->size()), 0);
  for (const Elem<K>& e : f.img) {
    if (!e.nondegenerate() || used[static_cast<std::size_t>(e.gen)]) return false;
    used[static_cast<std::size_t>(e.gen)] = 1;
  }
  return true;
}

template <int K>
bool is_epi(const Map<K>& f) {
  std::vector<char> hit(static_cast<std::size_t>(f.tgt->size()), 0);
  for (const Elem<K>& e : f.img)
    if (e.nondegenerate()) hit[static_cast<std::size_t>(e.gen)] = 1;
  return std::all_of(hit.begin(), hit.end(), [](char c) { return c != 0; });
}

template <int K>
bool is_iso(const Map<K>& f) {
  return f.src->size() == f.tgt->size() && is_mono(f);
}

template <int K>
Map<K> inverse_of_iso(const Map<K>& f) {
  if (!is_iso(f)) throw StructuralError("inverse_of_iso: not an isomorphism");
  Map<K> inv{f.tgt, f.src, std::vector<Elem<K>>(f.img.size())};
  for (int g = 0; g < f.src->size(); ++g) inv.img[static_cast<std::size_t>(f.img[static_cast<std::size_t>(g)].gen)] = f.src->gen_elem(g);
  return inv;
}

template <int K>
Map<K> make_map(const Ptr<K>& src, const Ptr<K>& tgt, std::vector<Elem<K>> img) {
  Map<K> m{src, tgt, std::move(img)};
  auto errs = m.check();
  if (!errs.empty()) throw StructuralError(errs.front());
  return m;
}

template <int K>
Ptr<K> empty_object() {
  static const Ptr<K> e = [] {
    Presented<K> p;
    p.finalize();
    return share(std::move(p));
  }();
  return e;
}

template <int K>
Ptr<K> point_object(const std::string& name) {
  Presented<K> p;
  p.add(name, Deg<K>{});
  p.finalize();
  return share(std::move(p));
}

template <int K>
Map<K> empty_map(const Ptr<K>& tgt) {
  return Map<K>{empty_object<K>(), tgt, {}};
}

template <int K>
Map<K> to_point(const Ptr<K>& src, const Ptr<K>& point) {
  Map<K> m{src, point, {}};
  for (int g = 0; g < src->size(); ++g) {
    Elem<K> e;
    e.gen = 0;
    for (int d = 0; d < K; ++d) e.eta[static_cast<std::size_t>(d)] = constant_op(src->gen(g).deg[static_cast<std::size_t>(d)], 0, 0);
    m.img.push_back(e);
  }
  return m;
}

// --------------------------------------------------------------- Colimits

template <int K>
Coproduct<K> coproduct(const std::vector<Ptr<K>>& parts, const std::vector<std::string>& prefixes) {
  Presented<K> out;
  std::vector<int> offset;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    offset.push_back(out.size());
    std::string pre = k < prefixes.size() ? prefixes[k] : std::string();
    for (const auto& g : parts[k]->gens()) out.add(pre + g.name, g.deg);
  }
  for (std::size_t k = 0; k < parts.size(); ++k)
    for (int g = 0; g < parts[k]->size(); ++g)
      for (int d = 0; d < K; ++d) {
        auto fs = parts[k]->gen(g).faces[static_cast<std::size_t>(d)];
        for (auto& f : fs) f.gen += offset[k];
        out.set_faces(offset[k] + g, d, std::move(fs));
      }
  out.finalize(false);
  Coproduct<K> c;
  c.obj = share(std::move(out));
  for (std::size_t k = 0; k < parts.size(); ++k) {
    Map<K> inj{parts[k], c.obj, {}};
    for (int g = 0; g < parts[k]->size(); ++g) inj.img.push_back(c.obj->gen_elem(offset[k] + g));
    c.inj.push_back(std::move(inj));
  }
  return c;
}

template <int K>
Map<K> copair(const Coproduct<K>& c, const std::vector<Map<K>>& maps, const Ptr<K>& tgt) {
  Map<K> m{c.obj, tgt, {}};
  for (const auto& f : maps) m.img.insert(m.img.end(), f.img.begin(), f.img.end());
  if (static_cast<int>(m.img.size()) != c.obj->size()) throw StructuralError("copair: wrong number of components");
  return m;
}

template <int K>
Quotient<K> quotient(const Ptr<K>& p, const std::vector<std::pair<Elem<K>, Elem<K>>>& rel, const std::vector<int>& rank) {
  const Presented<K>& P = *p;
  Deg<K> box = P.max_deg();
  // Enumerate bidegrees inside the box, sorted by total degree.
  std::vector<Deg<K>> degs;
  {
    Deg<K> cur{};
    std::function<void(int)> rec = [&](int d) {
      if (d == K) {
        degs.push_back(cur);
        return;
      }
      for (int x = 0; x <= box[static_cast<std::size_t>(d)]; ++x) {
        cur[static_cast<std::size_t>(d)] = x;
        rec(d + 1);
      }
    };
    if (P.size() > 0) rec(0);
    std::stable_sort(degs.begin(), degs.end(), [](const Deg<K>& a, const Deg<K>& b) { return total_degree<K>(a) < total_degree<K>(b); });
  }
  std::vector<Elem<K>> all;
  std::unordered_map<Elem<K>, int, ElemHash<K>> id;
  for (const auto& b : degs)
    for (const Elem<K>& e : P.elements(b)) {
      id.emplace(e, static_cast<int>(all.size()));
      all.push_back(e);
    }
  std::vector<int> parent(all.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> root = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  };
  std::vector<std::pair<Elem<K>, Elem<K>>> work(rel.begin(), rel.end());
  while (!work.empty()) {
    auto [x, y] = work.back();
    work.pop_back();
    if (x.deg() != y.deg()) throw StructuralError("quotient: relation between elements of different degrees");
    auto ix = id.find(x), iy = id.find(y);
    if (ix == id.end() || iy == id.end()) throw StructuralError("quotient: relation element outside the presentation");
    int rx = root(ix->second), ry = root(iy->second);
    if (rx == ry) continue;
    parent[static_cast<std::size_t>(std::max(rx, ry))] = std::min(rx, ry);
    Deg<K> b = x.deg();
    for (int d = 0; d < K; ++d) {
      int n = b[static_cast<std::size_t>(d)];
      if (n >= 1)
        for (int i = 0; i <= n; ++i) work.emplace_back(P.face(d, i, x), P.face(d, i, y));
      if (n + 1 <= box[static_cast<std::size_t>(d)])
        for (int j = 0; j <= n; ++j) work.emplace_back(P.degeneracy(d, j, x), P.degeneracy(d, j, y));
    }
  }
  auto rank_of = [&](int g) { return rank.empty() ? 0 : rank[static_cast<std::size_t>(g)]; };
  std::vector<int> degen_member(all.size(), -1), best(all.size(), -1);
  for (std::size_t i = 0; i < all.size(); ++i) {
    int r = root(static_cast<int>(i));
    const Elem<K>& e = all[i];
    if (!e.nondegenerate()) {
      if (degen_member[static_cast<std::size_t>(r)] < 0) degen_member[static_cast<std::size_t>(r)] = static_cast<int>(i);
    } else {
      int& bst = best[static_cast<std::size_t>(r)];
      if (bst < 0) {
        bst = static_cast<int>(i);
      } else {
        int g0 = all[static_cast<std::size_t>(bst)].gen, g1 = e.gen;
        if (std::make_pair(rank_of(g1), g1) < std::make_pair(rank_of(g0), g0)) bst = static_cast<int>(i);
      }
    }
  }
  Presented<K> out;
  Quotient<K> q;
  std::vector<Elem<K>> nf(all.size());
  std::vector<char> done(all.size(), 0);
  std::vector<int> new_rep;  // new generator -> root index
  // Assign generators and normal forms in degree order.
  for (std::size_t i = 0; i < all.size(); ++i) {
    int r = root(static_cast<int>(i));
    if (done[static_cast<std::size_t>(r)]) continue;
    done[static_cast<std::size_t>(r)] = 1;
    if (degen_member[static_cast<std::size_t>(r)] >= 0) {
      const Elem<K>& w = all[static_cast<std::size_t>(degen_member[static_cast<std::size_t>(r)])];
      int base = root(id.at(P.gen_elem(w.gen)));
      nf[static_cast<std::size_t>(r)] = out.degenerate(w.eta, nf[static_cast<std::size_t>(base)]);
    } else {
      const Elem<K>& rep = all[static_cast<std::size_t>(best[static_cast<std::size_t>(r)])];
      int g = out.add(P.gen(rep.gen).name, P.gen(rep.gen).deg);
      for (int d = 0; d < K; ++d) {
        std::vector<Elem<K>> fs;
        for (const Elem<K>& f : P.gen(rep.gen).faces[static_cast<std::size_t>(d)])
          fs.push_back(nf[static_cast<std::size_t>(root(id.at(f)))]);
        out.set_faces(g, d, std::move(fs));
      }
      nf[static_cast<std::size_t>(r)] = out.gen_elem(g);
      q.rep.push_back(rep.gen);
    }
  }
  out.finalize(false);
  q.obj = share(std::move(out));
  q.proj = Map<K>{p, q.obj, {}};
  for (int g = 0; g < P.size(); ++g) q.proj.img.push_back(nf[static_cast<std::size_t>(root(id.at(P.gen_elem(g))))]);
  return q;
}

template <int K>
Pushout<K> pushout(const Map<K>& f, const Map<K>& g, const std::string& right_prefix) {
  if (f.src->size() != g.src->size()) throw StructuralError("pushout: maps do not share a source");
  // Rename right-hand generators on clashes.
  Presented<K> right = *g.tgt;
  Presented<K> renamed;
  for (const auto& gen : right.gens()) {
    std::string name = right_prefix + gen.name;
    while (f.tgt->find(name) >= 0 || renamed.find(name) >= 0) name += "'";
    renamed.add(name, gen.deg);
  }
  for (int i = 0; i < right.size(); ++i)
    for (int d = 0; d < K; ++d) renamed.set_faces(i, d, right.gen(i).faces[static_cast<std::size_t>(d)]);
  renamed.finalize(false);
  auto rptr = share(std::move(renamed));
  Coproduct<K> c = coproduct<K>({f.tgt, rptr});
  Map<K> gr{g.src, rptr, g.img};
  std::vector<std::pair<Elem<K>, Elem<K>>> rel;
  for (int a = 0; a < f.src->size(); ++a) {
    Elem<K> ea = f.src->gen_elem(a);
    rel.emplace_back(c.inj[0](f(ea)), c.inj[1](gr(ea)));
  }
  std::vector<int> rank(static_cast<std::size_t>(c.obj->size()), 1);
  for (int i = 0; i < f.tgt->size(); ++i) rank[static_cast<std::size_t>(i)] = 0;
  Quotient<K> q = quotient<K>(c.obj, rel, rank);
  Pushout<K> po;
  po.obj = q.obj;
  po.inl = Map<K>{f.tgt, q.obj, {}};
  po.inr = Map<K>{g.tgt, q.obj, {}};
  int nb = f.tgt->size();
  for (int i = 0; i < nb; ++i) po.inl.img.push_back(q.proj.img[static_cast<std::size_t>(i)]);
  for (int i = 0; i < g.tgt->size(); ++i) po.inr.img.push_back(q.proj.img[static_cast<std::size_t>(nb + i)]);
  for (int r : q.rep) {
    po.rep_side.push_back(r < nb ? 0 : 1);
    po.rep_index.push_back(r < nb ? r : r - nb);
  }
  return po;
}

template <int K>
Map<K> pushout_universal(const Pushout<K>& po, const Map<K>& u, const Map<K>& v) {
  if (u.tgt->size() != v.tgt->size()) throw StructuralError("pushout_universal: cocone legs have different targets");
  Map<K> m{po.obj, u.tgt, {}};
  for (std::size_t j = 0; j < po.rep_side.size(); ++j)
    m.img.push_back(po.rep_side[j] == 0 ? u.img[static_cast<std::size_t>(po.rep_index[j])]
                                        : v.img[static_cast<std::size_t>(po.rep_index[j])]);
  Map<K> cl = compose(m, po.inl), cr = compose(m, po.inr);
  if (cl.img != u.img || cr.img != v.img) throw StructuralError("pushout_universal: cocone does not commute");
  return m;
}

// ---------------------------------------------------------------- Products

template <int K>
Product<K>::Product(Ptr<K> a, Ptr<K> b) : a_(std::move(a)), b_(std::move(b)) {
  using Key = std::tuple<int, int, std::array<Op, K>, std::array<Op, K>>;
  Presented<K> out;
  std::vector<Key> keys;
  const std::size_t cap = static_cast<std::size_t>(default_budget());
  for (int g1 = 0; g1 < a_->size(); ++g1)
    for (int g2 = 0; g2 < b_->size(); ++g2) {
      const auto& d1 = a_->gen(g1).deg;
      const auto& d2 = b_->gen(g2).deg;
      std::array<std::vector<std::pair<Op, Op>>, K> per;
      for (int d = 0; d < K; ++d) {
        int p = d1[static_cast<std::size_t>(d)], q = d2[static_cast<std::size_t>(d)];
        for (int n = std::max(p, q); n <= p + q; ++n)
          for (const Op& s : all_surjections(n, p))
            for (const Op& t : all_surjections(n, q)) {
              bool disjoint = true;
              for (int j = 0; j < n && disjoint; ++j)
                if (s(j) == s(j + 1) && t(j) == t(j + 1)) disjoint = false;
              if (disjoint) per[static_cast<std::size_t>(d)].emplace_back(s, t);
            }
      }
      std::function<void(int, std::array<Op, K>&, std::array<Op, K>&)> rec = [&](int d, std::array<Op, K>& s,
                                                                                  std::array<Op, K>& t) {
        if (d == K) {
          if (keys.size() >= cap) throw BudgetExceeded("product: more than " + std::to_string(cap) + " cells");
          keys.emplace_back(g1, g2, s, t);
          return;
        }
        for (const auto& [x, y] : per[static_cast<std::size_t>(d)]) {
          s[static_cast<std::size_t>(d)] = x;
          t[static_cast<std::size_t>(d)] = y;
          rec(d + 1, s, t);
        }
      };
      std::array<Op, K> s{}, t{};
      rec(0, s, t);
    }
  for (const Key& k : keys) {
    Elem<K> x{std::get<2>(k), std::get<0>(k)};
    Elem<K> y{std::get<3>(k), std::get<1>(k)};
    int id = out.add("(" + a_->label(x) + "," + b_->label(y) + ")", x.deg());
    index_.emplace(k, id);
  }
  for (std::size_t i = 0; i < keys.size(); ++i) {
    const Key& k = keys[i];
    Elem<K> x{std::get<2>(k), std::get<0>(k)};
    Elem<K> y{std::get<3>(k), std::get<1>(k)};
    Deg<K> n = x.deg();
    for (int d = 0; d < K; ++d) {
      std::vector<Elem<K>> fs;
      if (n[static_cast<std::size_t>(d)] >= 1)
        for (int j = 0; j <= n[static_cast<std::size_t>(d)]; ++j) {
          Elem<K> fx = a_->face(d, j, x), fy = b_->face(d, j, y);
          Elem<K> r;
          std::array<Op, K> s, t;
          for (int e = 0; e < K; ++e) {
            auto cf = factor_common(fx.eta[static_cast<std::size_t>(e)], fy.eta[static_cast<std::size_t>(e)]);
            r.eta[static_cast<std::size_t>(e)] = cf.common;
            s[static_cast<std::size_t>(e)] = cf.left;
            t[static_cast<std::size_t>(e)] = cf.right;
          }
          r.gen = index_.at(Key{fx.gen, fy.gen, s, t});
          // The generator's own degeneracies are identities; r.eta already describes the element.
          fs.push_back(r);
        }
      out.set_faces(static_cast<int>(i), d, std::move(fs));
    }
  }
  out.finalize(false);
  obj = share(std::move(out));
  pr1 = Map<K>{obj, a_, {}};
  pr2 = Map<K>{obj, b_, {}};
  for (const Key& k : keys) {
    pr1.img.push_back(Elem<K>{std::get<2>(k), std::get<0>(k)});
    pr2.img.push_back(Elem<K>{std::get<3>(k), std::get<1>(k)});
  }
}

template <int K>
Elem<K> Product<K>::pair(const Elem<K>& x, const Elem<K>& y) const {
  if (x.deg() != y.deg()) throw StructuralError("product pair: degree mismatch");
  Elem<K> r;
  std::array<Op, K> s, t;
  for (int e = 0; e < K; ++e) {
    auto cf = factor_common(x.eta[static_cast<std::size_t>(e)], y.eta[static_cast<std::size_t>(e)]);
    r.eta[static_cast<std::size_t>(e)] = cf.common;
    s[static_cast<std::size_t>(e)] = cf.left;
    t[static_cast<std::size_t>(e)] = cf.right;
  }
  r.gen = index_.at(std::make_tuple(x.gen, y.gen, s, t));
  return r;
}

template <int K>
Map<K> product_map(const Product<K>& from, const Product<K>& to, const Map<K>& f, const Map<K>& g) {
  Map<K> m{from.obj, to.obj, {}};
  for (int i = 0; i < from.obj->size(); ++i) {
    Elem<K> e = from.obj->gen_elem(i);
    m.img.push_back(to.pair(f(from.pr1(e)), g(from.pr2(e))));
  }
  return m;
}

// ------------------------------------------------------------ Subobjects

template <int K>
Sub<K> subobject(const Ptr<K>& x, const std::vector<int>& gens) {
  std::vector<char> keep(static_cast<std::size_t>(x->size()), 0);
  std::vector<int> stack(gens.begin(), gens.end());
  while (!stack.empty()) {
    int g = stack.back();
    stack.pop_back();
    if (keep[static_cast<std::size_t>(g)]) continue;
    keep[static_cast<std::size_t>(g)] = 1;
    for (int d = 0; d < K; ++d)
      for (const Elem<K>& f : x->gen(g).faces[static_cast<std::size_t>(d)]) stack.push_back(f.gen);
  }
  Sub<K> s;
  s.old_to_new.assign(static_cast<std::size_t>(x->size()), -1);
  Presented<K> out;
  for (int g = 0; g < x->size(); ++g)
    if (keep[static_cast<std::size_t>(g)]) s.old_to_new[static_cast<std::size_t>(g)] = out.add(x->gen(g).name, x->gen(g).deg);
  for (int g = 0; g < x->size(); ++g) {
    if (!keep[static_cast<std::size_t>(g)]) continue;
    for (int d = 0; d < K; ++d) {
      auto fs = x->gen(g).faces[static_cast<std::size_t>(d)];
      for (auto& f : fs) f.gen = s.old_to_new[static_cast<std::size_t>(f.gen)];
      out.set_faces(s.old_to_new[static_cast<std::size_t>(g)], d, std::move(fs));
    }
  }
  out.finalize(false);
  s.obj = share(std::move(out));
  s.incl = Map<K>{s.obj, x, {}};
  for (int g = 0; g < x->size(); ++g)
    if (keep[static_cast<std::size_t>(g)]) s.incl.img.push_back(x->gen_elem(g));
  return s;
}

template <int K>
Sub<K> image(const Map<K>& f) {
  std::vector<int> gens;
  for (const Elem<K>& e : f.img) gens.push_back(e.gen);
  return subobject<K>(f.tgt, gens);
}

template <int K>
Map<K> restrict_map(const Map<K>& f, const Sub<K>& from, const Sub<K>& to) {
  Map<K> m{from.obj, to.obj, {}};
  for (int g = 0; g < f.src->size(); ++g) {
    if (from.old_to_new[static_cast<std::size_t>(g)] < 0) continue;
    Elem<K> y = f.img[static_cast<std::size_t>(g)];
    int ng = to.old_to_new[static_cast<std::size_t>(y.gen)];
    if (ng < 0) throw StructuralError("restrict_map: image leaves the target subobject");
    y.gen = ng;
    m.img.push_back(y);
  }
  return m;
}

template <int K>
std::map<Deg<K>, int> census(const Presented<K>& x) {
  std::map<Deg<K>, int> c;
  for (const auto& g : x.gens()) ++c[g.deg];
  return c;
}

// ------------------------------------------------------------ Map search

template <int K>
SearchOutcome<K> enumerate_maps(const Ptr<K>& src, const Ptr<K>& tgt, const std::function<bool(const Map<K>&)>& visit,
                                const MapSearch<K>& opts) {
  const Presented<K>& S = *src;
  const Presented<K>& T = *tgt;
  long long budget = opts.budget > 0 ? opts.budget : default_budget();
  const std::size_t n = static_cast<std::size_t>(S.size());
  Map<K> m{src, tgt, std::vector<Elem<K>>(n)};
  std::vector<char> assigned(n, 0);
  std::vector<char> used(static_cast<std::size_t>(T.size()), 0);
  std::vector<int> trail;
  SearchOutcome<K> out;
  bool stop = false;

  // Assigns g := c and, recursively, every face generator of g. The assigned
  // set stays closed under faces, so a free generator only has to agree
  // with its own faces.
  std::function<bool(int, const Elem<K>&)> assign = [&](int g, const Elem<K>& c) -> bool {
    const std::size_t gi = static_cast<std::size_t>(g);
    if (assigned[gi]) return m.img[gi] == c;
    const auto& gen = S.gen(g);
    if (c.deg() != gen.deg) return false;
    if (gi < opts.fixed.size() && opts.fixed[gi] && *opts.fixed[gi] != c) return false;
    if (opts.injective_gens && (!c.nondegenerate() || used[static_cast<std::size_t>(c.gen)])) return false;
    if (opts.allow && !opts.allow(g, c)) return false;
    assigned[gi] = 1;
    m.img[gi] = c;
    if (opts.injective_gens) used[static_cast<std::size_t>(c.gen)] = 1;
    trail.push_back(g);
    for (int d = 0; d < K; ++d) {
      const auto& fs = gen.faces[static_cast<std::size_t>(d)];
      for (std::size_t i = 0; i < fs.size(); ++i) {
        Elem<K> val = T.face(d, static_cast<int>(i), c);
        const Elem<K>& f = fs[i];
        const std::size_t hi = static_cast<std::size_t>(f.gen);
        if (assigned[hi]) {
          if (m(f) != val) return false;
          continue;
        }
        if (f.nondegenerate()) {
          if (!assign(f.gen, val)) return false;
          continue;
        }
        // val = s·w for the degeneracy s of the face: w is val restricted along a section of s.
        std::array<Op, K> sec{};
        for (int e = 0; e < K; ++e) {
          const Op& sj = f.eta[static_cast<std::size_t>(e)];
          std::vector<int> vals;
          for (int j = 0; j <= sj.tgt; ++j) {
            int k = 0;
            while (sj(k) != j) ++k;
            vals.push_back(k);
          }
          sec[static_cast<std::size_t>(e)] = make_op(sj.src, vals);
        }
        Elem<K> w = T.act_all(sec, val);
        if (T.degenerate(f.eta, w) != val) return false;
        if (!assign(f.gen, w)) return false;
      }
    }
    return true;
  };
  auto undo = [&](std::size_t mark) {
    while (trail.size() > mark) {
      const std::size_t g = static_cast<std::size_t>(trail.back());
      trail.pop_back();
      assigned[g] = 0;
      if (opts.injective_gens) used[static_cast<std::size_t>(m.img[g].gen)] = 0;
    }
  };

  // Candidates for g: the smallest face index over assigned faces.
  auto candidates = [&](int g) -> const std::vector<Elem<K>>* {
    const auto& gen = S.gen(g);
    const std::vector<Elem<K>>* best = nullptr;
    for (int d = 0; d < K; ++d) {
      const auto& fs = gen.faces[static_cast<std::size_t>(d)];
      for (std::size_t i = 0; i < fs.size(); ++i) {
        if (!assigned[static_cast<std::size_t>(fs[i].gen)]) continue;
        const auto& c = T.with_face(gen.deg, d, m(fs[i]), static_cast<int>(i));
        if (!best || c.size() < best->size()) best = &c;
      }
    }
    return best ? best : &T.elements(gen.deg);
  };

  std::function<void()> rec = [&]() {
    if (stop) return;
    int g = -1;
    const std::vector<Elem<K>>* cands = nullptr;
    for (std::size_t h = 0; h < n; ++h) {
      if (assigned[h]) continue;
      const auto* c = candidates(static_cast<int>(h));
      if (!cands || c->size() < cands->size() ||
          (c->size() == cands->size() &&
           total_degree<K>(S.gen(static_cast<int>(h)).deg) > total_degree<K>(S.gen(g).deg))) {
        g = static_cast<int>(h);
        cands = c;
        if (cands->empty()) break;
      }
    }
    if (g < 0) {
      if (!visit(m)) {
        stop = true;
        out.status = SearchStatus::Stopped;
      }
      return;
    }
    for (const Elem<K>& c : *cands) {
      if (stop) return;
      if (++out.nodes > budget) {
        stop = true;
        out.status = SearchStatus::BudgetExceeded;
        return;
      }
      std::size_t mark = trail.size();
      if (assign(g, c)) rec();
      undo(mark);
    }
  };

  bool ok = true;
  for (std::size_t g = 0; g < opts.fixed.size() && g < n && ok; ++g)
    if (opts.fixed[g]) ok = assign(static_cast<int>(g), *opts.fixed[g]);
  if (ok) rec();
  return out;
}

template <int K>
std::optional<long long> count_maps(const Ptr<K>& src, const Ptr<K>& tgt, const MapSearch<K>& opts) {
  long long n = 0;
  auto r = enumerate_maps<K>(src, tgt, [&](const Map<K>&) { ++n; return true; }, opts);
  if (r.status == SearchStatus::BudgetExceeded) return std::nullopt;
  return n;
}

template <int K>
std::optional<Map<K>> find_map(const Ptr<K>& src, const Ptr<K>& tgt, const MapSearch<K>& opts) {
  std::optional<Map<K>> found;
  auto r = enumerate_maps<K>(src, tgt, [&](const Map<K>& m) { found = m; return false; }, opts);
  if (!found && r.status == SearchStatus::BudgetExceeded) throw BudgetExceeded("map search budget exceeded");
  return found;
}

template <int K>
std::optional<Map<K>> find_iso(const Ptr<K>& a, const Ptr<K>& b, const MapSearch<K>& opts) {
  if (census(*a) != census(*b)) return std::nullopt;
  MapSearch<K> o = opts;
  o.injective_gens = true;
  return find_map<K>(a, b, o);
}

#define SEGALKIT_INSTANTIATE(K)                                                                                 \
  template class Presented<K>;                                                                                  \
  template struct Map<K>;                                                                                       \
  template class Product<K>;                                                                                    \
  template Map<K> compose<K>(const Map<K>&, const Map<K>&);                                                     \
  template Map<K> identity_map<K>(const Ptr<K>&);                                                               \
  template bool is_mono<K>(const Map<K>&);                                                                      \
  template bool is_epi<K>(const Map<K>&);                                                                       \
  template bool is_iso<K>(const Map<K>&);                                                                       \
  template Map<K> inverse_of_iso<K>(const Map<K>&);                                                             \
  template Map<K> make_map<K>(const Ptr<K>&, const Ptr<K>&, std::vector<Elem<K>>);                              \
  template Ptr<K> empty_object<K>();                                                                            \
  template Ptr<K> point_object<K>(const std::string&);                                                          \
  template Map<K> empty_map<K>(const Ptr<K>&);                                                                  \
  template Map<K> to_point<K>(const Ptr<K>&, const Ptr<K>&);                                                    \
  template Coproduct<K> coproduct<K>(const std::vector<Ptr<K>>&, const std::vector<std::string>&);              \
  template Map<K> copair<K>(const Coproduct<K>&, const std::vector<Map<K>>&, const Ptr<K>&);                    \
  template Quotient<K> quotient<K>(const Ptr<K>&, const std::vector<std::pair<Elem<K>, Elem<K>>>&,              \
                                   const std::vector<int>&);                                                    \
  template Pushout<K> pushout<K>(const Map<K>&, const Map<K>&, const std::string&);                             \
  template Map<K> pushout_universal<K>(const Pushout<K>&, const Map<K>&, const Map<K>&);                        \
  template Map<K> product_map<K>(const Product<K>&, const Product<K>&, const Map<K>&, const Map<K>&);           \
  template Sub<K> subobject<K>(const Ptr<K>&, const std::vector<int>&);                                         \
  template Sub<K> image<K>(const Map<K>&);                                                                      \
  template Map<K> restrict_map<K>(const Map<K>&, const Sub<K>&, const Sub<K>&);                                 \
  template std::map<Deg<K>, int> census<K>(const Presented<K>&);                                                \
  template SearchOutcome<K> enumerate_maps<K>(const Ptr<K>&, const Ptr<K>&,                                     \
                                              const std::function<bool(const Map<K>&)>&, const MapSearch<K>&); \
  template std::optional<long long> count_maps<K>(const Ptr<K>&, const Ptr<K>&, const MapSearch<K>&);           \
  template std::optional<Map<K>> find_map<K>(const Ptr<K>&, const Ptr<K>&, const MapSearch<K>&);                \
  template std::optional<Map<K>> find_iso<K>(const Ptr<K>&, const Ptr<K>&, const MapSearch<K>&);

SEGALKIT_INSTANTIATE(1)
SEGALKIT_INSTANTIATE(2)

}  // namespace segalkit
