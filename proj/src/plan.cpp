#include "segalkit/plan.hpp"

#include <algorithm>
#include <climits>
#include <functional>
#include <mutex>
#include <set>

namespace segalkit {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw StructuralError(msg);
}

template <int K>
std::vector<int> image_gens(const Map<K>& f) {
  std::vector<int> out;
  for (const auto& e : f.img) out.push_back(e.gen);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

Arrow<2> as_arrow(const GeneratingArrow& a) { return Arrow<2>{a.id, a.map}; }

Family<2> as_family(const std::vector<GeneratingArrow>& arrows) {
  Family<2> f;
  for (const auto& a : arrows) f.push_back(as_arrow(a));
  return f;
}

const char* tri_name(Tri t) {
  switch (t) {
    case Tri::True: return "true";
    case Tri::False: return "false";
    default: return "undecided";
  }
}

template <int K>
StepResult<K> apply_simple(const Ptr<K>& x, const Family<K>& fam, const SimpleStep<K>& step, const std::string& tag) {
  StepResult<K> r;
  std::vector<Ptr<K>> srcs, tgts;
  std::vector<std::string> pre;
  for (const auto& e : step) {
    const auto& d = e.diagram;
    require(d.arrow >= 0 && d.arrow < static_cast<int>(fam.size()), "apply_simple: unknown arrow");
    const Arrow<K>& a = fam[static_cast<std::size_t>(d.arrow)];
    require(d.attach.tgt == x, "apply_simple: diagram does not attach into the object");
    require(d.attach.src == a.map.src, "apply_simple: attach map does not start at the arrow's source");
    require(e.mult >= 1, "apply_simple: multiplicities must be positive");
    for (int c = 0; c < e.mult; ++c) {
      srcs.push_back(a.map.src);
      tgts.push_back(a.map.tgt);
      pre.push_back(tag + std::to_string(pre.size()) + ":");
    }
  }
  r.targets = coproduct<K>(tgts, pre);
  if (srcs.empty()) {
    r.obj = x;
    r.map = identity_map<K>(x);
    r.po.obj = x;
    r.po.inl = r.map;
    r.po.inr = Map<K>{r.targets.obj, x, {}};
    for (int g = 0; g < x->size(); ++g) {
      r.po.rep_side.push_back(0);
      r.po.rep_index.push_back(g);
    }
    return r;
  }
  Coproduct<K> cs = coproduct<K>(srcs, pre);
  std::vector<Map<K>> f_parts, g_parts;
  std::size_t idx = 0;
  for (const auto& e : step)
    for (int c = 0; c < e.mult; ++c, ++idx) {
      f_parts.push_back(e.diagram.attach);
      g_parts.push_back(compose(r.targets.inj[idx], fam[static_cast<std::size_t>(e.diagram.arrow)].map));
    }
  r.po = pushout<K>(copair(cs, f_parts, x), copair(cs, g_parts, r.targets.obj));
  r.obj = r.po.obj;
  r.map = r.po.inl;
  idx = 0;
  for (const auto& e : step) {
    r.fillers.emplace_back();
    for (int c = 0; c < e.mult; ++c, ++idx) r.fillers.back().push_back(compose(r.po.inr, r.targets.inj[idx]));
  }
  return r;
}

template <int K>
Map<K> Plan<K>::to_stage(int from, int to) const {
  require(0 <= from && from <= to && to <= length(), "to_stage: stage out of range");
  Map<K> m = identity_map<K>(stages[static_cast<std::size_t>(from)]);
  for (int j = from; j < to; ++j) m = compose(results[static_cast<std::size_t>(j)].map, m);
  return m;
}

template <int K>
Plan<K> empty_plan(const Ptr<K>& x, Family<K> fam) {
  Plan<K> p;
  p.family = std::move(fam);
  p.stages.push_back(x);
  return p;
}

template <int K>
void append_step(Plan<K>& p, SimpleStep<K> step) {
  auto res = apply_simple<K>(p.result(), p.family, step, "s" + std::to_string(p.length()) + "c");
  p.stages.push_back(res.obj);
  p.results.push_back(std::move(res));
  p.steps.push_back(std::move(step));
}

template <int K>
Plan<K> compose_naive(const Plan<K>& p, const Plan<K>& q) {
  require(q.source() == p.result(), "compose_naive: the second plan must start at the first plan's result");
  Plan<K> out = p;
  for (int j = 0; j < q.length(); ++j) {
    out.steps.push_back(q.steps[static_cast<std::size_t>(j)]);
    out.results.push_back(q.results[static_cast<std::size_t>(j)]);
    out.stages.push_back(q.stages[static_cast<std::size_t>(j) + 1]);
  }
  return out;
}

template <int K>
std::optional<Map<K>> lift_through_mono(const Map<K>& f, const Map<K>& mono) {
  require(f.tgt->size() == mono.tgt->size(), "lift_through_mono: maps have different targets");
  std::vector<int> inv(static_cast<std::size_t>(mono.tgt->size()), -1);
  for (int a = 0; a < static_cast<int>(mono.img.size()); ++a) {
    const auto& e = mono.img[static_cast<std::size_t>(a)];
    require(e.nondegenerate() && inv[static_cast<std::size_t>(e.gen)] < 0, "lift_through_mono: not a monomorphism");
    inv[static_cast<std::size_t>(e.gen)] = a;
  }
  Map<K> g{f.src, mono.src, {}};
  for (const auto& e : f.img) {
    int a = inv[static_cast<std::size_t>(e.gen)];
    if (a < 0) return std::nullopt;
    g.img.push_back(Elem<K>{e.eta, a});
  }
  return g;
}

template <int K>
Plan<K> compose_rational(const Plan<K>& p, const SimpleStep<K>& q) {
  Plan<K> out = p;
  SimpleStep<K> kept;
  if (p.length() == 0) {
    kept = q;
  } else {
    Map<K> last = p.to_stage(p.length() - 1, p.length());
    for (const auto& e : q)
      if (!lift_through_mono(e.diagram.attach, last)) kept.push_back(e);
  }
  append_step(out, std::move(kept));
  return out;
}

template <int K>
int earliest_stage(const Plan<K>& p, int k, const Map<K>& attach) {
  for (int b = 0; b < k; ++b)
    if (lift_through_mono(attach, p.to_stage(b, k))) return b;
  return k;
}

template <int K>
bool is_rational(const Plan<K>& p) {
  int n = p.length();
  std::set<DiagramKey<K>> earlier;
  for (int k = 0; k < n; ++k) {
    Map<K> m = p.to_stage(k, n);
    std::vector<DiagramKey<K>> keys;
    for (const auto& e : p.steps[static_cast<std::size_t>(k)]) {
      DiagramKey<K> key{e.diagram.arrow, compose(m, e.diagram.attach).img};
      if (earlier.count(key)) return false;
      keys.push_back(std::move(key));
    }
    earlier.insert(keys.begin(), keys.end());
  }
  return true;
}

template <int K>
bool has_rational_compositions(const Plan<K>& p) {
  for (int k = 1; k < p.length(); ++k) {
    Map<K> m = p.to_stage(k - 1, k);
    for (const auto& e : p.steps[static_cast<std::size_t>(k)])
      if (lift_through_mono(e.diagram.attach, m)) return false;
  }
  return true;
}

template <int K>
Replay<K> replay(const Plan<K>& p, int from, const std::vector<SimpleStep<K>>& steps) {
  int n = p.length();
  require(0 <= from && from <= n && static_cast<int>(steps.size()) == n, "replay: wrong number of steps");
  Replay<K> out;
  out.plan = empty_plan<K>(p.source(), p.family);
  for (int j = 0; j < from; ++j) {
    out.plan.steps.push_back(p.steps[static_cast<std::size_t>(j)]);
    out.plan.results.push_back(p.results[static_cast<std::size_t>(j)]);
    out.plan.stages.push_back(p.stages[static_cast<std::size_t>(j) + 1]);
  }
  for (int j = 0; j <= from; ++j) out.r.push_back(identity_map<K>(p.stages[static_cast<std::size_t>(j)]));
  for (int j = from; j < n; ++j) {
    const auto& old = p.steps[static_cast<std::size_t>(j)];
    const auto& s = steps[static_cast<std::size_t>(j)];
    require(s.size() >= old.size(), "replay: entries were removed");
    const Map<K>& r = out.r[static_cast<std::size_t>(j)];
    SimpleStep<K> moved;
    for (std::size_t e = 0; e < s.size(); ++e) {
      if (e < old.size())
        require(s[e].diagram.arrow == old[e].diagram.arrow && s[e].diagram.attach.img == old[e].diagram.attach.img &&
                    s[e].mult >= old[e].mult,
                "replay: entries must extend the old step");
      StepEntry<K> m = s[e];
      m.diagram.attach = compose(r, s[e].diagram.attach);
      moved.push_back(std::move(m));
    }
    append_step(out.plan, std::move(moved));
    const auto& oldres = p.results[static_cast<std::size_t>(j)];
    const auto& newres = out.plan.results.back();
    std::vector<Map<K>> legs;
    for (std::size_t e = 0; e < old.size(); ++e)
      for (int c = 0; c < old[e].mult; ++c) legs.push_back(newres.fillers[e][static_cast<std::size_t>(c)]);
    out.r.push_back(pushout_universal<K>(oldres.po, compose(newres.map, r), copair(oldres.targets, legs, newres.obj)));
  }
  return out;
}

template <int K>
Rationalization<K> rationalize(const Plan<K>& p) {
  for (const auto& a : p.family) require(is_mono(a.map), "rationalize: arrow " + a.id + " is not a monomorphism");
  Plan<K> z = empty_plan<K>(p.source(), p.family);
  std::vector<Map<K>> comp{identity_map<K>(p.source())};
  struct Loc {
    int beta, entry, offset;
  };
  for (int k = 0; k < p.length(); ++k) {
    append_step(z, {});
    std::vector<SimpleStep<K>> ns = z.steps;
    std::vector<Loc> locs;
    int bmin = k;
    for (const auto& e : p.steps[static_cast<std::size_t>(k)]) {
      Map<K> t = compose(comp[static_cast<std::size_t>(k)], e.diagram.attach);
      int beta = earliest_stage(z, k, t);
      Map<K> lifted = *lift_through_mono(t, z.to_stage(beta, k));
      auto& st = ns[static_cast<std::size_t>(beta)];
      Loc loc{beta, -1, 0};
      for (std::size_t i = 0; i < st.size(); ++i)
        if (st[i].diagram.arrow == e.diagram.arrow && st[i].diagram.attach.img == lifted.img) {
          loc.entry = static_cast<int>(i);
          loc.offset = st[i].mult;
          st[i].mult += e.mult;
          break;
        }
      if (loc.entry < 0) {
        loc.entry = static_cast<int>(st.size());
        st.push_back(StepEntry<K>{Diagram<K>{e.diagram.arrow, lifted}, e.mult});
      }
      locs.push_back(loc);
      bmin = std::min(bmin, beta);
    }
    Replay<K> rp = replay(z, bmin, ns);
    for (int j = bmin + 1; j <= k; ++j)
      comp[static_cast<std::size_t>(j)] = compose(rp.r[static_cast<std::size_t>(j)], comp[static_cast<std::size_t>(j)]);
    z = std::move(rp.plan);
    std::vector<Map<K>> legs;
    const auto& pstep = p.steps[static_cast<std::size_t>(k)];
    for (std::size_t i = 0; i < pstep.size(); ++i) {
      const Loc& l = locs[i];
      Map<K> up = z.to_stage(l.beta + 1, k + 1);
      for (int c = 0; c < pstep[i].mult; ++c)
        legs.push_back(compose(up, z.results[static_cast<std::size_t>(l.beta)]
                                       .fillers[static_cast<std::size_t>(l.entry)][static_cast<std::size_t>(l.offset + c)]));
    }
    const auto& pres = p.results[static_cast<std::size_t>(k)];
    comp.push_back(pushout_universal<K>(pres.po, compose(z.results[static_cast<std::size_t>(k)].map, comp[static_cast<std::size_t>(k)]),
                                        copair(pres.targets, legs, z.result())));
  }
  return Rationalization<K>{std::move(z), std::move(comp)};
}

template <int K>
std::optional<Map<K>> isomorphic_over(const Map<K>& f, const Map<K>& g) {
  require(f.src->size() == g.src->size(), "isomorphic_over: maps have different sources");
  MapSearch<K> o;
  o.fixed.assign(static_cast<std::size_t>(f.tgt->size()), std::nullopt);
  for (std::size_t x = 0; x < f.img.size(); ++x) {
    require(f.img[x].nondegenerate(), "isomorphic_over: f must be a monomorphism");
    o.fixed[static_cast<std::size_t>(f.img[x].gen)] = g.img[x];
  }
  auto h = find_iso<K>(f.tgt, g.tgt, o);
  if (!h || compose(*h, f).img != g.img) return std::nullopt;
  return h;
}

template <int K>
std::vector<Diagram<K>> enumerate_diagrams(const Ptr<K>& x, const Family<K>& fam, int dim_bound, long long budget) {
  std::vector<Diagram<K>> out;
  for (int a = 0; a < static_cast<int>(fam.size()); ++a) {
    const auto& src = fam[static_cast<std::size_t>(a)].map.src;
    if (src->size() > 0 && src->max_total_degree() > dim_bound) continue;
    MapSearch<K> o;
    o.budget = budget;
    auto res = enumerate_maps<K>(
        src, x,
        [&](const Map<K>& m) {
          out.push_back(Diagram<K>{a, m});
          return true;
        },
        o);
    if (res.status == SearchStatus::BudgetExceeded)
      throw BudgetExceeded("enumerate_diagrams: budget exceeded on " + fam[static_cast<std::size_t>(a)].id);
  }
  return out;
}

template <int K>
SimpleStep<K> e_step(const Ptr<K>& x, const Family<K>& fam, int lambda, int dim_bound, long long budget) {
  require(lambda >= 1, "e_step: λ must be positive");
  SimpleStep<K> s;
  for (auto& d : enumerate_diagrams(x, fam, dim_bound, budget)) s.push_back(StepEntry<K>{std::move(d), lambda});
  return s;
}

template <int K>
Tri has_filler(const Ptr<K>& x, const Family<K>& fam, const Diagram<K>& d, long long budget) {
  const Arrow<K>& a = fam[static_cast<std::size_t>(d.arrow)];
  MapSearch<K> o;
  o.budget = budget;
  o.fixed.assign(static_cast<std::size_t>(a.map.tgt->size()), std::nullopt);
  for (std::size_t s = 0; s < a.map.img.size(); ++s) {
    require(a.map.img[s].nondegenerate(), "has_filler: the arrow must send generators to generators");
    o.fixed[static_cast<std::size_t>(a.map.img[s].gen)] = d.attach.img[s];
  }
  bool found = false;
  auto res = enumerate_maps<K>(
      a.map.tgt, x,
      [&](const Map<K>& m) {
        found = compose(m, a.map).img == d.attach.img;
        return !found;
      },
      o);
  if (found) return Tri::True;
  return res.status == SearchStatus::BudgetExceeded ? Tri::Undecided : Tri::False;
}

template <int K>
Marking<K> extend_marking(const Marking<K>& mu, const Map<K>& f) {
  Marking<K> out;
  for (const auto& [key, fil] : mu) {
    DiagramKey<K> k2{key.first, {}};
    for (const auto& e : key.second) k2.second.push_back(f(e));
    out.emplace(std::move(k2), compose(f, fil));
  }
  return out;
}

template <int K>
std::vector<std::string> marking_violations(const Family<K>& fam, const MarkedObject<K>& m) {
  std::vector<std::string> errs;
  for (const auto& [key, fil] : m.marking) {
    if (key.first < 0 || key.first >= static_cast<int>(fam.size())) {
      errs.push_back("marking: unknown arrow");
      continue;
    }
    const auto& a = fam[static_cast<std::size_t>(key.first)];
    if (fil.src != a.map.tgt || fil.tgt->size() != m.obj->size() || !fil.check().empty()) {
      errs.push_back("marking: filler for " + a.id + " is not a map from its target");
      continue;
    }
    if (compose(fil, a.map).img != key.second) errs.push_back("marking: filler for " + a.id + " does not commute");
  }
  return errs;
}

template <int K>
Marking<K> marking_at_stage(const Plan<K>& p, int j) {
  Marking<K> mu;
  for (int k = 0; k < j; ++k) {
    const auto& res = p.results[static_cast<std::size_t>(k)];
    mu = extend_marking(mu, res.map);
    const auto& st = p.steps[static_cast<std::size_t>(k)];
    for (std::size_t e = 0; e < st.size(); ++e)
      mu.emplace(DiagramKey<K>{st[e].diagram.arrow, compose(res.map, st[e].diagram.attach).img}, res.fillers[e][0]);
  }
  return mu;
}

template <int K>
EPhiResult<K> e_phi_marked(const Ptr<K>& x, const Family<K>& fam, int steps, int dim_bound, bool check_final,
                           long long budget) {
  EPhiResult<K> r;
  r.plan = empty_plan<K>(x, fam);
  bool stuck = false;
  for (int s = 0; s < steps; ++s) {
    if (stuck) {
      append_step(r.plan, {});
      continue;
    }
    r.plan = compose_rational(r.plan, e_step(r.plan.result(), fam, 1, dim_bound, budget));
    stuck = r.plan.steps.back().empty();
  }
  r.marked = MarkedObject<K>{r.plan.result(), marking_at_stage(r.plan, r.plan.length())};
  r.can = r.plan.to_stage(0, r.plan.length());
  if (check_final) {
    for (auto& d : enumerate_diagrams(r.plan.result(), fam, dim_bound, budget))
      if (!r.marked.marking.count(key_of(d))) r.unmarked.push_back(std::move(d));
    r.final_checked = true;
    r.saturated = r.unmarked.empty();
  }
  return r;
}

template <int K>
long long count_marked_factorizations(const Family<K>& fam, const MarkedObject<K>& source, const MarkedObject<K>& target,
                                      const Map<K>& can, const Map<K>& base, bool strict, long long budget) {
  require(can.tgt->size() == source.obj->size() && base.tgt->size() == target.obj->size() &&
              can.src->size() == base.src->size(),
          "count_marked_factorizations: base maps do not match");
  auto merrs = marking_violations(fam, source);
  require(merrs.empty(), "count_marked_factorizations: " + (merrs.empty() ? std::string() : merrs.front()));
  std::vector<std::optional<Elem<K>>> fixed(static_cast<std::size_t>(source.obj->size()));
  auto force = [&](const Elem<K>& e, const Elem<K>& v) {
    require(e.nondegenerate(), "count_marked_factorizations: forcing through a degenerate element");
    auto& slot = fixed[static_cast<std::size_t>(e.gen)];
    if (slot) return *slot == v;
    slot = v;
    return true;
  };
  for (std::size_t x = 0; x < can.img.size(); ++x)
    if (!force(can.img[x], base.img[x])) return 0;

  // Forced values: once f is known on a marked diagram, the target's filler
  // for its extension determines f on the filler's image.
  std::set<DiagramKey<K>> done;
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& [key, fil] : source.marking) {
      if (done.count(key)) continue;
      DiagramKey<K> ext{key.first, {}};
      bool known = true;
      for (const auto& e : key.second) {
        const auto& v = fixed[static_cast<std::size_t>(e.gen)];
        if (!v) {
          known = false;
          break;
        }
        ext.second.push_back(target.obj->degenerate(e.eta, *v));
      }
      if (!known) continue;
      done.insert(key);
      auto it = target.marking.find(ext);
      if (it == target.marking.end()) {
        if (strict) return 0;
        continue;
      }
      for (std::size_t y = 0; y < fil.img.size(); ++y) {
        const auto& e = fil.img[y];
        if (!e.nondegenerate()) continue;
        bool was = fixed[static_cast<std::size_t>(e.gen)].has_value();
        if (!force(e, it->second.img[y])) return 0;
        if (!was) changed = true;
      }
    }
  }

  MapSearch<K> o;
  o.fixed = fixed;
  o.budget = budget;
  long long count = 0;
  auto res = enumerate_maps<K>(
      source.obj, target.obj,
      [&](const Map<K>& f) {
        for (const auto& [key, fil] : source.marking) {
          DiagramKey<K> ext{key.first, {}};
          for (const auto& e : key.second) ext.second.push_back(f(e));
          auto it = target.marking.find(ext);
          if (it == target.marking.end()) {
            if (strict) return true;
            continue;
          }
          if (compose(f, fil).img != it->second.img) return true;
        }
        ++count;
        return true;
      },
      o);
  if (res.status == SearchStatus::BudgetExceeded) throw BudgetExceeded("count_marked_factorizations: budget exceeded");
  return count;
}

template <int K>
std::vector<Map<K>> induced_stage_maps(const Plan<K>& pa, const Plan<K>& pc, const Map<K>& f) {
  require(f.src == pa.source() && f.tgt == pc.source(), "induced_stage_maps: f must go between the plan sources");
  require(pa.length() <= pc.length(), "induced_stage_maps: the second plan is shorter");
  std::vector<Map<K>> out{f};
  for (int j = 0; j < pa.length(); ++j) {
    const auto& cs = pc.steps[static_cast<std::size_t>(j)];
    std::map<DiagramKey<K>, std::size_t> index;
    for (std::size_t e = 0; e < cs.size(); ++e) index.emplace(key_of(cs[e].diagram), e);
    const Map<K>& fj = out.back();
    const auto& cres = pc.results[static_cast<std::size_t>(j)];
    std::vector<Map<K>> legs;
    for (const auto& e : pa.steps[static_cast<std::size_t>(j)]) {
      auto it = index.find(DiagramKey<K>{e.diagram.arrow, compose(fj, e.diagram.attach).img});
      require(it != index.end(), "induced_stage_maps: an extended diagram is missing from the target plan");
      require(cs[it->second].mult >= e.mult, "induced_stage_maps: multiplicity too small in the target plan");
      for (int c = 0; c < e.mult; ++c) legs.push_back(cres.fillers[it->second][static_cast<std::size_t>(c)]);
    }
    const auto& ares = pa.results[static_cast<std::size_t>(j)];
    out.push_back(pushout_universal<K>(ares.po, compose(cres.map, fj), copair(ares.targets, legs, cres.obj)));
  }
  return out;
}

template <int K>
std::vector<Diagram<K>> unfilled_diagrams(const Family<K>& fam, const Ptr<K>& x, const Map<K>& f, const Marking<K>& mu,
                                          int dim_bound, long long budget) {
  std::vector<Diagram<K>> out;
  for (auto& d : enumerate_diagrams<K>(x, fam, dim_bound, budget))
    if (!mu.count(DiagramKey<K>{d.arrow, compose(f, d.attach).img})) out.push_back(std::move(d));
  return out;
}

#define SEGALKIT_PLAN_INSTANTIATE(K)                                                                                    \
  template StepResult<K> apply_simple<K>(const Ptr<K>&, const Family<K>&, const SimpleStep<K>&, const std::string&);    \
  template struct Plan<K>;                                                                                              \
  template Plan<K> empty_plan<K>(const Ptr<K>&, Family<K>);                                                             \
  template void append_step<K>(Plan<K>&, SimpleStep<K>);                                                                \
  template Plan<K> compose_naive<K>(const Plan<K>&, const Plan<K>&);                                                    \
  template Plan<K> compose_rational<K>(const Plan<K>&, const SimpleStep<K>&);                                           \
  template std::optional<Map<K>> lift_through_mono<K>(const Map<K>&, const Map<K>&);                                    \
  template int earliest_stage<K>(const Plan<K>&, int, const Map<K>&);                                                   \
  template bool is_rational<K>(const Plan<K>&);                                                                         \
  template bool has_rational_compositions<K>(const Plan<K>&);                                                           \
  template Rationalization<K> rationalize<K>(const Plan<K>&);                                                           \
  template Replay<K> replay<K>(const Plan<K>&, int, const std::vector<SimpleStep<K>>&);                                  \
  template std::optional<Map<K>> isomorphic_over<K>(const Map<K>&, const Map<K>&);                                      \
  template std::vector<Diagram<K>> enumerate_diagrams<K>(const Ptr<K>&, const Family<K>&, int, long long);              \
  template SimpleStep<K> e_step<K>(const Ptr<K>&, const Family<K>&, int, int, long long);                               \
  template Tri has_filler<K>(const Ptr<K>&, const Family<K>&, const Diagram<K>&, long long);                            \
  template Marking<K> extend_marking<K>(const Marking<K>&, const Map<K>&);                                              \
  template std::vector<std::string> marking_violations<K>(const Family<K>&, const MarkedObject<K>&);                    \
  template std::vector<Diagram<K>> unfilled_diagrams<K>(const Family<K>&, const Ptr<K>&, const Map<K>&,             \
                                                          const Marking<K>&, int, long long);                           \
  template Marking<K> marking_at_stage<K>(const Plan<K>&, int);                                                         \
  template EPhiResult<K> e_phi_marked<K>(const Ptr<K>&, const Family<K>&, int, int, bool, long long);                   \
  template long long count_marked_factorizations<K>(const Family<K>&, const MarkedObject<K>&, const MarkedObject<K>&,   \
                                                    const Map<K>&, const Map<K>&, bool, long long);                     \
  template std::vector<Map<K>> induced_stage_maps<K>(const Plan<K>&, const Plan<K>&, const Map<K>&);

SEGALKIT_PLAN_INSTANTIATE(1)
SEGALKIT_PLAN_INSTANTIATE(2)

// ---------------------------------------------------------------------------
// Random simplicial plans.

Family<1> simplicial_cell_family() {
  Family<1> f;
  for (int n = 0; n <= 2; ++n) f.push_back(Arrow<1>{"boundary" + std::to_string(n), boundary_inclusion(n)});
  const std::vector<std::vector<std::vector<int>>> horns = {
      {{0, 1}, {0, 2}}, {{0, 1}, {1, 2}}, {{0, 2}, {1, 2}}};
  for (int k = 0; k < 3; ++k)
    f.push_back(Arrow<1>{"horn2_" + std::to_string(k), inclusion_by_name(simplex_sub(2, horns[static_cast<std::size_t>(k)]),
                                                                          standard_simplex(2))});
  return f;
}

SimpleStep<1> random_step(const SSetPtr& x, const Family<1>& fam, std::mt19937& rng, int max_diagrams, int max_mult,
                          int dim_bound) {
  auto all = enumerate_diagrams<1>(x, fam, dim_bound);
  std::shuffle(all.begin(), all.end(), rng);
  int n = std::min<int>(static_cast<int>(all.size()), std::uniform_int_distribution<int>(1, max_diagrams)(rng));
  SimpleStep<1> s;
  for (int i = 0; i < n; ++i)
    s.push_back(StepEntry<1>{all[static_cast<std::size_t>(i)], std::uniform_int_distribution<int>(1, max_mult)(rng)});
  return s;
}

Plan<1> random_rational_plan(const SSetPtr& x, const Family<1>& fam, std::mt19937& rng, int steps, int max_diagrams) {
  Plan<1> p = empty_plan<1>(x, fam);
  for (int s = 0; s < steps; ++s) p = compose_rational(p, random_step(p.result(), fam, rng, max_diagrams, 2, 2));
  return p;
}

// ---------------------------------------------------------------------------
// Painted schedules.

namespace {

const GeneratingArrow& cached_boit(int m, int k) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, GeneratingArrow> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find({m, k});
  if (it == cache.end()) it = cache.emplace(std::make_pair(m, k), boit(m, boundary_inclusion(k))).first;
  return it->second;
}

Op principal(int m, int k) { return make_op(m, {k, k + 1}); }

std::vector<char> image_flags(const SSetMap& mono) {
  std::vector<char> in(static_cast<std::size_t>(mono.tgt->size()), 0);
  for (const auto& e : mono.img) in[static_cast<std::size_t>(e.gen)] = 1;
  return in;
}

// The level generator of f applied to a level element.
int pushed_gen(const Level& from, const Level& to, const PrecatMap& f, const SElem& x) {
  return to.to_level(f(from.to_precat(x))).gen;
}

}  // namespace

RajResult raj_1m(const Painted& p, int max_k, const PrecatMap* previous, bool check_witness, long long budget) {
  auto perrs = painting_violations(p);
  require(perrs.empty(), "raj_1m: " + (perrs.empty() ? std::string() : perrs.front()));
  const int m = p.m;
  RajResult r;
  std::vector<Level> s1, sm;
  for (int k = 0; k <= max_k; ++k) {
    const auto& a = cached_boit(m, k);
    r.family.push_back(as_arrow(a));
    s1.push_back(level(a.map.src, 1));
    sm.push_back(level(a.map.src, m));
  }
  auto in_i = image_flags(p.i), in_j = image_flags(p.j);
  std::optional<PrecatMap> prev;
  if (previous) {
    require(previous->tgt == p.a, "raj_1m: the previous stage map must end at the painted precategory");
    prev = *previous;
  }
  for (auto& d : enumerate_diagrams<2>(p.a, r.family, INT_MAX, budget)) {
    const auto a = static_cast<std::size_t>(d.arrow);
    bool painted = true;
    for (const BElem& c : s1[a].cell)
      if (!in_i[static_cast<std::size_t>(p.l1.to_level(d.attach(c)).gen)]) painted = false;
    for (const BElem& c : sm[a].cell)
      if (painted && !in_j[static_cast<std::size_t>(p.lm.to_level(d.attach(c)).gen)]) painted = false;
    if (!painted) continue;
    if (prev && lift_through_mono(d.attach, *prev)) continue;
    r.step.push_back(StepEntry<2>{std::move(d), 1});
  }
  r.attached = static_cast<int>(r.step.size());
  auto res = apply_simple<2>(p.a, r.family, r.step, "r" + std::to_string(m) + "." + std::to_string(p.a->size()) + "c");
  r.from_a = res.map;
  Painted& out = r.out;
  out.a = res.obj;
  out.m = m;
  out.l1 = level(out.a, 1);
  out.lm = level(out.a, m);
  std::vector<int> igens, jgens;
  for (const auto& x : p.i.img) igens.push_back(pushed_gen(p.l1, out.l1, res.map, x));
  for (const auto& x : p.j.img) jgens.push_back(pushed_gen(p.lm, out.lm, res.map, x));
  for (std::size_t e = 0; e < r.step.size(); ++e) {
    const auto& fil = res.fillers[e][0];
    for (int t = 0; t < fil.src->size(); ++t)
      if (fil.src->gen(t).deg[0] == m) jgens.push_back(out.lm.to_level(fil.img[static_cast<std::size_t>(t)]).gen);
  }
  Sub<1> si = subobject<1>(out.l1.obj, igens), sj = subobject<1>(out.lm.obj, jgens);
  out.i = si.incl;
  out.j = sj.incl;

  // RS witness: B = A_1*, P = the new A_m*.
  RSData& w = r.witness;
  w.eta = identity_map<1>(p.i.src);
  for (const auto& x : p.i.img) w.nu.push_back(p.l1.tuple[static_cast<std::size_t>(x.gen)]);
  std::vector<int> to_b(static_cast<std::size_t>(si.obj->size()), -1);
  for (int b = 0; b < static_cast<int>(p.i.img.size()); ++b)
    to_b[static_cast<std::size_t>(si.old_to_new[static_cast<std::size_t>(igens[static_cast<std::size_t>(b)])])] = b;
  w.phi = SSetMap{p.j.src, sj.obj, {}};
  for (const auto& x : p.j.img) {
    SElem z = out.lm.to_level(res.map(p.lm.to_precat(x)));
    w.phi.img.push_back(SElem{z.eta, sj.old_to_new[static_cast<std::size_t>(z.gen)]});
  }
  for (int k = 0; k < m; ++k) {
    SSetMap s = level_operator(out.a, out.lm, out.l1, principal(m, k));
    SSetMap psi{sj.obj, p.i.src, {}};
    for (const auto& x : sj.incl.img) {
      SElem y = s(x);
      int sg = si.old_to_new[static_cast<std::size_t>(y.gen)];
      require(sg >= 0 && to_b[static_cast<std::size_t>(sg)] >= 0, "raj_1m: a Segal component leaves the painted part");
      psi.img.push_back(SElem{y.eta, to_b[static_cast<std::size_t>(sg)]});
    }
    w.psi.push_back(std::move(psi));
  }
  if (check_witness) {
    r.witness_checked = true;
    r.witness_ok = rs_violations(p, w).empty() && painting_violations(out).empty() &&
                   isomorphic_over<2>(rs(p, w).from_a, r.from_a).has_value();
  }
  return r;
}

CatResult cat_1m(const PrecatPtr& a, int m, int steps, int max_k, bool check_witness, long long budget) {
  CatResult c;
  Painted p = paint_all(a, m);
  c.from_a = identity_map<2>(a);
  std::optional<PrecatMap> prev;
  for (int s = 0; s < steps; ++s) {
    RajResult r = raj_1m(p, max_k, prev ? &*prev : nullptr, check_witness, budget);
    c.attached.push_back(r.attached);
    if (r.witness_checked && !r.witness_ok) c.witnesses_ok = false;
    if (r.attached == 0) {
      c.saturated = true;
      break;
    }
    c.from_a = compose(r.from_a, c.from_a);
    prev = r.from_a;
    p = std::move(r.out);
  }
  c.out = p;
  c.obj = p.a;
  return c;
}

CatResult bigcat(const PrecatPtr& a, int rounds, int max_m, int steps, int max_k, long long budget) {
  CatResult total;
  total.obj = a;
  total.from_a = identity_map<2>(a);
  total.saturated = true;
  for (int t = 0; t < rounds; ++t)
    for (int m = 2; m <= max_m; ++m) {
      CatResult c = cat_1m(total.obj, m, steps, max_k, false, budget);
      total.from_a = compose(c.from_a, total.from_a);
      total.obj = c.obj;
      total.out = c.out;
      total.attached.insert(total.attached.end(), c.attached.begin(), c.attached.end());
      if (!c.saturated) total.saturated = false;
    }
  return total;
}

// ---------------------------------------------------------------------------
// Canonical markings.

DegeneracyTable::DegeneracyTable(std::vector<GeneratingArrow> arrows) : arrows_(std::move(arrows)) {
  family_ = as_family(arrows_);
  std::map<std::pair<int, int>, Theta> identity_parents;
  for (int ai = 0; ai < static_cast<int>(arrows_.size()); ++ai) {
    const auto& ga = arrows_[static_cast<std::size_t>(ai)];
    require(ga.tag == ArrowTag::Boit, "DegeneracyTable: only Boit arrows have degeneracies");
    auto f = standard_simplex(ga.k);
    Theta tm = theta_view(standard_simplex(ga.m), f, ga.map.tgt);
    std::vector<Presentation> list;
    for (int kp = 0; kp < ga.m; ++kp)
      for (const Op& sigma : all_surjections(ga.m, kp)) {
        Presentation pr;
        pr.arrow = ai;
        pr.sigma = sigma;
        if (kp >= 2) {
          for (int pi = 0; pi < static_cast<int>(arrows_.size()); ++pi)
            if (arrows_[static_cast<std::size_t>(pi)].m == kp && arrows_[static_cast<std::size_t>(pi)].k == ga.k) pr.parent = pi;
          require(pr.parent >= 0, "DegeneracyTable: the family lacks Boit_" + std::to_string(kp));
          const auto& pa = arrows_[static_cast<std::size_t>(pr.parent)];
          Theta tp = theta_view(standard_simplex(kp), f, pa.map.tgt);
          pr.e_target = theta_map(tm, tp, simplex_map(sigma), identity_map<1>(f));
          auto e = lift_through_mono<2>(compose(pr.e_target, ga.map), pa.map);
          require(e.has_value(), "DegeneracyTable: a degeneracy leaves the parent source");
          pr.e = *e;
        } else {
          auto it = identity_parents.find({kp, ga.k});
          if (it == identity_parents.end()) it = identity_parents.emplace(std::make_pair(kp, ga.k), theta(standard_simplex(kp), f)).first;
          pr.e_target = theta_map(tm, it->second, simplex_map(sigma), identity_map<1>(f));
          pr.e = compose(pr.e_target, ga.map);
        }
        pr.section.assign(static_cast<std::size_t>(pr.e.tgt->size()), -1);
        for (int s = 0; s < pr.e.src->size(); ++s) {
          const BElem& v = pr.e.img[static_cast<std::size_t>(s)];
          if (v.nondegenerate() && pr.section[static_cast<std::size_t>(v.gen)] < 0) pr.section[static_cast<std::size_t>(v.gen)] = s;
        }
        for (int s : pr.section) require(s >= 0, "DegeneracyTable: a degeneracy is not onto its parent source");
        list.push_back(std::move(pr));
      }
    pres_.push_back(std::move(list));
  }
}

std::optional<PrecatMap> DegeneracyTable::factor(const Presentation& p, const PrecatMap& d) const {
  PrecatMap c{p.e.tgt, d.tgt, {}};
  for (int s : p.section) c.img.push_back(d.img[static_cast<std::size_t>(s)]);
  if (!c.check().empty() || compose(c, p.e).img != d.img) return std::nullopt;
  return c;
}

std::optional<std::pair<int, PrecatMap>> DegeneracyTable::degeneracy(const Diagram<2>& d) const {
  const auto& list = presentations(d.arrow);
  for (int i = 0; i < static_cast<int>(list.size()); ++i)
    if (auto c = factor(list[static_cast<std::size_t>(i)], d.attach)) return std::make_pair(i, std::move(*c));
  return std::nullopt;
}

std::vector<std::string> canonicity_violations(const DegeneracyTable& t, const MarkedObject<2>& m, bool closure,
                                               long long budget) {
  const auto& fam = t.family();
  auto errs = marking_violations(fam, m);
  if (!errs.empty()) return errs;
  for (const auto& [key, fil] : m.marking) {
    PrecatMap d{fam[static_cast<std::size_t>(key.first)].map.src, m.obj, key.second};
    for (const auto& pr : t.presentations(key.first)) {
      auto dp = t.factor(pr, d);
      if (!dp) continue;
      const std::string where = fam[static_cast<std::size_t>(key.first)].id + " along " + op_string(pr.sigma);
      if (pr.parent >= 0) {
        auto it = m.marking.find(DiagramKey<2>{pr.parent, dp->img});
        if (it == m.marking.end()) errs.push_back("canonicity: parent of " + where + " is unmarked");
        else if (compose(it->second, pr.e_target).img != fil.img)
          errs.push_back("canonicity: filler of " + where + " is not inherited from its parent");
      } else if (compose(*dp, pr.e_target).img != fil.img) {
        errs.push_back("canonicity: filler of " + where + " is not the degenerate filler");
      }
    }
  }
  if (!closure) return errs;
  auto need = [&](int arrow, const PrecatMap& d, const std::string& what) {
    if (!m.marking.count(DiagramKey<2>{arrow, d.img}))
      errs.push_back("canonicity: degeneracy of " + what + " on " + fam[static_cast<std::size_t>(arrow)].id + " is unmarked");
  };
  for (int b = 0; b < static_cast<int>(fam.size()); ++b)
    for (const auto& pr : t.presentations(b)) {
      if (pr.parent >= 0) {
        for (const auto& [key, fil] : m.marking)
          if (key.first == pr.parent) need(b, compose(PrecatMap{pr.e.tgt, m.obj, key.second}, pr.e), "a marked diagram");
      } else {
        MapSearch<2> o;
        o.budget = budget;
        auto res = enumerate_maps<2>(
            pr.e.tgt, m.obj,
            [&](const PrecatMap& dp) {
              need(b, compose(dp, pr.e), "an identity");
              return true;
            },
            o);
        if (res.status == SearchStatus::BudgetExceeded) throw BudgetExceeded("canonicity_violations: budget exceeded");
      }
    }
  return errs;
}

RajCResult raj_c(const DegeneracyTable& t, const MarkedObject<2>& a, int dim_bound, long long budget) {
  auto errs = canonicity_violations(t, a, false, budget);
  if (!errs.empty()) throw StructuralError("raj_c: the marking is not canonical: " + errs.front());
  const auto& fam = t.family();
  SimpleStep<2> fresh;
  struct Inherit {
    Diagram<2> d;
    int pres;
    PrecatMap parent;
  };
  std::vector<Inherit> inh;
  for (auto& d : enumerate_diagrams<2>(a.obj, fam, dim_bound, budget)) {
    if (a.marking.count(key_of(d))) continue;
    if (auto deg = t.degeneracy(d)) inh.push_back(Inherit{std::move(d), deg->first, std::move(deg->second)});
    else fresh.push_back(StepEntry<2>{std::move(d), 1});
  }
  auto res = apply_simple<2>(a.obj, fam, fresh, "k" + std::to_string(a.obj->size()) + "c");
  RajCResult r;
  r.from_a = res.map;
  r.attached = static_cast<int>(fresh.size());
  r.inherited = static_cast<int>(inh.size());
  Marking<2> mu = extend_marking(a.marking, res.map);
  std::map<DiagramKey<2>, PrecatMap> fresh_fill;
  for (std::size_t e = 0; e < fresh.size(); ++e) {
    const auto& d = fresh[e].diagram;
    fresh_fill.emplace(key_of(d), res.fillers[e][0]);
    mu.emplace(DiagramKey<2>{d.arrow, compose(res.map, d.attach).img}, res.fillers[e][0]);
  }
  for (const auto& h : inh) {
    const auto& pr = t.presentations(h.d.arrow)[static_cast<std::size_t>(h.pres)];
    PrecatMap fil;
    if (pr.parent >= 0) {
      DiagramKey<2> pk{pr.parent, h.parent.img};
      PrecatMap pf;
      if (auto it = a.marking.find(pk); it != a.marking.end()) pf = compose(res.map, it->second);
      else if (auto jt = fresh_fill.find(pk); jt != fresh_fill.end()) pf = jt->second;
      else throw StructuralError("raj_c: the parent of a degenerate diagram was not enumerated");
      fil = compose(pf, pr.e_target);
    } else {
      fil = compose(res.map, compose(h.parent, pr.e_target));
    }
    mu.emplace(DiagramKey<2>{h.d.arrow, compose(res.map, h.d.attach).img}, std::move(fil));
  }
  r.out = MarkedObject<2>{res.obj, std::move(mu)};
  r.step = std::move(fresh);
  r.result = std::move(res);
  return r;
}

CatCResult cat_c(const DegeneracyTable& t, const PrecatPtr& a, int rounds, int dim_bound, long long budget) {
  CatCResult c;
  c.out = MarkedObject<2>{a, {}};
  c.from_a = identity_map<2>(a);
  c.plan = empty_plan<2>(a, t.family());
  c.markings.emplace_back();
  for (int r = 0; r < rounds; ++r) {
    RajCResult s = raj_c(t, c.out, dim_bound, budget);
    c.from_a = compose(s.from_a, c.from_a);
    c.out = std::move(s.out);
    c.plan.stages.push_back(s.result.obj);
    c.plan.steps.push_back(std::move(s.step));
    c.plan.results.push_back(std::move(s.result));
    c.markings.push_back(c.out.marking);
    c.attached.push_back(s.attached);
    if (s.attached == 0 && s.inherited == 0) {
      c.saturated = true;
      break;
    }
  }
  return c;
}

namespace {

using StagePlan = std::function<Plan<2>(const PrecatPtr&)>;

IntersectionReport intersection_report(const PrecatPtr& c, const std::vector<int>& a_gens,
                                       const std::vector<int>& b_gens, const StagePlan& build) {
  Sub<2> sa = subobject<2>(c, a_gens), sb = subobject<2>(c, b_gens);
  std::vector<int> both;
  for (int g = 0; g < c->size(); ++g)
    if (sa.old_to_new[static_cast<std::size_t>(g)] >= 0 && sb.old_to_new[static_cast<std::size_t>(g)] >= 0) both.push_back(g);
  Sub<2> sab = subobject<2>(c, both);
  Plan<2> pc = build(c);
  IntersectionReport rep;
  std::vector<std::vector<Map<2>>> maps;
  for (const Sub<2>* s : {&sa, &sb, &sab}) {
    try {
      maps.push_back(induced_stage_maps<2>(build(s->obj), pc, s->incl));
    } catch (const StructuralError&) {
      rep.stage_ok.assign(1, false);
      return rep;
    }
  }
  std::size_t n = std::min({maps[0].size(), maps[1].size(), maps[2].size()});
  for (std::size_t j = 0; j < n; ++j) {
    auto ia = image_gens(maps[0][j]), ib = image_gens(maps[1][j]), iab = image_gens(maps[2][j]);
    std::vector<int> meet;
    std::set_intersection(ia.begin(), ia.end(), ib.begin(), ib.end(), std::back_inserter(meet));
    rep.stage_ok.push_back(meet == iab && is_mono(maps[0][j]) && is_mono(maps[1][j]) && is_mono(maps[2][j]));
  }
  return rep;
}

}  // namespace

IntersectionReport cat_intersection(const PrecatPtr& c, const std::vector<int>& a_gens, const std::vector<int>& b_gens,
                                    const Family<2>& fam, int steps, int dim_bound, long long budget) {
  return intersection_report(c, a_gens, b_gens, [&](const PrecatPtr& x) {
    return e_phi_marked<2>(x, fam, steps, dim_bound, false, budget).plan;
  });
}

IntersectionReport cat_c_intersection(const PrecatPtr& c, const std::vector<int>& a_gens,
                                      const std::vector<int>& b_gens, const DegeneracyTable& t, int rounds,
                                      int dim_bound, long long budget) {
  // Saturation would end the plans at different lengths; pad with empty rounds.
  return intersection_report(c, a_gens, b_gens, [&](const PrecatPtr& x) {
    Plan<2> p = cat_c(t, x, rounds, dim_bound, budget).plan;
    while (p.length() < rounds) append_step<2>(p, {});
    return p;
  });
}

}  // namespace segalkit
