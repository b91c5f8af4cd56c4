#include "segalkit/io.hpp"

#include <algorithm>
#include <fstream>
#include <regex>
#include <sstream>

namespace segalkit {

namespace {

template <int K>
constexpr const char* object_kind() {
  return K == 1 ? "sset" : "precat";
}
template <int K>
constexpr const char* map_kind() {
  return K == 1 ? "ssetmap" : "precatmap";
}

[[noreturn]] void bad(const std::string& where, const std::string& what) { throw IoError(where + ": " + what); }

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) bad(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) bad(where, std::string("missing \"") + key + "\"");
  return *it;
}

int as_int(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) bad(where, "expected an integer");
  return j.get<int>();
}

std::string as_string(const Json& j, const std::string& where) {
  if (!j.is_string()) bad(where, "expected a string");
  return j.get<std::string>();
}

const Json& as_array(const Json& j, const std::string& where) {
  if (!j.is_array()) bad(where, "expected an array");
  return j;
}

template <int K>
std::vector<int> sorted_by_name(const Presented<K>& x) {
  std::vector<int> order(static_cast<std::size_t>(x.size()));
  for (int g = 0; g < x.size(); ++g) order[static_cast<std::size_t>(g)] = g;
  std::sort(order.begin(), order.end(), [&](int a, int b) { return x.gen(a).name < x.gen(b).name; });
  return order;
}

}  // namespace

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path + ": cannot open");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw IoError(path + ": parse error at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

std::string canonical_dump(const Json& j) { return j.dump(2) + "\n"; }

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw IoError(path + ": cannot write");
  out << canonical_dump(j);
}

std::string json_kind(const Json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) throw IoError("$: missing \"kind\"");
  return j["kind"].get<std::string>();
}

template <int K>
Json elem_to_json(const Presented<K>& x, const Elem<K>& e) {
  const std::string& id = x.gen(e.gen).name;
  if (e.nondegenerate()) return id;
  Json s = Json::array();
  for (const Op& o : e.eta) {
    Json vals = Json::array();
    for (int i = 0; i <= o.src; ++i) vals.push_back(o(i));
    s.push_back(vals);
  }
  return Json{{"gen", id}, {"s", s}};
}

template <int K>
Elem<K> elem_from_json(const Presented<K>& x, const Json& j, const std::string& where) {
  auto lookup = [&](const std::string& id) {
    int g = x.find(id);
    if (g < 0) bad(where, "unknown generator \"" + id + "\"");
    return g;
  };
  if (j.is_string()) return x.gen_elem(lookup(j.get<std::string>()));
  Elem<K> e;
  e.gen = lookup(as_string(field(j, "gen", where), where + ".gen"));
  const Json& s = as_array(field(j, "s", where), where + ".s");
  if (s.size() != static_cast<std::size_t>(K)) bad(where + ".s", "expected one surjection per direction");
  for (int d = 0; d < K; ++d) {
    std::string w = where + ".s[" + std::to_string(d) + "]";
    const Json& vals = as_array(s[static_cast<std::size_t>(d)], w);
    std::vector<int> v;
    for (const Json& t : vals) v.push_back(as_int(t, w));
    int tgt = x.gen(e.gen).deg[static_cast<std::size_t>(d)];
    if (v.empty() || static_cast<int>(v.size()) > kMaxDim + 1) bad(w, "bad length");
    for (std::size_t i = 0; i < v.size(); ++i)
      if (v[i] < 0 || v[i] > tgt || (i > 0 && v[i] < v[i - 1])) bad(w, "not a monotone map onto the generator's degree");
    if (v.front() != 0 || v.back() != tgt) bad(w, "not surjective");
    for (std::size_t i = 1; i < v.size(); ++i)
      if (v[i] > v[i - 1] + 1) bad(w, "not surjective");
    e.eta[static_cast<std::size_t>(d)] = make_op(tgt, v);
  }
  return e;
}

template <int K>
Json to_json(const Presented<K>& x) {
  Json gens = Json::array();
  for (int g : sorted_by_name(x)) {
    const auto& gen = x.gen(g);
    Json deg = Json::array(), faces = Json::array();
    for (int d = 0; d < K; ++d) {
      deg.push_back(gen.deg[static_cast<std::size_t>(d)]);
      Json fs = Json::array();
      for (const auto& f : gen.faces[static_cast<std::size_t>(d)]) fs.push_back(elem_to_json(x, f));
      faces.push_back(fs);
    }
    gens.push_back(Json{{"id", gen.name}, {"deg", deg}, {"faces", faces}});
  }
  return Json{{"kind", object_kind<K>()}, {"generators", gens}};
}

namespace {

template <int K>
Presented<K> parse_object(const Json& j) {
  if (json_kind(j) != object_kind<K>()) bad("$.kind", std::string("expected \"") + object_kind<K>() + "\"");
  const Json& gens = as_array(field(j, "generators", "$"), "$.generators");
  Presented<K> x;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    std::string w = "$.generators[" + std::to_string(i) + "]";
    std::string id = as_string(field(gens[i], "id", w), w + ".id");
    if (x.find(id) >= 0) bad(w + ".id", "duplicate generator \"" + id + "\"");
    const Json& deg = as_array(field(gens[i], "deg", w), w + ".deg");
    if (deg.size() != static_cast<std::size_t>(K)) bad(w + ".deg", "wrong number of directions");
    Deg<K> d{};
    for (int k = 0; k < K; ++k) {
      d[static_cast<std::size_t>(k)] = as_int(deg[static_cast<std::size_t>(k)], w + ".deg");
      if (d[static_cast<std::size_t>(k)] < 0 || d[static_cast<std::size_t>(k)] > kMaxDim) bad(w + ".deg", "degree out of range");
    }
    x.add(id, d);
  }
  for (std::size_t i = 0; i < gens.size(); ++i) {
    std::string w = "$.generators[" + std::to_string(i) + "].faces";
    const Json& faces = as_array(field(gens[i], "faces", w), w);
    if (faces.size() != static_cast<std::size_t>(K)) bad(w, "expected one face list per direction");
    for (int d = 0; d < K; ++d) {
      std::string wd = w + "[" + std::to_string(d) + "]";
      std::vector<Elem<K>> fs;
      const Json& list = as_array(faces[static_cast<std::size_t>(d)], wd);
      for (std::size_t k = 0; k < list.size(); ++k) fs.push_back(elem_from_json(x, list[k], wd + "[" + std::to_string(k) + "]"));
      x.set_faces(static_cast<int>(i), d, std::move(fs));
    }
  }
  return x;
}

std::vector<std::string> object_violations(const Json& j, bool precat) {
  try {
    if (precat) {
      Precat a = parse_object<2>(j);
      a.finalize(false);
      return precat_violations(a);
    }
    SSet x = parse_object<1>(j);
    x.finalize(false);
    return x.check_identities();
  } catch (const StructuralError& e) {
    return {e.what()};
  }
}

}  // namespace

template <int K>
Ptr<K> object_from_json(const Json& j, bool check) {
  Presented<K> x = parse_object<K>(j);
  x.finalize(false);
  if (check) {
    std::vector<std::string> errs;
    if constexpr (K == 2) errs = precat_violations(x);
    else errs = x.check_identities();
    if (!errs.empty()) throw StructuralError(errs.front());
  }
  return share(std::move(x));
}

template <int K>
Json map_to_json(const Map<K>& f) {
  Json images = Json::object();
  for (int g = 0; g < f.src->size(); ++g) images[f.src->gen(g).name] = elem_to_json(*f.tgt, f.img[static_cast<std::size_t>(g)]);
  return Json{{"kind", map_kind<K>()}, {"source", to_json(*f.src)}, {"target", to_json(*f.tgt)}, {"images", images}};
}

namespace {

template <int K>
std::vector<Elem<K>> parse_images(const Ptr<K>& src, const Ptr<K>& tgt, const Json& images, const std::string& where) {
  if (!images.is_object()) bad(where, "expected an object");
  std::vector<Elem<K>> img(static_cast<std::size_t>(src->size()));
  for (int g = 0; g < src->size(); ++g) {
    const std::string& id = src->gen(g).name;
    auto it = images.find(id);
    if (it == images.end()) bad(where, "no image for \"" + id + "\"");
    img[static_cast<std::size_t>(g)] = elem_from_json(*tgt, *it, where + "." + id);
  }
  for (const auto& [id, _] : images.items())
    if (src->find(id) < 0) bad(where, "image given for unknown generator \"" + id + "\"");
  return img;
}

}  // namespace

template <int K>
Map<K> map_from_json(const Json& j) {
  if (json_kind(j) != map_kind<K>()) bad("$.kind", std::string("expected \"") + map_kind<K>() + "\"");
  auto src = object_from_json<K>(field(j, "source", "$"));
  auto tgt = object_from_json<K>(field(j, "target", "$"));
  return make_map<K>(src, tgt, parse_images<K>(src, tgt, field(j, "images", "$"), "$.images"));
}

GeneratingArrow arrow_from_id(const std::string& id) {
  static const std::regex pat(R"((Boit|Attach)_(\d)\(g(\d)\)|EquivTheta\(g(\d)\)|ObjInclusion)");
  std::smatch m;
  if (!std::regex_match(id, m, pat)) throw IoError("unknown arrow id \"" + id + "\"");
  if (id == "ObjInclusion") return obj_inclusion();
  if (m[4].matched) return equiv_theta(boundary_inclusion(std::stoi(m[4].str())));
  int n = std::stoi(m[2].str()), k = std::stoi(m[3].str());
  GeneratingArrow a = m[1].str() == "Boit" ? boit(n, boundary_inclusion(k)) : attach(n, boundary_inclusion(k));
  if (a.id != id) throw IoError("arrow id \"" + id + "\" is not canonical");
  return a;
}

PlanFile plan_from_json(const Json& j) {
  if (json_kind(j) != "plan") bad("$.kind", "expected \"plan\"");
  PlanFile p;
  const Json& fam = as_array(field(j, "family", "$"), "$.family");
  for (std::size_t i = 0; i < fam.size(); ++i) {
    p.family.push_back(as_string(fam[i], "$.family[" + std::to_string(i) + "]"));
    p.arrows.push_back(as_arrow(arrow_from_id(p.family.back())));
  }
  if (j.contains("steps")) {
    const Json& steps = as_array(j["steps"], "$.steps");
    for (std::size_t s = 0; s < steps.size(); ++s) {
      std::string w = "$.steps[" + std::to_string(s) + "]";
      const Json& entries = as_array(steps[s], w);
      for (std::size_t e = 0; e < entries.size(); ++e) {
        std::string we = w + "[" + std::to_string(e) + "]";
        std::string arrow = as_string(field(entries[e], "arrow", we), we + ".arrow");
        if (std::find(p.family.begin(), p.family.end(), arrow) == p.family.end()) bad(we + ".arrow", "not in the family");
        if (entries[e].contains("mult") && as_int(entries[e]["mult"], we + ".mult") < 1) bad(we + ".mult", "must be positive");
        field(entries[e], "attach", we);
      }
      p.steps.push_back(steps[s]);
    }
  }
  return p;
}

Plan<2> run_plan_file(const PrecatPtr& x, const PlanFile& f) {
  Plan<2> p = empty_plan(x, f.arrows);
  for (std::size_t s = 0; s < f.steps.size(); ++s) {
    SimpleStep<2> step;
    for (std::size_t e = 0; e < f.steps[s].size(); ++e) {
      const Json& entry = f.steps[s][e];
      std::string w = "$.steps[" + std::to_string(s) + "][" + std::to_string(e) + "]";
      int a = static_cast<int>(std::find(f.family.begin(), f.family.end(), entry["arrow"].get<std::string>()) - f.family.begin());
      const PrecatPtr& src = f.arrows[static_cast<std::size_t>(a)].map.src;
      auto img = parse_images<2>(src, p.result(), entry["attach"], w + ".attach");
      int mult = entry.contains("mult") ? entry["mult"].get<int>() : 1;
      step.push_back({Diagram<2>{a, make_map<2>(src, p.result(), std::move(img))}, mult});
    }
    append_step(p, std::move(step));
  }
  return p;
}

Json plan_to_json(const Plan<2>& p) {
  Json fam = Json::array(), steps = Json::array();
  for (const auto& a : p.family) fam.push_back(a.id);
  for (std::size_t s = 0; s < p.steps.size(); ++s) {
    Json entries = Json::array();
    for (const auto& e : p.steps[s]) {
      Json attach = Json::object();
      const auto& f = e.diagram.attach;
      for (int g = 0; g < f.src->size(); ++g) attach[f.src->gen(g).name] = elem_to_json(*f.tgt, f.img[static_cast<std::size_t>(g)]);
      entries.push_back(Json{{"arrow", p.family[static_cast<std::size_t>(e.diagram.arrow)].id}, {"mult", e.mult}, {"attach", attach}});
    }
    steps.push_back(entries);
  }
  return Json{{"kind", "plan"}, {"family", fam}, {"steps", steps}, {"source", to_json(*p.source())}, {"result", to_json(*p.result())}};
}

std::vector<std::string> validate(const Json& j) {
  std::string kind;
  try {
    kind = json_kind(j);
  } catch (const IoError& e) {
    return {e.what()};
  }
  if (kind == "sset" || kind == "precat") return object_violations(j, kind == "precat");
  try {
    if (kind == "ssetmap" || kind == "precatmap") {
      bool two = kind == "precatmap";
      for (const char* end : {"source", "target"}) {
        auto errs = object_violations(field(j, end, "$"), two);
        if (!errs.empty()) {
          for (auto& e : errs) e = std::string(end) + ": " + e;
          return errs;
        }
      }
      auto check = [&](auto tag) {
        constexpr int K = decltype(tag)::value;
        auto src = object_from_json<K>(j["source"]);
        auto tgt = object_from_json<K>(j["target"]);
        Map<K> f{src, tgt, parse_images<K>(src, tgt, field(j, "images", "$"), "$.images")};
        return f.check();
      };
      return two ? check(std::integral_constant<int, 2>{}) : check(std::integral_constant<int, 1>{});
    }
    if (kind == "plan") {
      PlanFile p = plan_from_json(j);
      if (j.contains("source")) {
        auto errs = object_violations(j["source"], true);
        if (!errs.empty()) return errs;
        run_plan_file(object_from_json<2>(j["source"]), p);
      }
      return {};
    }
  } catch (const StructuralError& e) {
    return {e.what()};
  }
  return {"$.kind: unknown kind \"" + kind + "\""};
}

template Json to_json<1>(const Presented<1>&);
template Json to_json<2>(const Presented<2>&);
template Json elem_to_json<1>(const Presented<1>&, const Elem<1>&);
template Json elem_to_json<2>(const Presented<2>&, const Elem<2>&);
template Ptr<1> object_from_json<1>(const Json&, bool);
template Ptr<2> object_from_json<2>(const Json&, bool);
template Elem<1> elem_from_json<1>(const Presented<1>&, const Json&, const std::string&);
template Elem<2> elem_from_json<2>(const Presented<2>&, const Json&, const std::string&);
template Json map_to_json<1>(const Map<1>&);
template Json map_to_json<2>(const Map<2>&);
template Map<1> map_from_json<1>(const Json&);
template Map<2> map_from_json<2>(const Json&);

}  // namespace segalkit
