#pragma once
// JSON files for simplicial sets, precategories, maps and plans. Output is
// canonical: keys sorted, generators sorted by id, so write(read(f)) == f for
// canonical f.
//
//   object: {"kind": "sset" | "precat",
//            "generators": [{"id", "deg": [p] | [p, q], "faces": [[...], ...]}]}
//   element: "id" when nondegenerate, else {"gen": "id", "s": [[values], ...]}
//            with one surjection per direction, listed by values on 0..n.
//   map:    {"kind": "ssetmap" | "precatmap", "source", "target", "images": {id: element}}
//   plan:   {"kind": "plan", "family": [arrow ids], "steps": [[{"arrow", "mult", "attach": {id: element}}]]}

#include <string>
#include <vector>

#include "json.hpp"
#include "segalkit/plan.hpp"

namespace segalkit {

using Json = nlohmann::json;

// Malformed input; the message carries the JSON path or parse position.
struct IoError : StructuralError {
  using StructuralError::StructuralError;
};

Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);
std::string canonical_dump(const Json& j);

template <int K>
Json to_json(const Presented<K>& x);
template <int K>
Json elem_to_json(const Presented<K>& x, const Elem<K>& e);
// check: run simplicial identities (and discreteness for precategories).
template <int K>
Ptr<K> object_from_json(const Json& j, bool check = true);
template <int K>
Elem<K> elem_from_json(const Presented<K>& x, const Json& j, const std::string& where);

template <int K>
Json map_to_json(const Map<K>& f);
template <int K>
Map<K> map_from_json(const Json& j);

std::string json_kind(const Json& j);
// Every violated invariant of the file's kind; empty when valid.
std::vector<std::string> validate(const Json& j);

// Arrow ids as produced by the generating families: Boit_m(gk),
// Attach_n(gk), EquivTheta(gk), ObjInclusion.
GeneratingArrow arrow_from_id(const std::string& id);

struct PlanFile {
  std::vector<std::string> family;
  Family<2> arrows;
  // Each step attaches into the stage before it, by source generator ids.
  std::vector<Json> steps;
};
PlanFile plan_from_json(const Json& j);
// Applies the file's steps to x.
Plan<2> run_plan_file(const PrecatPtr& x, const PlanFile& p);
Json plan_to_json(const Plan<2>& p);

}  // namespace segalkit
