#pragma once
// Generator-presented presheaves on Δ^K (K = 1: simplicial sets, K = 2:
// bisimplicial sets with direction 0 external and direction 1 internal).
// Elements are kept in Eilenberg-Zilber normal form: one surjection per
// direction applied to a nondegenerate generator.

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "segalkit/delta.hpp"

namespace segalkit {

struct StructuralError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Node budget for exhaustive searches; SEGALKIT_BUDGET overrides the default.
long long default_budget();

template <int K>
using Deg = std::array<int, K>;

template <int K>
struct Elem {
  std::array<Op, K> eta{};
  int gen = -1;

  Deg<K> deg() const {
    Deg<K> d{};
    for (int i = 0; i < K; ++i) d[static_cast<std::size_t>(i)] = eta[static_cast<std::size_t>(i)].src;
    return d;
  }
  bool nondegenerate() const {
    for (const Op& o : eta)
      if (o.src != o.tgt) return false;
    return true;
  }
  bool operator==(const Elem&) const = default;
  auto operator<=>(const Elem&) const = default;
};

template <int K>
struct ElemHash {
  std::size_t operator()(const Elem<K>& e) const noexcept {
    std::size_t h = static_cast<std::size_t>(e.gen) * 0x9e3779b97f4a7c15ULL;
    OpHash oh;
    for (const Op& o : e.eta) h = (h ^ oh(o)) * 1099511628211ULL;
    return h;
  }
};

template <int K>
int total_degree(const Deg<K>& d) {
  int s = 0;
  for (int x : d) s += x;
  return s;
}

template <int K>
class Presented {
 public:
  struct Gen {
    std::string name;
    Deg<K> deg{};
    std::array<std::vector<Elem<K>>, K> faces;
  };

  Presented() = default;
  Presented(const Presented& o);
  Presented& operator=(const Presented& o);
  Presented(Presented&&) noexcept = default;
  Presented& operator=(Presented&&) noexcept = default;

  int add(std::string name, Deg<K> deg);
  void set_faces(int g, int dir, std::vector<Elem<K>> faces);
  // Builds operator tables for generators added since the last call and
  // optionally checks face identities; throws StructuralError on failure.
  void finalize(bool check = true);
  std::vector<std::string> check_identities() const;

  int size() const { return static_cast<int>(gens_.size()); }
  const Gen& gen(int g) const { return gens_[static_cast<std::size_t>(g)]; }
  const std::vector<Gen>& gens() const { return gens_; }
  int find(std::string_view name) const;
  int index_of(std::string_view name) const;
  Deg<K> max_deg() const;
  int max_total_degree() const;

  Elem<K> gen_elem(int g) const;
  // X(α) applied in direction dir.
  Elem<K> act(int dir, const Op& alpha, const Elem<K>& e) const;
  Elem<K> face(int dir, int i, const Elem<K>& e) const;
  Elem<K> degeneracy(int dir, int j, const Elem<K>& e) const;
  // Precompose each direction's degeneracy with a surjection.
  Elem<K> degenerate(const std::array<Op, K>& s, const Elem<K>& e) const;
  // Full presheaf action: one monotone map per direction.
  Elem<K> act_all(const std::array<Op, K>& ops, const Elem<K>& e) const;

  // All elements of a bidegree, ordered by generator then by surjections.
  const std::vector<Elem<K>>& elements(const Deg<K>& b) const;
  // Elements of bidegree b whose d_i face in direction dir is f; needs
  // 0 <= i <= b[dir] and b[dir] >= 1.
  const std::vector<Elem<K>>& with_face(const Deg<K>& b, int dir, const Elem<K>& f, int i = 0) const;

  std::string label(const Elem<K>& e) const;

 private:
  using Table = std::vector<Elem<K>>;
  std::vector<Gen> gens_;
  std::unordered_map<std::string, int> index_;
  // tables_[g][dir][mask]: the face of g along mono_from_mask(deg, mask).
  std::vector<std::array<Table, K>> tables_;

  Elem<K> mono_face(int g, int dir, unsigned mask) const;

  struct Caches {
    std::mutex mu;
    std::map<Deg<K>, std::vector<Elem<K>>> elems;
    std::map<std::tuple<Deg<K>, int, int>, std::unordered_map<Elem<K>, std::vector<Elem<K>>, ElemHash<K>>> by_face;
  };
  mutable std::unique_ptr<Caches> caches_ = std::make_unique<Caches>();
};

template <int K>
using Ptr = std::shared_ptr<const Presented<K>>;

template <int K>
Ptr<K> share(Presented<K> p) {
  return std::make_shared<const Presented<K>>(std::move(p));
}

template <int K>
struct Map {
  Ptr<K> src;
  Ptr<K> tgt;
  std::vector<Elem<K>> img;

  Elem<K> operator()(const Elem<K>& e) const { return tgt->degenerate(e.eta, img[static_cast<std::size_t>(e.gen)]); }
  // Violations of shape and face compatibility; empty when the map is valid.
  std::vector<std::string> check() const;
  bool operator==(const Map& o) const { return src == o.src && tgt == o.tgt && img == o.img; }
};

template <int K>
Map<K> compose(const Map<K>& g, const Map<K>& f);
template <int K>
Map<K> identity_map(const Ptr<K>& x);
// Levelwise injective: generators go to distinct nondegenerate generators.
template <int K>
bool is_mono(const Map<K>& f);
template <int K>
bool is_epi(const Map<K>& f);
template <int K>
bool is_iso(const Map<K>& f);
template <int K>
Map<K> inverse_of_iso(const Map<K>& f);
// Map to the same target built from explicit images; validated.
template <int K>
Map<K> make_map(const Ptr<K>& src, const Ptr<K>& tgt, std::vector<Elem<K>> img);

template <int K>
Ptr<K> empty_object();
template <int K>
Ptr<K> point_object(const std::string& name = "*");
template <int K>
Map<K> empty_map(const Ptr<K>& tgt);
template <int K>
Map<K> to_point(const Ptr<K>& src, const Ptr<K>& point);

template <int K>
struct Coproduct {
  Ptr<K> obj;
  std::vector<Map<K>> inj;
};
template <int K>
Coproduct<K> coproduct(const std::vector<Ptr<K>>& parts, const std::vector<std::string>& prefixes = {});
template <int K>
Map<K> copair(const Coproduct<K>& c, const std::vector<Map<K>>& maps, const Ptr<K>& tgt);

// Quotient of P by the congruence generated by the relation pairs. rank
// (optional, per generator) orders the choice of class representatives.
template <int K>
struct Quotient {
  Ptr<K> obj;
  Map<K> proj;
  std::vector<int> rep;  // generator of P representing each new generator
};
template <int K>
Quotient<K> quotient(const Ptr<K>& p, const std::vector<std::pair<Elem<K>, Elem<K>>>& rel,
                     const std::vector<int>& rank = {});

template <int K>
struct Pushout {
  Ptr<K> obj;
  Map<K> inl;
  Map<K> inr;
  std::vector<int> rep_side;   // 0 = left, 1 = right
  std::vector<int> rep_index;  // generator index on that side
};
// Pushout of B <-f- A -g-> C; right-hand generator names get the prefix.
template <int K>
Pushout<K> pushout(const Map<K>& f, const Map<K>& g, const std::string& right_prefix = {});
template <int K>
Map<K> pushout_universal(const Pushout<K>& po, const Map<K>& u, const Map<K>& v);

template <int K>
class Product {
 public:
  Product(Ptr<K> a, Ptr<K> b);
  Ptr<K> obj;
  Map<K> pr1;
  Map<K> pr2;
  Elem<K> pair(const Elem<K>& x, const Elem<K>& y) const;

 private:
  Ptr<K> a_, b_;
  std::map<std::tuple<int, int, std::array<Op, K>, std::array<Op, K>>, int> index_;
};
template <int K>
Map<K> product_map(const Product<K>& from, const Product<K>& to, const Map<K>& f, const Map<K>& g);

// Sub-presentation generated by a set of generators (closed under faces).
template <int K>
struct Sub {
  Ptr<K> obj;
  Map<K> incl;
  std::vector<int> old_to_new;  // -1 outside
};
template <int K>
Sub<K> subobject(const Ptr<K>& x, const std::vector<int>& gens);
template <int K>
Sub<K> image(const Map<K>& f);
// f restricted to subobjects of its source and target; throws when the image
// leaves the target subobject.
template <int K>
Map<K> restrict_map(const Map<K>& f, const Sub<K>& from, const Sub<K>& to);

enum class SearchStatus { Complete, Stopped, BudgetExceeded };

template <int K>
struct MapSearch {
  std::vector<std::optional<Elem<K>>> fixed;                 // per source generator
  std::function<bool(int, const Elem<K>&)> allow;            // candidate filter
  bool injective_gens = false;                               // generators to distinct nondegenerate generators
  long long budget = -1;                                     // -1: default_budget()
};

template <int K>
struct SearchOutcome {
  SearchStatus status = SearchStatus::Complete;
  long long nodes = 0;
};

// Calls visit on every map src -> tgt satisfying the constraints; visit
// returns false to stop.
template <int K>
SearchOutcome<K> enumerate_maps(const Ptr<K>& src, const Ptr<K>& tgt, const std::function<bool(const Map<K>&)>& visit,
                                const MapSearch<K>& opts = {});
// Count, or nullopt when the budget runs out.
template <int K>
std::optional<long long> count_maps(const Ptr<K>& src, const Ptr<K>& tgt, const MapSearch<K>& opts = {});
template <int K>
std::optional<Map<K>> find_map(const Ptr<K>& src, const Ptr<K>& tgt, const MapSearch<K>& opts = {});
template <int K>
std::optional<Map<K>> find_iso(const Ptr<K>& a, const Ptr<K>& b, const MapSearch<K>& opts = {});
// Generator counts per degree, a cheap iso invariant.
template <int K>
std::map<Deg<K>, int> census(const Presented<K>& x);

using SSet = Presented<1>;
using SSetPtr = Ptr<1>;
using SSetMap = Map<1>;
using SElem = Elem<1>;
using Precat = Presented<2>;
using PrecatPtr = Ptr<2>;
using PrecatMap = Map<2>;
using BElem = Elem<2>;

}  // namespace segalkit
