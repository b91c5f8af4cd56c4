#pragma once
// The Θ bifunctor, the generating arrows Boit_m(g) and Attach_n(g), the
// generating families of the Segal datum, and the hom transposition
// Hom(Δ[m]ΘC, A) = ⊔_t Hom(C, A_m(t)).

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "segalkit/precat.hpp"

namespace segalkit {

// XΘY: objects are the vertices of X; a generator (x|y) in bidegree (p,q)
// for every nondegenerate x in X_p with p >= 1 and nondegenerate y in Y_q.
struct Theta {
  SSetPtr x, y;
  PrecatPtr obj;
  std::vector<int> vertex;                 // X generator -> object (-1 above dimension 0)
  std::map<std::pair<int, int>, int> cell; // (X generator, Y generator) -> generator

  // The element of XΘY in bidegree (n, r) given by xe in X_n and ye in Y_r.
  BElem element(const SElem& xe, const SElem& ye) const;
};
Theta theta(const SSetPtr& x, const SSetPtr& y);
PrecatMap theta_map(const Theta& from, const Theta& to, const SSetMap& f, const SSetMap& g);
// The Θ indexing of an existing object built as XΘY (for instance the
// target of a generating arrow); throws when the generators do not match.
Theta theta_view(const SSetPtr& x, const SSetPtr& y, const PrecatPtr& obj);

enum class ArrowTag { Attach, Boit, EquivTheta, ObjInclusion };
const char* arrow_tag_name(ArrowTag t);

struct GeneratingArrow {
  ArrowTag tag = ArrowTag::ObjInclusion;
  int m = 0;  // m for Boit, n for Attach, 1 for EquivTheta
  int k = -1; // g = ∂Δ[k] -> Δ[k]; -1 for ObjInclusion
  std::string id;
  PrecatMap map;
};

// B(m,g) = Υ(m)ΘF ⊔_{Υ(m)ΘE} Δ[m]ΘE -> Δ[m]ΘF for g : E -> F.
GeneratingArrow boit(int m, const SSetMap& g);
// Δ[n]ΘX ⊔_{∂Δ[n]ΘX} ∂Δ[n]ΘY -> Δ[n]ΘY for a mono g : X -> Y.
GeneratingArrow attach(int n, const SSetMap& g);
GeneratingArrow equiv_theta(const SSetMap& g);
GeneratingArrow obj_inclusion();

struct GeneratingFamilies {
  std::vector<GeneratingArrow> fg1_type1;  // Δ[m]Θf for f in the first family; empty for the Segal datum
  std::vector<GeneratingArrow> fg1;        // type 2: Boit_m(g_k)
  std::vector<GeneratingArrow> fg2;
  std::vector<GeneratingArrow> i;
};
// m ranges over 2..max_m (1..max_m for Attach) and k over 0..max_k.
GeneratingFamilies generating_families(int max_m, int max_k);

// Objects ranked by their names read as integers (falls back to index order).
std::map<int, int> numeric_order(const Precat& a);

// Arrows f, g are isomorphic when there are isos s, t with t f = g s.
bool arrows_isomorphic(const PrecatMap& f, const PrecatMap& g);

struct Transposed {
  std::vector<int> tuple;
  SSetMap map;  // C -> A_m(tuple)
};
// φ : Δ[m]ΘC -> A to (t, C -> A_m(t)); dc = theta(Δ[m], C).
Transposed transpose(const Theta& dc, const Level& lm, const PrecatMap& phi);
PrecatMap untranspose(const Theta& dc, const PrecatPtr& a, const Level& lm, const std::vector<int>& t, const SSetMap& psi);

struct HomTransposeReport {
  long long direct = 0;         // |Hom(Δ[m]ΘC, A)|
  long long by_fibers = 0;      // Σ_t |Hom(C, A_m(t))|
  long long constant_maps = 0;  // maps C -> A_m with constant vertex tuples
  long long round_trip_failures = 0;
  long long spine_direct = 0;   // |Hom(Υ(m)ΘC, A)|
  long long spine_by_fibers = 0;  // Σ_t |Hom(C, A_1(t_0,t_1) × ... × A_1(t_{m-1},t_m))|
  long long compat_failures = 0;  // part 3: compatibility with i_mΘC and the Segal map
  bool ok() const {
    return direct == by_fibers && direct == constant_maps && round_trip_failures == 0 && spine_direct == spine_by_fibers &&
           compat_failures == 0;
  }
};
// Throws BudgetExceeded when any enumeration exceeds the budget.
HomTransposeReport hom_transpose(int m, const SSetPtr& c, const PrecatPtr& a, long long budget = -1);

}  // namespace segalkit
