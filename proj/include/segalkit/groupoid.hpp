#pragma once
// Truncations of Segal categories, finite categories and their nerves,
// Segal groupoids, proto-groupoids and the intervals Ī and J̄^pre.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "segalkit/plan.hpp"

namespace segalkit {

struct FiniteCategory {
  struct Morphism {
    std::string name;
    int src = 0;
    int tgt = 0;
  };
  std::vector<std::string> objects;
  std::vector<Morphism> morphisms;
  std::vector<int> identity;           // per object
  std::vector<std::vector<int>> comp;  // comp[g][f] = g∘f, -1 unless tgt(f) = src(g)

  int size() const { return static_cast<int>(morphisms.size()); }
};
// Unit, associativity and typing of the composition table.
std::vector<std::string> category_violations(const FiniteCategory& c);

// 0 < 1 < ... < n.
FiniteCategory poset_chain(int n);
// ℤ/n as a one-object groupoid.
FiniteCategory cyclic_group(int n);
// Two objects, one isomorphism between them.
FiniteCategory walking_iso();

// An isomorphism of categories: object and morphism bijections.
struct CategoryIso {
  std::vector<int> objects;
  std::vector<int> morphisms;
};
std::optional<CategoryIso> find_category_iso(const FiniteCategory& c, const FiniteCategory& d);
// d relabeled along the iso, so that its table can be compared with c's.
FiniteCategory relabel(const FiniteCategory& d, const CategoryIso& iso);
bool same_table(const FiniteCategory& c, const FiniteCategory& d);

// Nondegenerate simplices are strings of non-identity composable morphisms
// of length ≤ max_dim.
SSetPtr nerve(const FiniteCategory& c, int max_dim);
PrecatPtr nerve_precat(const FiniteCategory& c, int max_dim);

// Finite Ī: the nerve of the walking isomorphism below dimension t, plus the
// one alternating t-simplex starting at 0. Contractible for every t ≥ 1. The
// swap 0 <-> 1 is not an automorphism: a finite contractible model with a free
// involution does not exist.
constexpr int kIntervalTruncation = 4;
SSetPtr ibar_sset(int truncation = kIntervalTruncation);
PrecatPtr build_ibar(int truncation = kIntervalTruncation);
// Points 0, 1; edges u : 0 -> 1, v : 1 -> 0; triangles T1 = (u, v) and
// T2 = (v, u); cells α, β ≅ Δ[1]ΘĪ gluing δ02(T1) to Id_0 and δ02(T2) to Id_1.
struct JPre {
  PrecatPtr obj;
  int u = -1, v = -1, t1 = -1, t2 = -1;  // generators
  PrecatMap alpha, beta;                 // Δ[1]ΘĪ -> J̄^pre
};
JPre build_jpre_parts(int truncation = kIntervalTruncation);
inline PrecatPtr build_jpre(int truncation = kIntervalTruncation) { return build_jpre_parts(truncation).obj; }

// Full sub-precategory on a set of objects.
Sub<2> full_subprecat(const PrecatPtr& a, const std::vector<int>& objs);

// τ₁ of a Segal category; objects follow objects(a). Throws StructuralError
// unless is_segal_category(a, max_level) is WE.
FiniteCategory tau1(const PrecatPtr& a, int max_level = 3);
bool is_iso_in(const FiniteCategory& c, int f);
// Classes of isomorphic objects, as indices into objects().
std::vector<std::vector<int>> tau0(const FiniteCategory& c);
std::vector<std::vector<int>> tau0(const PrecatPtr& a, int max_level = 3);

struct EquivalenceReport {
  bool essentially_surjective = false;
  struct Hom {
    int x, y;  // objects of the source
    Verdict verdict;
  };
  std::vector<Hom> homs;
  Verdict verdict = Verdict::Unknown;
};
EquivalenceReport is_equivalence_of_segal_categories(const PrecatMap& f, int max_level = 3);

bool is_groupoid(const PrecatPtr& a, int max_level = 3);

struct LoopData {
  int object = -1;
  int pi1 = 0;                  // |π₀(A₁(a,a))|
  GroupPresentation loop_pi1;   // π₁(A₁(a,a), Id_a)
  bool loop_pi1_trivial = false;
  HomologyProfile loop_homology;
};
struct SegalGroupoidHomotopy {
  int pi0 = 0;
  std::vector<LoopData> loops;
  bool simply_connected = false;
};
// Throws StructuralError on a non-groupoid.
SegalGroupoidHomotopy homotopy_groups(const PrecatPtr& a, int max_level = 3);

// Data making u proto-inversible. alpha, beta : Ī -> A_1.
struct ProtoWitness {
  BElem u, v, t1, t2;
  Level l1;
  SSetMap alpha, beta;
};
std::vector<std::string> proto_witness_violations(const PrecatPtr& a, const ProtoWitness& w);
struct ProtoCell {
  int u = -1;  // generator of bidegree (1,0)
  Tri status = Tri::Undecided;
  std::optional<ProtoWitness> witness;
};
struct ProtoReport {
  int truncation = kIntervalTruncation;
  std::vector<ProtoCell> cells;  // the 1-cells that are not long edges of 2-cells
  Tri overall = Tri::True;
};
ProtoReport is_proto_groupoid(const PrecatPtr& a, int truncation = kIntervalTruncation, long long budget = -1);

// Hypothesis side of the free-ordered criterion: f bijective on objects and
// order preserving between free-ordered precategories, with f₁(a, a') a weak
// equivalence for every adjacent pair a < a'. Throws StructuralError when a
// precondition fails.
enum class Criterion { Holds, Fails, Undecided };
const char* criterion_name(Criterion c);
struct CriterionReport {
  struct Pair {
    int a, b;  // consecutive objects of the source
    Verdict verdict;
  };
  std::vector<Pair> adjacent;
  Criterion result = Criterion::Holds;
};
CriterionReport free_ordered_we_criterion(const PrecatMap& f, const std::map<int, int>& rank_a,
                                          const std::map<int, int>& rank_b, int max_level = 3);

}  // namespace segalkit
