#pragma once
// Segal precategories: bisimplicial sets (external direction 0, internal
// direction 1) whose external level 0 is discrete.

#include <map>
#include <string>
#include <vector>

#include "segalkit/sset.hpp"

namespace segalkit {

// Violations of the discreteness condition on level 0, plus face identities.
std::vector<std::string> precat_violations(const Precat& a);
// finalize() plus the discreteness check.
PrecatPtr seal(Precat a);

std::vector<int> objects(const Precat& a);
// The objects at the external vertices of an element.
std::vector<int> vertex_tuple(const Precat& a, const BElem& e);

// The simplicial set A_m.
struct Level {
  int m = 0;
  SSetPtr obj;
  std::vector<BElem> cell;                  // level generator -> element of A
  std::vector<std::vector<int>> tuple;      // level generator -> object tuple
  std::map<std::pair<Op, int>, int> index;  // (external degeneracy, generator)

  SElem to_level(const BElem& e) const;
  BElem to_precat(const SElem& x) const;
};
Level level(const PrecatPtr& a, int m);
// A(α) : A_m -> A_{m'} for α : [m'] -> [m].
SSetMap level_operator(const PrecatPtr& a, const Level& from, const Level& to, const Op& alpha);
SSetMap level_map(const PrecatMap& f, const Level& from, const Level& to);

Sub<1> fiber(const Level& l, const std::vector<int>& t);
SSetPtr fiber(const PrecatPtr& a, int m, const std::vector<int>& t);
// Object tuples with nonempty fibers at level m.
std::map<std::vector<int>, int> fiber_sizes(const Level& l);

// Iterated product F_0 × ... × F_{k-1} (the point for k = 0).
class MultiProduct {
 public:
  explicit MultiProduct(std::vector<SSetPtr> factors);
  SSetPtr obj;
  SElem tuple(const std::vector<SElem>& xs) const;
  // Components of an element.
  std::vector<SElem> split(const SElem& x) const;

 private:
  std::vector<SSetPtr> factors_;
  std::vector<Product<1>> stages_;
};

struct SegalFiberMap {
  Sub<1> source;                 // A_m(t) inside A_m
  std::vector<Sub<1>> hom;       // A_1(t_i, t_{i+1})
  std::shared_ptr<MultiProduct> target;
  SSetMap map;
};
SegalFiberMap segal_map_fiber(const PrecatPtr& a, int m, const std::vector<int>& t);
SegalFiberMap segal_map_fiber(const PrecatPtr& a, const Level& lm, const Level& l1, const std::vector<int>& t);

// The global Segal map A_m -> A_1 ×_{A_0} ... ×_{A_0} A_1, with the fiber
// product presented as the coproduct over tuples of products of hom fibers.
struct SegalMap {
  SSetPtr source;
  SSetPtr target;
  SSetMap map;
};
SegalMap segal_map(const PrecatPtr& a, int m);

struct SegalReport {
  struct Entry {
    int m;
    std::vector<int> tuple;
    Verdict verdict;
  };
  std::vector<Entry> entries;
  Verdict overall = Verdict::WE;  // WE iff every fiber is WE
};
SegalReport is_segal_category(const PrecatPtr& a, int max_level);

SSetPtr diagonal(const Precat& a);

// Precategory with X as external direction and trivial internal direction
// (the Θ object X Θ Δ[0]).
PrecatPtr internally_discrete(const SSet& x);
// Discrete precategory on the given object names.
PrecatPtr discrete_precat(const std::vector<std::string>& names);

inline Product<2> product(const PrecatPtr& a, const PrecatPtr& b) { return Product<2>(a, b); }

bool is_connected(const PrecatPtr& a);

struct FreeOrderedReport {
  bool unordered_empty = true;  // (i)
  bool long_edge_we = true;     // (ii)
  bool endo_point = true;       // (iii)
  bool undecided = false;       // some (ii) verdict was Unknown
  std::vector<std::string> failures;
  bool ok() const { return unordered_empty && long_edge_we && endo_point && !undecided; }
};
// rank[obj] gives the caller's total order on objects.
FreeOrderedReport is_free_ordered(const PrecatPtr& a, const std::map<int, int>& rank, bool strict, int max_level);
// Objects ordered by generator index.
std::map<int, int> index_order(const Precat& a);
// Lexicographic order on the objects of a product of two precategories.
std::map<int, int> lexicographic_order(const Product<2>& p, const std::map<int, int>& ra, const std::map<int, int>& rb);

}  // namespace segalkit
