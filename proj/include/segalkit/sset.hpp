#pragma once
// Finite simplicial sets: standard shapes, homotopy invariants and the
// three-valued weak-equivalence oracle.

#include <string>
#include <vector>

#include "segalkit/homology.hpp"
#include "segalkit/presented.hpp"

namespace segalkit {

// Name of the face of Δ[n] spanned by the given vertices ("013", or
// dot-separated once n exceeds 9).
std::string simplex_name(const std::vector<int>& verts, int n);
SSetPtr standard_simplex(int n);
SSetPtr boundary(int n);
// The spine: vertices 0..m and the edges (k, k+1).
SSetPtr upsilon(int m);
// Face-closed family of faces of Δ[n].
SSetPtr simplex_sub(int n, const std::vector<std::vector<int>>& faces);
// Inclusion of a named sub-presentation (generators matched by name).
SSetMap inclusion_by_name(const SSetPtr& sub, const SSetPtr& whole);
SSetMap spine_inclusion(int m);
SSetMap boundary_inclusion(int n);

// The element of Δ[n] at level f.src given by the monotone map f.
SElem simplex_element(const SSet& simplex_n, const Op& f);
// Map Δ[n] -> X classifying an n-element x.
SSetMap yoneda_map(const SSetPtr& simplex_n, const SSetPtr& x, const SElem& e);
// Δ[f] : Δ[m] -> Δ[n].
SSetMap simplex_map(const Op& f);

SElem act(const SSet& x, const Op& op, const SElem& e);

std::vector<int> vertex_gens(const SSet& x);
// Component index for every vertex generator (indexed by generator, -1 for
// non-vertices), numbered by first appearance.
std::vector<int> component_labels(const SSet& x);
std::vector<std::vector<int>> pi0(const SSet& x);
int pi0_count(const SSet& x);

ChainComplex normalized_chains(const SSet& x);
HomologyProfile homology(const SSet& x, const SnfOptions& opts = {});
// Cone of f : C(f)_n = C_{n-1}(X) ⊕ C_n(Y).
ChainComplex mapping_cone(const SSetMap& f);

struct GroupPresentation {
  int generators = 0;
  std::vector<std::vector<int>> relators;  // letters ±(i+1)
};
GroupPresentation pi1_presentation(const SSet& x, int basepoint_gen);
bool is_trivially_simplifiable(GroupPresentation p, long long budget = 100000);

enum class Verdict { WE, NotWE, Unknown };
const char* verdict_name(Verdict v);
Verdict we_oracle(const SSetMap& f);

struct SequentialColimit {
  SSetPtr obj;
  std::vector<SSetMap> legs;  // X_i -> colimit
  bool truncated = false;
};
SequentialColimit sequential_colimit(const std::vector<SSetMap>& chain, int budget);

// Full product with projections; product(Δ[1], Δ[1]) has the shuffle cells.
inline Product<1> product(const SSetPtr& a, const SSetPtr& b) { return Product<1>(a, b); }

}  // namespace segalkit
