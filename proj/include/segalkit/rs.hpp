#pragma once
// Pushout constructions Reg, Seg and RS on precategories: level q of the
// result is A_q with copies of a simplicial set glued in, one per admissible
// monotone map [q] -> [p].

#include <random>
#include <string>
#include <vector>

#include "segalkit/precat.hpp"

namespace segalkit {

// Object tuples per generator, standing for a map to A_0 × ... × A_0.
using VertexTuples = std::vector<std::vector<int>>;

struct BlockResult {
  PrecatPtr obj;
  PrecatMap from_a;        // A -> result
  Level top;               // level p (Reg) or m (Seg) of the result
  SSetMap block;           // the copy indexed by the identity of [p]: S -> top
};

// Reg(A, f, g) for f : A_p -> B and g : B -> A_0^{p+1}; lp = level(A, p).
BlockResult reg(const PrecatPtr& a, const Level& lp, const SSetMap& f, const VertexTuples& g);
// Seg(A, f, g) for f : A_m -> Q and g_k : Q -> A_1 (k < m) the components
// of Q -> A_1 ×_{A_0} ... ×_{A_0} A_1.
BlockResult seg(const PrecatPtr& a, const Level& lm, const Level& l1, const SSetMap& f, const std::vector<SSetMap>& g);

// A (1,m)-painted precategory: monos i : A_1* -> A_1 and j : A_m* -> A_m
// such that the Segal map sends A_m* into A_1* ×_{A_0} ... ×_{A_0} A_1*.
struct Painted {
  PrecatPtr a;
  int m = 2;
  Level l1, lm;
  SSetMap i, j;
};
Painted paint_all(const PrecatPtr& a, int m);
std::vector<std::string> painting_violations(const Painted& p);

struct RSData {
  SSetMap eta;               // A_1* -> B
  VertexTuples nu;           // B -> A_0 × A_0
  SSetMap phi;               // A_m* -> P
  std::vector<SSetMap> psi;  // P -> B, one per principal edge
};
std::vector<std::string> rs_violations(const Painted& p, const RSData& d);

struct RSResult {
  Painted out;  // painted by k : B -> RS_1 and l : P -> RS_m
  PrecatMap from_a;
};
// Level q is A_q with copies of η over Δ(q,1)⁰ and of φ over Δ(q,m)¹.
RSResult rs(const Painted& p, const RSData& d);
// Seg(Reg(A, η', ν'), φ'', ψ'') through the pushouts η', φ', φ''.
RSResult rs_by_definition(const Painted& p, const RSData& d);

// Reg and Seg as RS data (identity paintings).
RSData reg_as_rs(const Painted& p, const SSetMap& f, const VertexTuples& g);
RSData seg_as_rs(const Painted& p, const SSetMap& f, const std::vector<SSetMap>& g);
// (η̃η, ν̃, φ̃φ, ψ̃) from data d on A and data e on RS(A, d).
RSData compose_rs_data(const RSData& d, const RSData& e);

// Reg(A, φ, ψ) at level m against Seg(Reg(A, η, ν), φ', ψ') with B, Q, η,
// ν, φ', ψ' built from φ and ψ.
struct RegSegFactorization {
  BlockResult direct;
  BlockResult factored;
  bool isomorphic = false;
};
RegSegFactorization reg_seg_factorization(const PrecatPtr& a, const Level& lm, const SSetMap& phi, const VertexTuples& psi);

// Random test data.
struct RegInstance {
  PrecatPtr a;
  Level lm;
  SSetMap phi;
  VertexTuples psi;
};
RegInstance random_reg_instance(std::mt19937& rng);
struct RSInstance {
  Painted a;
  RSData first;
  RSData second;  // data on RS(a, first)
};
RSInstance random_rs_instance(std::mt19937& rng);

}  // namespace segalkit
