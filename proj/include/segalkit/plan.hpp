#pragma once
// Cell-addition plans at finite scale: simple steps are pushouts along
// coproducts of arrows from a finite family, plans are finite sequences of
// simple steps. Markings record chosen fillers of lifting diagrams.

#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "segalkit/rs.hpp"
#include "segalkit/theta.hpp"

namespace segalkit {

template <int K>
struct Arrow {
  std::string id;
  Map<K> map;
};
template <int K>
using Family = std::vector<Arrow<K>>;

Arrow<2> as_arrow(const GeneratingArrow& a);
Family<2> as_family(const std::vector<GeneratingArrow>& arrows);

// A lifting diagram: an arrow of the family and a map from its source.
template <int K>
struct Diagram {
  int arrow = -1;
  Map<K> attach;
};
template <int K>
using DiagramKey = std::pair<int, std::vector<Elem<K>>>;
template <int K>
DiagramKey<K> key_of(const Diagram<K>& d) {
  return {d.arrow, d.attach.img};
}

template <int K>
struct StepEntry {
  Diagram<K> diagram;
  int mult = 1;
};
template <int K>
using SimpleStep = std::vector<StepEntry<K>>;

template <int K>
struct StepResult {
  Ptr<K> obj;
  Map<K> map;                                // X -> obj
  std::vector<std::vector<Map<K>>> fillers;  // per entry and copy: arrow target -> obj
  Pushout<K> po;                             // X <- sources -> targets
  Coproduct<K> targets;                      // one part per copy, entry-major
};
// Throws StructuralError on a diagram that does not attach into x.
template <int K>
StepResult<K> apply_simple(const Ptr<K>& x, const Family<K>& fam, const SimpleStep<K>& step, const std::string& tag = "c");

template <int K>
struct Plan {
  Family<K> family;
  std::vector<Ptr<K>> stages;  // X_0 .. X_n
  std::vector<SimpleStep<K>> steps;
  std::vector<StepResult<K>> results;

  int length() const { return static_cast<int>(steps.size()); }
  const Ptr<K>& source() const { return stages.front(); }
  const Ptr<K>& result() const { return stages.back(); }
  Map<K> to_stage(int from, int to) const;
};
template <int K>
Plan<K> empty_plan(const Ptr<K>& x, Family<K> fam);
template <int K>
void append_step(Plan<K>& p, SimpleStep<K> step);
// q must start at p's result.
template <int K>
Plan<K> compose_naive(const Plan<K>& p, const Plan<K>& q);
// Appends q after dropping every diagram that factors through an earlier stage.
template <int K>
Plan<K> compose_rational(const Plan<K>& p, const SimpleStep<K>& q);

// The unique g with mono∘g = f, when f lands in the image of the mono.
template <int K>
std::optional<Map<K>> lift_through_mono(const Map<K>& f, const Map<K>& mono);
// Smallest β such that a map into stage k factors through X_β.
template <int K>
int earliest_stage(const Plan<K>& p, int k, const Map<K>& attach);
// No diagram's extension to the final stage is the extension of a diagram
// of an earlier step.
template <int K>
bool is_rational(const Plan<K>& p);
// Every diagram of step k fails to factor through X_{k-1}.
template <int K>
bool has_rational_compositions(const Plan<K>& p);

template <int K>
struct Rationalization {
  Plan<K> plan;
  std::vector<Map<K>> comparison;  // X_β -> Z_β; the last one is an iso
};
// Throws StructuralError when some arrow is not a mono.
template <int K>
Rationalization<K> rationalize(const Plan<K>& p);

// p replayed from stage `from` with modified steps. steps[j] attaches into
// p's stage j and extends p's step j: the same entries first, multiplicities
// not smaller, then new entries. Attach maps are transported along the
// comparison maps r[j] : p.stages[j] -> result.stages[j].
template <int K>
struct Replay {
  Plan<K> plan;
  std::vector<Map<K>> r;
};
template <int K>
Replay<K> replay(const Plan<K>& p, int from, const std::vector<SimpleStep<K>>& steps);

// An iso h with h∘f = g; f must be a mono.
template <int K>
std::optional<Map<K>> isomorphic_over(const Map<K>& f, const Map<K>& g);

// All diagrams from arrows whose source has total dimension ≤ dim_bound.
// Throws BudgetExceeded.
template <int K>
std::vector<Diagram<K>> enumerate_diagrams(const Ptr<K>& x, const Family<K>& fam, int dim_bound, long long budget = -1);
// e_{Φ,λ} on x.
template <int K>
SimpleStep<K> e_step(const Ptr<K>& x, const Family<K>& fam, int lambda, int dim_bound, long long budget = -1);

enum class Tri { False, True, Undecided };
const char* tri_name(Tri t);
template <int K>
Tri has_filler(const Ptr<K>& x, const Family<K>& fam, const Diagram<K>& d, long long budget = -1);

template <int K>
using Marking = std::map<DiagramKey<K>, Map<K>>;
template <int K>
struct MarkedObject {
  Ptr<K> obj;
  Marking<K> marking;
};
// Keys and fillers pushed along f.
template <int K>
Marking<K> extend_marking(const Marking<K>& mu, const Map<K>& f);
// Fillers that do not commute with their diagram.
template <int K>
std::vector<std::string> marking_violations(const Family<K>& fam, const MarkedObject<K>& m);
// Marking on stage j: extensions of the copy-0 fillers of steps < j.
template <int K>
Marking<K> marking_at_stage(const Plan<K>& p, int j);

template <int K>
struct EPhiResult {
  Plan<K> plan;
  MarkedObject<K> marked;
  Map<K> can;                         // X -> result
  std::vector<Diagram<K>> unmarked;   // final-stage diagrams with no marked filler
  bool final_checked = false;         // the final stage was enumerated
  bool saturated = false;             // checked and nothing left unmarked
};
// steps rational passes of e_{Φ,1}.
template <int K>
EPhiResult<K> e_phi_marked(const Ptr<K>& x, const Family<K>& fam, int steps, int dim_bound, bool check_final = true,
                           long long budget = -1);

// Maps f : source -> target with f∘can = base that preserve the marking.
// strict: ext(D) of each marked D must be marked in the target with filler
// f∘μ(D). Otherwise the filler condition applies only where the target
// marks ext(D). Throws BudgetExceeded.
template <int K>
long long count_marked_factorizations(const Family<K>& fam, const MarkedObject<K>& source, const MarkedObject<K>& target,
                                      const Map<K>& can, const Map<K>& base, bool strict = true, long long budget = -1);

// Stage maps P(A)_j -> P(C)_j induced by f : A -> C, for two plans built by
// e_phi_marked with the same family: cells go to the cells of the extended
// diagrams. Throws StructuralError when an extended diagram is missing.
template <int K>
std::vector<Map<K>> induced_stage_maps(const Plan<K>& pa, const Plan<K>& pc, const Map<K>& f);

// Simplicial cells ∂Δ[n] -> Δ[n] (n ≤ 2) and the horns of Δ[2].
Family<1> simplicial_cell_family();
// Up to max_diagrams distinct diagrams on x with multiplicities in 1..max_mult.
SimpleStep<1> random_step(const SSetPtr& x, const Family<1>& fam, std::mt19937& rng, int max_diagrams, int max_mult,
                          int dim_bound);
// Built only by compose_rational.
Plan<1> random_rational_plan(const SSetPtr& x, const Family<1>& fam, std::mt19937& rng, int steps, int max_diagrams);

// Painted schedules. The family is Boit_m(g_k) for k ≤ max_k; the spine
// source must land in the painted parts.
struct RajResult {
  Painted out;
  PrecatMap from_a;
  SimpleStep<2> step;
  Family<2> family;
  RSData witness;
  bool witness_checked = false;
  bool witness_ok = false;
  int attached = 0;
};
// previous: the map into p.a from the preceding stage; diagrams that factor
// through it are dropped.
RajResult raj_1m(const Painted& p, int max_k, const PrecatMap* previous = nullptr, bool check_witness = true,
                 long long budget = -1);

struct CatResult {
  PrecatPtr obj;
  Painted out;
  PrecatMap from_a;
  std::vector<int> attached;  // per Raj step
  bool witnesses_ok = true;
  bool saturated = false;
};
CatResult cat_1m(const PrecatPtr& a, int m, int steps, int max_k, bool check_witness = true, long long budget = -1);
// rounds of cat_1m for m = 2 .. max_m.
CatResult bigcat(const PrecatPtr& a, int rounds, int max_m, int steps, int max_k, long long budget = -1);

// Degeneracies of Boit diagrams. A diagram d of Boit_m(g) is a degeneracy
// along σ : [m] -> [k'] (surjective, k' < m) when d = d'∘e_σ; the parent is
// Boit_{k'}(g) for k' ≥ 2 and the identity of Δ[k']ΘF otherwise.
struct Presentation {
  int arrow = -1;
  Op sigma;
  int parent = -1;        // arrow index, or -1 for an identity parent
  PrecatMap e;            // source -> parent source
  PrecatMap e_target;     // target -> parent target
  std::vector<int> section;  // parent source generator -> source generator over it
};
class DegeneracyTable {
 public:
  // arrows: Boit arrows closed under smaller m (as in generating_families).
  explicit DegeneracyTable(std::vector<GeneratingArrow> arrows);
  const Family<2>& family() const { return family_; }
  const std::vector<GeneratingArrow>& arrows() const { return arrows_; }
  // Presentations of an arrow, by increasing k'.
  const std::vector<Presentation>& presentations(int arrow) const { return pres_[static_cast<std::size_t>(arrow)]; }
  std::optional<PrecatMap> factor(const Presentation& p, const PrecatMap& d) const;
  // Minimal presentation of a degenerate diagram and its parent attach.
  std::optional<std::pair<int, PrecatMap>> degeneracy(const Diagram<2>& d) const;
  bool is_degenerate(const Diagram<2>& d) const { return degeneracy(d).has_value(); }

 private:
  std::vector<GeneratingArrow> arrows_;
  Family<2> family_;
  std::vector<std::vector<Presentation>> pres_;
};

// closure: also require every degeneracy of a marked diagram, and of an
// identity parent, to be marked.
std::vector<std::string> canonicity_violations(const DegeneracyTable& t, const MarkedObject<2>& m, bool closure,
                                               long long budget = -1);

struct RajCResult {
  MarkedObject<2> out;
  PrecatMap from_a;
  SimpleStep<2> step;  // the nondegenerate unmarked diagrams
  StepResult<2> result;
  int attached = 0;
  int inherited = 0;
};
// Throws StructuralError when the input marking is not canonical.
RajCResult raj_c(const DegeneracyTable& t, const MarkedObject<2>& a, int dim_bound, long long budget = -1);

struct CatCResult {
  MarkedObject<2> out;
  PrecatMap from_a;
  Plan<2> plan;                       // one step per round
  std::vector<Marking<2>> markings;  // per stage
  std::vector<int> attached;
  bool saturated = false;
};
CatCResult cat_c(const DegeneracyTable& t, const PrecatPtr& a, int rounds, int dim_bound, long long budget = -1);

// Diagrams on x whose extension along f has no mark in mu.
template <int K>
std::vector<Diagram<K>> unfilled_diagrams(const Family<K>& fam, const Ptr<K>& x, const Map<K>& f, const Marking<K>& mu,
                                          int dim_bound, long long budget = -1);

// Cat(A ∩ B) against Cat(A) ∩ Cat(B) inside Cat(C), stage by stage, for
// sub-presentations of C given by generator lists.
struct IntersectionReport {
  std::vector<bool> stage_ok;
  bool ok() const {
    for (bool b : stage_ok)
      if (!b) return false;
    return !stage_ok.empty();
  }
};
IntersectionReport cat_intersection(const PrecatPtr& c, const std::vector<int>& a_gens, const std::vector<int>& b_gens,
                                    const Family<2>& fam, int steps, int dim_bound, long long budget = -1);
// The same with the canonical construction.
IntersectionReport cat_c_intersection(const PrecatPtr& c, const std::vector<int>& a_gens,
                                      const std::vector<int>& b_gens, const DegeneracyTable& t, int rounds,
                                      int dim_bound, long long budget = -1);

}  // namespace segalkit
