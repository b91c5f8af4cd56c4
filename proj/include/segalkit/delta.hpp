#pragma once
// The simplex category: monotone maps [m] -> [n], epi-mono factorization,
// and the Eilenberg-Zilber encoding of degeneracies as sorted index words.

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace segalkit {

constexpr int kMaxDim = 15;

struct Op {
  std::uint8_t src = 0;
  std::uint8_t tgt = 0;
  std::array<std::uint8_t, kMaxDim + 1> v{};

  int operator()(int i) const { return v[static_cast<std::size_t>(i)]; }
  bool operator==(const Op&) const = default;
  auto operator<=>(const Op&) const = default;
};

struct OpHash {
  std::size_t operator()(const Op& op) const noexcept;
};

Op make_op(int tgt, const std::vector<int>& values);
Op identity_op(int n);
Op constant_op(int src, int tgt, int value);
// (f ∘ g)(i) = f(g(i)); requires g.tgt == f.src.
Op compose(const Op& f, const Op& g);

bool is_identity(const Op& f);
bool is_injective(const Op& f);
bool is_surjective(const Op& f);

// f = mono ∘ epi.
struct EpiMono {
  Op epi;
  Op mono;
};
EpiMono epi_mono(const Op& f);

Op face_op(int n, int i);        // δ_i : [n-1] -> [n]
Op degeneracy_op(int n, int j);  // σ_j : [n+1] -> [n]

// A surjection [n] ->> [p] is stored in EZ normal form by the sorted list of
// j with σ(j) = σ(j+1).
Op surjection_from_word(int p, const std::vector<int>& word);
std::vector<int> degeneracy_word(const Op& surj);

unsigned image_mask(const Op& f);
Op mono_from_mask(int tgt, unsigned mask);

// Given surjections a = a' ∘ t and b = b' ∘ t where t collapses exactly the
// indices common to both words, return (t, a', b').
struct CommonFactor {
  Op common;
  Op left;
  Op right;
};
CommonFactor factor_common(const Op& a, const Op& b);
// K-ary version.
std::pair<Op, std::vector<Op>> factor_common(const std::vector<Op>& ops);

// Cached enumerations, lexicographic on value lists.
const std::vector<Op>& all_monotone(int q, int p);
const std::vector<Op>& all_surjections(int n, int p);
const std::vector<Op>& all_injections(int n, int p);

// Δ(q,p)⁰: maps [q] -> [p] that do not factor through [0].
std::vector<Op> delta_nonconstant(int q, int p);
// Δ(q,m)¹: maps [q] -> [m] that do not factor through a principal edge.
std::vector<Op> delta_nonprincipal(int q, int m);
bool factors_through_principal(const Op& x, int* edge = nullptr);

long long binomial(int n, int k);
std::string op_string(const Op& f);

}  // namespace segalkit
