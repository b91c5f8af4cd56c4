#pragma once
// Integral homology of finite chain complexes through Smith normal form
// over GMP integers.

#include <gmpxx.h>

#include <string>
#include <utility>
#include <vector>

namespace segalkit {

// Columns are chains in the source basis: col[j] = list of (row, coefficient).
struct SparseMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<std::vector<std::pair<int, long long>>> col;
};

struct ChainComplex {
  std::vector<int> dims;            // rank of C_n
  std::vector<SparseMatrix> bd;     // bd[n] : C_n -> C_{n-1}; bd[0] is 0 x dims[0]
};

struct SnfOptions {
  bool reverse_pivots = false;  // alternative elimination order for cross-checks
};

// Nonzero invariant factors (absolute values, divisibility chain).
std::vector<mpz_class> invariant_factors(const SparseMatrix& m, const SnfOptions& opts = {});

struct HomologyGroup {
  int rank = 0;
  std::vector<mpz_class> torsion;  // coefficients >= 2
  bool operator==(const HomologyGroup& o) const { return rank == o.rank && torsion == o.torsion; }
  bool trivial() const { return rank == 0 && torsion.empty(); }
};

using HomologyProfile = std::vector<HomologyGroup>;

HomologyProfile homology(const ChainComplex& c, const SnfOptions& opts = {});
bool profiles_equal(const HomologyProfile& a, const HomologyProfile& b);
// "Z, 0, Z" style rendering.
std::string profile_string(const HomologyProfile& h);
HomologyProfile point_profile();
// Degrees 0..max_degree, padded with zero groups.
HomologyProfile profile_through(const HomologyProfile& h, int max_degree);
HomologyProfile sphere_profile(int n);

}  // namespace segalkit
