#include "segalkit/homology.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace segalkit {

namespace {

using Row = std::map<int, mpz_class>;

// Dense Smith normal form on what is left after unit pivots are exhausted.
std::vector<mpz_class> dense_snf(std::vector<std::vector<mpz_class>> a, bool reverse) {
  std::vector<mpz_class> out;
  std::size_t R = a.size();
  if (R == 0) return out;
  std::size_t C = a[0].size();
  std::size_t t = 0;
  while (t < R && t < C) {
    // Pivot: an entry of least absolute value.
    std::size_t pr = R, pc = C;
    for (std::size_t ii = t; ii < R; ++ii) {
      std::size_t i = reverse ? R - 1 - (ii - t) : ii;
      for (std::size_t j = t; j < C; ++j)
        if (a[i][j] != 0 && (pr == R || abs(a[i][j]) < abs(a[pr][pc]))) {
          pr = i;
          pc = j;
        }
    }
    if (pr == R) break;
    std::swap(a[t], a[pr]);
    for (auto& row : a) std::swap(row[t], row[pc]);
    bool clean = false;
    while (!clean) {
      clean = true;
      for (std::size_t i = t + 1; i < R; ++i) {
        if (a[i][t] == 0) continue;
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), a[i][t].get_mpz_t(), a[t][t].get_mpz_t());
        for (std::size_t j = t; j < C; ++j) a[i][j] -= q * a[t][j];
        if (a[i][t] != 0) {
          std::swap(a[t], a[i]);
          clean = false;
        }
      }
      for (std::size_t j = t + 1; j < C; ++j) {
        if (a[t][j] == 0) continue;
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), a[t][j].get_mpz_t(), a[t][t].get_mpz_t());
        for (std::size_t i = t; i < R; ++i) a[i][j] -= q * a[i][t];
        if (a[t][j] != 0) {
          for (auto& row : a) std::swap(row[t], row[j]);
          clean = false;
        }
      }
      if (clean) {
        // Enforce divisibility of the remaining block by the pivot.
        for (std::size_t i = t + 1; i < R && clean; ++i)
          for (std::size_t j = t + 1; j < C; ++j) {
            mpz_class r;
            mpz_fdiv_r(r.get_mpz_t(), a[i][j].get_mpz_t(), a[t][t].get_mpz_t());
            if (r != 0) {
              for (std::size_t k = t; k < C; ++k) a[t][k] += a[i][k];
              clean = false;
              break;
            }
          }
      }
    }
    out.push_back(abs(a[t][t]));
    ++t;
  }
  return out;
}

}  // namespace

std::vector<mpz_class> invariant_factors(const SparseMatrix& m, const SnfOptions& opts) {
  std::vector<Row> rows(static_cast<std::size_t>(m.rows));
  std::vector<std::set<int>> colrows(static_cast<std::size_t>(m.cols));
  for (int j = 0; j < m.cols; ++j)
    for (auto [i, v] : m.col[static_cast<std::size_t>(j)]) {
      if (v == 0) continue;
      rows[static_cast<std::size_t>(i)][j] += mpz_class(static_cast<long>(v));
    }
  for (int i = 0; i < m.rows; ++i) {
    auto& row = rows[static_cast<std::size_t>(i)];
    for (auto it = row.begin(); it != row.end();) {
      if (it->second == 0) {
        it = row.erase(it);
      } else {
        colrows[static_cast<std::size_t>(it->first)].insert(i);
        ++it;
      }
    }
  }
  std::vector<mpz_class> factors;
  std::vector<char> alive(static_cast<std::size_t>(m.rows), 1);
  bool progress = true;
  while (progress) {
    progress = false;
    for (int ii = 0; ii < m.rows; ++ii) {
      int r = opts.reverse_pivots ? m.rows - 1 - ii : ii;
      if (!alive[static_cast<std::size_t>(r)]) continue;
      Row& row = rows[static_cast<std::size_t>(r)];
      if (row.empty()) continue;
      int pc = -1;
      std::size_t best = 0;
      for (auto& [c, v] : row)
        if (v == 1 || v == -1) {
          std::size_t cnt = colrows[static_cast<std::size_t>(c)].size();
          if (pc < 0 || cnt < best) {
            pc = c;
            best = cnt;
          }
        }
      if (pc < 0) continue;
      mpz_class u = row.at(pc);
      std::vector<int> others(colrows[static_cast<std::size_t>(pc)].begin(), colrows[static_cast<std::size_t>(pc)].end());
      for (int o : others) {
        if (o == r) continue;
        Row& orow = rows[static_cast<std::size_t>(o)];
        mpz_class f = orow.at(pc) * u;
        for (auto& [c, v] : row) {
          mpz_class& slot = orow[c];
          bool was_zero = slot == 0;
          slot -= f * v;
          if (slot == 0) {
            orow.erase(c);
            if (!was_zero) colrows[static_cast<std::size_t>(c)].erase(o);
          } else if (was_zero) {
            colrows[static_cast<std::size_t>(c)].insert(o);
          }
        }
      }
      for (auto& [c, v] : row) colrows[static_cast<std::size_t>(c)].erase(r);
      row.clear();
      alive[static_cast<std::size_t>(r)] = 0;
      factors.push_back(1);
      progress = true;
    }
  }
  // Remaining block.
  std::vector<int> rr, cc;
  for (int i = 0; i < m.rows; ++i)
    if (!rows[static_cast<std::size_t>(i)].empty()) rr.push_back(i);
  for (int j = 0; j < m.cols; ++j)
    if (!colrows[static_cast<std::size_t>(j)].empty()) cc.push_back(j);
  if (!rr.empty()) {
    std::map<int, std::size_t> cpos;
    for (std::size_t k = 0; k < cc.size(); ++k) cpos[cc[k]] = k;
    std::vector<std::vector<mpz_class>> dense(rr.size(), std::vector<mpz_class>(cc.size(), 0));
    for (std::size_t k = 0; k < rr.size(); ++k)
      for (auto& [c, v] : rows[static_cast<std::size_t>(rr[k])]) dense[k][cpos.at(c)] = v;
    auto rest = dense_snf(std::move(dense), opts.reverse_pivots);
    factors.insert(factors.end(), rest.begin(), rest.end());
  }
  std::sort(factors.begin(), factors.end());
  return factors;
}

HomologyProfile homology(const ChainComplex& c, const SnfOptions& opts) {
  std::size_t top = c.dims.size();
  std::vector<std::vector<mpz_class>> inv(top + 1);
  for (std::size_t n = 1; n < top; ++n) inv[n] = invariant_factors(c.bd[n], opts);
  HomologyProfile h(top);
  for (std::size_t n = 0; n < top; ++n) {
    int rank_out = n >= 1 ? static_cast<int>(inv[n].size()) : 0;
    int rank_in = n + 1 < top ? static_cast<int>(inv[n + 1].size()) : 0;
    h[n].rank = c.dims[n] - rank_out - rank_in;
    if (n + 1 < top)
      for (const mpz_class& f : inv[n + 1])
        if (f > 1) h[n].torsion.push_back(f);
  }
  return h;
}

bool profiles_equal(const HomologyProfile& a, const HomologyProfile& b) {
  std::size_t n = std::max(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    HomologyGroup x = i < a.size() ? a[i] : HomologyGroup{};
    HomologyGroup y = i < b.size() ? b[i] : HomologyGroup{};
    if (!(x == y)) return false;
  }
  return true;
}

std::string profile_string(const HomologyProfile& h) {
  std::size_t n = h.size();
  while (n > 1 && h[n - 1].trivial()) --n;
  std::string s;
  for (std::size_t i = 0; i < n; ++i) {
    if (i) s += ", ";
    std::string part;
    if (h[i].rank == 1) part = "Z";
    else if (h[i].rank > 1) part = "Z^" + std::to_string(h[i].rank);
    for (const auto& t : h[i].torsion) {
      if (!part.empty()) part += "+";
      part += "Z/" + t.get_str();
    }
    s += part.empty() ? "0" : part;
  }
  return s.empty() ? "0" : s;
}

HomologyProfile point_profile() { return {HomologyGroup{1, {}}}; }

HomologyProfile profile_through(const HomologyProfile& h, int max_degree) {
  HomologyProfile out(h.begin(), h.begin() + std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(h.size()), max_degree + 1));
  out.resize(static_cast<std::size_t>(max_degree) + 1);
  return out;
}

HomologyProfile sphere_profile(int n) {
  HomologyProfile h(static_cast<std::size_t>(n) + 1);
  h[0].rank = 1;
  h[static_cast<std::size_t>(n)].rank += 1;
  return h;
}

}  // namespace segalkit
