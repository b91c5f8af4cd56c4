#include "segalkit/delta.hpp"

#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace segalkit {

std::size_t OpHash::operator()(const Op& op) const noexcept {
  std::size_t h = op.src * 131u + op.tgt;
  for (int i = 0; i <= op.src; ++i) h = h * 17u + op.v[static_cast<std::size_t>(i)];
  return h;
}

Op make_op(int tgt, const std::vector<int>& values) {
  if (values.empty() || static_cast<int>(values.size()) > kMaxDim + 1 || tgt > kMaxDim || tgt < 0)
    throw std::invalid_argument("monotone map out of supported range");
  Op f;
  f.src = static_cast<std::uint8_t>(values.size() - 1);
  f.tgt = static_cast<std::uint8_t>(tgt);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] < 0 || values[i] > tgt || (i > 0 && values[i] < values[i - 1]))
      throw std::invalid_argument("not a monotone map");
    f.v[i] = static_cast<std::uint8_t>(values[i]);
  }
  return f;
}

Op identity_op(int n) {
  Op f;
  f.src = f.tgt = static_cast<std::uint8_t>(n);
  for (int i = 0; i <= n; ++i) f.v[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(i);
  return f;
}

Op constant_op(int src, int tgt, int value) {
  Op f;
  f.src = static_cast<std::uint8_t>(src);
  f.tgt = static_cast<std::uint8_t>(tgt);
  for (int i = 0; i <= src; ++i) f.v[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(value);
  return f;
}

Op compose(const Op& f, const Op& g) {
  if (g.tgt != f.src) throw std::invalid_argument("compose: arity mismatch");
  Op h;
  h.src = g.src;
  h.tgt = f.tgt;
  for (int i = 0; i <= g.src; ++i) h.v[static_cast<std::size_t>(i)] = f.v[g.v[static_cast<std::size_t>(i)]];
  return h;
}

bool is_identity(const Op& f) {
  if (f.src != f.tgt) return false;
  for (int i = 0; i <= f.src; ++i)
    if (f.v[static_cast<std::size_t>(i)] != i) return false;
  return true;
}

bool is_injective(const Op& f) {
  for (int i = 1; i <= f.src; ++i)
    if (f.v[static_cast<std::size_t>(i)] == f.v[static_cast<std::size_t>(i - 1)]) return false;
  return true;
}

bool is_surjective(const Op& f) {
  if (f.v[0] != 0 || f.v[f.src] != f.tgt) return false;
  for (int i = 1; i <= f.src; ++i)
    if (f.v[static_cast<std::size_t>(i)] - f.v[static_cast<std::size_t>(i - 1)] > 1) return false;
  return true;
}

EpiMono epi_mono(const Op& f) {
  EpiMono r;
  std::vector<int> image;
  std::vector<int> epi(static_cast<std::size_t>(f.src) + 1);
  for (int i = 0; i <= f.src; ++i) {
    int val = f.v[static_cast<std::size_t>(i)];
    if (image.empty() || image.back() != val) image.push_back(val);
    epi[static_cast<std::size_t>(i)] = static_cast<int>(image.size()) - 1;
  }
  r.epi = make_op(static_cast<int>(image.size()) - 1, epi);
  r.mono = make_op(f.tgt, image);
  return r;
}

Op face_op(int n, int i) {
  std::vector<int> v;
  for (int k = 0; k <= n; ++k)
    if (k != i) v.push_back(k);
  return make_op(n, v);
}

Op degeneracy_op(int n, int j) {
  std::vector<int> v;
  for (int k = 0; k <= n + 1; ++k) v.push_back(k <= j ? k : k - 1);
  return make_op(n, v);
}

Op surjection_from_word(int p, const std::vector<int>& word) {
  int n = p + static_cast<int>(word.size());
  std::vector<int> v(static_cast<std::size_t>(n) + 1);
  std::size_t w = 0;
  int value = 0;
  for (int i = 0; i <= n; ++i) {
    v[static_cast<std::size_t>(i)] = value;
    if (w < word.size() && word[w] == i) {
      ++w;
    } else {
      ++value;
    }
  }
  for (std::size_t k = 0; k < word.size(); ++k)
    if ((k > 0 && word[k] <= word[k - 1]) || word[k] < 0 || word[k] >= n)
      throw std::invalid_argument("degeneracy word must be strictly increasing and below the source arity");
  if (w != word.size()) throw std::invalid_argument("degeneracy word out of range");
  return make_op(p, v);
}

std::vector<int> degeneracy_word(const Op& surj) {
  std::vector<int> w;
  for (int j = 0; j < surj.src; ++j)
    if (surj.v[static_cast<std::size_t>(j)] == surj.v[static_cast<std::size_t>(j + 1)]) w.push_back(j);
  return w;
}

unsigned image_mask(const Op& f) {
  unsigned m = 0;
  for (int i = 0; i <= f.src; ++i) m |= 1u << f.v[static_cast<std::size_t>(i)];
  return m;
}

Op mono_from_mask(int tgt, unsigned mask) {
  std::vector<int> v;
  for (int k = 0; k <= tgt; ++k)
    if (mask & (1u << k)) v.push_back(k);
  return make_op(tgt, v);
}

std::pair<Op, std::vector<Op>> factor_common(const std::vector<Op>& ops) {
  int n = ops.front().src;
  std::vector<int> common_vals(static_cast<std::size_t>(n) + 1);
  int value = 0;
  for (int i = 0; i <= n; ++i) {
    if (i > 0) {
      bool collapse = true;
      for (const Op& o : ops)
        if (o.v[static_cast<std::size_t>(i)] != o.v[static_cast<std::size_t>(i - 1)]) collapse = false;
      if (!collapse) ++value;
    }
    common_vals[static_cast<std::size_t>(i)] = value;
  }
  Op t = make_op(value, common_vals);
  std::vector<Op> rest;
  for (const Op& o : ops) {
    std::vector<int> vals(static_cast<std::size_t>(value) + 1);
    for (int i = 0; i <= n; ++i) vals[static_cast<std::size_t>(t.v[static_cast<std::size_t>(i)])] = o.v[static_cast<std::size_t>(i)];
    rest.push_back(make_op(o.tgt, vals));
  }
  return {t, rest};
}

CommonFactor factor_common(const Op& a, const Op& b) {
  auto [t, rest] = factor_common(std::vector<Op>{a, b});
  return {t, rest[0], rest[1]};
}

namespace {

std::mutex cache_mutex;

void monotone_rec(int q, int p, int pos, int lo, std::vector<int>& cur, std::vector<Op>& out) {
  if (pos > q) {
    out.push_back(make_op(p, cur));
    return;
  }
  for (int v = lo; v <= p; ++v) {
    cur[static_cast<std::size_t>(pos)] = v;
    monotone_rec(q, p, pos + 1, v, cur, out);
  }
}

}  // namespace

const std::vector<Op>& all_monotone(int q, int p) {
  static std::map<std::pair<int, int>, std::vector<Op>> cache;
  std::lock_guard<std::mutex> lock(cache_mutex);
  auto key = std::make_pair(q, p);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<Op> out;
  if (q >= 0 && p >= 0) {
    std::vector<int> cur(static_cast<std::size_t>(q) + 1);
    monotone_rec(q, p, 0, 0, cur, out);
  }
  return cache.emplace(key, std::move(out)).first->second;
}

const std::vector<Op>& all_surjections(int n, int p) {
  static std::map<std::pair<int, int>, std::vector<Op>> cache;
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = cache.find({n, p});
    if (it != cache.end()) return it->second;
  }
  std::vector<Op> out;
  for (const Op& f : all_monotone(n, p))
    if (is_surjective(f)) out.push_back(f);
  std::lock_guard<std::mutex> lock(cache_mutex);
  return cache.emplace(std::make_pair(n, p), std::move(out)).first->second;
}

const std::vector<Op>& all_injections(int n, int p) {
  static std::map<std::pair<int, int>, std::vector<Op>> cache;
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = cache.find({n, p});
    if (it != cache.end()) return it->second;
  }
  std::vector<Op> out;
  for (const Op& f : all_monotone(n, p))
    if (is_injective(f)) out.push_back(f);
  std::lock_guard<std::mutex> lock(cache_mutex);
  return cache.emplace(std::make_pair(n, p), std::move(out)).first->second;
}

std::vector<Op> delta_nonconstant(int q, int p) {
  std::vector<Op> out;
  for (const Op& f : all_monotone(q, p))
    if (f.v[0] != f.v[f.src]) out.push_back(f);
  return out;
}

bool factors_through_principal(const Op& x, int* edge) {
  int lo = x.v[0];
  int hi = x.v[x.src];
  if (hi - lo > 1) return false;
  if (edge) *edge = (lo == x.tgt) ? lo - 1 : lo;
  return true;
}

std::vector<Op> delta_nonprincipal(int q, int m) {
  std::vector<Op> out;
  for (const Op& f : all_monotone(q, m))
    if (!factors_through_principal(f)) out.push_back(f);
  return out;
}

long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::string op_string(const Op& f) {
  std::string s;
  for (int i = 0; i <= f.src; ++i) {
    if (i) s += ',';
    s += std::to_string(f.v[static_cast<std::size_t>(i)]);
  }
  return s;
}

}  // namespace segalkit
