#pragma once

// Straight-line Kazhdan-Lusztig computation in the symmetric group S_4 in
// one-line notation. Shares no code with the library: its own permutation
// arithmetic, inversion-count length, tableau-criterion Bruhat order and
// polynomial arithmetic.

#include <algorithm>
#include <array>
#include <map>
#include <utility>
#include <vector>

namespace affkl::oracle {

using Perm4 = std::array<int, 4>;
using Poly = std::vector<long long>;  // coefficient k of q^k

inline int inversions(const Perm4& p) {
  int c = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) c += p[i] > p[j];
  return c;
}

/// s_i p (i = 1..3): swap the values i and i+1.
inline Perm4 left_mult(int i, Perm4 p) {
  for (int& v : p) v = v == i ? i + 1 : v == i + 1 ? i : v;
  return p;
}

/// Tableau criterion: x <= w iff for every k the sorted prefixes of length k
/// of x are entrywise <= those of w.
inline bool tableau_leq(const Perm4& x, const Perm4& w) {
  for (int k = 1; k <= 4; ++k) {
    std::vector<int> a(x.begin(), x.begin() + k), b(w.begin(), w.begin() + k);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    for (int i = 0; i < k; ++i)
      if (a[i] > b[i]) return false;
  }
  return true;
}

inline void trim(Poly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

inline void add_shifted(Poly& acc, const Poly& p, int shift, long long scale) {
  if (acc.size() < p.size() + shift) acc.resize(p.size() + shift, 0);
  for (std::size_t k = 0; k < p.size(); ++k) acc[k + shift] += scale * p[k];
  trim(acc);
}

class S4KlOracle {
 public:
  S4KlOracle() {
    Perm4 p{1, 2, 3, 4};
    do all_.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
  }

  const std::vector<Perm4>& elements() const { return all_; }

  Poly P(const Perm4& x, const Perm4& w) {
    if (x == w) return {1};
    if (!tableau_leq(x, w)) return {};
    if (auto it = memo_.find({x, w}); it != memo_.end()) return it->second;

    int s = 1;
    while (inversions(left_mult(s, w)) > inversions(w)) ++s;
    const Perm4 v = left_mult(s, w);
    const Perm4 sx = left_mult(s, x);
    const int c = inversions(sx) > inversions(x) ? 0 : 1;

    Poly out;
    add_shifted(out, P(sx, v), 1 - c, 1);
    add_shifted(out, P(x, v), c, 1);
    const int lw = inversions(w), lv = lw - 1;
    for (const auto& z : all_) {
      if (z == v || !tableau_leq(z, v)) continue;
      if (inversions(left_mult(s, z)) > inversions(z)) continue;
      const int gap = lv - inversions(z);
      if (gap % 2 == 0) continue;
      const Poly pzv = P(z, v);
      const long long m = (gap - 1) / 2 < static_cast<int>(pzv.size()) ? pzv[(gap - 1) / 2] : 0;
      if (m == 0) continue;
      add_shifted(out, P(x, z), (lw - inversions(z)) / 2, -m);
    }
    memo_[{x, w}] = out;
    return out;
  }

 private:
  std::vector<Perm4> all_;
  std::map<std::pair<Perm4, Perm4>, Poly> memo_;
};

}  // namespace affkl::oracle
