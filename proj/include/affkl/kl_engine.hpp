#pragma once

// Kazhdan-Lusztig polynomials P_{x,w} by the classical recurrence on a left
// descent s of w (v = sw):
//
//   P_{x,w} = q^{1-c} P_{sx,v} + q^c P_{x,v}
//             - sum_{z < v, sz < z} mu(z,v) q^{(l(w)-l(z))/2} P_{x,z}
//
// with c = 0 if x < sx and c = 1 otherwise. mu is always read off a stored
// polynomial; it has no table of its own.

#include <algorithm>
#include <cstdint>
#include <memory>
#include <tuple>
#include <string>
#include <utility>
#include <vector>

#include "affkl/concurrent_map.hpp"
#include "affkl/errors.hpp"
#include "affkl/group.hpp"
#include "affkl/polynomial.hpp"

namespace affkl {

enum class DescentChoice {
  FirstLetter,         // first letter of reduced_word(w)
  LargestLeftDescent,  // alternative used to test choice independence
};

struct EngineConfig {
  int max_length = Limits{}.engine_length;
  int interval_cap = Limits{}.interval_length;
  DescentChoice descent_choice = DescentChoice::FirstLetter;
};

struct KlEntry {
  AffinePermutation x;
  AffinePermutation w;
  IntPolynomial p;
};

/// deg p <= (l(w) - l(x) - 1) / 2.
inline bool degree_bound_check(const AffinePermutation& x, const AffinePermutation& w, const IntPolynomial& p) {
  return 2 * p.degree() <= length(w) - length(x) - 1;
}

/// Memoized KL polynomials for one rank. Safe for concurrent use: tables are
/// insert-if-absent, and the recurrence is deterministic.
class KlCache {
 public:
  explicit KlCache(GroupContext ctx, EngineConfig config = {}) : ctx_(ctx), config_(config) {}

  const GroupContext& context() const noexcept { return ctx_; }
  const EngineConfig& config() const noexcept { return config_; }

  IntPolynomial polynomial(const AffinePermutation& x, const AffinePermutation& w) {
    check_pair(x, w);
    if (x == w) return IntPolynomial::one();
    if (!leq(x, w)) return {};
    if (auto hit = table_.find({x, w})) return *hit;
    return table_.insert_if_absent({x, w}, compute(x, w));
  }

  std::int64_t mu(const AffinePermutation& x, const AffinePermutation& w) {
    check_pair(x, w);
    const int gap = length_of(w) - length_of(x);
    if (gap <= 0 || gap % 2 == 0) return 0;
    if (!leq(x, w)) return 0;
    return polynomial(x, w).coefficient((gap - 1) / 2);
  }

  int length_of(const AffinePermutation& w) {
    if (auto hit = lengths_.find(w)) return *hit;
    return lengths_.insert_if_absent(w, length(w));
  }

  bool leq(const AffinePermutation& x, const AffinePermutation& w) { return bruhat_leq(x, w, &bruhat_); }

  std::shared_ptr<const std::vector<AffinePermutation>> interval(const AffinePermutation& w) {
    if (auto hit = intervals_.find(w)) return *hit;
    auto members = std::make_shared<const std::vector<AffinePermutation>>(enumerate_interval(w, config_.interval_cap));
    return intervals_.insert_if_absent(w, std::move(members));
  }

  /// Stored entries sorted by (x, w) window; deterministic for serialization.
  std::vector<KlEntry> entries() const {
    std::vector<KlEntry> out;
    for (auto& [key, p] : table_.snapshot()) out.push_back({key.first, key.second, p});
    std::sort(out.begin(), out.end(),
              [](const KlEntry& a, const KlEntry& b) { return std::tie(a.x, a.w) < std::tie(b.x, b.w); });
    return out;
  }

  /// Seeds the table, e.g. from a cache file. The first value stored for a pair wins.
  void insert(const KlEntry& entry) {
    check_rank(entry.x);
    check_rank(entry.w);
    table_.insert_if_absent({entry.x, entry.w}, entry.p);
  }

  std::size_t size() const { return table_.size(); }

 private:
  void check_rank(const AffinePermutation& w) const {
    if (w.rank() != ctx_.n())
      throw ArgumentError("element " + w.to_string() + " has rank " + std::to_string(w.rank()) +
                          ", engine rank is " + std::to_string(ctx_.n()));
  }

  void check_pair(const AffinePermutation& x, const AffinePermutation& w) {
    check_rank(x);
    check_rank(w);
    if (length_of(w) > config_.max_length)
      throw ResourceError("KL engine cap exceeded: l(w) = " + std::to_string(length_of(w)) + " > engine cap " +
                          std::to_string(config_.max_length));
  }

  int choose_descent(const AffinePermutation& w) const {
    if (config_.descent_choice == DescentChoice::LargestLeftDescent) return left_descents(w).members().back();
    return reduced_word(w).front();
  }

  // Requires x < w.
  IntPolynomial compute(const AffinePermutation& x, const AffinePermutation& w) {
    const int s = choose_descent(w);
    const auto v = multiply_left_generator(s, w);
    const auto sx = multiply_left_generator(s, x);
    const int c = length_of(sx) > length_of(x) ? 0 : 1;
    const int lw = length_of(w);
    const int lv = lw - 1;

    IntPolynomial p = polynomial(sx, v).shifted(1 - c) + polynomial(x, v).shifted(c);

    const auto below_v = interval(v);
    for (const auto& z : *below_v) {
      if (z == v) continue;
      const int lz = length_of(z);
      if ((lv - lz) % 2 == 0) continue;
      if (!has_left_descent(z, s)) continue;
      if (!leq(x, z)) continue;
      const std::int64_t m = mu(z, v);
      if (m == 0) continue;
      const int exponent_twice = lw - lz;
      if (exponent_twice % 2 != 0)
        throw InternalError("odd exponent in mu-sum for z = " + z.to_string() + ", v = " + v.to_string());
      p -= (polynomial(x, z) * m).shifted(exponent_twice / 2);
    }

    if (!p.has_nonnegative_coefficients())
      throw InternalError("negative coefficient in P(" + x.to_string() + ", " + w.to_string() + ") = " + p.to_string());
    if (2 * p.degree() > lw - length_of(x) - 1)
      throw InternalError("degree bound violated by P(" + x.to_string() + ", " + w.to_string() + ") = " + p.to_string());
    return p;
  }

  GroupContext ctx_;
  EngineConfig config_;
  ConcurrentMap<ElementPair, IntPolynomial, ElementPairHash> table_;
  ConcurrentMap<AffinePermutation, int> lengths_;
  ConcurrentMap<AffinePermutation, std::shared_ptr<const std::vector<AffinePermutation>>> intervals_;
  BruhatMemo bruhat_;
};

inline IntPolynomial kl_polynomial(KlCache& cache, const AffinePermutation& x, const AffinePermutation& w) {
  return cache.polynomial(x, w);
}

inline std::int64_t mu(KlCache& cache, const AffinePermutation& x, const AffinePermutation& w) {
  return cache.mu(x, w);
}

}  // namespace affkl
