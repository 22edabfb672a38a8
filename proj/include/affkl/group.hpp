#pragma once

// Element arithmetic for the affine Weyl group of type A~_{n-1}, n >= 3.
//
// Elements are affine permutations: bijections w of the integers with
// w(i + n) = w(i) + n and w(1) + ... + w(n) = n(n+1)/2, stored by their base
// window [w(1), ..., w(n)]. The window is the canonical form; equality,
// ordering and hashing all go through it.
//
// Conventions: products compose as functions, (ab)(i) = a(b(i)). Right
// multiplication by s_i permutes positions i and i+1 (position 0 is position
// n shifted down by n); left multiplication permutes values in the residue
// classes i and i+1 mod n.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "affkl/concurrent_map.hpp"
#include "affkl/errors.hpp"

namespace affkl {

using Entry = std::int64_t;

/// Sequence of generator indices; the product s_{w[0]} s_{w[1]} ... read left to right.
using Word = std::vector<int>;

inline constexpr int kMaxRank = 64;

/// Enumeration and search caps. Defaults are desk scale.
struct Limits {
  int interval_length = 12;  // enumerate_interval: max length of w
  int sweep_length = 10;     // enumerate_by_length: max layer
  int engine_length = 12;    // KL recurrence: max length of w
  std::size_t commutation_class = std::size_t{1} << 20;
  std::size_t star_search = std::size_t{1} << 20;
};

namespace detail {

constexpr Entry floor_div(Entry a, Entry b) {
  Entry q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

constexpr Entry floor_mod(Entry a, Entry b) { return a - floor_div(a, b) * b; }

constexpr int kGreedyStepCap = 1 << 20;

}  // namespace detail

/// The Coxeter system (W, S) of type A~_{n-1}: generators s_0 .. s_{n-1},
/// m(i, j) = 3 for cyclically adjacent indices and 2 otherwise.
class GroupContext {
 public:
  explicit GroupContext(int n) : n_(n) {
    if (n < 3) throw ArgumentError("rank n must be at least 3, got " + std::to_string(n));
    if (n > kMaxRank) throw ArgumentError("rank n must be at most " + std::to_string(kMaxRank));
  }

  int n() const noexcept { return n_; }

  bool valid_generator(int i) const noexcept { return i >= 0 && i < n_; }

  void check_generator(int i) const {
    if (!valid_generator(i))
      throw ArgumentError("generator index " + std::to_string(i) + " out of range for n = " + std::to_string(n_));
  }

  /// i != j and |i - j| = 1 mod n.
  bool adjacent(int i, int j) const noexcept {
    const int d = ((i - j) % n_ + n_) % n_;
    return d == 1 || d == n_ - 1;
  }

  bool commute(int i, int j) const noexcept { return !adjacent(i, j); }

  /// Order of s_i s_j.
  int m(int i, int j) const {
    check_generator(i);
    check_generator(j);
    if (i == j) return 1;
    return adjacent(i, j) ? 3 : 2;
  }

  friend bool operator==(const GroupContext&, const GroupContext&) = default;

 private:
  int n_;
};

/// A set of generator indices, e.g. a left or right descent set.
class DescentSet {
 public:
  DescentSet() = default;
  explicit DescentSet(int n) : n_(n) {}
  DescentSet(int n, std::initializer_list<int> members) : n_(n) {
    for (int i : members) insert(i);
  }

  int rank() const noexcept { return n_; }

  void insert(int i) {
    if (i < 0 || i >= n_) throw ArgumentError("descent index " + std::to_string(i) + " out of range");
    bits_ |= std::uint64_t{1} << i;
  }

  bool contains(int i) const noexcept { return i >= 0 && i < n_ && ((bits_ >> i) & 1u) != 0; }
  bool empty() const noexcept { return bits_ == 0; }
  int size() const noexcept { return __builtin_popcountll(bits_); }
  std::uint64_t bits() const noexcept { return bits_; }

  std::vector<int> members() const {
    std::vector<int> out;
    for (int i = 0; i < n_; ++i)
      if (contains(i)) out.push_back(i);
    return out;
  }

  DescentSet minus(const DescentSet& other) const {
    DescentSet out(n_);
    out.bits_ = bits_ & ~other.bits_;
    return out;
  }

  bool subset_of(const DescentSet& other) const noexcept { return (bits_ & ~other.bits_) == 0; }

  /// No two members are cyclically adjacent mod n.
  bool is_commutative() const noexcept {
    if (n_ == 0) return true;
    const std::uint64_t mask = n_ == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n_) - 1);
    const std::uint64_t rotated = ((bits_ << 1) | (bits_ >> (n_ - 1))) & mask;
    return (bits_ & rotated) == 0;
  }

  friend bool operator==(const DescentSet&, const DescentSet&) = default;

 private:
  int n_ = 0;
  std::uint64_t bits_ = 0;
};

inline bool descent_commutative(const DescentSet& d) { return d.is_commutative(); }

struct WindowFault {
  std::size_t index;  // window slot (0-based) where the fault was detected
  std::string reason;
};

/// Checks both window invariants: residues mod n distinct, sum n(n+1)/2.
inline std::optional<WindowFault> check_window(std::span<const Entry> window) {
  const auto n = static_cast<Entry>(window.size());
  if (n < 3 || n > kMaxRank) return WindowFault{0, "window length must be between 3 and " + std::to_string(kMaxRank)};
  std::vector<int> seen(static_cast<std::size_t>(n), -1);
  Entry sum = 0;
  for (std::size_t i = 0; i < window.size(); ++i) {
    const auto r = static_cast<std::size_t>(detail::floor_mod(window[i], n));
    if (seen[r] >= 0)
      return WindowFault{i, "duplicate residue " + std::to_string(r) + " mod " + std::to_string(n)};
    seen[r] = static_cast<int>(i);
    sum += window[i];
  }
  if (sum != n * (n + 1) / 2)
    return WindowFault{window.size() - 1,
                       "window sum " + std::to_string(sum) + " differs from " + std::to_string(n * (n + 1) / 2)};
  return std::nullopt;
}

class AffinePermutation {
 public:
  struct unchecked_t {};
  static constexpr unchecked_t unchecked{};

  /// Trusted construction from a window already known to be valid.
  AffinePermutation(std::vector<Entry> window, unchecked_t) : window_(std::move(window)) {}

  static AffinePermutation identity(int n) {
    GroupContext ctx(n);
    std::vector<Entry> w(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) w[static_cast<std::size_t>(i)] = i + 1;
    return {std::move(w), unchecked};
  }

  static AffinePermutation from_window(std::vector<Entry> window) {
    if (auto fault = check_window(window))
      throw ArgumentError("invalid window at slot " + std::to_string(fault->index) + ": " + fault->reason);
    return {std::move(window), unchecked};
  }

  int rank() const noexcept { return static_cast<int>(window_.size()); }
  std::span<const Entry> window() const noexcept { return window_; }

  /// w(p) for any integer position p.
  Entry operator()(Entry position) const noexcept {
    const auto n = static_cast<Entry>(window_.size());
    const Entry k = detail::floor_div(position - 1, n);
    return window_[static_cast<std::size_t>(position - 1 - k * n)] + k * n;
  }

  bool is_identity() const noexcept {
    for (std::size_t i = 0; i < window_.size(); ++i)
      if (window_[i] != static_cast<Entry>(i + 1)) return false;
    return true;
  }

  std::size_t hash() const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (Entry v : window_) h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }

  std::string to_string() const {
    std::string out = "[";
    for (std::size_t i = 0; i < window_.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(window_[i]);
    }
    return out + "]";
  }

  friend bool operator==(const AffinePermutation&, const AffinePermutation&) = default;
  friend auto operator<=>(const AffinePermutation&, const AffinePermutation&) = default;

 private:
  std::vector<Entry> window_;
};

}  // namespace affkl

template <>
struct std::hash<affkl::AffinePermutation> {
  std::size_t operator()(const affkl::AffinePermutation& w) const noexcept { return w.hash(); }
};

namespace affkl {

using ElementPair = std::pair<AffinePermutation, AffinePermutation>;

struct ElementPairHash {
  std::size_t operator()(const ElementPair& p) const noexcept {
    const std::size_t a = p.first.hash();
    return a ^ (p.second.hash() + 0x9e3779b97f4a7c15ull + (a << 6) + (a >> 2));
  }
};

inline void require_same_rank(const AffinePermutation& a, const AffinePermutation& b, const char* op) {
  if (a.rank() != b.rank())
    throw ArgumentError(std::string(op) + ": rank mismatch (" + std::to_string(a.rank()) + " vs " +
                        std::to_string(b.rank()) + ")");
}

inline void require_generator(const AffinePermutation& w, int i) {
  if (i < 0 || i >= w.rank())
    throw ArgumentError("generator index " + std::to_string(i) + " out of range for n = " + std::to_string(w.rank()));
}

/// w * s_i.
inline AffinePermutation multiply_right_generator(const AffinePermutation& w, int i) {
  require_generator(w, i);
  std::vector<Entry> win(w.window().begin(), w.window().end());
  const auto n = static_cast<Entry>(win.size());
  if (i == 0) {
    const Entry first = win.front();
    win.front() = win.back() - n;
    win.back() = first + n;
  } else {
    std::swap(win[static_cast<std::size_t>(i - 1)], win[static_cast<std::size_t>(i)]);
  }
  return {std::move(win), AffinePermutation::unchecked};
}

/// s_i * w. Swaps the value classes i and i+1 mod n.
inline AffinePermutation multiply_left_generator(int i, const AffinePermutation& w) {
  require_generator(w, i);
  std::vector<Entry> win(w.window().begin(), w.window().end());
  const auto n = static_cast<Entry>(win.size());
  const Entry up = i;
  const Entry down = (i + 1) % n;
  for (Entry& v : win) {
    const Entry r = detail::floor_mod(v, n);
    if (r == up)
      ++v;
    else if (r == down)
      --v;
  }
  return {std::move(win), AffinePermutation::unchecked};
}

inline AffinePermutation multiply(const AffinePermutation& a, const AffinePermutation& b) {
  require_same_rank(a, b, "multiply");
  std::vector<Entry> win(b.window().size());
  for (std::size_t j = 0; j < win.size(); ++j) win[j] = a(b.window()[j]);
  return {std::move(win), AffinePermutation::unchecked};
}

inline AffinePermutation inverse(const AffinePermutation& w) {
  const auto n = static_cast<Entry>(w.rank());
  std::vector<Entry> win(static_cast<std::size_t>(n));
  for (Entry j = 1; j <= n; ++j) {
    const Entry v = w.window()[static_cast<std::size_t>(j - 1)];
    const Entry k = detail::floor_div(v - 1, n);
    win[static_cast<std::size_t>(v - 1 - k * n)] = j - k * n;
  }
  return {std::move(win), AffinePermutation::unchecked};
}

inline AffinePermutation from_word(const GroupContext& ctx, std::span<const int> word) {
  auto w = AffinePermutation::identity(ctx.n());
  for (int i : word) {
    ctx.check_generator(i);
    w = multiply_right_generator(w, i);
  }
  return w;
}

inline AffinePermutation from_word(const GroupContext& ctx, std::initializer_list<int> word) {
  return from_word(ctx, std::span<const int>(word.begin(), word.size()));
}

inline AffinePermutation generator(const GroupContext& ctx, int i) { return from_word(ctx, {i}); }

/// w(i) > w(i+1), with position 0 read as w(n) - n.
inline bool has_right_descent(const AffinePermutation& w, int i) {
  require_generator(w, i);
  const auto win = w.window();
  if (i == 0) return win.back() - static_cast<Entry>(win.size()) > win.front();
  return win[static_cast<std::size_t>(i - 1)] > win[static_cast<std::size_t>(i)];
}

inline DescentSet right_descents(const AffinePermutation& w) {
  DescentSet d(w.rank());
  for (int i = 0; i < w.rank(); ++i)
    if (has_right_descent(w, i)) d.insert(i);
  return d;
}

inline DescentSet left_descents(const AffinePermutation& w) { return right_descents(inverse(w)); }

inline bool has_left_descent(const AffinePermutation& w, int i) { return has_right_descent(inverse(w), i); }

namespace detail {

inline int first_right_descent(const AffinePermutation& w) {
  for (int i = 0; i < w.rank(); ++i)
    if (has_right_descent(w, i)) return i;
  return -1;
}

/// Strips the smallest right descent until the identity is reached; returns
/// the stripped letters in stripping order.
inline Word greedy_strip(const AffinePermutation& w) {
  Word stripped;
  AffinePermutation cur = w;
  for (int i = first_right_descent(cur); i >= 0; i = first_right_descent(cur)) {
    cur = multiply_right_generator(cur, i);
    stripped.push_back(i);
    if (stripped.size() > static_cast<std::size_t>(kGreedyStepCap))
      throw InternalError("descent stripping exceeded its step cap on " + w.to_string());
  }
  if (!cur.is_identity()) throw InternalError("descent-free element is not the identity: " + cur.to_string());
  return stripped;
}

}  // namespace detail

/// l(w), counted by greedy right-descent stripping.
inline int length(const AffinePermutation& w) { return static_cast<int>(detail::greedy_strip(w).size()); }

/// Closed-form inversion count sum_{i<j} |floor((w(j) - w(i)) / n)|. Validated
/// against `length` in the test suite; not used by the engine.
inline int inversion_length(const AffinePermutation& w) {
  const auto n = static_cast<Entry>(w.rank());
  const auto win = w.window();
  Entry total = 0;
  for (std::size_t i = 0; i < win.size(); ++i)
    for (std::size_t j = i + 1; j < win.size(); ++j) {
      const Entry q = detail::floor_div(win[j] - win[i], n);
      total += q < 0 ? -q : q;
    }
  return static_cast<int>(total);
}

/// The greedy stripping word reversed: length l(w), multiplies back to w.
inline Word reduced_word(const AffinePermutation& w) {
  Word word = detail::greedy_strip(w);
  std::reverse(word.begin(), word.end());
  return word;
}

using BruhatMemo = ConcurrentMap<ElementPair, bool, ElementPairHash>;

/// x <= w in the Bruhat order. For s a left descent of w, x <= w iff
/// min(x, sx) <= sw; the chain bottoms out at w = e.
inline bool bruhat_leq(const AffinePermutation& x, const AffinePermutation& w, BruhatMemo* memo = nullptr) {
  require_same_rank(x, w, "bruhat_leq");
  if (memo) {
    if (auto hit = memo->find({x, w})) return *hit;
  }
  AffinePermutation cx = x;
  AffinePermutation cw = w;
  int lx = length(x);
  int lw = length(w);
  bool answer = false;
  while (true) {
    if (lx > lw) break;
    if (lx == lw) {
      answer = cx == cw;
      break;
    }
    const auto inv_w = inverse(cw);
    const int s = detail::first_right_descent(inv_w);
    cw = multiply_left_generator(s, cw);
    --lw;
    if (has_left_descent(cx, s)) {
      cx = multiply_left_generator(s, cx);
      --lx;
    }
  }
  if (memo) memo->insert_if_absent({x, w}, answer);
  return answer;
}

/// All x <= w, as subword products of reduced_word(w); sorted by window.
inline std::vector<AffinePermutation> enumerate_interval(const AffinePermutation& w,
                                                         int cap = Limits{}.interval_length) {
  const Word word = reduced_word(w);
  if (static_cast<int>(word.size()) > cap)
    throw ResourceError("interval enumeration cap exceeded: l(w) = " + std::to_string(word.size()) +
                        " > interval cap " + std::to_string(cap));
  std::unordered_set<AffinePermutation> seen{AffinePermutation::identity(w.rank())};
  std::vector<AffinePermutation> members(seen.begin(), seen.end());
  for (int letter : word) {
    const std::size_t count = members.size();
    for (std::size_t k = 0; k < count; ++k) {
      auto next = multiply_right_generator(members[k], letter);
      if (seen.insert(next).second) members.push_back(std::move(next));
    }
  }
  std::sort(members.begin(), members.end());
  return members;
}

/// Elements of length 0..max_length, bucketed by length, each bucket sorted by window.
inline std::map<int, std::vector<AffinePermutation>> enumerate_by_length(const GroupContext& ctx, int max_length,
                                                                        int cap = Limits{}.sweep_length) {
  if (max_length > cap)
    throw ResourceError("length sweep cap exceeded: " + std::to_string(max_length) + " > sweep cap " +
                        std::to_string(cap));
  std::map<int, std::vector<AffinePermutation>> buckets;
  if (max_length < 0) return buckets;
  std::unordered_set<AffinePermutation> seen{AffinePermutation::identity(ctx.n())};
  buckets[0] = {AffinePermutation::identity(ctx.n())};
  for (int k = 1; k <= max_length; ++k) {
    std::vector<AffinePermutation> layer;
    for (const auto& x : buckets[k - 1])
      for (int i = 0; i < ctx.n(); ++i) {
        auto y = multiply_right_generator(x, i);
        if (seen.insert(y).second) layer.push_back(std::move(y));
      }
    std::sort(layer.begin(), layer.end());
    buckets[k] = std::move(layer);
  }
  return buckets;
}

}  // namespace affkl
