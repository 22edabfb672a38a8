#pragma once

// Fully commutative elements, {s,t}-strings and star operations, the
// alternating products of I_0 = prod S_0 and I_1 = prod S_1 (n even), the
// star-sequence search for non-FC elements, and the four-way classifier of
// FC elements.

#include <algorithm>
#include <cstddef>
#include <deque>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "affkl/errors.hpp"
#include "affkl/group.hpp"

namespace affkl {

/// A pair of noncommuting generators. The orientation (which one is `s`)
/// only matters for naming string cases; star operations ignore it.
struct StarPair {
  int s;
  int t;

  static StarPair make(const GroupContext& ctx, int s, int t) {
    ctx.check_generator(s);
    ctx.check_generator(t);
    if (!ctx.adjacent(s, t))
      throw ArgumentError("star pair {" + std::to_string(s) + "," + std::to_string(t) + "} commutes");
    return {s, t};
  }

  StarPair flipped() const noexcept { return {t, s}; }
  bool contains(int i) const noexcept { return i == s || i == t; }
  int other(int i) const noexcept { return i == s ? t : s; }

  friend bool operator==(const StarPair&, const StarPair&) = default;
};

/// The n noncommuting pairs {i, i+1 mod n}, in index order.
inline std::vector<StarPair> star_pairs(const GroupContext& ctx) {
  std::vector<StarPair> out;
  for (int i = 0; i < ctx.n(); ++i) out.push_back({i, (i + 1) % ctx.n()});
  return out;
}

enum class StringCase { Minimal, Maximal, StringIII, StringIV };

inline const char* to_string(StringCase c) {
  switch (c) {
    case StringCase::Minimal: return "minimal";
    case StringCase::Maximal: return "maximal";
    case StringCase::StringIII: return "string_iii";
    case StringCase::StringIV: return "string_iv";
  }
  return "?";
}

/// w = w_I * w^I with w_I in <s,t> and no left descent of w^I in I.
struct StringPosition {
  StringCase case_tag;
  Word w_I;  // product read left to right; the longest element is normalized to [s,t,s]
  AffinePermutation w_upper_I;
};

inline StringPosition string_position(const AffinePermutation& w, const StarPair& pair) {
  Word stripped;
  AffinePermutation rest = w;
  while (stripped.size() < 3) {
    const bool has_s = has_left_descent(rest, pair.s);
    const bool has_t = has_left_descent(rest, pair.t);
    if (!has_s && !has_t) break;
    const int r = has_s ? pair.s : pair.t;
    rest = multiply_left_generator(r, rest);
    stripped.push_back(r);
  }
  if (has_left_descent(rest, pair.s) || has_left_descent(rest, pair.t))
    throw InternalError("coset stripping did not reach W^I for " + w.to_string());

  const auto& [s, t] = pair;
  StringCase tag = StringCase::Minimal;
  if (stripped.size() == 3) {
    tag = StringCase::Maximal;
    stripped = {s, t, s};
  } else if (stripped == Word{s} || stripped == Word{t, s}) {
    tag = StringCase::StringIII;
  } else if (stripped == Word{t} || stripped == Word{s, t}) {
    tag = StringCase::StringIV;
  }
  return {tag, std::move(stripped), std::move(rest)};
}

/// *w: the other element of w's left {s,t}-string, if w lies on one.
inline std::optional<AffinePermutation> left_star(const AffinePermutation& w, const StarPair& pair) {
  const bool has_s = has_left_descent(w, pair.s);
  const bool has_t = has_left_descent(w, pair.t);
  if (has_s == has_t) return std::nullopt;
  // Exactly one of s, t is a left descent, so w_I is one of s, t, st, ts.
  const auto pos = string_position(w, pair);
  if (pos.case_tag == StringCase::StringIII) return multiply_left_generator(pair.t, w);
  if (pos.case_tag == StringCase::StringIV) return multiply_left_generator(pair.s, w);
  throw InternalError("single left descent in I but no string case for " + w.to_string());
}

/// w*: the right-handed analogue, via inversion.
inline std::optional<AffinePermutation> right_star(const AffinePermutation& w, const StarPair& pair) {
  auto star = left_star(inverse(w), pair);
  if (!star) return std::nullopt;
  return inverse(*star);
}

/// Alternating product I_start I_{1-start} ... with `count` factors; n even.
inline AffinePermutation alternating_product(const GroupContext& ctx, int start, int count) {
  if (ctx.n() % 2 != 0) throw ArgumentError("alternating products need even n, got " + std::to_string(ctx.n()));
  if (start != 0 && start != 1) throw ArgumentError("alternating product start must be 0 or 1");
  if (count < 1) throw ArgumentError("alternating product needs at least one factor");
  auto w = AffinePermutation::identity(ctx.n());
  for (int k = 0; k < count; ++k) {
    const int parity = (start + k) % 2;
    for (int i = parity; i < ctx.n(); i += 2) w = multiply_right_generator(w, i);
  }
  return w;
}

/// The set S_b = {s_b, s_{b+2}, ...}; n even.
inline DescentSet parity_class(const GroupContext& ctx, int b) {
  DescentSet d(ctx.n());
  for (int i = b; i < ctx.n(); i += 2) d.insert(i);
  return d;
}

struct AlternatingParams {
  int start;
  int count;
  friend bool operator==(const AlternatingParams&, const AlternatingParams&) = default;
};

inline std::optional<AlternatingParams> recognize_alternating(const AffinePermutation& w) {
  const GroupContext ctx(w.rank());
  if (ctx.n() % 2 != 0 || w.is_identity()) return std::nullopt;
  const DescentSet even = parity_class(ctx, 0);
  const DescentSet odd = parity_class(ctx, 1);

  const DescentSet first = left_descents(w);
  int expect;
  if (first == even)
    expect = 0;
  else if (first == odd)
    expect = 1;
  else
    return std::nullopt;

  AlternatingParams found{expect, 0};
  AffinePermutation rest = w;
  while (!rest.is_identity()) {
    if (left_descents(rest) != parity_class(ctx, expect)) return std::nullopt;
    for (int i = expect; i < ctx.n(); i += 2) rest = multiply_left_generator(i, rest);
    ++found.count;
    expect = 1 - expect;
  }
  if (alternating_product(ctx, found.start, found.count) != w)
    throw InternalError("alternating recognition does not rebuild " + w.to_string());
  return found;
}

namespace detail {

inline bool has_braid_factor(const GroupContext& ctx, const Word& word) {
  for (std::size_t k = 0; k + 2 < word.size(); ++k)
    if (word[k] == word[k + 2] && ctx.adjacent(word[k], word[k + 1])) return true;
  return false;
}

}  // namespace detail

/// Explores the commutation class of reduced_word(w); w is fully commutative
/// iff no word in it contains a factor s t s with s, t noncommuting.
inline bool is_fully_commutative(const AffinePermutation& w, std::size_t cap = Limits{}.commutation_class) {
  const GroupContext ctx(w.rank());
  const Word start = reduced_word(w);
  std::set<Word> seen{start};
  std::deque<Word> queue{start};
  while (!queue.empty()) {
    Word word = std::move(queue.front());
    queue.pop_front();
    if (detail::has_braid_factor(ctx, word)) return false;
    for (std::size_t k = 0; k + 1 < word.size(); ++k) {
      if (word[k] == word[k + 1] || !ctx.commute(word[k], word[k + 1])) continue;
      Word next = word;
      std::swap(next[k], next[k + 1]);
      if (seen.insert(next).second) {
        if (seen.size() > cap)
          throw ResourceError("commutation class of " + w.to_string() + " exceeds cap " + std::to_string(cap));
        queue.push_back(std::move(next));
      }
    }
  }
  return true;
}

struct StarStep {
  StarPair pair;
  AffinePermutation element;  // result of applying the left star for `pair`
};

/// A shortest chain of left star operations from a non-FC w to an element
/// whose left descent set is not commutative. Empty iff L(w) is already
/// noncommutative.
inline std::vector<StarStep> shi_sequence(const AffinePermutation& w, const Limits& limits = {}) {
  if (is_fully_commutative(w, limits.commutation_class))
    throw ArgumentError("star sequence requires a non fully commutative element, got " + w.to_string());
  if (!left_descents(w).is_commutative()) return {};

  const GroupContext ctx(w.rank());
  const auto pairs = star_pairs(ctx);
  struct Parent {
    AffinePermutation from;
    StarPair pair;
  };
  std::unordered_map<AffinePermutation, std::optional<Parent>> parent;
  parent.emplace(w, std::nullopt);
  std::deque<AffinePermutation> queue{w};

  auto unwind = [&](AffinePermutation end) {
    std::vector<StarStep> path;
    for (auto node = end; parent.at(node).has_value();) {
      const auto& p = *parent.at(node);
      path.push_back({p.pair, node});
      node = p.from;
    }
    std::reverse(path.begin(), path.end());
    return path;
  };

  while (!queue.empty()) {
    const AffinePermutation u = queue.front();
    queue.pop_front();
    for (const auto& pair : pairs) {
      auto next = left_star(u, pair);
      if (!next || parent.count(*next)) continue;
      parent.emplace(*next, Parent{u, pair});
      if (!left_descents(*next).is_commutative()) return unwind(*next);
      if (parent.size() > limits.star_search)
        throw ResourceError("star sequence search from " + w.to_string() + " exceeds cap " +
                            std::to_string(limits.star_search));
      queue.push_back(std::move(*next));
    }
  }
  throw InternalError("star orbit of non-FC " + w.to_string() + " has no element with noncommutative left descents");
}

enum class FcCase { CommutingProduct, AlternatingI0I1, LeftStarReducible, RightStarReducible };

inline const char* to_string(FcCase c) {
  switch (c) {
    case FcCase::CommutingProduct: return "commuting_product";
    case FcCase::AlternatingI0I1: return "alternating_I0_I1";
    case FcCase::LeftStarReducible: return "left_star_reducible";
    case FcCase::RightStarReducible: return "right_star_reducible";
  }
  return "?";
}

/// A reducing star: for the left case w = s t v reduced with *w = t v; for
/// the right case w = v t s reduced with w* = v t. `pair.s` is the descent.
struct StarWitness {
  StarPair pair;
  AffinePermutation target;
};

struct FcClassification {
  std::vector<FcCase> cases;  // in FcCase declaration order
  std::optional<std::vector<int>> commuting;
  std::optional<AlternatingParams> alternating;
  std::vector<StarWitness> left;   // every reducing pair, in star_pairs order
  std::vector<StarWitness> right;

  bool has(FcCase c) const { return std::find(cases.begin(), cases.end(), c) != cases.end(); }
};

inline FcClassification classify_fc(const AffinePermutation& w, const Limits& limits = {}) {
  if (!is_fully_commutative(w, limits.commutation_class))
    throw ArgumentError("classification requires a fully commutative element, got " + w.to_string());
  const GroupContext ctx(w.rank());
  const int lw = length(w);
  FcClassification out;

  Word letters = reduced_word(w);
  std::sort(letters.begin(), letters.end());
  bool commuting = std::adjacent_find(letters.begin(), letters.end()) == letters.end();
  for (std::size_t a = 0; commuting && a < letters.size(); ++a)
    for (std::size_t b = a + 1; b < letters.size(); ++b)
      if (ctx.adjacent(letters[a], letters[b])) {
        commuting = false;
        break;
      }
  if (commuting) {
    out.cases.push_back(FcCase::CommutingProduct);
    out.commuting = letters;
  }

  if (auto alt = recognize_alternating(w)) {
    out.cases.push_back(FcCase::AlternatingI0I1);
    out.alternating = alt;
  }

  const DescentSet ld = left_descents(w);
  const DescentSet rd = right_descents(w);
  for (const auto& pair : star_pairs(ctx)) {
    if (ld.contains(pair.s) != ld.contains(pair.t)) {
      const StarPair oriented = ld.contains(pair.s) ? pair : pair.flipped();
      auto star = left_star(w, oriented);
      if (star && length(*star) == lw - 1) out.left.push_back({oriented, std::move(*star)});
    }
    if (rd.contains(pair.s) != rd.contains(pair.t)) {
      const StarPair oriented = rd.contains(pair.s) ? pair : pair.flipped();
      auto star = right_star(w, oriented);
      if (star && length(*star) == lw - 1) out.right.push_back({oriented, std::move(*star)});
    }
  }
  if (!out.left.empty()) out.cases.push_back(FcCase::LeftStarReducible);
  if (!out.right.empty()) out.cases.push_back(FcCase::RightStarReducible);

  if (out.cases.empty()) throw InternalError("fully commutative " + w.to_string() + " fits none of the four cases");
  return out;
}

}  // namespace affkl
