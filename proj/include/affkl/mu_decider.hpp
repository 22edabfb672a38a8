#pragma once

// Decides mu(x, w) in {0, 1} for fully commutative x without computing any
// KL polynomial, by walking the case analysis: parity and Bruhat filters,
// the descent rule (s in L(w) \ L(x) forces mu = 0 unless x = sw), left and
// right star steps that preserve mu, and the four shapes of an FC w.

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "affkl/concurrent_map.hpp"
#include "affkl/errors.hpp"
#include "affkl/fc_star.hpp"
#include "affkl/group.hpp"
#include "affkl/kl_engine.hpp"

namespace affkl {

/// Raised when a runtime assertion of the case analysis fails on live data:
/// the running x lost full commutativity, or a branch's precondition did not
/// hold. Callers fall back to the KL engine and should log the pair.
class FallbackRequired : public std::runtime_error {
 public:
  FallbackRequired(const std::string& what, AffinePermutation x, AffinePermutation w)
      : std::runtime_error(what + " at x = " + x.to_string() + ", w = " + w.to_string()),
        x_(std::move(x)),
        w_(std::move(w)) {}

  const AffinePermutation& x() const noexcept { return x_; }
  const AffinePermutation& w() const noexcept { return w_; }

 private:
  AffinePermutation x_;
  AffinePermutation w_;
};

enum class Side { Left, Right };

enum class StepKind {
  ParityZero,    // l(x) = l(w) mod 2
  NotBelowZero,  // x is not below w
  CoveringOne,   // x < w with l(w) = l(x) + 1, so P_{x,w} = 1
  DescentRule,   // s in D(w) \ D(x): mu = [x = sw] (left) or [x = ws] (right)
  StarStep,      // (x, w) -> (*x, *w) or (x*, w*)
  FcCaseStep,    // w is FC and this case was consumed; terminal only for the alternating case
};

inline const char* to_string(StepKind k) {
  switch (k) {
    case StepKind::ParityZero: return "parity-zero";
    case StepKind::NotBelowZero: return "not-below-zero";
    case StepKind::CoveringOne: return "covering-one";
    case StepKind::DescentRule: return "descent-rule";
    case StepKind::StarStep: return "star-step";
    case StepKind::FcCaseStep: return "fc-case";
  }
  return "?";
}

struct TraceStep {
  StepKind kind;
  Side side = Side::Left;
  int generator = -1;                    // DescentRule
  bool outcome = false;                  // DescentRule
  StarPair pair{-1, -1};                 // StarStep
  FcCase tag = FcCase::CommutingProduct;  // FcCaseStep
  std::optional<ElementPair> after{};    // StarStep: the new (x, w)
};

struct MuDecision {
  int value = 0;
  std::vector<TraceStep> trace;
};

struct DeciderConfig {
  std::array<FcCase, 4> priority{FcCase::LeftStarReducible, FcCase::RightStarReducible, FcCase::CommutingProduct,
                                 FcCase::AlternatingI0I1};
  Limits limits{};
  int max_iterations = 1 << 16;
};

/// Caches full commutativity and star sequences per element; thread-safe.
class MuDecider {
 public:
  explicit MuDecider(GroupContext ctx, DeciderConfig config = {}) : ctx_(ctx), config_(config) {}

  const GroupContext& context() const noexcept { return ctx_; }

  bool is_fc(const AffinePermutation& w) {
    if (auto hit = fc_.find(w)) return *hit;
    return fc_.insert_if_absent(w, is_fully_commutative(w, config_.limits.commutation_class));
  }

  bool leq(const AffinePermutation& x, const AffinePermutation& w) { return bruhat_leq(x, w, &bruhat_); }

  MuDecision decide(const AffinePermutation& x0, const AffinePermutation& w0) {
    require_same_rank(x0, w0, "decide_mu");
    if (x0.rank() != ctx_.n()) throw ArgumentError("decide_mu: element rank differs from decider rank");
    if (!is_fc(x0)) throw ArgumentError("decide_mu requires fully commutative x, got " + x0.to_string());

    MuDecision out;
    AffinePermutation x = x0;
    AffinePermutation w = w0;
    auto finish = [&](TraceStep step, int value) {
      out.trace.push_back(std::move(step));
      out.value = value;
      return out;
    };
    auto descent_rule = [&](Side side, int s) {
      const auto sw = side == Side::Left ? multiply_left_generator(s, w) : multiply_right_generator(w, s);
      const bool hit = x == sw;
      return finish(TraceStep{.kind = StepKind::DescentRule, .side = side, .generator = s, .outcome = hit}, hit ? 1 : 0);
    };
    auto star_step = [&](Side side, const StarPair& pair, AffinePermutation w_next) {
      auto x_next = side == Side::Left ? left_star(x, pair) : right_star(x, pair);
      if (!x_next) throw FallbackRequired("star of x undefined", x, w);
      out.trace.push_back(
          TraceStep{.kind = StepKind::StarStep, .side = side, .pair = pair, .after = ElementPair{*x_next, w_next}});
      x = std::move(*x_next);
      w = std::move(w_next);
    };

    for (int iter = 0; iter < config_.max_iterations; ++iter) {
      if (!is_fc(x)) throw FallbackRequired("x is no longer fully commutative", x, w);
      const int lx = length(x);
      const int lw = length(w);
      if ((lw - lx) % 2 == 0) return finish({.kind = StepKind::ParityZero}, 0);
      if (lx > lw || !leq(x, w)) return finish({.kind = StepKind::NotBelowZero}, 0);
      if (lw - lx == 1) return finish({.kind = StepKind::CoveringOne}, 1);

      const DescentSet lw_set = left_descents(w);
      const DescentSet lx_set = left_descents(x);

      if (!is_fc(w)) {
        if (!lw_set.is_commutative()) {
          const auto choices = lw_set.minus(lx_set).members();
          if (choices.empty()) throw FallbackRequired("no left descent of w outside L(x)", x, w);
          return descent_rule(Side::Left, choices.front());
        }
        const auto sequence = shi_sequence(w, config_.limits);
        if (sequence.empty()) throw InternalError("empty star sequence with commutative L(w)");
        const StarPair pair = lw_set.contains(sequence.front().pair.s) ? sequence.front().pair
                                                                      : sequence.front().pair.flipped();
        if (!lw_set.contains(pair.s) || lw_set.contains(pair.t))
          throw FallbackRequired("L(w) meets the star pair in other than one element", x, w);
        if (!lx_set.contains(pair.s)) return descent_rule(Side::Left, pair.s);
        if (lx_set.contains(pair.t)) throw FallbackRequired("L(x) contains both star generators", x, w);
        star_step(Side::Left, pair, sequence.front().element);
        continue;
      }

      const FcClassification cls = classify_fc(w, config_.limits);
      bool advanced = false;
      for (FcCase tag : config_.priority) {
        if (!cls.has(tag)) continue;
        out.trace.push_back({.kind = StepKind::FcCaseStep, .tag = tag});
        if (tag == FcCase::LeftStarReducible || tag == FcCase::RightStarReducible) {
          const bool left = tag == FcCase::LeftStarReducible;
          const auto& witness = left ? cls.left.front() : cls.right.front();
          const DescentSet x_side = left ? lx_set : right_descents(x);
          const Side side = left ? Side::Left : Side::Right;
          if (!x_side.contains(witness.pair.s)) return descent_rule(side, witness.pair.s);
          if (x_side.contains(witness.pair.t)) throw FallbackRequired("descent set of x meets I twice", x, w);
          star_step(side, witness.pair, witness.target);
          advanced = true;
          break;
        }
        if (tag == FcCase::CommutingProduct) {
          const auto choices = lw_set.minus(lx_set).members();
          if (choices.empty()) throw FallbackRequired("commuting product with no deletable generator", x, w);
          return descent_rule(Side::Left, choices.front());
        }
        // Alternating product of I_0 and I_1.
        if (auto left_choices = lw_set.minus(lx_set).members(); !left_choices.empty())
          return descent_rule(Side::Left, left_choices.front());
        if (auto right_choices = right_descents(w).minus(right_descents(x)).members(); !right_choices.empty())
          return descent_rule(Side::Right, right_choices.front());
        out.value = 0;
        return out;
      }
      if (!advanced) throw InternalError("classification of " + w.to_string() + " produced no usable case");
    }
    throw InternalError("decide_mu did not terminate within " + std::to_string(config_.max_iterations) + " steps");
  }

 private:
  GroupContext ctx_;
  DeciderConfig config_;
  ConcurrentMap<AffinePermutation, bool> fc_;
  BruhatMemo bruhat_;
};

inline MuDecision decide_mu(const AffinePermutation& x, const AffinePermutation& w) {
  MuDecider decider(GroupContext(x.rank()));
  return decider.decide(x, w);
}

/// Outcome ([x = sw] or [x = ws]) for every s in D(w) \ D(x) on the given side.
inline std::vector<bool> descent_rule_outcomes(const AffinePermutation& x, const AffinePermutation& w, Side side) {
  const DescentSet dw = side == Side::Left ? left_descents(w) : right_descents(w);
  const DescentSet dx = side == Side::Left ? left_descents(x) : right_descents(x);
  std::vector<bool> out;
  for (int s : dw.minus(dx).members()) {
    const auto sw = side == Side::Left ? multiply_left_generator(s, w) : multiply_right_generator(w, s);
    out.push_back(x == sw);
  }
  return out;
}

/// Re-validates every step of a trace from (x, w) and checks it ends on the
/// recorded value.
inline bool replay(const AffinePermutation& x0, const AffinePermutation& w0, const MuDecision& decision) {
  AffinePermutation x = x0;
  AffinePermutation w = w0;
  for (std::size_t k = 0; k < decision.trace.size(); ++k) {
    const TraceStep& step = decision.trace[k];
    const bool last = k + 1 == decision.trace.size();
    const int gap = length(w) - length(x);
    switch (step.kind) {
      case StepKind::ParityZero:
        return last && gap % 2 == 0 && decision.value == 0;
      case StepKind::NotBelowZero:
        return last && !bruhat_leq(x, w) && decision.value == 0;
      case StepKind::CoveringOne:
        return last && gap == 1 && bruhat_leq(x, w) && decision.value == 1;
      case StepKind::DescentRule: {
        const bool left = step.side == Side::Left;
        const DescentSet dw = left ? left_descents(w) : right_descents(w);
        const DescentSet dx = left ? left_descents(x) : right_descents(x);
        if (!last || !dw.contains(step.generator) || dx.contains(step.generator)) return false;
        const auto sw = left ? multiply_left_generator(step.generator, w) : multiply_right_generator(w, step.generator);
        return step.outcome == (x == sw) && decision.value == (step.outcome ? 1 : 0);
      }
      case StepKind::StarStep: {
        if (last || !step.after) return false;
        const bool left = step.side == Side::Left;
        auto xs = left ? left_star(x, step.pair) : right_star(x, step.pair);
        auto ws = left ? left_star(w, step.pair) : right_star(w, step.pair);
        if (!xs || !ws || *xs != step.after->first || *ws != step.after->second) return false;
        x = std::move(*xs);
        w = std::move(*ws);
        break;
      }
      case StepKind::FcCaseStep: {
        if (!is_fully_commutative(w) || !classify_fc(w).has(step.tag)) return false;
        if (last) {
          return step.tag == FcCase::AlternatingI0I1 && left_descents(w).subset_of(left_descents(x)) &&
                 right_descents(w).subset_of(right_descents(x)) && decision.value == 0;
        }
        break;
      }
    }
  }
  return false;
}

struct VerifyReport {
  int n = 0;
  int max_len = 0;
  std::int64_t pairs_checked = 0;
  std::int64_t mu_one = 0;
  std::int64_t mu_zero = 0;
  std::int64_t disagreements = 0;
  std::int64_t out_of_range = 0;
  std::int64_t fallbacks = 0;
  std::optional<ElementPair> first_failure;

  bool ok() const noexcept { return disagreements == 0 && out_of_range == 0 && fallbacks == 0; }

  void merge(const VerifyReport& other) {
    pairs_checked += other.pairs_checked;
    mu_one += other.mu_one;
    mu_zero += other.mu_zero;
    disagreements += other.disagreements;
    out_of_range += other.out_of_range;
    fallbacks += other.fallbacks;
    if (!first_failure || (other.first_failure && *other.first_failure < *first_failure))
      first_failure = other.first_failure;
  }
};

class VerificationFailure : public std::runtime_error {
 public:
  VerificationFailure(const std::string& what, ElementPair pair)
      : std::runtime_error(what + " at x = " + pair.first.to_string() + ", w = " + pair.second.to_string()),
        pair_(std::move(pair)) {}
  const ElementPair& pair() const noexcept { return pair_; }

 private:
  ElementPair pair_;
};

inline void require_verified(const VerifyReport& report) {
  if (!report.ok() && report.first_failure) throw VerificationFailure("theorem sweep failed", *report.first_failure);
}

/// For every w with l(w) <= max_len_w and every fully commutative x < w:
/// the engine's mu lies in {0, 1} and the decider agrees with it.
/// Pairs are spread over `jobs` threads; the merged counts do not depend on it.
inline VerifyReport verify_theorem(const GroupContext& ctx, int max_len_w, KlCache& engine, MuDecider& decider,
                                   int jobs = 1) {
  if (max_len_w > engine.config().max_length)
    throw ResourceError("verify: max length " + std::to_string(max_len_w) + " exceeds engine cap " +
                        std::to_string(engine.config().max_length));
  std::vector<AffinePermutation> tops;
  for (auto& [len, layer] : enumerate_by_length(ctx, max_len_w, engine.config().max_length))
    tops.insert(tops.end(), layer.begin(), layer.end());

  std::atomic<std::size_t> next{0};
  auto worker = [&](VerifyReport& local) {
    for (std::size_t k = next++; k < tops.size(); k = next++) {
      const auto& w = tops[k];
      for (const auto& x : *engine.interval(w)) {
        if (x == w || !decider.is_fc(x)) continue;
        ++local.pairs_checked;
        const std::int64_t m = engine.mu(x, w);
        bool failed = false;
        if (m == 1)
          ++local.mu_one;
        else if (m == 0)
          ++local.mu_zero;
        else {
          ++local.out_of_range;
          failed = true;
        }
        try {
          if (decider.decide(x, w).value != m) {
            ++local.disagreements;
            failed = true;
          }
        } catch (const FallbackRequired&) {
          ++local.fallbacks;
          failed = true;
        }
        if (failed && (!local.first_failure || ElementPair{x, w} < *local.first_failure)) local.first_failure = {x, w};
      }
    }
  };

  jobs = std::max(1, jobs);
  std::vector<VerifyReport> partial(static_cast<std::size_t>(jobs));
  if (jobs == 1) {
    worker(partial[0]);
  } else {
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(jobs));
    std::vector<std::thread> threads;
    for (std::size_t j = 0; j < partial.size(); ++j)
      threads.emplace_back([&, j] {
        try {
          worker(partial[j]);
        } catch (...) {
          errors[j] = std::current_exception();
          next = tops.size();
        }
      });
    for (auto& t : threads) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  VerifyReport report;
  report.n = ctx.n();
  report.max_len = max_len_w;
  for (const auto& p : partial) report.merge(p);
  return report;
}

inline VerifyReport verify_theorem(const GroupContext& ctx, int max_len_w, int jobs = 1) {
  KlCache engine(ctx);
  MuDecider decider(ctx);
  return verify_theorem(ctx, max_len_w, engine, decider, jobs);
}

}  // namespace affkl
