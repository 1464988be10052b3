#pragma once

#include <span>

#include "dng/core/softmax.hpp"
#include "dng/ngram.hpp"
#include "dng/objectives/loss.hpp"

namespace dng {

namespace detail {

// Every matched occurrence of a reference key contributes
//   (1 / windows) * (1 / matches_of_that_key) * prod(argmax probs)
// to a reward that is subtracted from 1. Keys nobody matched contribute
// nothing. The match structure (argmax tokens, which occurrences matched,
// per-key counts, window count) is held fixed when differentiating.
inline LossOutput reduce_matched_table(const ProbMatrix& probs, const ArgmaxResult& argmax,
                                       const NGramTable& table, std::size_t windows) {
  LossOutput out{1.0, GradMatrix(probs.rows(), probs.cols())};
  const std::size_t n = table.n;
  const double per_window = 1.0 / static_cast<double>(windows);

  // Per-key average first, then over keys, then over windows. This keeps the
  // all-matched case equal to 1 - U/windows bit-for-bit.
  double reward = 0.0;
  Matrix upstream(probs.rows(), probs.cols());
  bool any = false;
  for (const auto& [key, rec] : table.entries) {
    if (rec.matched_probs.empty()) continue;
    any = true;
    const double m = static_cast<double>(rec.matched_probs.size());
    double key_sum = 0.0;
    for (double p : rec.matched_probs) key_sum += p;
    reward += key_sum / m;

    const double coeff = -per_window / m;
    for (std::size_t s : rec.matched_starts) {
      std::span<const double> factors(argmax.max_probs.data() + s, n);
      for (std::size_t j = 0; j < n; ++j) {
        upstream(s + j, argmax.tokens[s + j]) += coeff * product_except(factors, j);
      }
    }
  }
  out.value = 1.0 - reward / static_cast<double>(windows);
  if (any) out.grad = softmax_backward(probs, upstream);
  return out;
}

inline double window_product(const ArgmaxResult& argmax, std::size_t start, std::size_t n) {
  double p = 1.0;
  for (std::size_t i = 0; i < n; ++i) p *= argmax.max_probs[start + i];
  return p;
}

inline bool window_equal(std::span<const TokenId> a, std::span<const TokenId> b, std::size_t start,
                         std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    if (a[start + i] != b[start + i]) return false;
  }
  return true;
}

}  // namespace detail

// Position-aligned n-gram rewards (n >= 2). An occurrence counts only when
// the argmax candidate reproduces the reference n-gram at the same start.
inline LossOutput ngram_rewards(const LogitMatrix& logits, std::span<const TokenId> ref,
                                std::size_t n) {
  if (n < 2) throw InvalidInput("ngram_rewards: order must be >= 2");
  detail::require_example(logits, ref, "ngram_rewards");
  const std::size_t windows = ngram_window_count(ref.size(), n);
  if (windows == 0) return {0.0, GradMatrix(logits.rows(), logits.cols())};

  const ProbMatrix probs = softmax(logits);
  const ArgmaxResult argmax = argmax_seq(probs);
  std::span<const TokenId> cand(argmax.tokens);

  NGramTable table{n, {}};
  for (std::size_t s = 0; s < windows; ++s) {
    NGramRecord& rec = table.entries[NGramKey(ref.subspan(s, n))];
    ++rec.ref_count;
    if (detail::window_equal(cand, ref, s, n)) {
      rec.matched_probs.push_back(detail::window_product(argmax, s, n));
      rec.matched_starts.push_back(s);
    }
  }
  return detail::reduce_matched_table(probs, argmax, table, windows);
}

// Position-free n-gram matches (n >= 1). Any argmax n-gram that appears
// somewhere in the reference counts toward that reference key.
inline LossOutput ngram_matches(const LogitMatrix& logits, std::span<const TokenId> ref,
                                std::size_t n) {
  if (n < 1) throw InvalidInput("ngram_matches: order must be >= 1");
  detail::require_example(logits, ref, "ngram_matches");
  const std::size_t windows = ngram_window_count(ref.size(), n);
  if (windows == 0) return {0.0, GradMatrix(logits.rows(), logits.cols())};

  const ProbMatrix probs = softmax(logits);
  const ArgmaxResult argmax = argmax_seq(probs);
  std::span<const TokenId> cand(argmax.tokens);

  NGramTable table = build_ref_table(ref, n);
  for (std::size_t s = 0; s < windows; ++s) {
    NGramRecord* rec = table.find(NGramKey(cand.subspan(s, n)));
    if (rec == nullptr) continue;
    rec->matched_probs.push_back(detail::window_product(argmax, s, n));
    rec->matched_starts.push_back(s);
  }
  return detail::reduce_matched_table(probs, argmax, table, windows);
}

}  // namespace dng
