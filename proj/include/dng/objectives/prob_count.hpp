#pragma once

#include <algorithm>
#include <limits>
#include <map>
#include <span>
#include <vector>

#include "dng/core/softmax.hpp"
#include "dng/ngram.hpp"
#include "dng/objectives/loss.hpp"

namespace dng {

namespace detail {

struct CandidateGram {
  double prob_count = 0.0;  // sum over occurrences of prod(argmax probs)
  std::size_t ref_count = 0;
  std::vector<std::size_t> starts;
};

inline std::map<NGramKey, CandidateGram> candidate_grams(const ArgmaxResult& argmax,
                                                         std::span<const TokenId> ref,
                                                         std::size_t n) {
  const NGramTable ref_table = build_ref_table(ref, n);
  std::map<NGramKey, CandidateGram> grams;
  std::span<const TokenId> cand(argmax.tokens);
  for (std::size_t s = 0; s + n <= cand.size(); ++s) {
    NGramKey key(cand.subspan(s, n));
    auto [it, inserted] = grams.try_emplace(std::move(key));
    if (inserted) {
      const NGramRecord* rec = ref_table.find(it->first);
      it->second.ref_count = rec ? rec->ref_count : 0;
    }
    double p = 1.0;
    for (std::size_t i = 0; i < n; ++i) p *= argmax.max_probs[s + i];
    it->second.prob_count += p;
    it->second.starts.push_back(s);
  }
  return grams;
}

}  // namespace detail

// Probabilistic n-gram precision, negated: -sum_g min(C~(g), C_ref(g)) / sum_g C~(g)
// over the argmax candidate's distinct grams, where C~ sums products of argmax
// probabilities. The min branch is frozen at the evaluation point; an exact
// tie takes the reference-count branch (no gradient).
inline LossOutput prob_ngram_count(const LogitMatrix& logits, std::span<const TokenId> ref,
                                   std::size_t n) {
  if (n < 1) throw InvalidInput("prob_ngram_count: order must be >= 1");
  detail::require_example(logits, ref, "prob_ngram_count");
  LossOutput out{0.0, GradMatrix(logits.rows(), logits.cols())};
  if (ngram_window_count(ref.size(), n) == 0) return out;

  const ProbMatrix probs = softmax(logits);
  const ArgmaxResult argmax = argmax_seq(probs);
  const auto grams = detail::candidate_grams(argmax, ref, n);

  double matched = 0.0;
  double total = 0.0;
  for (const auto& [key, g] : grams) {
    const double ref_count = static_cast<double>(g.ref_count);
    matched += g.prob_count < ref_count ? g.prob_count : ref_count;
    total += g.prob_count;
  }
  out.value = -matched / total;
  if (matched == 0.0) return out;

  // d(-A/B)/dC~(g) = -(a_g * B - A) / B^2 with a_g = 1 on the C~ branch.
  const double inv_b2 = 1.0 / (total * total);
  Matrix upstream(probs.rows(), probs.cols());
  for (const auto& [key, g] : grams) {
    const double branch = g.prob_count < static_cast<double>(g.ref_count) ? 1.0 : 0.0;
    const double d_count = -(branch * total - matched) * inv_b2;
    for (std::size_t s : g.starts) {
      std::span<const double> factors(argmax.max_probs.data() + s, n);
      for (std::size_t j = 0; j < n; ++j) {
        upstream(s + j, argmax.tokens[s + j]) += d_count * detail::product_except(factors, j);
      }
    }
  }
  out.grad = softmax_backward(probs, upstream);
  return out;
}

// Smallest |C~(g) - C_ref(g)| over candidate grams present in the reference;
// distance from the nearest min() kink. Infinity when no gram overlaps.
inline double prob_ngram_count_kink_gap(const LogitMatrix& logits, std::span<const TokenId> ref,
                                        std::size_t n) {
  detail::require_example(logits, ref, "prob_ngram_count_kink_gap");
  double gap = std::numeric_limits<double>::infinity();
  if (ngram_window_count(ref.size(), n) == 0) return gap;
  const ArgmaxResult argmax = argmax_seq(softmax(logits));
  for (const auto& [key, g] : detail::candidate_grams(argmax, ref, n)) {
    if (g.ref_count == 0) continue;
    gap = std::min(gap, std::abs(g.prob_count - static_cast<double>(g.ref_count)));
  }
  return gap;
}

}  // namespace dng
