#pragma once

#include <algorithm>
#include <limits>
#include <span>
#include <vector>

#include "dng/core/softmax.hpp"
#include "dng/ngram.hpp"
#include "dng/objectives/loss.hpp"

namespace dng {

namespace detail {

// Expected count of `key` under the full output distributions:
// sum over windows t of prod_i p(t+i, key_i).
inline double bag_mass(const ProbMatrix& probs, const NGramKey& key, std::size_t windows) {
  const std::size_t n = key.order();
  double mass = 0.0;
  for (std::size_t t = 0; t < windows; ++t) {
    double p = 1.0;
    for (std::size_t i = 0; i < n; ++i) p *= probs(t + i, key.tokens[i]);
    mass += p;
  }
  return mass;
}

}  // namespace detail

// Bag-of-n-grams loss, normalized as
//   (2W - sum_g min(BoN_model(g), BoN_ref(g))) / 2W,   W = T - n + 1,
// so it lies in [0.5, 1]. Only reference grams are visited; any other gram
// has BoN_ref = 0 and contributes min(., 0) = 0.
inline LossOutput bag_of_ngrams(const LogitMatrix& logits, std::span<const TokenId> ref,
                                std::size_t n) {
  if (n < 1) throw InvalidInput("bag_of_ngrams: order must be >= 1");
  detail::require_example(logits, ref, "bag_of_ngrams");
  LossOutput out{1.0, GradMatrix(logits.rows(), logits.cols())};
  const std::size_t windows = ngram_window_count(ref.size(), n);
  if (windows == 0) return out;

  const ProbMatrix probs = softmax(logits);
  const NGramTable table = build_ref_table(ref, n);
  const double denom = 2.0 * static_cast<double>(windows);

  double overlap = 0.0;
  Matrix upstream(probs.rows(), probs.cols());
  bool any = false;
  std::vector<double> factors(n);
  for (const auto& [key, rec] : table.entries) {
    const double ref_count = static_cast<double>(rec.ref_count);
    const double mass = detail::bag_mass(probs, key, windows);
    if (!(mass < ref_count)) {
      overlap += ref_count;
      continue;
    }
    overlap += mass;
    any = true;
    for (std::size_t t = 0; t < windows; ++t) {
      for (std::size_t i = 0; i < n; ++i) factors[i] = probs(t + i, key.tokens[i]);
      for (std::size_t j = 0; j < n; ++j) {
        upstream(t + j, key.tokens[j]) -= detail::product_except(factors, j) / denom;
      }
    }
  }
  out.value = (denom - overlap) / denom;
  if (any) out.grad = softmax_backward(probs, upstream);
  return out;
}

inline double bag_of_ngrams_kink_gap(const LogitMatrix& logits, std::span<const TokenId> ref,
                                     std::size_t n) {
  detail::require_example(logits, ref, "bag_of_ngrams_kink_gap");
  double gap = std::numeric_limits<double>::infinity();
  const std::size_t windows = ngram_window_count(ref.size(), n);
  if (windows == 0) return gap;
  const ProbMatrix probs = softmax(logits);
  for (const auto& [key, rec] : build_ref_table(ref, n).entries) {
    gap = std::min(gap, std::abs(detail::bag_mass(probs, key, windows) -
                                 static_cast<double>(rec.ref_count)));
  }
  return gap;
}

}  // namespace dng
