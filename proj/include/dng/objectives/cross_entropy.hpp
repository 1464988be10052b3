#pragma once

#include <span>

#include "dng/core/softmax.hpp"
#include "dng/objectives/loss.hpp"

namespace dng {

// Token-level negative log-likelihood summed over positions.
inline LossOutput cross_entropy(const LogitMatrix& logits, std::span<const TokenId> ref) {
  detail::require_example(logits, ref, "cross_entropy");
  const Matrix logp = log_softmax(logits);
  LossOutput out{0.0, GradMatrix(logits.rows(), logits.cols())};
  for (std::size_t t = 0; t < logits.rows(); ++t) {
    out.value -= logp(t, ref[t]);
    auto g = out.grad.row(t);
    auto lp = logp.row(t);
    for (std::size_t c = 0; c < g.size(); ++c) g[c] = std::exp(lp[c]);
    g[ref[t]] -= 1.0;
  }
  return out;
}

}  // namespace dng
