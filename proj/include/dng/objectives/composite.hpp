#pragma once

#include <limits>
#include <span>
#include <string>
#include <vector>

#include "dng/objectives/bag_of_ngrams.hpp"
#include "dng/objectives/cross_entropy.hpp"
#include "dng/objectives/loss.hpp"
#include "dng/objectives/ngram_match.hpp"
#include "dng/objectives/prob_count.hpp"

namespace dng {

inline LossOutput evaluate(const Objective& o, const LogitMatrix& logits,
                           std::span<const TokenId> ref) {
  switch (o.family) {
    case Family::kCrossEntropy: return cross_entropy(logits, ref);
    case Family::kRewards: return ngram_rewards(logits, ref, o.order);
    case Family::kMatches: return ngram_matches(logits, ref, o.order);
    case Family::kProbCount: return prob_ngram_count(logits, ref, o.order);
    case Family::kBagOfNgrams: return bag_of_ngrams(logits, ref, o.order);
  }
  throw InvalidInput("evaluate: unknown objective family");
}

// Distance of the evaluation point from the nearest min() branch switch.
// Families without a min() are smooth apart from argmax flips: infinity.
inline double kink_gap(const Objective& o, const LogitMatrix& logits,
                       std::span<const TokenId> ref) {
  switch (o.family) {
    case Family::kProbCount: return prob_ngram_count_kink_gap(logits, ref, o.order);
    case Family::kBagOfNgrams: return bag_of_ngrams_kink_gap(logits, ref, o.order);
    default: return std::numeric_limits<double>::infinity();
  }
}

struct TermValue {
  Objective objective;
  double value = 0.0;
};

struct CompositeOutput {
  LossOutput total;
  std::vector<TermValue> terms;
};

inline CompositeOutput composite_detailed(const LogitMatrix& logits, std::span<const TokenId> ref,
                                          const ObjectiveSpec& spec) {
  spec.validate();
  detail::require_example(logits, ref, "composite");
  CompositeOutput out{{0.0, GradMatrix(logits.rows(), logits.cols())}, {}};
  for (const Objective& o : spec.terms()) {
    LossOutput term = evaluate(o, logits, ref);
    out.total.value += term.value;
    out.total.grad += term.grad;
    out.terms.push_back({o, term.value});
  }
  return out;
}

inline LossOutput composite(const LogitMatrix& logits, std::span<const TokenId> ref,
                            const ObjectiveSpec& spec) {
  return composite_detailed(logits, ref, spec).total;
}

// One example of a padded batch: logits and reference may extend past
// `true_length`; only the leading true_length rows/tokens are scored.
struct LossExample {
  const LogitMatrix* logits = nullptr;
  std::span<const TokenId> ref;
  std::size_t true_length = 0;
};

struct BatchLoss {
  double value = 0.0;
  std::vector<GradMatrix> grads;  // same shape as each input's logits, padded rows zero
  std::vector<TermValue> terms;   // batch means per term
};

// Mean of per-example composites; gradients scaled by 1/batch size. Reduction
// runs in index order so the result is reproducible bit-for-bit.
inline BatchLoss batch_loss(std::span<const LossExample> batch, const ObjectiveSpec& spec) {
  if (batch.empty()) throw InvalidInput("batch_loss: empty batch");
  spec.validate();
  const double scale = 1.0 / static_cast<double>(batch.size());
  BatchLoss out;
  for (const Objective& o : spec.terms()) out.terms.push_back({o, 0.0});
  double sum = 0.0;
  for (const LossExample& ex : batch) {
    if (ex.logits == nullptr) throw InvalidInput("batch_loss: missing logits");
    const LogitMatrix& full = *ex.logits;
    if (ex.true_length == 0 || ex.true_length > full.rows() || ex.true_length > ex.ref.size()) {
      throw InvalidInput("batch_loss: true length " + std::to_string(ex.true_length) +
                         " outside padded extent");
    }
    const LogitMatrix sliced = full.top_rows(ex.true_length);
    CompositeOutput c = composite_detailed(sliced, ex.ref.first(ex.true_length), spec);
    sum += c.total.value;
    for (std::size_t i = 0; i < c.terms.size(); ++i) out.terms[i].value += c.terms[i].value;

    GradMatrix g(full.rows(), full.cols());
    for (std::size_t r = 0; r < ex.true_length; ++r) {
      auto src = c.total.grad.row(r);
      auto dst = g.row(r);
      for (std::size_t k = 0; k < src.size(); ++k) dst[k] = src[k] * scale;
    }
    out.grads.push_back(std::move(g));
  }
  out.value = sum * scale;
  for (TermValue& t : out.terms) t.value *= scale;
  return out;
}

}  // namespace dng
