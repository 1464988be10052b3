#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "dng/core/error.hpp"
#include "dng/data/batch.hpp"
#include "dng/data/corpus.hpp"
#include "dng/model/optim.hpp"
#include "dng/model/seq2seq.hpp"
#include "dng/objectives/composite.hpp"

namespace dng::model {

struct TrainStats {
  double loss = 0.0;
  std::vector<TermValue> terms;
};

struct BatchGradients {
  TrainStats stats;
  ModelParams grads;
};

// Loss and parameter gradients for one padded batch. Sources are cut to their
// true lengths; targets stay padded and the objectives slice them. Overflowing
// logits yield a NaN loss instead of a throw.
inline BatchGradients batch_gradients(const ModelParams& params, const data::Batch& batch,
                                      const ObjectiveSpec& spec) {
  if (batch.size() == 0) throw InvalidInput("train_step: empty batch");
  std::vector<ForwardPass> passes;
  passes.reserve(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    std::span<const TokenId> src(batch.sources[i]);
    passes.push_back(forward_with_cache(params, src.first(batch.source_lengths[i]),
                                        batch.targets[i]));
    if (!passes.back().logits.all_finite()) {
      return {{std::numeric_limits<double>::quiet_NaN(), {}}, zeros_like(params)};
    }
  }
  std::vector<LossExample> items;
  items.reserve(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    items.push_back({&passes[i].logits, batch.targets[i], batch.target_lengths[i]});
  }
  BatchLoss loss = batch_loss(items, spec);

  BatchGradients out{{loss.value, loss.terms}, zeros_like(params)};
  for (std::size_t i = 0; i < batch.size(); ++i) backward(params, passes[i], loss.grads[i], out.grads);
  return out;
}

inline TrainStats train_step(ModelParams& params, OptimState& optim, const data::Batch& batch,
                             const ObjectiveSpec& spec, double lr) {
  for (const Matrix* m : params.tensors()) {
    if (!m->all_finite()) throw TrainingDiverged(optim.step + 1, "non-finite parameters");
  }
  BatchGradients bg = batch_gradients(params, batch, spec);
  if (!std::isfinite(bg.stats.loss)) {
    throw TrainingDiverged(optim.step + 1, "non-finite loss");
  }
  for (const Matrix* g : bg.grads.tensors()) {
    if (!g->all_finite()) throw TrainingDiverged(optim.step + 1, "non-finite gradient");
  }
  adam_update(params, bg.grads, optim, lr);
  for (const Matrix* m : params.tensors()) {
    if (!m->all_finite()) throw TrainingDiverged(optim.step, "non-finite parameters after update");
  }
  return bg.stats;
}

struct EvalLoss {
  double total = 0.0;               // mean composite per example
  std::vector<TermValue> terms;     // mean per term
  double ce_per_token = 0.0;        // summed CE / target tokens, regardless of spec
  std::size_t examples = 0;
};

// Teacher-forced held-out loss, reduced in corpus order.
inline EvalLoss evaluate_loss(const ModelParams& params, const data::Corpus& corpus,
                              const ObjectiveSpec& spec) {
  if (corpus.size() == 0) throw InvalidInput("evaluate_loss: empty corpus");
  spec.validate();
  EvalLoss out;
  for (const Objective& o : spec.terms()) out.terms.push_back({o, 0.0});
  double ce_sum = 0.0;
  std::size_t tokens = 0;
  for (const data::Example& ex : corpus.examples) {
    const LogitMatrix logits = forward_teacher_forced(params, ex.source, ex.target);
    const CompositeOutput c = composite_detailed(logits, ex.target, spec);
    out.total += c.total.value;
    for (std::size_t i = 0; i < c.terms.size(); ++i) out.terms[i].value += c.terms[i].value;
    ce_sum += cross_entropy(logits, ex.target).value;
    tokens += ex.target.size();
  }
  out.examples = corpus.size();
  const double inv = 1.0 / static_cast<double>(corpus.size());
  out.total *= inv;
  for (TermValue& t : out.terms) t.value *= inv;
  out.ce_per_token = ce_sum / static_cast<double>(tokens);
  return out;
}

}  // namespace dng::model
