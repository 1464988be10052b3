#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "dng/data/batch.hpp"
#include "dng/model/optim.hpp"
#include "dng/model/train.hpp"

namespace dng::model {

struct TrainerConfig {
  std::size_t steps = 300;
  std::size_t batch_size = 16;
  double lr = 3e-3;             // peak of the warmup/decline schedule
  std::size_t warmup_steps = 100;
  AdamConfig adam;
  std::size_t eval_every = 50;  // the final step is always evaluated
  std::uint64_t shuffle_seed = 0;

  void validate() const {
    if (steps == 0) throw InvalidInput("train: steps must be >= 1");
    if (batch_size == 0) throw InvalidInput("train: batch_size must be >= 1");
    if (!(lr >= 0.0)) throw InvalidInput("train: lr must be >= 0");
    if (warmup_steps > steps) throw InvalidInput("train: warmup_steps exceeds steps");
    if (eval_every == 0) throw InvalidInput("train: eval_every must be >= 1");
    if (adam.weight_decay < 0.0) throw InvalidInput("train: weight_decay must be >= 0");
  }
};

struct CurvePoint {
  std::size_t step = 0;
  double train_loss = 0.0;  // mean batch loss since the previous evaluation
  EvalLoss eval;
};

struct TrainResult {
  ModelParams best;  // lowest composite eval loss
  OptimState best_optim;
  std::size_t best_step = 0;
  double best_eval = std::numeric_limits<double>::infinity();
  ModelParams last;
  std::vector<CurvePoint> curve;
};

// Runs `cfg.steps` optimizer steps over epochs of freshly shuffled batches
// (epoch k uses shuffle seed shuffle_seed + k). Evaluates every `eval_every`
// steps and at the end, keeping the parameters with the lowest composite eval
// loss; ties keep the earlier step.
inline TrainResult train(ModelParams params, const data::Corpus& train_set,
                         const data::Corpus& eval_set, const ObjectiveSpec& spec,
                         const TrainerConfig& cfg,
                         const std::function<void(const CurvePoint&)>& on_eval = {}) {
  cfg.validate();
  spec.validate();
  if (train_set.size() == 0) throw InvalidInput("train: empty training corpus");
  if (eval_set.size() == 0) throw InvalidInput("train: empty evaluation corpus");
  const LinearWarmupSchedule schedule{cfg.lr, cfg.warmup_steps, cfg.steps};
  OptimState optim = init_optim(params, cfg.adam);
  TrainResult result;

  std::vector<data::Batch> batches;
  std::size_t cursor = 0, epoch = 0;
  double loss_sum = 0.0;
  std::size_t loss_count = 0;
  for (std::size_t step = 1; step <= cfg.steps; ++step) {
    if (cursor == batches.size()) {
      batches = data::make_batches(train_set, cfg.batch_size, cfg.shuffle_seed + epoch++);
      cursor = 0;
    }
    loss_sum += train_step(params, optim, batches[cursor++], spec, schedule.at(step)).loss;
    ++loss_count;
    if (step % cfg.eval_every == 0 || step == cfg.steps) {
      CurvePoint point{step, loss_sum / static_cast<double>(loss_count),
                       evaluate_loss(params, eval_set, spec)};
      loss_sum = 0.0;
      loss_count = 0;
      if (point.eval.total < result.best_eval) {
        result.best_eval = point.eval.total;
        result.best_step = step;
        result.best = params;
        result.best_optim = optim;
      }
      if (on_eval) on_eval(point);
      result.curve.push_back(std::move(point));
    }
  }
  result.last = std::move(params);
  return result;
}

}  // namespace dng::model
