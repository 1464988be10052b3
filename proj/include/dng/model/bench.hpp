#pragma once

#include <algorithm>
#include <chrono>
#include <set>
#include <string>
#include <vector>

#include "dng/data/batch.hpp"
#include "dng/model/train.hpp"

namespace dng::model {

struct BenchCase {
  std::string label;
  ObjectiveSpec spec;
};

// CE, +BoN, +P-P2, +2-gram rewards/matches, +(2,3,4)-gram rewards/matches.
inline std::vector<BenchCase> default_bench_sweep() {
  auto with = [](auto member, std::set<std::size_t> orders) {
    ObjectiveSpec s;
    s.*member = std::move(orders);
    return s;
  };
  return {{"CE", ObjectiveSpec{}},
          {"+BoN", with(&ObjectiveSpec::bon_orders, {2})},
          {"+P-P2", with(&ObjectiveSpec::pp_orders, {2})},
          {"+2-gram rewards", with(&ObjectiveSpec::rewards_orders, {2})},
          {"+2-gram matches", with(&ObjectiveSpec::matches_orders, {2})},
          {"+(2,3,4)-gram rewards", with(&ObjectiveSpec::rewards_orders, {2, 3, 4})},
          {"+(2,3,4)-gram matches", with(&ObjectiveSpec::matches_orders, {2, 3, 4})}};
}

struct BenchOptions {
  std::size_t batch_size = 16;
  std::size_t steps = 20;        // train steps per timed repetition
  std::size_t repetitions = 5;   // median over repetitions
  double lr = 1e-3;
};

struct BenchRow {
  std::string label;
  double docs_per_sec = 0.0;
  double relative = 0.0;  // docs_per_sec / CE docs_per_sec
};

// Examples per second of train_step under each case, starting every
// repetition from `init`. Repetitions are interleaved across cases so slow
// drifts in machine load affect all rows alike. The first case is the
// baseline for the relative column.
inline std::vector<BenchRow> run_bench(const ModelParams& init, const data::Corpus& corpus,
                                       const std::vector<BenchCase>& cases, const BenchOptions& opt) {
  if (cases.empty()) throw InvalidInput("bench: no cases");
  if (opt.steps == 0 || opt.repetitions == 0 || opt.batch_size == 0) {
    throw InvalidInput("bench: steps, repetitions and batch_size must be >= 1");
  }
  if (corpus.size() == 0) throw InvalidInput("bench: empty corpus");
  const std::vector<data::Batch> batches = data::make_batches(corpus, opt.batch_size, 0);
  std::vector<std::vector<double>> rates(cases.size());
  for (std::size_t rep = 0; rep < opt.repetitions; ++rep) {
    for (std::size_t c = 0; c < cases.size(); ++c) {
      ModelParams params = init;
      OptimState optim = init_optim(params);
      std::size_t docs = 0;
      const auto start = std::chrono::steady_clock::now();
      for (std::size_t s = 0; s < opt.steps; ++s) {
        const data::Batch& b = batches[s % batches.size()];
        train_step(params, optim, b, cases[c].spec, opt.lr);
        docs += b.size();
      }
      const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
      rates[c].push_back(static_cast<double>(docs) / std::max(elapsed.count(), 1e-12));
    }
  }
  std::vector<BenchRow> rows;
  for (std::size_t c = 0; c < cases.size(); ++c) {
    std::vector<double>& r = rates[c];
    std::nth_element(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(r.size() / 2), r.end());
    rows.push_back({cases[c].label, r[r.size() / 2], 0.0});
  }
  for (BenchRow& row : rows) row.relative = row.docs_per_sec / rows.front().docs_per_sec;
  return rows;
}

}  // namespace dng::model
