#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "dng/core/error.hpp"
#include "dng/core/rng.hpp"
#include "dng/data/corpus.hpp"

namespace dng::data {

// Padded block of examples. Rows are padded with kPad up to the batch's
// widest source / target; the true lengths are kept alongside.
struct Batch {
  std::vector<TokenSeq> sources;
  std::vector<TokenSeq> targets;
  std::vector<std::size_t> source_lengths;
  std::vector<std::size_t> target_lengths;
  std::vector<std::size_t> indices;  // positions in the originating corpus

  std::size_t size() const noexcept { return sources.size(); }
};

inline Batch make_batch(const Corpus& corpus, std::span<const std::size_t> indices) {
  Batch b;
  std::size_t src_w = 0, tgt_w = 0;
  for (std::size_t i : indices) {
    if (i >= corpus.size()) throw InvalidInput("make_batch: index out of range");
    src_w = std::max(src_w, corpus.examples[i].source.size());
    tgt_w = std::max(tgt_w, corpus.examples[i].target.size());
  }
  for (std::size_t i : indices) {
    const Example& ex = corpus.examples[i];
    TokenSeq s = ex.source, t = ex.target;
    s.resize(src_w, kPad);
    t.resize(tgt_w, kPad);
    b.sources.push_back(std::move(s));
    b.targets.push_back(std::move(t));
    b.source_lengths.push_back(ex.source.size());
    b.target_lengths.push_back(ex.target.size());
    b.indices.push_back(i);
  }
  return b;
}

// Deterministic shuffle by `shuffle_seed`, then consecutive chunks of
// `batch_size` (the last one may be short).
inline std::vector<Batch> make_batches(const Corpus& corpus, std::size_t batch_size,
                                       std::uint64_t shuffle_seed) {
  if (batch_size == 0) throw InvalidInput("make_batches: batch size must be >= 1");
  std::vector<std::size_t> order(corpus.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(shuffle_seed);
  rng.shuffle(std::span<std::size_t>(order));
  std::vector<Batch> out;
  for (std::size_t start = 0; start < order.size(); start += batch_size) {
    const std::size_t len = std::min(batch_size, order.size() - start);
    out.push_back(make_batch(corpus, std::span<const std::size_t>(order).subspan(start, len)));
  }
  return out;
}

}  // namespace dng::data
