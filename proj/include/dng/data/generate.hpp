#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "dng/core/error.hpp"
#include "dng/core/rng.hpp"
#include "dng/data/corpus.hpp"

namespace dng::data {

inline constexpr TokenId kFirstContentToken = 3;

// Summarization proxy: each source hides `n_salient` tokens from a salient
// range [3, 3 + n_salient) among filler tokens [3 + n_salient, vocab); the
// target lists the salient tokens in source order, then EOS. The salient
// range is as small as the summary so repeated n-grams are common.
inline Corpus gen_salient_task(std::size_t vocab, std::size_t source_len, std::size_t n_salient,
                               std::size_t count, std::uint64_t seed) {
  if (n_salient == 0) throw InvalidInput("salient task: n_salient must be >= 1");
  if (n_salient > source_len) throw InvalidInput("salient task: n_salient exceeds source length");
  if (vocab <= n_salient + kFirstContentToken) {
    throw InvalidInput("salient task: vocabulary " + std::to_string(vocab) +
                       " leaves no filler tokens");
  }
  Corpus corpus;
  corpus.info = {"salient", vocab, seed,
                 {{"count", count}, {"n_salient", n_salient}, {"source_len", source_len}}};
  Rng rng(seed);
  const std::uint64_t filler_base = kFirstContentToken + n_salient;
  const std::uint64_t filler_span = vocab - filler_base;
  std::vector<std::size_t> positions(source_len);
  corpus.examples.reserve(count);
  for (std::size_t e = 0; e < count; ++e) {
    std::iota(positions.begin(), positions.end(), std::size_t{0});
    // Partial Fisher-Yates: the first n_salient slots become a uniform subset.
    for (std::size_t i = 0; i < n_salient; ++i) {
      std::size_t j = i + static_cast<std::size_t>(rng.below(source_len - i));
      std::swap(positions[i], positions[j]);
    }
    std::sort(positions.begin(), positions.begin() + static_cast<std::ptrdiff_t>(n_salient));

    Example ex;
    ex.source.resize(source_len);
    for (auto& tok : ex.source) tok = static_cast<TokenId>(filler_base + rng.below(filler_span));
    for (std::size_t i = 0; i < n_salient; ++i) {
      const auto tok = static_cast<TokenId>(kFirstContentToken + rng.below(n_salient));
      ex.source[positions[i]] = tok;
      ex.target.push_back(tok);
    }
    ex.target.push_back(kEos);
    corpus.examples.push_back(std::move(ex));
  }
  return corpus;
}

namespace detail {

inline Corpus gen_sequence_task(const std::string& task, std::size_t vocab, std::size_t len,
                                std::size_t count, std::uint64_t seed, bool reverse) {
  if (vocab <= kFirstContentToken) throw InvalidInput(task + " task: vocabulary too small");
  if (len == 0) throw InvalidInput(task + " task: length must be >= 1");
  Corpus corpus;
  corpus.info = {task, vocab, seed, {{"count", count}, {"length", len}}};
  Rng rng(seed);
  corpus.examples.reserve(count);
  for (std::size_t e = 0; e < count; ++e) {
    Example ex;
    ex.source.resize(len);
    for (auto& tok : ex.source) {
      tok = static_cast<TokenId>(kFirstContentToken + rng.below(vocab - kFirstContentToken));
    }
    ex.target = ex.source;
    if (reverse) std::reverse(ex.target.begin(), ex.target.end());
    ex.target.push_back(kEos);
    corpus.examples.push_back(std::move(ex));
  }
  return corpus;
}

}  // namespace detail

inline Corpus gen_copy_task(std::size_t vocab, std::size_t len, std::size_t count,
                            std::uint64_t seed) {
  return detail::gen_sequence_task("copy", vocab, len, count, seed, false);
}

inline Corpus gen_reverse_task(std::size_t vocab, std::size_t len, std::size_t count,
                               std::uint64_t seed) {
  return detail::gen_sequence_task("reverse", vocab, len, count, seed, true);
}

}  // namespace dng::data
