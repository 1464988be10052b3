#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "dng/core/error.hpp"
#include "dng/core/matrix.hpp"

namespace dng {

using TokenId = std::uint32_t;
using TokenSeq = std::vector<TokenId>;

// Reserved ids shared by the data generators and the model.
inline constexpr TokenId kPad = 0;
inline constexpr TokenId kBos = 1;
inline constexpr TokenId kEos = 2;

// A contiguous run of n token ids; ordered lexicographically so tables
// iterate deterministically.
struct NGramKey {
  std::vector<TokenId> tokens;

  NGramKey() = default;
  explicit NGramKey(std::span<const TokenId> t) : tokens(t.begin(), t.end()) {}

  std::size_t order() const noexcept { return tokens.size(); }

  auto operator<=>(const NGramKey&) const = default;
  bool operator==(const NGramKey&) const = default;
};

struct NGramRecord {
  std::size_t ref_count = 0;
  // Products of argmax probabilities for matched occurrences, and the start
  // position of each (parallel arrays).
  std::vector<double> matched_probs;
  std::vector<std::size_t> matched_starts;
};

struct NGramTable {
  std::size_t n = 0;
  std::map<NGramKey, NGramRecord> entries;

  const NGramRecord* find(const NGramKey& key) const {
    auto it = entries.find(key);
    return it == entries.end() ? nullptr : &it->second;
  }
  NGramRecord* find(const NGramKey& key) {
    auto it = entries.find(key);
    return it == entries.end() ? nullptr : &it->second;
  }
};

inline std::size_t ngram_window_count(std::size_t length, std::size_t n) noexcept {
  return length >= n ? length - n + 1 : 0;
}

inline std::vector<std::pair<std::size_t, NGramKey>> extract_ngrams(std::span<const TokenId> seq,
                                                                   std::size_t n) {
  if (n == 0) throw InvalidInput("extract_ngrams: order must be >= 1");
  std::vector<std::pair<std::size_t, NGramKey>> out;
  const std::size_t windows = ngram_window_count(seq.size(), n);
  out.reserve(windows);
  for (std::size_t t = 0; t < windows; ++t) out.emplace_back(t, NGramKey(seq.subspan(t, n)));
  return out;
}

inline NGramTable build_ref_table(std::span<const TokenId> ref, std::size_t n) {
  NGramTable table{n, {}};
  for (auto& [pos, key] : extract_ngrams(ref, n)) ++table.entries[std::move(key)].ref_count;
  return table;
}

// Number of distinct n-gram types in a sequence.
inline std::size_t distinct_ngram_count(std::span<const TokenId> seq, std::size_t n) {
  return build_ref_table(seq, n).entries.size();
}

struct ArgmaxResult {
  TokenSeq tokens;
  std::vector<double> max_probs;
  std::vector<double> margins;

  double min_margin() const noexcept {
    double m = 1.0;
    for (double v : margins) m = v < m ? v : m;
    return m;
  }
};

// Per row: lowest-index maximizing token, its probability, and the gap to
// the runner-up.
inline ArgmaxResult argmax_seq(const ProbMatrix& probs) {
  if (probs.cols() < 2) throw InvalidInput("argmax_seq: need at least two columns");
  ArgmaxResult out;
  out.tokens.reserve(probs.rows());
  out.max_probs.reserve(probs.rows());
  out.margins.reserve(probs.rows());
  for (std::size_t r = 0; r < probs.rows(); ++r) {
    auto row = probs.row(r);
    std::size_t best = 0;
    for (std::size_t c = 1; c < row.size(); ++c) {
      if (row[c] > row[best]) best = c;
    }
    double second = -1.0;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c != best && row[c] > second) second = row[c];
    }
    out.tokens.push_back(static_cast<TokenId>(best));
    out.max_probs.push_back(row[best]);
    out.margins.push_back(row[best] - second);
  }
  return out;
}

}  // namespace dng
