#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "dng/core/matrix.hpp"
#include "dng/ngram.hpp"

// Definition-literal reference implementations. These re-derive every
// quantity with nested loops over positions (no shared tables, no shared
// softmax) and exist only to cross-check the optimized code paths.

namespace dng::oracle {

using Probs = std::vector<std::vector<double>>;

inline Probs softmax_rows(const Matrix& logits) {
  Probs out(logits.rows(), std::vector<double>(logits.cols()));
  for (std::size_t r = 0; r < logits.rows(); ++r) {
    double mx = logits(r, 0);
    for (std::size_t c = 1; c < logits.cols(); ++c) mx = std::max(mx, logits(r, c));
    double z = 0.0;
    for (std::size_t c = 0; c < logits.cols(); ++c) z += std::exp(logits(r, c) - mx);
    for (std::size_t c = 0; c < logits.cols(); ++c) out[r][c] = std::exp(logits(r, c) - mx) / z;
  }
  return out;
}

inline std::vector<std::size_t> argmax_rows(const Probs& p) {
  std::vector<std::size_t> out;
  for (const auto& row : p) {
    std::size_t best = 0;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (row[c] > row[best]) best = c;
    }
    out.push_back(best);
  }
  return out;
}

template <typename A, typename B>
bool same_gram(const A& a, std::size_t i, const B& b, std::size_t j, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    if (static_cast<std::size_t>(a[i + k]) != static_cast<std::size_t>(b[j + k])) return false;
  }
  return true;
}

template <typename A, typename B>
std::size_t count_occurrences(const A& hay, const B& gram, std::size_t at, std::size_t n) {
  std::size_t count = 0;
  for (std::size_t t = 0; t + n <= hay.size(); ++t) count += same_gram(hay, t, gram, at, n) ? 1 : 0;
  return count;
}

inline double cross_entropy(const Matrix& logits, const TokenSeq& ref) {
  const Probs p = softmax_rows(logits);
  double v = 0.0;
  for (std::size_t t = 0; t < ref.size(); ++t) v -= std::log(p[t][ref[t]]);
  return v;
}

// Each aligned match at t contributes prod / (number of aligned matches of
// the same reference gram), all over T - n + 1.
inline double ngram_rewards(const Matrix& logits, const TokenSeq& ref, std::size_t n) {
  const std::size_t T = ref.size();
  if (T < n) return 0.0;
  const Probs p = softmax_rows(logits);
  const auto cand = argmax_rows(p);
  const std::size_t W = T - n + 1;
  double total = 0.0;
  for (std::size_t t = 0; t < W; ++t) {
    if (!same_gram(cand, t, ref, t, n)) continue;
    std::size_t matched_same_key = 0;
    for (std::size_t u = 0; u < W; ++u) {
      if (same_gram(ref, u, ref, t, n) && same_gram(cand, u, ref, u, n)) ++matched_same_key;
    }
    double prod = 1.0;
    for (std::size_t i = 0; i < n; ++i) prod *= p[t + i][cand[t + i]];
    total += prod / static_cast<double>(matched_same_key);
  }
  return 1.0 - total / static_cast<double>(W);
}

// A candidate gram at t counts when it occurs anywhere in the reference;
// its weight is 1 / (candidate positions carrying the same gram).
inline double ngram_matches(const Matrix& logits, const TokenSeq& ref, std::size_t n) {
  const std::size_t T = ref.size();
  if (T < n) return 0.0;
  const Probs p = softmax_rows(logits);
  const auto cand = argmax_rows(p);
  const std::size_t W = T - n + 1;
  double total = 0.0;
  for (std::size_t t = 0; t < W; ++t) {
    if (count_occurrences(ref, cand, t, n) == 0) continue;
    const std::size_t same = count_occurrences(cand, cand, t, n);
    double prod = 1.0;
    for (std::size_t i = 0; i < n; ++i) prod *= p[t + i][cand[t + i]];
    total += prod / static_cast<double>(same);
  }
  return 1.0 - total / static_cast<double>(W);
}

inline double prob_ngram_count(const Matrix& logits, const TokenSeq& ref, std::size_t n) {
  const std::size_t T = ref.size();
  if (T < n) return 0.0;
  const Probs p = softmax_rows(logits);
  const auto y = argmax_rows(p);
  double matched = 0.0, total = 0.0;
  for (std::size_t g = 0; g + n <= T; ++g) {
    bool first = true;  // visit each distinct candidate gram once
    for (std::size_t e = 0; e < g; ++e) first = first && !same_gram(y, e, y, g, n);
    if (!first) continue;
    double c_tilde = 0.0;
    for (std::size_t t = 0; t + n <= T; ++t) {
      double term = 1.0;
      for (std::size_t i = 0; i < n; ++i) {
        term *= (y[g + i] == y[t + i] ? 1.0 : 0.0) * p[t + i][y[t + i]];
      }
      c_tilde += term;
    }
    const double c_ref = static_cast<double>(count_occurrences(ref, y, g, n));
    matched += std::min(c_tilde, c_ref);
    total += c_tilde;
  }
  return -matched / total;
}

inline double bag_of_ngrams(const Matrix& logits, const TokenSeq& ref, std::size_t n) {
  const std::size_t T = ref.size();
  if (T < n) return 1.0;
  const Probs p = softmax_rows(logits);
  const double W = static_cast<double>(T - n + 1);
  double overlap = 0.0;
  for (std::size_t g = 0; g + n <= T; ++g) {
    bool first = true;
    for (std::size_t e = 0; e < g; ++e) first = first && !same_gram(ref, e, ref, g, n);
    if (!first) continue;
    double model = 0.0;
    for (std::size_t t = 0; t + n <= T; ++t) {
      double prod = 1.0;
      for (std::size_t i = 0; i < n; ++i) prod *= p[t + i][ref[g + i]];
      model += prod;
    }
    const double in_ref = static_cast<double>(count_occurrences(ref, ref, g, n));
    overlap += std::min(model, in_ref);
  }
  return (2.0 * W - overlap) / (2.0 * W);
}

// Clipped n-gram overlap by direct counting.
inline std::size_t clipped_overlap(const TokenSeq& cand, const TokenSeq& ref, std::size_t n) {
  std::size_t overlap = 0;
  for (std::size_t g = 0; g + n <= cand.size(); ++g) {
    bool first = true;
    for (std::size_t e = 0; e < g; ++e) first = first && !same_gram(cand, e, cand, g, n);
    if (!first) continue;
    overlap += std::min(count_occurrences(cand, cand, g, n), count_occurrences(ref, cand, g, n));
  }
  return overlap;
}

// Memoized recursion on suffixes.
inline std::size_t lcs_recursive(const TokenSeq& a, const TokenSeq& b) {
  std::vector<std::vector<int>> memo(a.size() + 1, std::vector<int>(b.size() + 1, -1));
  std::function<int(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t j) -> int {
    if (i == a.size() || j == b.size()) return 0;
    int& m = memo[i][j];
    if (m >= 0) return m;
    if (a[i] == b[j]) return m = 1 + go(i + 1, j + 1);
    return m = std::max(go(i + 1, j), go(i, j + 1));
  };
  return static_cast<std::size_t>(go(0, 0));
}

// Every sequence over {0..alphabet-1} of length 0..max_len, indexed densely:
// sequences of length L occupy [offset(L), offset(L) + alphabet^L) with the
// first token as the most significant digit.
class SequenceSpace {
 public:
  SequenceSpace(std::size_t alphabet, std::size_t max_len) : alphabet_(alphabet), max_len_(max_len) {
    std::size_t block = 1;
    for (std::size_t len = 0; len <= max_len; ++len) {
      offsets_.push_back(total_);
      total_ += block;
      block *= alphabet;
    }
  }

  std::size_t size() const noexcept { return total_; }
  std::size_t max_len() const noexcept { return max_len_; }

  std::size_t length_of(std::size_t index) const {
    std::size_t len = 0;
    while (len + 1 <= max_len_ && offsets_[len + 1] <= index) ++len;
    return len;
  }

  TokenSeq decode(std::size_t index) const {
    const std::size_t len = length_of(index);
    std::size_t code = index - offsets_[len];
    TokenSeq seq(len);
    for (std::size_t i = len; i-- > 0;) {
      seq[i] = static_cast<TokenId>(code % alphabet_);
      code /= alphabet_;
    }
    return seq;
  }

  std::size_t encode(const TokenSeq& seq) const {
    std::size_t code = 0;
    for (TokenId t : seq) code = code * alphabet_ + t;
    return offsets_[seq.size()] + code;
  }

 private:
  std::size_t alphabet_;
  std::size_t max_len_;
  std::size_t total_ = 0;
  std::vector<std::size_t> offsets_;
};

// LCS for every pair in the space by enumerating common subsequences: for a
// fixed b, mark every subsequence of b, then for each a (shortest first) the
// answer is |a| if a itself is marked, otherwise the best over one-token
// deletions of a. Calls check(a_index, b_index, lcs) for every ordered pair.
template <typename Check>
void lcs_exhaustive(const SequenceSpace& space, Check&& check) {
  const std::size_t total = space.size();
  std::vector<TokenSeq> seqs(total);
  for (std::size_t i = 0; i < total; ++i) seqs[i] = space.decode(i);

  // deletions[i] = indices of sequences obtained by deleting one token of i
  std::vector<std::vector<std::size_t>> deletions(total);
  for (std::size_t i = 0; i < total; ++i) {
    const TokenSeq& s = seqs[i];
    for (std::size_t k = 0; k < s.size(); ++k) {
      TokenSeq d;
      for (std::size_t m = 0; m < s.size(); ++m) {
        if (m != k) d.push_back(s[m]);
      }
      deletions[i].push_back(space.encode(d));
    }
  }

  std::vector<char> is_subseq(total);
  std::vector<std::uint8_t> best(total);
  for (std::size_t b = 0; b < total; ++b) {
    const TokenSeq& bs = seqs[b];
    std::fill(is_subseq.begin(), is_subseq.end(), 0);
    for (std::uint32_t mask = 0; mask < (1u << bs.size()); ++mask) {
      TokenSeq sub;
      for (std::size_t m = 0; m < bs.size(); ++m) {
        if (mask & (1u << m)) sub.push_back(bs[m]);
      }
      is_subseq[space.encode(sub)] = 1;
    }
    // Indices are ordered by length, so deletions are always computed first.
    for (std::size_t a = 0; a < total; ++a) {
      if (is_subseq[a]) {
        best[a] = static_cast<std::uint8_t>(seqs[a].size());
        continue;
      }
      std::uint8_t m = 0;
      for (std::size_t d : deletions[a]) m = std::max(m, best[d]);
      best[a] = m;
    }
    for (std::size_t a = 0; a < total; ++a) check(seqs[a], seqs[b], static_cast<std::size_t>(best[a]));
  }
}

}  // namespace dng::oracle
