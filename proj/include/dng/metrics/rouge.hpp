#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <set>
#include <span>
#include <vector>

#include "dng/core/error.hpp"
#include "dng/ngram.hpp"

namespace dng {

struct RougeScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  static RougeScore from_counts(double overlap, double cand_total, double ref_total) {
    RougeScore s;
    s.precision = cand_total > 0.0 ? overlap / cand_total : 0.0;
    s.recall = ref_total > 0.0 ? overlap / ref_total : 0.0;
    const double pr = s.precision + s.recall;
    s.f1 = pr > 0.0 ? 2.0 * s.precision * s.recall / pr : 0.0;
    return s;
  }

  bool operator==(const RougeScore&) const = default;
};

// Sum over distinct grams of min(count in cand, count in ref).
inline std::size_t clipped_overlap(std::span<const TokenId> cand, std::span<const TokenId> ref,
                                   std::size_t n) {
  const NGramTable ref_table = build_ref_table(ref, n);
  std::size_t overlap = 0;
  for (const auto& [key, rec] : build_ref_table(cand, n).entries) {
    if (const NGramRecord* r = ref_table.find(key)) overlap += std::min(rec.ref_count, r->ref_count);
  }
  return overlap;
}

namespace detail {

inline RougeScore exact_match_score(std::span<const TokenId> cand, std::span<const TokenId> ref) {
  return std::equal(cand.begin(), cand.end(), ref.begin(), ref.end()) ? RougeScore{1.0, 1.0, 1.0}
                                                                      : RougeScore{};
}

}  // namespace detail

// When neither side has an n-gram the ratios are undefined; the score is then
// 1 for identical sequences and 0 otherwise.
inline RougeScore rouge_n(std::span<const TokenId> cand, std::span<const TokenId> ref,
                          std::size_t n) {
  if (n == 0) throw InvalidInput("rouge_n: order must be >= 1");
  if (cand.size() < n && ref.size() < n) return detail::exact_match_score(cand, ref);
  return RougeScore::from_counts(static_cast<double>(clipped_overlap(cand, ref, n)),
                                 static_cast<double>(ngram_window_count(cand.size(), n)),
                                 static_cast<double>(ngram_window_count(ref.size(), n)));
}

// Two-row DP, O(|a| |b|) time.
inline std::size_t lcs_length(std::span<const TokenId> a, std::span<const TokenId> b) {
  if (a.empty() || b.empty()) return 0;
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

// Sentence-level LCS F-measure with beta = 1. Two empty sequences score 1.
inline RougeScore rouge_l(std::span<const TokenId> cand, std::span<const TokenId> ref) {
  if (cand.empty() && ref.empty()) return RougeScore{1.0, 1.0, 1.0};
  return RougeScore::from_counts(static_cast<double>(lcs_length(cand, ref)),
                                 static_cast<double>(cand.size()), static_cast<double>(ref.size()));
}

struct ExampleRouge {
  std::map<std::size_t, RougeScore> by_order;
  RougeScore l;
};

struct CorpusReport {
  std::vector<std::size_t> orders;
  std::vector<ExampleRouge> examples;
  std::map<std::size_t, RougeScore> mean_by_order;
  RougeScore mean_l;

  std::size_t count() const noexcept { return examples.size(); }
};

struct CandidateRef {
  std::span<const TokenId> cand;
  std::span<const TokenId> ref;
};

// Per-example ROUGE-N for each order plus ROUGE-L; corpus figures are plain
// means of the per-example precision, recall and F1.
inline CorpusReport corpus_eval(std::span<const CandidateRef> pairs,
                                const std::set<std::size_t>& orders) {
  if (pairs.empty()) throw InvalidInput("corpus_eval: no pairs");
  CorpusReport report;
  report.orders.assign(orders.begin(), orders.end());
  for (std::size_t n : report.orders) report.mean_by_order[n] = {};

  auto accumulate = [](RougeScore& acc, const RougeScore& s) {
    acc.precision += s.precision;
    acc.recall += s.recall;
    acc.f1 += s.f1;
  };
  for (const CandidateRef& p : pairs) {
    ExampleRouge ex;
    for (std::size_t n : report.orders) {
      ex.by_order[n] = rouge_n(p.cand, p.ref, n);
      accumulate(report.mean_by_order[n], ex.by_order[n]);
    }
    ex.l = rouge_l(p.cand, p.ref);
    accumulate(report.mean_l, ex.l);
    report.examples.push_back(std::move(ex));
  }
  const double inv = 1.0 / static_cast<double>(pairs.size());
  auto scale = [inv](RougeScore& s) {
    s.precision *= inv;
    s.recall *= inv;
    s.f1 *= inv;
  };
  for (auto& [n, s] : report.mean_by_order) scale(s);
  scale(report.mean_l);
  return report;
}

}  // namespace dng
