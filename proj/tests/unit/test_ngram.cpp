#include <gtest/gtest.h>

#include "dng/ngram.hpp"
#include "test_support.hpp"

namespace dng {
namespace {

TEST(ExtractNgrams, Bigrams) {
  const TokenSeq seq{5, 6, 5};
  const auto grams = extract_ngrams(seq, 2);
  ASSERT_EQ(grams.size(), 2u);
  EXPECT_EQ(grams[0].first, 0u);
  EXPECT_EQ(grams[0].second.tokens, (std::vector<TokenId>{5, 6}));
  EXPECT_EQ(grams[1].first, 1u);
  EXPECT_EQ(grams[1].second.tokens, (std::vector<TokenId>{6, 5}));
}

TEST(ExtractNgrams, TooShortIsEmpty) {
  const TokenSeq seq{5, 6, 5};
  EXPECT_TRUE(extract_ngrams(seq, 4).empty());
}

TEST(ExtractNgrams, RepeatedKeyPositions) {
  const TokenSeq seq{5, 6, 5, 6};
  const auto grams = extract_ngrams(seq, 2);
  ASSERT_EQ(grams.size(), 3u);
  const NGramKey k56(std::vector<TokenId>{5, 6});
  EXPECT_EQ(grams[0].second, k56);
  EXPECT_EQ(grams[2].second, k56);
  EXPECT_EQ(grams[2].first, 2u);
}

TEST(ExtractNgrams, OrderZeroIsAnError) {
  const TokenSeq seq{1, 2};
  EXPECT_THROW(extract_ngrams(seq, 0), InvalidInput);
  EXPECT_THROW(build_ref_table(seq, 0), InvalidInput);
}

TEST(BuildRefTable, Counts) {
  const TokenSeq ref{5, 6, 5, 6};
  const NGramTable t = build_ref_table(ref, 2);
  ASSERT_EQ(t.entries.size(), 2u);
  EXPECT_EQ(t.find(NGramKey(std::vector<TokenId>{5, 6}))->ref_count, 2u);
  EXPECT_EQ(t.find(NGramKey(std::vector<TokenId>{6, 5}))->ref_count, 1u);
  for (const auto& [k, rec] : t.entries) EXPECT_TRUE(rec.matched_probs.empty());
}

TEST(BuildRefTable, EmptyReference) {
  const TokenSeq ref;
  for (std::size_t n = 1; n <= 4; ++n) EXPECT_TRUE(build_ref_table(ref, n).entries.empty());
}

TEST(BuildRefTable, Unigrams) {
  const TokenSeq ref{1, 2, 3};
  const NGramTable t = build_ref_table(ref, 1);
  ASSERT_EQ(t.entries.size(), 3u);
  for (const auto& [k, rec] : t.entries) EXPECT_EQ(rec.ref_count, 1u);
}

TEST(ArgmaxSeq, TieBreaksToLowestIndex) {
  Matrix p(1, 2, 0.5);
  const ArgmaxResult a = argmax_seq(p);
  EXPECT_EQ(a.tokens[0], 0u);
  EXPECT_EQ(a.margins[0], 0.0);
}

TEST(ArgmaxSeq, OneHotRows) {
  Matrix p(3, 5);
  p(0, 3) = p(1, 1) = p(2, 4) = 1.0;
  const ArgmaxResult a = argmax_seq(p);
  EXPECT_EQ(a.tokens, (TokenSeq{3, 1, 4}));
  EXPECT_EQ(a.max_probs, (std::vector<double>{1, 1, 1}));
}

TEST(ArgmaxSeq, MarginIsGapToRunnerUp) {
  Matrix p(1, 3);
  p(0, 0) = 0.2;
  p(0, 1) = 0.7;
  p(0, 2) = 0.1;
  const ArgmaxResult a = argmax_seq(p);
  EXPECT_EQ(a.tokens[0], 1u);
  EXPECT_DOUBLE_EQ(a.max_probs[0], 0.7);
  EXPECT_NEAR(a.margins[0], 0.5, 1e-15);
}

TEST(NgramProperties, CountsAndDistinctBounds) {
  Rng rng(17);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t len = rng.below(12), n = 1 + rng.below(4);
    const TokenSeq seq = testing::random_tokens(rng, len, 1 + rng.below(4));
    const std::size_t windows = len >= n ? len - n + 1 : 0;
    EXPECT_EQ(extract_ngrams(seq, n).size(), windows);
    const NGramTable t = build_ref_table(seq, n);
    std::size_t total = 0;
    for (const auto& [k, rec] : t.entries) total += rec.ref_count;
    EXPECT_EQ(total, windows);
    EXPECT_LE(t.entries.size(), windows);
    bool all_distinct = true;
    for (const auto& [k, rec] : t.entries) all_distinct = all_distinct && rec.ref_count == 1;
    EXPECT_EQ(t.entries.size() == windows, all_distinct);
  }
}

TEST(NgramProperties, ArgmaxInvariantUnderRowShift) {
  Rng rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    Matrix l = testing::random_logits(rng, 4, 6);
    Matrix shifted = l;
    for (std::size_t r = 0; r < l.rows(); ++r) {
      const double c = rng.uniform(-50.0, 50.0);
      for (double& v : shifted.row(r)) v += c;
    }
    EXPECT_EQ(argmax_seq(softmax(l)).tokens, argmax_seq(softmax(shifted)).tokens);
  }
}

}  // namespace
}  // namespace dng
