#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <tuple>
#include <vector>

#include "dng/core/softmax.hpp"
#include "dng/model/config.hpp"
#include "dng/model/seq2seq.hpp"
#include "dng/ngram.hpp"

namespace dng::model {

inline double length_normalized(double logprob, std::size_t length, double alpha) {
  if (alpha == 0.0) return logprob;
  return logprob / std::pow(static_cast<double>(std::max<std::size_t>(length, 1)), alpha);
}

namespace detail {

inline bool token_allowed(TokenId tok, std::size_t prefix_len, const DecodeConfig& cfg) {
  if (tok == kPad || tok == kBos) return false;
  if (tok == kEos && prefix_len < cfg.min_len) return false;
  return true;
}

}  // namespace detail

// `next(prefix)` returns log-probabilities over the vocabulary for the token
// following `prefix` (prefix excludes BOS). PAD and BOS are never emitted;
// EOS is blocked until min_len tokens exist. Ties go to the lowest token id.
template <typename NextLogProbs>
TokenSeq greedy_search(NextLogProbs&& next, const DecodeConfig& cfg) {
  cfg.validate();
  TokenSeq out;
  while (out.size() < cfg.max_len) {
    const std::vector<double> lp = next(std::span<const TokenId>(out));
    std::size_t best = lp.size();
    for (std::size_t c = 0; c < lp.size(); ++c) {
      if (!detail::token_allowed(static_cast<TokenId>(c), out.size(), cfg)) continue;
      if (best == lp.size() || lp[c] > lp[best]) best = c;
    }
    if (best == lp.size() || best == kEos) break;
    out.push_back(static_cast<TokenId>(best));
  }
  return out;
}

struct Hypothesis {
  TokenSeq tokens;  // excludes BOS and EOS
  double logprob = 0.0;
  double score = 0.0;
  bool finished = false;
};

// Finished hypotheses outrank unfinished ones; within each group the higher
// score wins.
inline bool ranks_above(const Hypothesis& a, const Hypothesis& b) {
  if (a.finished != b.finished) return a.finished;
  return a.score > b.score;
}

// One standard beam pass ranking partial hypotheses by cumulative
// log-probability. Each step keeps the best `beam_width` extensions; those
// ending in EOS retire to the finished pool, scored by
// logprob / (tokens + 1)^alpha. The best finished hypothesis wins; if none
// finished by max_len the best live one is returned, scored with its own
// length.
template <typename NextLogProbs>
Hypothesis beam_pass(NextLogProbs&& next, const DecodeConfig& cfg) {
  cfg.validate();
  std::vector<Hypothesis> live{Hypothesis{}};
  std::vector<Hypothesis> finished;
  for (std::size_t step = 0; step < cfg.max_len && !live.empty(); ++step) {
    // (cumulative logprob, live index, token)
    std::vector<std::tuple<double, std::size_t, TokenId>> cand;
    for (std::size_t h = 0; h < live.size(); ++h) {
      const std::vector<double> lp = next(std::span<const TokenId>(live[h].tokens));
      for (std::size_t c = 0; c < lp.size(); ++c) {
        const auto tok = static_cast<TokenId>(c);
        if (!detail::token_allowed(tok, live[h].tokens.size(), cfg)) continue;
        cand.emplace_back(live[h].logprob + lp[c], h, tok);
      }
    }
    const std::size_t keep = std::min(cfg.beam_width, cand.size());
    std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(keep), cand.end(),
                      [](const auto& a, const auto& b) {
                        if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) > std::get<0>(b);
                        if (std::get<1>(a) != std::get<1>(b)) return std::get<1>(a) < std::get<1>(b);
                        return std::get<2>(a) < std::get<2>(b);
                      });
    std::vector<Hypothesis> next_live;
    for (std::size_t k = 0; k < keep; ++k) {
      const auto& [lp, h, tok] = cand[k];
      Hypothesis hyp{live[h].tokens, lp, 0.0, false};
      if (tok == kEos) {
        hyp.finished = true;
        hyp.score = length_normalized(lp, hyp.tokens.size() + 1, cfg.length_penalty);
        finished.push_back(std::move(hyp));
      } else {
        hyp.tokens.push_back(tok);
        next_live.push_back(std::move(hyp));
      }
    }
    live = std::move(next_live);
  }

  for (Hypothesis& h : live) h.score = length_normalized(h.logprob, h.tokens.size(), cfg.length_penalty);
  const std::vector<Hypothesis>& pool = finished.empty() ? live : finished;
  if (pool.empty()) return Hypothesis{};
  return *std::min_element(pool.begin(), pool.end(), ranks_above);
}

// Beam search whose result never ranks below that of any narrower beam: the
// passes at widths 1..beam_width are run and the top-ranked result is kept
// (ties go to the narrower width). Width 1 is exactly greedy search.
template <typename NextLogProbs>
Hypothesis beam_search_hypothesis(NextLogProbs&& next, const DecodeConfig& cfg) {
  cfg.validate();
  DecodeConfig pass_cfg = cfg;
  pass_cfg.beam_width = 1;
  Hypothesis best = beam_pass(next, pass_cfg);
  for (std::size_t w = 2; w <= cfg.beam_width; ++w) {
    pass_cfg.beam_width = w;
    Hypothesis h = beam_pass(next, pass_cfg);
    if (ranks_above(h, best)) best = std::move(h);
  }
  return best;
}

template <typename NextLogProbs>
TokenSeq beam_search(NextLogProbs&& next, const DecodeConfig& cfg) {
  return beam_search_hypothesis(std::forward<NextLogProbs>(next), cfg).tokens;
}

// Next-token log-probabilities of the model for a fixed source.
class ModelScorer {
 public:
  ModelScorer(const ModelParams& params, std::span<const TokenId> source)
      : params_(&params), enc_(encode(params, source)) {}

  std::vector<double> operator()(std::span<const TokenId> prefix) const {
    const ModelParams& p = *params_;
    const std::size_t e = p.config.embed_dim;
    const std::size_t t = prefix.size();
    if (t >= p.config.max_target_len) {
      throw InvalidInput("decode: prefix length " + std::to_string(t) +
                         " reaches the model's max_target_len");
    }
    const TokenId input = t == 0 ? kBos : prefix[t - 1];
    std::vector<double> embedded(e), query(e), context(e), attention(enc_.keys.rows());
    LogitMatrix row(1, p.config.vocab_size);
    decode_position(p, enc_, input, t, embedded, query, attention, context, row.row(0));
    const Matrix lp = log_softmax(row);
    return {lp.values().begin(), lp.values().end()};
  }

  // Target positions available to the model.
  std::size_t max_len() const { return params_->config.max_target_len; }

 private:
  const ModelParams* params_;
  EncoderState enc_;
};

namespace detail {

inline DecodeConfig clamp_to_model(DecodeConfig cfg, const ModelParams& params) {
  cfg.max_len = std::min(cfg.max_len, params.config.max_target_len);
  cfg.min_len = std::min(cfg.min_len, cfg.max_len);
  return cfg;
}

}  // namespace detail

inline TokenSeq greedy_decode(const ModelParams& params, std::span<const TokenId> source,
                              const DecodeConfig& cfg) {
  return greedy_search(ModelScorer(params, source), detail::clamp_to_model(cfg, params));
}

inline TokenSeq beam_decode(const ModelParams& params, std::span<const TokenId> source,
                            const DecodeConfig& cfg) {
  return beam_search(ModelScorer(params, source), detail::clamp_to_model(cfg, params));
}

inline TokenSeq decode(const ModelParams& params, std::span<const TokenId> source,
                       const DecodeConfig& cfg) {
  return cfg.beam_width == 1 ? greedy_decode(params, source, cfg) : beam_decode(params, source, cfg);
}

}  // namespace dng::model
