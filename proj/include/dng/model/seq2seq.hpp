#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "dng/core/linalg.hpp"
#include "dng/core/matrix.hpp"
#include "dng/ngram.hpp"
#include "dng/model/params.hpp"

// Single-attention encoder-decoder.
//
//   encoder:  x_s = embed[src_s] + source_pos[s]
//             h_s = tanh(x_s W_enc + b_enc),  k_s = h_s W_k,  v_s = h_s W_v
//   decoder:  e_t = embed[u_t] + target_pos[t],  u_0 = BOS, u_t = target[t-1]
//             q_t = e_t W_q
//             a_t = softmax_s(q_t . k_s / sqrt(E)),  c_t = sum_s a_ts v_s
//             logits_t = [q_t | c_t] W_out + b_out
//
// Row t sees only target tokens before t, so teacher-forced logits and
// step-by-step decoding agree exactly.

namespace dng::model {

struct EncoderState {
  TokenSeq source;
  Matrix inputs;  // S x E
  Matrix hidden;  // S x E
  Matrix keys;    // S x E
  Matrix values;  // S x E
};

struct ForwardPass {
  EncoderState enc;
  TokenSeq inputs;     // decoder input token per position
  Matrix embedded;     // T x E
  Matrix queries;      // T x E
  Matrix attention;    // T x S
  Matrix context;      // T x E
  LogitMatrix logits;  // T x D
};

namespace detail {

inline void require_tokens(std::span<const TokenId> seq, std::size_t vocab, const char* what) {
  for (TokenId t : seq) {
    if (t >= vocab) {
      throw InvalidInput(std::string(what) + ": token " + std::to_string(t) +
                         " outside vocabulary of " + std::to_string(vocab));
    }
  }
}

inline void add_rows(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] + b[i];
}

}  // namespace detail

inline EncoderState encode(const ModelParams& p, std::span<const TokenId> source) {
  const ModelConfig& cfg = p.config;
  if (source.empty() || source.size() > cfg.max_source_len) {
    throw InvalidInput("encode: source length " + std::to_string(source.size()) +
                       " outside [1, " + std::to_string(cfg.max_source_len) + "]");
  }
  detail::require_tokens(source, cfg.vocab_size, "encode");
  const std::size_t s_len = source.size(), e = cfg.embed_dim;
  EncoderState enc{TokenSeq(source.begin(), source.end()), Matrix(s_len, e), Matrix(s_len, e),
                   Matrix(s_len, e), Matrix(s_len, e)};
  for (std::size_t s = 0; s < s_len; ++s) {
    detail::add_rows(p.embed.row(source[s]), p.source_pos.row(s), enc.inputs.row(s));
    auto h = enc.hidden.row(s);
    linalg::vec_mat(enc.inputs.row(s), p.enc_w, h);
    for (std::size_t i = 0; i < e; ++i) h[i] = std::tanh(h[i] + p.enc_b(0, i));
    linalg::vec_mat(h, p.key_w, enc.keys.row(s));
    linalg::vec_mat(h, p.value_w, enc.values.row(s));
  }
  return enc;
}

// One decoder position; writes the cached intermediates and the logit row.
inline void decode_position(const ModelParams& p, const EncoderState& enc, TokenId input,
                            std::size_t t, std::span<double> embedded, std::span<double> query,
                            std::span<double> attention, std::span<double> context,
                            std::span<double> logits) {
  const std::size_t e = p.config.embed_dim;
  const double inv_sqrt_e = 1.0 / std::sqrt(static_cast<double>(e));
  detail::add_rows(p.embed.row(input), p.target_pos.row(t), embedded);
  linalg::vec_mat(embedded, p.query_w, query);

  double mx = -INFINITY;
  for (std::size_t s = 0; s < enc.keys.rows(); ++s) {
    attention[s] = linalg::dot(query, enc.keys.row(s)) * inv_sqrt_e;
    mx = std::max(mx, attention[s]);
  }
  double sum = 0.0;
  for (double& a : attention) sum += (a = std::exp(a - mx));
  for (double& a : attention) a /= sum;

  std::fill(context.begin(), context.end(), 0.0);
  for (std::size_t s = 0; s < enc.values.rows(); ++s) {
    linalg::axpy(attention[s], enc.values.row(s), context);
  }

  // logits = [q | c] W_out + b_out, split over the two halves of W_out.
  const std::size_t d = p.config.vocab_size;
  for (std::size_t j = 0; j < d; ++j) logits[j] = p.out_b(0, j);
  for (std::size_t i = 0; i < e; ++i) {
    linalg::axpy(query[i], p.out_w.row(i), logits);
    linalg::axpy(context[i], p.out_w.row(e + i), logits);
  }
}

inline ForwardPass forward_with_cache(const ModelParams& p, std::span<const TokenId> source,
                                      std::span<const TokenId> target) {
  const ModelConfig& cfg = p.config;
  if (target.size() > cfg.max_target_len) {
    throw InvalidInput("forward: target length " + std::to_string(target.size()) + " exceeds " +
                       std::to_string(cfg.max_target_len));
  }
  detail::require_tokens(target, cfg.vocab_size, "forward");
  ForwardPass pass;
  pass.enc = encode(p, source);
  const std::size_t t_len = target.size(), e = cfg.embed_dim;
  pass.inputs.resize(t_len);
  pass.embedded = Matrix(t_len, e);
  pass.queries = Matrix(t_len, e);
  pass.attention = Matrix(t_len, source.size());
  pass.context = Matrix(t_len, e);
  pass.logits = LogitMatrix(t_len, cfg.vocab_size);
  for (std::size_t t = 0; t < t_len; ++t) {
    pass.inputs[t] = t == 0 ? kBos : target[t - 1];
    decode_position(p, pass.enc, pass.inputs[t], t, pass.embedded.row(t), pass.queries.row(t),
                    pass.attention.row(t), pass.context.row(t), pass.logits.row(t));
  }
  return pass;
}

inline LogitMatrix forward_teacher_forced(const ModelParams& p, std::span<const TokenId> source,
                                          std::span<const TokenId> target) {
  return forward_with_cache(p, source, target).logits;
}

// Accumulates dL/dparams into `grads` given dL/dlogits for `pass`.
inline void backward(const ModelParams& p, const ForwardPass& pass, const GradMatrix& dlogits,
                     ModelParams& grads) {
  pass.logits.require_same_shape(dlogits, "backward");
  const std::size_t e = p.config.embed_dim;
  const std::size_t s_len = pass.enc.source.size();
  const double inv_sqrt_e = 1.0 / std::sqrt(static_cast<double>(e));

  Matrix d_keys(s_len, e), d_values(s_len, e);
  std::vector<double> z(2 * e), dz(2 * e), dq(e), de(e), da(s_len);

  for (std::size_t t = 0; t < dlogits.rows(); ++t) {
    auto dl = dlogits.row(t);
    if (std::all_of(dl.begin(), dl.end(), [](double v) { return v == 0.0; })) continue;
    auto q = pass.queries.row(t);
    auto c = pass.context.row(t);
    auto a = pass.attention.row(t);

    std::copy(q.begin(), q.end(), z.begin());
    std::copy(c.begin(), c.end(), z.begin() + static_cast<std::ptrdiff_t>(e));
    linalg::outer_acc(z, dl, grads.out_w);
    linalg::axpy(1.0, dl, grads.out_b.row(0));
    std::fill(dz.begin(), dz.end(), 0.0);
    linalg::vec_mat_t_acc(dl, p.out_w, dz);
    std::span<const double> dq_out(dz.data(), e), dc(dz.data() + e, e);

    // context and attention softmax
    double weighted = 0.0;
    for (std::size_t s = 0; s < s_len; ++s) {
      da[s] = linalg::dot(dc, pass.enc.values.row(s));
      weighted += a[s] * da[s];
      linalg::axpy(a[s], dc, d_values.row(s));
    }
    std::copy(dq_out.begin(), dq_out.end(), dq.begin());
    for (std::size_t s = 0; s < s_len; ++s) {
      const double dscore = a[s] * (da[s] - weighted) * inv_sqrt_e;
      linalg::axpy(dscore, pass.enc.keys.row(s), dq);
      linalg::axpy(dscore, q, d_keys.row(s));
    }

    linalg::outer_acc(pass.embedded.row(t), dq, grads.query_w);
    std::fill(de.begin(), de.end(), 0.0);
    linalg::vec_mat_t_acc(dq, p.query_w, de);
    linalg::axpy(1.0, de, grads.embed.row(pass.inputs[t]));
    linalg::axpy(1.0, de, grads.target_pos.row(t));
  }

  std::vector<double> dh(e), dx(e);
  for (std::size_t s = 0; s < s_len; ++s) {
    auto h = pass.enc.hidden.row(s);
    std::fill(dh.begin(), dh.end(), 0.0);
    linalg::vec_mat_t_acc(d_keys.row(s), p.key_w, dh);
    linalg::vec_mat_t_acc(d_values.row(s), p.value_w, dh);
    linalg::outer_acc(h, d_keys.row(s), grads.key_w);
    linalg::outer_acc(h, d_values.row(s), grads.value_w);
    for (std::size_t i = 0; i < e; ++i) dh[i] *= 1.0 - h[i] * h[i];
    linalg::outer_acc(pass.enc.inputs.row(s), dh, grads.enc_w);
    linalg::axpy(1.0, dh, grads.enc_b.row(0));
    std::fill(dx.begin(), dx.end(), 0.0);
    linalg::vec_mat_t_acc(dh, p.enc_w, dx);
    linalg::axpy(1.0, dx, grads.embed.row(pass.enc.source[s]));
    linalg::axpy(1.0, dx, grads.source_pos.row(s));
  }
}

}  // namespace dng::model
