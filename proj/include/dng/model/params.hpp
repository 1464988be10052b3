#pragma once

#include <array>
#include <cstdint>
#include <string_view>

#include "dng/core/matrix.hpp"
#include "dng/core/rng.hpp"
#include "dng/model/config.hpp"

namespace dng::model {

// Trainable tensors of the attention encoder-decoder. Row-vector convention:
// a layer computes y = x * W + b.
struct ModelParams {
  ModelConfig config;
  Matrix embed;       // D x E, shared by source and target
  Matrix source_pos;  // max_source_len x E
  Matrix target_pos;  // max_target_len x E
  Matrix enc_w;       // E x E
  Matrix enc_b;       // 1 x E
  Matrix query_w;     // E x E
  Matrix key_w;       // E x E
  Matrix value_w;     // E x E
  Matrix out_w;       // 2E x D, applied to [query | context]
  Matrix out_b;       // 1 x D

  static constexpr std::size_t kTensorCount = 10;
  static constexpr std::array<std::string_view, kTensorCount> kTensorNames = {
      "embed", "source_pos", "target_pos", "enc_w",   "enc_b",
      "query_w", "key_w",    "value_w",    "out_w",   "out_b"};

  std::array<Matrix*, kTensorCount> tensors() {
    return {&embed, &source_pos, &target_pos, &enc_w, &enc_b,
            &query_w, &key_w, &value_w, &out_w, &out_b};
  }
  std::array<const Matrix*, kTensorCount> tensors() const {
    return {&embed, &source_pos, &target_pos, &enc_w, &enc_b,
            &query_w, &key_w, &value_w, &out_w, &out_b};
  }

  std::size_t parameter_count() const {
    std::size_t n = 0;
    for (const Matrix* m : tensors()) n += m->size();
    return n;
  }

  bool operator==(const ModelParams&) const = default;
};

// All-zero tensors shaped for `config`.
inline ModelParams zero_params(const ModelConfig& config) {
  config.validate();
  const std::size_t d = config.vocab_size, e = config.embed_dim;
  ModelParams p;
  p.config = config;
  p.embed = Matrix(d, e);
  p.source_pos = Matrix(config.max_source_len, e);
  p.target_pos = Matrix(config.max_target_len, e);
  p.enc_w = Matrix(e, e);
  p.enc_b = Matrix(1, e);
  p.query_w = Matrix(e, e);
  p.key_w = Matrix(e, e);
  p.value_w = Matrix(e, e);
  p.out_w = Matrix(2 * e, d);
  p.out_b = Matrix(1, d);
  return p;
}

inline ModelParams zeros_like(const ModelParams& p) { return zero_params(p.config); }

// Every entry uniform in [-init_scale, init_scale), drawn tensor by tensor in
// declaration order.
inline ModelParams init_model(const ModelConfig& config, std::uint64_t seed) {
  ModelParams p = zero_params(config);
  Rng rng(seed);
  for (Matrix* m : p.tensors()) {
    *m = seeded_uniform(rng, -config.init_scale, config.init_scale, m->rows(), m->cols());
  }
  return p;
}

}  // namespace dng::model
