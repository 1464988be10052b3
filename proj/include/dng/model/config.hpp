#pragma once

#include <cstddef>
#include <string>

#include "dng/core/error.hpp"

namespace dng::model {

struct ModelConfig {
  std::size_t vocab_size = 0;
  std::size_t embed_dim = 32;
  std::size_t max_source_len = 32;
  std::size_t max_target_len = 32;
  double init_scale = 0.1;

  void validate() const {
    if (vocab_size < 4) throw InvalidInput("model: vocab_size must be >= 4 (PAD, BOS, EOS + one)");
    if (embed_dim < 2) throw InvalidInput("model: embed_dim must be >= 2");
    if (max_source_len < 1) throw InvalidInput("model: max_source_len must be >= 1");
    if (max_target_len < 1) throw InvalidInput("model: max_target_len must be >= 1");
    if (!(init_scale > 0.0)) throw InvalidInput("model: init_scale must be positive");
  }

  bool operator==(const ModelConfig&) const = default;
};

// Finished hypotheses are ranked by logprob / length^length_penalty, with the
// EOS step counted in the length.
struct DecodeConfig {
  std::size_t beam_width = 1;
  double length_penalty = 0.0;
  std::size_t min_len = 1;
  std::size_t max_len = 16;

  void validate() const {
    if (beam_width < 1) throw InvalidInput("decode: beam_width must be >= 1");
    if (length_penalty < 0.0) throw InvalidInput("decode: length_penalty must be >= 0");
    if (min_len > max_len) throw InvalidInput("decode: min_len exceeds max_len");
  }

  // Beam / penalty pairs used for the two summarization corpora, with
  // desk-scale lengths.
  static DecodeConfig long_summary_preset() { return {4, 2.0, 1, 16}; }
  static DecodeConfig short_summary_preset() { return {6, 1.0, 1, 16}; }
};

}  // namespace dng::model
