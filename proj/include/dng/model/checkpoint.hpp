#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <string>

#include "dng/core/error.hpp"
#include "dng/model/optim.hpp"
#include "dng/model/params.hpp"

// Checkpoint layout, all integers and floats little-endian:
//
//   magic        8 bytes  "DNGCKPT\0"
//   version      u32      = 1
//   vocab_size, embed_dim, max_source_len, max_target_len   u64 x 4
//   init_scale   f64
//   tensors      u32 count, then per tensor:
//                  u32 name length, name bytes, u64 rows, u64 cols, f64 x rows*cols
//   has_optim    u8 (0/1); if 1:
//                  u64 step, f64 beta1, beta2, eps, weight_decay,
//                  first-moment tensors, second-moment tensors (same encoding)
//
// Tensors appear in ModelParams::kTensorNames order and are checked by name
// and shape on load.

namespace dng::model {

inline constexpr std::array<char, 8> kCheckpointMagic = {'D', 'N', 'G', 'C', 'K', 'P', 'T', '\0'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  ModelParams params;
  std::optional<OptimState> optim;
};

namespace detail {

inline void put_u64(std::ostream& os, std::uint64_t v) {
  std::array<char, 8> b{};
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  os.write(b.data(), 8);
}

inline void put_u32(std::ostream& os, std::uint32_t v) {
  std::array<char, 4> b{};
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  os.write(b.data(), 4);
}

inline void put_f64(std::ostream& os, double v) { put_u64(os, std::bit_cast<std::uint64_t>(v)); }

inline std::uint64_t get_u64(std::istream& is) {
  std::array<unsigned char, 8> b{};
  if (!is.read(reinterpret_cast<char*>(b.data()), 8)) throw InvalidInput("checkpoint: truncated");
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

inline std::uint32_t get_u32(std::istream& is) {
  std::array<unsigned char, 4> b{};
  if (!is.read(reinterpret_cast<char*>(b.data()), 4)) throw InvalidInput("checkpoint: truncated");
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

inline double get_f64(std::istream& is) { return std::bit_cast<double>(get_u64(is)); }

inline void put_tensors(std::ostream& os, const ModelParams& p) {
  put_u32(os, static_cast<std::uint32_t>(ModelParams::kTensorCount));
  auto ts = p.tensors();
  for (std::size_t k = 0; k < ModelParams::kTensorCount; ++k) {
    const auto name = ModelParams::kTensorNames[k];
    put_u32(os, static_cast<std::uint32_t>(name.size()));
    os.write(name.data(), static_cast<std::streamsize>(name.size()));
    put_u64(os, ts[k]->rows());
    put_u64(os, ts[k]->cols());
    for (double v : ts[k]->values()) put_f64(os, v);
  }
}

inline void get_tensors(std::istream& is, ModelParams& p) {
  if (get_u32(is) != ModelParams::kTensorCount) throw InvalidInput("checkpoint: tensor count");
  auto ts = p.tensors();
  for (std::size_t k = 0; k < ModelParams::kTensorCount; ++k) {
    const std::uint32_t len = get_u32(is);
    if (len > 256) throw InvalidInput("checkpoint: bad tensor name length");
    std::string name(len, '\0');
    if (!is.read(name.data(), len)) throw InvalidInput("checkpoint: truncated");
    if (name != ModelParams::kTensorNames[k]) {
      throw InvalidInput("checkpoint: expected tensor " + std::string(ModelParams::kTensorNames[k]) +
                         ", found " + name);
    }
    const std::uint64_t rows = get_u64(is), cols = get_u64(is);
    if (rows != ts[k]->rows() || cols != ts[k]->cols()) {
      throw InvalidInput("checkpoint: shape mismatch for " + name);
    }
    for (double& v : ts[k]->values()) v = get_f64(is);
  }
}

}  // namespace detail

inline void write_checkpoint(std::ostream& os, const ModelParams& params,
                             const OptimState* optim = nullptr) {
  os.write(kCheckpointMagic.data(), kCheckpointMagic.size());
  detail::put_u32(os, kCheckpointVersion);
  const ModelConfig& c = params.config;
  detail::put_u64(os, c.vocab_size);
  detail::put_u64(os, c.embed_dim);
  detail::put_u64(os, c.max_source_len);
  detail::put_u64(os, c.max_target_len);
  detail::put_f64(os, c.init_scale);
  detail::put_tensors(os, params);
  os.put(optim ? 1 : 0);
  if (optim) {
    detail::put_u64(os, optim->step);
    detail::put_f64(os, optim->hyper.beta1);
    detail::put_f64(os, optim->hyper.beta2);
    detail::put_f64(os, optim->hyper.eps);
    detail::put_f64(os, optim->hyper.weight_decay);
    detail::put_tensors(os, optim->first_moment);
    detail::put_tensors(os, optim->second_moment);
  }
}

inline Checkpoint read_checkpoint(std::istream& is) {
  std::array<char, 8> magic{};
  if (!is.read(magic.data(), 8) || magic != kCheckpointMagic) {
    throw InvalidInput("checkpoint: bad magic");
  }
  if (detail::get_u32(is) != kCheckpointVersion) throw InvalidInput("checkpoint: unsupported version");
  ModelConfig c;
  c.vocab_size = detail::get_u64(is);
  c.embed_dim = detail::get_u64(is);
  c.max_source_len = detail::get_u64(is);
  c.max_target_len = detail::get_u64(is);
  c.init_scale = detail::get_f64(is);
  c.validate();
  Checkpoint ck{zero_params(c), std::nullopt};
  detail::get_tensors(is, ck.params);
  const int has_optim = is.get();
  if (has_optim == 1) {
    OptimState o = init_optim(ck.params);
    o.step = detail::get_u64(is);
    o.hyper.beta1 = detail::get_f64(is);
    o.hyper.beta2 = detail::get_f64(is);
    o.hyper.eps = detail::get_f64(is);
    o.hyper.weight_decay = detail::get_f64(is);
    detail::get_tensors(is, o.first_moment);
    detail::get_tensors(is, o.second_moment);
    ck.optim = std::move(o);
  } else if (has_optim != 0) {
    throw InvalidInput("checkpoint: truncated");
  }
  return ck;
}

inline void write_checkpoint(const std::filesystem::path& path, const ModelParams& params,
                             const OptimState* optim = nullptr) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InvalidInput("cannot open " + path.string() + " for writing");
  write_checkpoint(os, params, optim);
  if (!os) throw InvalidInput("write failed: " + path.string());
}

inline Checkpoint read_checkpoint(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw InvalidInput("cannot open " + path.string());
  return read_checkpoint(is);
}

}  // namespace dng::model
