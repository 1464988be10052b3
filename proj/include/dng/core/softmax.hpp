#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "dng/core/error.hpp"
#include "dng/core/matrix.hpp"

namespace dng {

namespace detail {

inline void require_finite(const Matrix& m, const char* where) {
  if (!m.all_finite()) throw InvalidInput(std::string(where) + ": non-finite input");
}

inline double row_max(std::span<const double> row) {
  return *std::max_element(row.begin(), row.end());
}

}  // namespace detail

// Row-wise exp-normalization with per-row max subtraction.
inline ProbMatrix softmax(const LogitMatrix& logits) {
  detail::require_finite(logits, "softmax");
  ProbMatrix probs(logits.rows(), logits.cols());
  for (std::size_t r = 0; r < logits.rows(); ++r) {
    auto in = logits.row(r);
    auto out = probs.row(r);
    const double m = detail::row_max(in);
    double sum = 0.0;
    for (std::size_t c = 0; c < in.size(); ++c) {
      out[c] = std::exp(in[c] - m);
      sum += out[c];
    }
    for (double& v : out) v /= sum;
  }
  return probs;
}

// log p(row, token) for one entry, via max + log-sum-exp.
inline double log_softmax_at(std::span<const double> row, std::size_t token) {
  const double m = detail::row_max(row);
  double sum = 0.0;
  for (double v : row) sum += std::exp(v - m);
  return (row[token] - m) - std::log(sum);
}

inline Matrix log_softmax(const LogitMatrix& logits) {
  detail::require_finite(logits, "log_softmax");
  Matrix out(logits.rows(), logits.cols());
  for (std::size_t r = 0; r < logits.rows(); ++r) {
    auto in = logits.row(r);
    const double m = detail::row_max(in);
    double sum = 0.0;
    for (double v : in) sum += std::exp(v - m);
    const double lse = m + std::log(sum);
    auto o = out.row(r);
    for (std::size_t c = 0; c < in.size(); ++c) o[c] = in[c] - lse;
  }
  return out;
}

// Chain rule through softmax: g_j = p_j * (u_j - sum_k u_k p_k).
inline GradMatrix softmax_backward(const ProbMatrix& probs, const Matrix& upstream) {
  probs.require_same_shape(upstream, "softmax_backward");
  GradMatrix grad(probs.rows(), probs.cols());
  for (std::size_t r = 0; r < probs.rows(); ++r) {
    auto p = probs.row(r);
    auto u = upstream.row(r);
    double dot = 0.0;
    for (std::size_t c = 0; c < p.size(); ++c) dot += u[c] * p[c];
    auto g = grad.row(r);
    for (std::size_t c = 0; c < p.size(); ++c) g[c] = p[c] * (u[c] - dot);
  }
  return grad;
}

}  // namespace dng
