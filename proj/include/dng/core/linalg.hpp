#pragma once

#include <cstddef>
#include <span>

#include "dng/core/matrix.hpp"

namespace dng::linalg {

// out = x * W  (x: 1 x W.rows, out: 1 x W.cols)
inline void vec_mat(std::span<const double> x, const Matrix& w, std::span<double> out) {
  for (std::size_t j = 0; j < w.cols(); ++j) out[j] = 0.0;
  for (std::size_t i = 0; i < w.rows(); ++i) {
    const double xi = x[i];
    if (xi == 0.0) continue;
    auto wr = w.row(i);
    for (std::size_t j = 0; j < w.cols(); ++j) out[j] += xi * wr[j];
  }
}

// out += dy * W^T  (dy: 1 x W.cols, out: 1 x W.rows)
inline void vec_mat_t_acc(std::span<const double> dy, const Matrix& w, std::span<double> out) {
  for (std::size_t i = 0; i < w.rows(); ++i) {
    auto wr = w.row(i);
    double s = 0.0;
    for (std::size_t j = 0; j < w.cols(); ++j) s += wr[j] * dy[j];
    out[i] += s;
  }
}

// W += x^T * dy
inline void outer_acc(std::span<const double> x, std::span<const double> dy, Matrix& w) {
  for (std::size_t i = 0; i < w.rows(); ++i) {
    const double xi = x[i];
    if (xi == 0.0) continue;
    auto wr = w.row(i);
    for (std::size_t j = 0; j < w.cols(); ++j) wr[j] += xi * dy[j];
  }
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline void axpy(double a, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

}  // namespace dng::linalg
