#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "dng/core/error.hpp"

namespace dng {

// Dense row-major real matrix. Just enough algebra for T x D score blocks
// and the toy model's parameter tensors.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const noexcept {
    return {data_.data() + r * cols_, cols_};
  }

  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }

  void fill(double v) { std::fill(data_.begin(), data_.end(), v); }

  bool same_shape(const Matrix& other) const noexcept {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  bool all_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
  }

  // First `n` rows as a new matrix.
  Matrix top_rows(std::size_t n) const {
    if (n > rows_) throw InvalidInput("top_rows: " + std::to_string(n) + " > " + std::to_string(rows_));
    Matrix out(n, cols_);
    std::copy_n(data_.begin(), n * cols_, out.data_.begin());
    return out;
  }

  Matrix& operator+=(const Matrix& other) {
    require_same_shape(other, "operator+=");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
  }

  Matrix& operator*=(double s) noexcept {
    for (double& v : data_) v *= s;
    return *this;
  }

  bool operator==(const Matrix&) const = default;

  void require_same_shape(const Matrix& other, const char* where) const {
    if (!same_shape(other)) {
      throw InvalidInput(std::string(where) + ": shape " + shape_string() + " vs " +
                         other.shape_string());
    }
  }

  std::string shape_string() const {
    return std::to_string(rows_) + "x" + std::to_string(cols_);
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Per-position vocabulary scores, their row-softmax, and dL/dlogits all share
// one storage type; the aliases name the role at API boundaries.
using LogitMatrix = Matrix;
using ProbMatrix = Matrix;
using GradMatrix = Matrix;

}  // namespace dng
