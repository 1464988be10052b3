#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>

#include "dng/core/softmax.hpp"
#include "dng/objectives/composite.hpp"

namespace dng {

struct GradCheckReport {
  GradMatrix analytic;
  Matrix numeric;
  double max_rel_error = 0.0;
  double min_margin = 0.0;
  std::size_t entries = 0;
};

// Central differences on every logit entry against the analytic gradient.
// Relative error uses max(1, |analytic|) as denominator. The probe is refused
// when any row's argmax margin is below `margin_floor`, since the objectives
// are only piecewise smooth around argmax ties.
template <typename ObjectiveFn>
GradCheckReport gradcheck(ObjectiveFn&& objective, const LogitMatrix& logits,
                          std::span<const TokenId> ref, double h, double margin_floor) {
  if (!(h > 0.0)) throw InvalidInput("gradcheck: step must be positive");
  GradCheckReport report;
  report.min_margin = argmax_seq(softmax(logits)).min_margin();
  if (report.min_margin < margin_floor) {
    throw ProbeRejected("argmax margin " + std::to_string(report.min_margin) + " below floor " +
                        std::to_string(margin_floor));
  }
  const LossOutput base = objective(logits, ref);
  report.analytic = base.grad;
  report.numeric = Matrix(logits.rows(), logits.cols());

  LogitMatrix probe = logits;
  for (std::size_t r = 0; r < logits.rows(); ++r) {
    for (std::size_t c = 0; c < logits.cols(); ++c) {
      const double x = logits(r, c);
      probe(r, c) = x + h;
      const double up = objective(probe, ref).value;
      probe(r, c) = x - h;
      const double down = objective(probe, ref).value;
      probe(r, c) = x;
      const double fd = (up - down) / (2.0 * h);
      report.numeric(r, c) = fd;
      const double a = base.grad(r, c);
      report.max_rel_error =
          std::max(report.max_rel_error, std::abs(a - fd) / std::max(1.0, std::abs(a)));
      ++report.entries;
    }
  }
  return report;
}

inline GradCheckReport gradcheck(const Objective& o, const LogitMatrix& logits,
                                 std::span<const TokenId> ref, double h, double margin_floor) {
  return gradcheck([&o](const LogitMatrix& l, std::span<const TokenId> r) { return evaluate(o, l, r); },
                   logits, ref, h, margin_floor);
}

}  // namespace dng
