#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "dng/core/rng.hpp"
#include "dng/objectives/composite.hpp"
#include "dng/objectives/gradcheck.hpp"

namespace dng {

struct GradSuiteOptions {
  std::vector<Objective> objectives = verification_objectives();
  std::size_t probes = 100;
  std::uint64_t seed = 0;
  double h = 1e-5;
  double tolerance = 1e-4;
  double margin_floor = 0.05;
  double kink_floor = 1e-4;
  std::size_t max_len = 8;
  std::size_t max_vocab = 12;
  bool corrupt_gradient = false;  // test hook: perturbs one analytic entry
};

struct GradSuiteResult {
  Objective objective;
  std::size_t probes = 0;
  std::size_t rejected = 0;
  double max_rel_error = 0.0;
  bool passed = false;
};

struct GradSuiteReport {
  std::vector<GradSuiteResult> results;
  bool passed = false;
};

struct LogitProbe {
  LogitMatrix logits;
  TokenSeq ref;
};

// Random logits of shape T x D (T in [max(1, n), max_len], D in [4, max_vocab])
// with a reference agreeing with the argmax at about 60% of positions. Probes
// near argmax ties or min() kinks are counted in `rejected` and redrawn.
inline LogitProbe stable_probe(const Objective& o, Rng& rng, const GradSuiteOptions& opt,
                               std::size_t& rejected) {
  const std::size_t min_len = std::max<std::size_t>(1, o.order);
  if (opt.max_len < min_len || opt.max_vocab < 4) {
    throw InvalidInput("gradcheck: probe shape limits too small for " + objective_name(o));
  }
  for (;;) {
    const std::size_t t = min_len + rng.below(opt.max_len - min_len + 1);
    const std::size_t d = 4 + rng.below(opt.max_vocab - 3);
    LogitProbe p{seeded_uniform(rng, -3.0, 3.0, t, d), TokenSeq(t)};
    const ArgmaxResult am = argmax_seq(softmax(p.logits));
    for (std::size_t i = 0; i < t; ++i) {
      p.ref[i] = rng.uniform() < 0.6 ? am.tokens[i] : static_cast<TokenId>(rng.below(d));
    }
    if (am.min_margin() >= opt.margin_floor && kink_gap(o, p.logits, p.ref) >= opt.kink_floor) {
      return p;
    }
    ++rejected;
  }
}

inline GradSuiteReport run_grad_suite(const GradSuiteOptions& opt) {
  if (opt.probes == 0) throw InvalidInput("gradcheck: probe count must be positive");
  if (opt.objectives.empty()) throw InvalidInput("gradcheck: no objectives selected");
  GradSuiteReport report{{}, true};
  for (const Objective& o : opt.objectives) {
    Rng rng(opt.seed ^ (static_cast<std::uint64_t>(o.family) << 32) ^ o.order);
    GradSuiteResult res{o, 0, 0, 0.0, true};
    auto fn = [&](const LogitMatrix& l, std::span<const TokenId> r) {
      LossOutput out = evaluate(o, l, r);
      if (opt.corrupt_gradient) out.grad(0, 0) += 1e-2;
      return out;
    };
    for (std::size_t i = 0; i < opt.probes; ++i) {
      const LogitProbe p = stable_probe(o, rng, opt, res.rejected);
      const GradCheckReport g = gradcheck(fn, p.logits, p.ref, opt.h, opt.margin_floor);
      res.max_rel_error = std::max(res.max_rel_error, g.max_rel_error);
      ++res.probes;
    }
    res.passed = res.max_rel_error < opt.tolerance;
    report.passed = report.passed && res.passed;
    report.results.push_back(res);
  }
  return report;
}

}  // namespace dng
