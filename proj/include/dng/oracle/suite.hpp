#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "dng/core/rng.hpp"
#include "dng/metrics/rouge.hpp"
#include "dng/objectives/composite.hpp"
#include "dng/oracle/brute_force.hpp"

namespace dng::oracle {

struct SuiteOptions {
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  double tolerance = 1e-12;
  std::size_t max_len = 10;
  std::size_t max_vocab = 8;
  std::size_t lcs_alphabet = 3;
  std::size_t lcs_max_len = 6;  // exhaustive sweep bound
  bool inject_mismatch = false;  // test hook: perturbs one optimized value
};

struct SuiteResult {
  std::string name;
  std::size_t instances = 0;
  std::size_t mismatches = 0;
  double max_abs_diff = 0.0;
};

struct SuiteReport {
  std::vector<SuiteResult> results;
  bool passed = false;
};

inline double objective_oracle(const Objective& o, const LogitMatrix& logits, const TokenSeq& ref) {
  switch (o.family) {
    case Family::kCrossEntropy: return cross_entropy(logits, ref);
    case Family::kRewards: return ngram_rewards(logits, ref, o.order);
    case Family::kMatches: return ngram_matches(logits, ref, o.order);
    case Family::kProbCount: return prob_ngram_count(logits, ref, o.order);
    case Family::kBagOfNgrams: return bag_of_ngrams(logits, ref, o.order);
  }
  throw InvalidInput("oracle: unknown objective family");
}

struct RandomInstance {
  LogitMatrix logits;
  TokenSeq ref;
};

// Half of the references copy the argmax at ~60% of positions; the rest are
// drawn from at most three tokens so n-grams repeat.
inline RandomInstance random_instance(Rng& rng, std::size_t max_len, std::size_t max_vocab) {
  const std::size_t t = 1 + rng.below(max_len), d = 2 + rng.below(max_vocab - 1);
  RandomInstance inst{seeded_uniform(rng, -3.0, 3.0, t, d), TokenSeq(t)};
  if (rng.uniform() < 0.5) {
    const TokenSeq am = argmax_seq(softmax(inst.logits)).tokens;
    for (std::size_t i = 0; i < t; ++i) {
      inst.ref[i] = rng.uniform() < 0.6 ? am[i] : static_cast<TokenId>(rng.below(d));
    }
  } else {
    for (TokenId& tok : inst.ref) tok = static_cast<TokenId>(rng.below(std::min<std::size_t>(d, 3)));
  }
  return inst;
}

namespace detail {

inline void record(SuiteResult& r, double optimized, double reference, double tol) {
  const double diff = std::abs(optimized - reference);
  ++r.instances;
  r.max_abs_diff = std::max(r.max_abs_diff, diff);
  if (!(diff <= tol)) ++r.mismatches;
}

}  // namespace detail

// Optimized objectives and metrics against the definition-literal oracles:
// `trials` random instances per objective kind, `trials` random pairs for
// clipped overlap (n = 1..3) and LCS, and every pair of sequences up to
// `lcs_max_len` over `lcs_alphabet` symbols for LCS.
inline SuiteReport run_suite(const SuiteOptions& opt) {
  if (opt.trials == 0) throw InvalidInput("oracle-check: trials must be positive");
  if (opt.max_len < 1 || opt.max_vocab < 2) throw InvalidInput("oracle-check: instance limits too small");
  SuiteReport report;
  bool injected = !opt.inject_mismatch;

  for (const Objective& o : verification_objectives()) {
    Rng rng(opt.seed ^ (static_cast<std::uint64_t>(o.family) << 32) ^ o.order);
    SuiteResult r{objective_name(o)};
    for (std::size_t i = 0; i < opt.trials; ++i) {
      const RandomInstance inst = random_instance(rng, opt.max_len, opt.max_vocab);
      double value = evaluate(o, inst.logits, inst.ref).value;
      if (!injected) {
        value += 1e-9;
        injected = true;
      }
      detail::record(r, value, objective_oracle(o, inst.logits, inst.ref), opt.tolerance);
    }
    report.results.push_back(r);
  }

  Rng rng(opt.seed ^ 0x5eedULL);
  SuiteResult overlap{"rouge-clipped-overlap"}, lcs{"lcs-random"};
  for (std::size_t i = 0; i < opt.trials; ++i) {
    TokenSeq a(rng.below(opt.max_len + 1)), b(rng.below(opt.max_len + 1));
    for (TokenId& t : a) t = static_cast<TokenId>(rng.below(4));
    for (TokenId& t : b) t = static_cast<TokenId>(rng.below(4));
    for (std::size_t n = 1; n <= 3; ++n) {
      detail::record(overlap, static_cast<double>(dng::clipped_overlap(a, b, n)),
                     static_cast<double>(clipped_overlap(a, b, n)), 0.0);
    }
    detail::record(lcs, static_cast<double>(lcs_length(a, b)), static_cast<double>(lcs_recursive(a, b)),
                   0.0);
  }
  report.results.push_back(overlap);
  report.results.push_back(lcs);

  SuiteResult sweep{"lcs-exhaustive"};
  const SequenceSpace space(opt.lcs_alphabet, opt.lcs_max_len);
  lcs_exhaustive(space, [&](const TokenSeq& a, const TokenSeq& b, std::size_t expected) {
    detail::record(sweep, static_cast<double>(lcs_length(a, b)), static_cast<double>(expected), 0.0);
  });
  report.results.push_back(sweep);

  report.passed = std::all_of(report.results.begin(), report.results.end(),
                              [](const SuiteResult& r) { return r.mismatches == 0; });
  return report;
}

}  // namespace dng::oracle
