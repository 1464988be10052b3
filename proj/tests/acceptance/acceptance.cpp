#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "dng/dng.hpp"
#include "dng/oracle/suite.hpp"
#include "test_support.hpp"

namespace {

using namespace dng;

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string format(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// 1 --------------------------------------------------------------------------

Outcome gradient_suite() {
  const auto start = std::chrono::steady_clock::now();
  const GradSuiteReport r = run_grad_suite(GradSuiteOptions{});
  const double elapsed = seconds_since(start);
  double worst = 0.0;
  std::size_t probes = 0;
  for (const GradSuiteResult& res : r.results) {
    worst = std::max(worst, res.max_rel_error);
    probes += res.probes;
    if (!res.passed) std::printf("    %s failed: max rel error %.3e\n", objective_name(res.objective).c_str(), res.max_rel_error);
  }
  const bool ok = r.passed && r.results.size() == verification_objectives().size() && elapsed < 60.0;
  return {ok, format("%zu objectives, %zu probes, max rel error %.2e < 1e-4, %.1f s", r.results.size(),
                     probes, worst, elapsed)};
}

// 2 --------------------------------------------------------------------------

Outcome oracle_equivalence() {
  const auto start = std::chrono::steady_clock::now();
  oracle::SuiteOptions opt;
  opt.trials = 1000;
  const oracle::SuiteReport r = oracle::run_suite(opt);
  const double elapsed = seconds_since(start);
  double worst = 0.0;
  std::size_t mismatches = 0;
  for (const oracle::SuiteResult& res : r.results) {
    worst = std::max(worst, res.max_abs_diff);
    mismatches += res.mismatches;
  }
  return {r.passed && elapsed < 60.0,
          format("%zu checks x 1000 instances, %zu mismatches, max |diff| %.2e <= 1e-12, %.1f s",
                 r.results.size(), mismatches, worst, elapsed)};
}

// 3 --------------------------------------------------------------------------

Outcome closed_form_identities() {
  Rng rng(3);
  std::size_t failures = 0, repeated = 0, checks = 0;
  double worst_ce = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t t = 1 + rng.below(10), d = 5 + rng.below(8);
    const std::size_t alphabet = trial % 2 == 0 ? 2 : d - 3;
    TokenSeq ref = testing::random_tokens(rng, t, alphabet);
    for (TokenId& tok : ref) tok += 3;
    const LogitMatrix l = testing::one_hot_logits(ref, d);
    const double ce = cross_entropy(l, ref).value;
    worst_ce = std::max(worst_ce, ce);
    if (!(ce < 1e-9)) ++failures;
    bool has_repeat = false;
    for (std::size_t n = 1; n <= 4 && n <= t; ++n) {
      const std::size_t windows = t - n + 1, distinct = distinct_ngram_count(ref, n);
      if (distinct < windows && n >= 2) has_repeat = true;
      const double expected = 1.0 - static_cast<double>(distinct) / static_cast<double>(windows);
      if (n >= 2 && ngram_rewards(l, ref, n).value != expected) ++failures;
      if (ngram_matches(l, ref, n).value != expected) ++failures;
      if (bag_of_ngrams(l, ref, n).value != 0.5) ++failures;
      if (prob_ngram_count(l, ref, n).value != -1.0) ++failures;
      checks += n >= 2 ? 4 : 3;
    }
    repeated += has_repeat;
  }
  return {failures == 0 && repeated > 0,
          format("200 references (%zu with repeated n-grams), %zu exact checks, %zu failures, max CE %.1e",
                 repeated, checks, failures, worst_ce)};
}

// 4 --------------------------------------------------------------------------

Outcome range_invariants() {
  Rng rng(4);
  std::size_t violations = 0;
  double worst_row_sum = 0.0;
  for (int trial = 0; trial < 10000; ++trial) {
    const oracle::RandomInstance inst = oracle::random_instance(rng, 10, 12);
    for (const Objective& o : verification_objectives()) {
      const LossOutput out = evaluate(o, inst.logits, inst.ref);
      const double v = out.value;
      bool in_range = std::isfinite(v);
      switch (o.family) {
        case Family::kCrossEntropy: in_range = in_range && v >= 0.0; break;
        case Family::kRewards:
        case Family::kMatches: in_range = in_range && v >= 0.0 && v <= 1.0; break;
        case Family::kBagOfNgrams: in_range = in_range && v >= 0.5 && v <= 1.0; break;
        case Family::kProbCount: in_range = in_range && v >= -1.0 && v <= 0.0; break;
      }
      const double row_sum = testing::max_abs_row_sum(out.grad);
      worst_row_sum = std::max(worst_row_sum, row_sum);
      if (!in_range || !(row_sum <= 1e-9)) ++violations;
    }
  }
  return {violations == 0, format("10000 instances x %zu objectives, %zu violations, max |row sum| %.1e",
                                  verification_objectives().size(), violations, worst_row_sum)};
}

// 5 --------------------------------------------------------------------------

Outcome metric_oracles() {
  std::size_t failures = 0;
  const RougeScore bigram = rouge_n(TokenSeq{1, 2, 4}, TokenSeq{1, 2, 3}, 2);
  failures += bigram.precision != 0.5 || bigram.recall != 0.5 || bigram.f1 != 0.5;
  const RougeScore lcs = rouge_l(TokenSeq{1, 3, 2, 4}, TokenSeq{1, 2, 3, 4});
  failures += lcs.precision != 0.75 || lcs.recall != 0.75 || lcs.f1 != 0.75;
  const RougeScore clipped = rouge_n(TokenSeq{3, 3, 3, 3}, TokenSeq{3, 4}, 1);
  failures += clipped.precision != 0.25 || clipped.recall != 0.5;
  failures += rouge_n(TokenSeq{1, 2, 3}, TokenSeq{4, 5, 6}, 1).f1 != 0.0;
  failures += lcs_length(TokenSeq{1, 2, 3, 4}, TokenSeq{1, 3, 2, 4}) != 3;

  const auto start = std::chrono::steady_clock::now();
  const oracle::SequenceSpace space(3, 8);
  std::size_t pairs = 0, mismatches = 0;
  oracle::lcs_exhaustive(space, [&](const TokenSeq& a, const TokenSeq& b, std::size_t expected) {
    ++pairs;
    if (lcs_length(a, b) != expected) ++mismatches;
  });
  const bool ok = failures == 0 && mismatches == 0 && pairs == space.size() * space.size();
  return {ok, format("%zu fixture failures; LCS sweep over %zu sequence pairs (alphabet 3, length <= 8), "
                     "%zu mismatches, %.1f s",
                     failures, pairs, mismatches, seconds_since(start))};
}

// 6 --------------------------------------------------------------------------

Outcome worked_examples() {
  using testing::logits_with_argmax;
  struct Fixture {
    const char* name;
    double value, expected;
  };
  const TokenSeq r1{5, 6, 5};
  const TokenSeq r2{5, 6, 7};
  const LogitMatrix shifted = logits_with_argmax(TokenSeq{6, 7, 5}, {0.9, 0.9, 0.9}, 8);
  const std::vector<Fixture> fixtures = {
      {"rewards", ngram_rewards(logits_with_argmax(r1, {0.9, 0.8, 0.7}, 8), r1, 2).value, 0.36},
      {"matches (shifted)", ngram_matches(shifted, r2, 2).value, 0.595},
      {"rewards (shifted)", ngram_rewards(shifted, r2, 2).value, 1.0},
      {"1-gram matches", ngram_matches(logits_with_argmax(TokenSeq{4, 3}, {0.6, 0.8}, 6), TokenSeq{3, 4}, 1).value,
       0.3},
      {"P-P2", prob_ngram_count(logits_with_argmax(TokenSeq{1, 2, 3}, {0.9, 0.9, 0.9}, 5), TokenSeq{1, 2, 4}, 2).value,
       -0.5},
      {"BoN", bag_of_ngrams(logits_with_argmax(TokenSeq{1, 2}, {0.6, 0.7}, 4), TokenSeq{1, 2}, 2).value, 0.79},
  };
  bool ok = true;
  std::string detail;
  for (const Fixture& f : fixtures) {
    const bool hit = std::abs(f.value - f.expected) <= 1e-12;
    ok = ok && hit;
    detail += format("%s%s %.12g%s", detail.empty() ? "" : ", ", f.name, f.value, hit ? "" : " (MISMATCH)");
  }
  return {ok, detail};
}

// 7 --------------------------------------------------------------------------

Outcome training_behavior() {
  const auto start = std::chrono::steady_clock::now();
  model::ModelConfig mc;
  mc.vocab_size = 50;
  mc.embed_dim = 32;
  mc.max_source_len = 20;
  mc.max_target_len = 8;
  model::TrainerConfig tc;
  tc.steps = 3000;
  tc.batch_size = 16;
  tc.lr = 3e-3;
  tc.warmup_steps = 300;
  tc.eval_every = 300;

  ObjectiveSpec ce_only;
  ObjectiveSpec joint;
  joint.matches_orders = {2};
  ObjectiveSpec matches_only;
  matches_only.use_ce = false;
  matches_only.matches_orders = {2};

  std::size_t converged = 0, wins = 0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const data::Corpus train_set = data::gen_salient_task(50, 20, 3, 2000, 100 + seed);
    const data::Corpus eval_set = data::gen_salient_task(50, 20, 3, 200, 200 + seed);
    tc.shuffle_seed = seed;
    const model::ModelParams init = model::init_model(mc, seed);
    const model::TrainResult base = model::train(init, train_set, eval_set, ce_only, tc);
    const model::TrainResult with = model::train(init, train_set, eval_set, joint, tc);

    const model::EvalLoss base_eval = model::evaluate_loss(base.best, eval_set, ce_only);
    const double base_matches = model::evaluate_loss(base.best, eval_set, matches_only).total;
    const double with_matches = model::evaluate_loss(with.best, eval_set, matches_only).total;

    std::vector<TokenSeq> base_out, with_out, refs;
    for (const data::Example& ex : eval_set.examples) {
      base_out.push_back(model::decode(base.best, ex.source, model::DecodeConfig{}));
      with_out.push_back(model::decode(with.best, ex.source, model::DecodeConfig{}));
      refs.emplace_back(ex.target.begin(), ex.target.end() - 1);
    }
    std::vector<CandidateRef> base_pairs, with_pairs;
    for (std::size_t i = 0; i < refs.size(); ++i) {
      base_pairs.push_back({base_out[i], refs[i]});
      with_pairs.push_back({with_out[i], refs[i]});
    }
    const CorpusReport base_rouge = corpus_eval(base_pairs, {1, 2});
    const CorpusReport with_rouge = corpus_eval(with_pairs, {1, 2});

    converged += base_eval.ce_per_token < 0.5;
    wins += with_matches < base_matches;
    std::printf("    seed %llu: CE-only eval CE %.4f nats/token; 2-gram matches loss %.4f (CE-only) vs %.4f "
                "(CE+matches); R-1/R-2/R-L F1 %.3f/%.3f/%.3f vs %.3f/%.3f/%.3f\n",
                static_cast<unsigned long long>(seed), base_eval.ce_per_token, base_matches, with_matches,
                base_rouge.mean_by_order.at(1).f1, base_rouge.mean_by_order.at(2).f1, base_rouge.mean_l.f1,
                with_rouge.mean_by_order.at(1).f1, with_rouge.mean_by_order.at(2).f1, with_rouge.mean_l.f1);
    std::fflush(stdout);
  }
  const double elapsed = seconds_since(start);
  return {converged == 5 && wins >= 4 && elapsed < 600.0,
          format("CE-only converged on %zu/5 seeds; joint run lower held-out 2-gram matches loss on %zu/5 "
                 "seeds (need >= 4); %.0f s",
                 converged, wins, elapsed)};
}

// 8 --------------------------------------------------------------------------

Outcome bench_direction() {
  const data::Corpus corpus = data::gen_salient_task(50, 20, 3, 256, 0);
  model::ModelConfig mc;
  mc.vocab_size = 50;
  mc.max_source_len = 20;
  mc.max_target_len = 8;
  model::BenchOptions opt;
  opt.repetitions = 11;
  const std::vector<model::BenchRow> rows =
      model::run_bench(model::init_model(mc, 0), corpus, model::default_bench_sweep(), opt);
  bool ok = true;
  std::string detail;
  for (const model::BenchRow& r : rows) {
    if (r.label.find("(2,3,4)") != std::string::npos) {
      ok = ok && r.relative < 1.0;
      detail += format("%s x%.2f; ", r.label.c_str(), r.relative);
    }
    std::printf("    %-24s %9.1f docs/s  (x%.2f)\n", r.label.c_str(), r.docs_per_sec, r.relative);
  }
  return {ok, detail + "CE-only x1.00"};
}

// 9 --------------------------------------------------------------------------

Outcome padding_transparency() {
  Rng rng(9);
  ObjectiveSpec spec;
  spec.rewards_orders = {2, 3, 4};
  spec.matches_orders = {1, 2, 3, 4};
  spec.pp_orders = {2};
  spec.bon_orders = {2, 3, 4};
  std::size_t mismatches = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t batch = 1 + rng.below(6), vocab = 4 + rng.below(9);
    std::vector<LogitMatrix> plain, padded;
    std::vector<TokenSeq> refs, padded_refs;
    std::vector<std::size_t> lengths;
    std::size_t width = 0;
    for (std::size_t b = 0; b < batch; ++b) {
      lengths.push_back(1 + rng.below(8));
      width = std::max(width, lengths.back());
    }
    width += rng.below(3);
    for (std::size_t b = 0; b < batch; ++b) {
      plain.push_back(testing::random_logits(rng, lengths[b], vocab));
      refs.push_back(testing::partially_matching_ref(rng, plain.back()));
      LogitMatrix p(width, vocab);
      for (std::size_t r = 0; r < width; ++r) {
        for (std::size_t c = 0; c < vocab; ++c) p(r, c) = r < lengths[b] ? plain.back()(r, c) : rng.uniform(-5, 5);
      }
      padded.push_back(std::move(p));
      TokenSeq pr = refs.back();
      pr.resize(width, kPad);
      padded_refs.push_back(std::move(pr));
    }
    std::vector<LossExample> a, b;
    for (std::size_t i = 0; i < batch; ++i) {
      a.push_back({&plain[i], refs[i], lengths[i]});
      b.push_back({&padded[i], padded_refs[i], lengths[i]});
    }
    const BatchLoss la = batch_loss(a, spec), lb = batch_loss(b, spec);
    bool same = la.value == lb.value;
    for (std::size_t i = 0; i < batch; ++i) {
      same = same && la.grads[i] == lb.grads[i].top_rows(lengths[i]);
      for (std::size_t r = lengths[i]; r < width; ++r) {
        for (double v : lb.grads[i].row(r)) same = same && v == 0.0;
      }
    }
    mismatches += !same;
  }
  return {mismatches == 0,
          format("500 padded batches, all objective families, %zu not bit-identical", mismatches)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"gradient suite", gradient_suite},
      {"oracle equivalence", oracle_equivalence},
      {"closed-form identities", closed_form_identities},
      {"range invariants", range_invariants},
      {"metric oracles", metric_oracles},
      {"worked-example fixtures", worked_examples},
      {"training behavior", training_behavior},
      {"bench direction", bench_direction},
      {"padding transparency", padding_transparency},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] criterion %zu %s: %s\n", o.passed ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.detail.c_str());
    std::fflush(stdout);
    failed += !o.passed;
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
