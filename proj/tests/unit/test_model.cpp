#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "test_support.hpp"

namespace dng::model {
namespace {

ModelConfig small_config(std::size_t vocab = 10, std::size_t embed = 8) {
  ModelConfig c;
  c.vocab_size = vocab;
  c.embed_dim = embed;
  c.max_source_len = 12;
  c.max_target_len = 12;
  return c;
}

TEST(InitModel, DeterministicAndInRange) {
  const ModelConfig cfg = small_config();
  const ModelParams a = init_model(cfg, 3), b = init_model(cfg, 3), c = init_model(cfg, 4);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
  for (const Matrix* m : a.tensors()) {
    for (double v : m->values()) {
      EXPECT_GE(v, -0.1);
      EXPECT_LT(v, 0.1);
    }
  }
  ModelConfig bad = cfg;
  bad.vocab_size = 3;
  EXPECT_THROW(init_model(bad, 0), InvalidInput);
  bad = cfg;
  bad.embed_dim = 1;
  EXPECT_THROW(init_model(bad, 0), InvalidInput);
}

TEST(Forward, ShapeAndDeterminism) {
  const ModelParams p = init_model(small_config(), 1);
  const TokenSeq src{3, 4, 5, 6}, tgt{7, 8, kEos};
  const LogitMatrix l = forward_teacher_forced(p, src, tgt);
  EXPECT_EQ(l.rows(), 3u);
  EXPECT_EQ(l.cols(), 10u);
  EXPECT_TRUE(l.all_finite());
  EXPECT_EQ(l, forward_teacher_forced(p, src, tgt));
}

TEST(Forward, RejectsBadInputs) {
  const ModelParams p = init_model(small_config(), 1);
  EXPECT_THROW(forward_teacher_forced(p, TokenSeq{3, 10}, TokenSeq{3}), InvalidInput);
  EXPECT_THROW(forward_teacher_forced(p, TokenSeq{3}, TokenSeq{11}), InvalidInput);
  EXPECT_THROW(forward_teacher_forced(p, TokenSeq{}, TokenSeq{3}), InvalidInput);
  EXPECT_THROW(forward_teacher_forced(p, TokenSeq(13, 3), TokenSeq{3}), InvalidInput);
  EXPECT_THROW(forward_teacher_forced(p, TokenSeq{3}, TokenSeq(13, 3)), InvalidInput);
}

TEST(Forward, Causality) {
  Rng rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    const ModelParams p = init_model(small_config(), trial);
    const TokenSeq src = testing::random_tokens(rng, 1 + rng.below(8), 10);
    TokenSeq tgt = testing::random_tokens(rng, 2 + rng.below(8), 10);
    const LogitMatrix before = forward_teacher_forced(p, src, tgt);
    const std::size_t t = rng.below(tgt.size());
    tgt[t] = static_cast<TokenId>((tgt[t] + 1 + rng.below(9)) % 10);
    const LogitMatrix after = forward_teacher_forced(p, src, tgt);
    for (std::size_t r = 0; r <= t; ++r) {
      for (std::size_t c = 0; c < 10; ++c) EXPECT_EQ(before(r, c), after(r, c));
    }
    if (t + 1 < tgt.size()) {
      bool changed = false;
      for (std::size_t c = 0; c < 10; ++c) changed = changed || before(t + 1, c) != after(t + 1, c);
      EXPECT_TRUE(changed);
    }
  }
}

TEST(Forward, StepwiseScorerMatchesTeacherForcing) {
  const ModelParams p = init_model(small_config(), 5);
  const TokenSeq src{3, 9, 4}, tgt{5, 6, 7, kEos};
  const Matrix lp = log_softmax(forward_teacher_forced(p, src, tgt));
  const ModelScorer scorer(p, src);
  for (std::size_t t = 0; t < tgt.size(); ++t) {
    const std::vector<double> row = scorer(std::span<const TokenId>(tgt).first(t));
    for (std::size_t c = 0; c < 10; ++c) EXPECT_EQ(row[c], lp(t, c));
  }
}

// Loss as a function of the parameters, for one example.
double model_loss(const ModelParams& p, const TokenSeq& src, const TokenSeq& tgt,
                  const Objective& o) {
  return evaluate(o, forward_teacher_forced(p, src, tgt), tgt).value;
}

struct ParamProbe {
  ModelParams params;
  TokenSeq source, target;
};

// Random model and example whose argmax rows and count kinks sit well away
// from ties, so the piecewise objectives are smooth within +-h.
ParamProbe stable_param_probe(const Objective& o, Rng& rng) {
  ModelConfig cfg;
  cfg.vocab_size = 6;
  cfg.embed_dim = 4;
  cfg.max_source_len = 4;
  cfg.max_target_len = 3;
  cfg.init_scale = 1.0;
  for (;;) {
    ParamProbe probe{init_model(cfg, rng.next_u64()), testing::random_tokens(rng, 3, 6), {}};
    for (TokenId& t : probe.source) t = static_cast<TokenId>(3 + t % 3);
    // Half-matching reference built from the greedy tokens under teacher forcing of itself.
    TokenSeq tgt = testing::random_tokens(rng, 3, 6);
    const LogitMatrix first = forward_teacher_forced(probe.params, probe.source, tgt);
    const TokenSeq am = argmax_seq(softmax(first)).tokens;
    for (std::size_t t = 0; t < tgt.size(); ++t) {
      if (rng.uniform() < 0.7) tgt[t] = am[t];
    }
    probe.target = tgt;
    const LogitMatrix logits = forward_teacher_forced(probe.params, probe.source, probe.target);
    if (argmax_seq(softmax(logits)).min_margin() < 0.05) continue;
    if (kink_gap(o, logits, probe.target) < 1e-3) continue;
    return probe;
  }
}

TEST(EndToEndGradient, MatchesFiniteDifferencesForEveryFamily) {
  Rng rng(2718);
  const double h = 1e-4;
  for (const Objective& o : testing::all_objective_kinds()) {
    for (int trial = 0; trial < 3; ++trial) {
      ParamProbe probe = stable_param_probe(o, rng);
      const ForwardPass pass = forward_with_cache(probe.params, probe.source, probe.target);
      const LossOutput loss = evaluate(o, pass.logits, probe.target);
      ModelParams grads = zeros_like(probe.params);
      backward(probe.params, pass, loss.grad, grads);

      auto pt = probe.params.tensors();
      auto gt = grads.tensors();
      double worst = 0.0;
      for (std::size_t k = 0; k < ModelParams::kTensorCount; ++k) {
        auto vals = pt[k]->values();
        for (std::size_t i = 0; i < vals.size(); ++i) {
          const double x = vals[i];
          vals[i] = x + h;
          const double up = model_loss(probe.params, probe.source, probe.target, o);
          vals[i] = x - h;
          const double down = model_loss(probe.params, probe.source, probe.target, o);
          vals[i] = x;
          const double fd = (up - down) / (2 * h);
          const double a = gt[k]->values()[i];
          const double rel = std::abs(a - fd) / std::max({std::abs(a), std::abs(fd), 1e-3});
          worst = std::max(worst, rel);
        }
      }
      EXPECT_LT(worst, 1e-3) << objective_name(o) << " trial " << trial;
    }
  }
}

TEST(Backward, CompositeGradientIsSumOfTerms) {
  const ModelParams p = init_model(small_config(), 9);
  const TokenSeq src{3, 4, 5}, tgt{4, 5, 4, 5, kEos};
  ObjectiveSpec spec;
  spec.rewards_orders = {2};
  spec.bon_orders = {2};
  const ForwardPass pass = forward_with_cache(p, src, tgt);
  ModelParams whole = zeros_like(p), parts = zeros_like(p);
  backward(p, pass, composite(pass.logits, tgt, spec).grad, whole);
  for (const Objective& o : spec.terms()) backward(p, pass, evaluate(o, pass.logits, tgt).grad, parts);
  auto w = whole.tensors();
  auto s = parts.tensors();
  for (std::size_t k = 0; k < ModelParams::kTensorCount; ++k) {
    for (std::size_t i = 0; i < w[k]->size(); ++i) {
      EXPECT_NEAR(w[k]->values()[i], s[k]->values()[i], 1e-12);
    }
  }
}

data::Batch tiny_batch() {
  data::Corpus c = data::gen_copy_task(10, 4, 6, 21);
  c.examples[1].target.pop_back();
  c.examples[1].target.push_back(kEos);
  c.examples[2].source.pop_back();
  return data::make_batches(c, 6, 0).front();
}

TEST(TrainStep, ZeroLearningRateLeavesParamsUnchanged) {
  ModelParams p = init_model(small_config(), 2);
  const ModelParams before = p;
  OptimState o = init_optim(p);
  ObjectiveSpec spec;
  spec.matches_orders = {2};
  train_step(p, o, tiny_batch(), spec, 0.0);
  EXPECT_EQ(p, before);
  EXPECT_EQ(o.step, 1u);
}

TEST(TrainStep, DeterministicAndReportsTerms) {
  ObjectiveSpec spec;
  spec.rewards_orders = {2, 3};
  ModelParams a = init_model(small_config(), 2), b = a;
  OptimState oa = init_optim(a), ob = init_optim(b);
  const data::Batch batch = tiny_batch();
  for (int i = 0; i < 3; ++i) {
    const TrainStats sa = train_step(a, oa, batch, spec, 1e-2);
    const TrainStats sb = train_step(b, ob, batch, spec, 1e-2);
    EXPECT_EQ(sa.loss, sb.loss);
    ASSERT_EQ(sa.terms.size(), 3u);
    double sum = 0.0;
    for (const TermValue& t : sa.terms) sum += t.value;
    EXPECT_NEAR(sum, sa.loss, 1e-12);
  }
  EXPECT_EQ(a, b);
  EXPECT_EQ(oa, ob);
}

TEST(TrainStep, TrainingReducesLoss) {
  ObjectiveSpec spec;
  ModelParams p = init_model(small_config(), 2);
  OptimState o = init_optim(p);
  const data::Batch batch = tiny_batch();
  const double first = train_step(p, o, batch, spec, 1e-2).loss;
  double last = first;
  for (int i = 0; i < 50; ++i) last = train_step(p, o, batch, spec, 1e-2).loss;
  EXPECT_LT(last, 0.5 * first);
}

TEST(TrainStep, NonFiniteParametersDiverge) {
  ModelParams p = init_model(small_config(), 2);
  OptimState o = init_optim(p);
  p.out_w(0, 0) = std::nan("");
  try {
    train_step(p, o, tiny_batch(), ObjectiveSpec{}, 1e-3);
    FAIL() << "expected TrainingDiverged";
  } catch (const TrainingDiverged& e) {
    EXPECT_EQ(e.step(), 1u);
  }
}

TEST(Adam, OneStepOnFreeLogitsDecreasesCrossEntropy) {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix logits = testing::random_logits(rng, 4, 7);
    const TokenSeq ref = testing::random_tokens(rng, 4, 7);
    Matrix m(4, 7), v(4, 7);
    const LossOutput before = cross_entropy(logits, ref);
    adam_update(logits, before.grad, m, v, 1, AdamConfig{}, 0.1);
    EXPECT_LT(cross_entropy(logits, ref).value, before.value);
  }
}

TEST(Adam, DecoupledDecayThenBiasCorrectedStep) {
  Matrix p(1, 1, 2.0), g(1, 1, 0.5), m(1, 1), v(1, 1);
  adam_update(p, g, m, v, 1, AdamConfig{}, 0.1);
  // decay: 2 - 0.1*0.01*2 = 1.998; bias-corrected m/sqrt(v) = 1 (up to eps)
  EXPECT_NEAR(p(0, 0), 1.998 - 0.1 * 0.5 / (0.5 + 1e-8), 1e-15);
}

TEST(Schedule, WarmupThenLinearDecline) {
  const LinearWarmupSchedule s{1e-2, 10, 110};
  EXPECT_EQ(s.at(0), 0.0);
  EXPECT_DOUBLE_EQ(s.at(5), 5e-3);
  EXPECT_DOUBLE_EQ(s.at(10), 1e-2);
  EXPECT_DOUBLE_EQ(s.at(60), 5e-3);
  EXPECT_EQ(s.at(110), 0.0);
  EXPECT_EQ(s.at(500), 0.0);
}

TEST(Decode, RiggedModelEmitsSevenThenStops) {
  const ModelParams p = testing::rigged_token7_model();
  const TokenSeq src{3, 4, 5};
  EXPECT_EQ(greedy_decode(p, src, DecodeConfig{}), TokenSeq{7});
  DecodeConfig beam;
  beam.beam_width = 4;
  EXPECT_EQ(beam_decode(p, src, beam), TokenSeq{7});
}

TEST(Decode, MaxLenZeroIsEmpty) {
  const ModelParams p = testing::rigged_token7_model();
  DecodeConfig cfg;
  cfg.min_len = 0;
  cfg.max_len = 0;
  EXPECT_TRUE(greedy_decode(p, TokenSeq{3}, cfg).empty());
  cfg.beam_width = 3;
  EXPECT_TRUE(beam_decode(p, TokenSeq{3}, cfg).empty());
}

TEST(Decode, MinLenSuppressesEos) {
  const ModelParams p = testing::rigged_token7_model();
  DecodeConfig cfg;
  cfg.min_len = 3;
  const TokenSeq out = greedy_decode(p, TokenSeq{3}, cfg);
  EXPECT_GE(out.size(), 3u);
  for (TokenId t : out) {
    EXPECT_NE(t, kPad);
    EXPECT_NE(t, kBos);
    EXPECT_NE(t, kEos);
  }
}

TEST(Decode, GreedyEqualsWidthOneBeam) {
  Rng rng(99);
  DecodeConfig beam;
  beam.beam_width = 1;
  beam.length_penalty = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    ModelConfig cfg = small_config(8, 6);
    cfg.init_scale = 0.5;
    const ModelParams p = init_model(cfg, trial);
    const TokenSeq src = testing::random_tokens(rng, 1 + rng.below(6), 8);
    EXPECT_EQ(greedy_decode(p, src, DecodeConfig{}), beam_decode(p, src, beam));
    EXPECT_EQ(decode(p, src, beam), greedy_decode(p, src, beam));
  }
}

TEST(Decode, Deterministic) {
  ModelConfig cfg = small_config(8, 6);
  cfg.init_scale = 0.5;
  const ModelParams p = init_model(cfg, 17);
  const DecodeConfig c = DecodeConfig::long_summary_preset();
  EXPECT_EQ(beam_decode(p, TokenSeq{3, 4, 5}, c), beam_decode(p, TokenSeq{3, 4, 5}, c));
}

TEST(Decode, ConfigValidation) {
  DecodeConfig c;
  c.beam_width = 0;
  EXPECT_THROW(c.validate(), InvalidInput);
  c = {};
  c.length_penalty = -1;
  EXPECT_THROW(c.validate(), InvalidInput);
  c = {};
  c.min_len = 5;
  c.max_len = 4;
  EXPECT_THROW(c.validate(), InvalidInput);
  EXPECT_EQ(DecodeConfig::long_summary_preset().beam_width, 4u);
  EXPECT_EQ(DecodeConfig::long_summary_preset().length_penalty, 2.0);
  EXPECT_EQ(DecodeConfig::short_summary_preset().beam_width, 6u);
  EXPECT_EQ(DecodeConfig::short_summary_preset().length_penalty, 1.0);
}

// Table-driven scorer: vocabulary {PAD, BOS, EOS, 3, 4}; log-probabilities
// depend on the whole prefix.
class TableModel {
 public:
  static constexpr std::size_t kVocab = 5;
  std::map<TokenSeq, std::vector<double>> table;

  std::vector<double> operator()(std::span<const TokenId> prefix) const {
    const auto it = table.find(TokenSeq(prefix.begin(), prefix.end()));
    if (it != table.end()) return it->second;
    return {-1e9, -1e9, 0.0, -1e9, -1e9};
  }

  static std::vector<double> row(double eos, double a, double b) {
    const double z = std::log(std::exp(eos) + std::exp(a) + std::exp(b));
    return {-1e9, -1e9, eos - z, a - z, b - z};
  }

  static TableModel random(Rng& rng) {
    TableModel m;
    const auto r = [&] { return rng.uniform(-3.0, 3.0); };
    m.table[{}] = row(r(), r(), r());
    for (TokenId a : {3u, 4u}) {
      m.table[{a}] = row(r(), r(), r());
      for (TokenId b : {3u, 4u}) m.table[{a, b}] = row(r(), r(), r());
    }
    return m;
  }
};

struct Scored {
  TokenSeq tokens;
  double score;
};

// Every finished hypothesis with 1..2 content tokens, scored as the decoder does.
Scored exhaustive_best(const TableModel& m, double alpha) {
  Scored best{{}, -INFINITY};
  const auto consider = [&](const TokenSeq& y) {
    double lp = 0.0;
    for (std::size_t t = 0; t < y.size(); ++t) lp += m(std::span(y).first(t))[y[t]];
    lp += m(std::span(y))[kEos];
    const double s = length_normalized(lp, y.size() + 1, alpha);
    if (s > best.score) best = {y, s};
  };
  for (TokenId a : {3u, 4u}) {
    consider({a});
    for (TokenId b : {3u, 4u}) consider({a, b});
  }
  return best;
}

DecodeConfig table_config(std::size_t width, double alpha) {
  DecodeConfig c;
  c.beam_width = width;
  c.length_penalty = alpha;
  c.min_len = 1;
  c.max_len = 3;
  return c;
}

TEST(BeamSearch, ConstructedModelFindsGlobalOptimumGreedyMisses) {
  TableModel m;
  // Greedy takes 3 first (0.6) then faces a flat row; 4 leads to a confident EOS.
  m.table[{}] = TableModel::row(-1e9, std::log(0.6), std::log(0.4));
  m.table[{3}] = TableModel::row(std::log(0.34), std::log(0.33), std::log(0.33));
  m.table[{4}] = TableModel::row(std::log(0.98), std::log(0.01), std::log(0.01));
  m.table[{3, 3}] = m.table[{3, 4}] = m.table[{4, 3}] = m.table[{4, 4}] = TableModel::row(0, -1e9, -1e9);
  const Scored best = exhaustive_best(m, 0.0);
  EXPECT_EQ(best.tokens, TokenSeq{4});
  EXPECT_EQ(beam_search(m, table_config(3, 0.0)), best.tokens);
  EXPECT_EQ(greedy_search(m, table_config(1, 0.0)), TokenSeq{3});
}

TEST(BeamSearch, ExhaustiveWidthMatchesEnumeration) {
  Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const TableModel m = TableModel::random(rng);
    for (double alpha : {0.0, 1.0, 2.0}) {
      const Scored best = exhaustive_best(m, alpha);
      const Hypothesis h = beam_search_hypothesis(m, table_config(16, alpha));
      EXPECT_TRUE(h.finished);
      EXPECT_EQ(h.score, best.score);
      for (std::size_t w = 1; w <= 3; ++w) {
        const Hypothesis narrow = beam_search_hypothesis(m, table_config(w, alpha));
        if (narrow.finished) EXPECT_LE(narrow.score, best.score);
      }
    }
  }
}

TEST(BeamSearch, LengthPenaltyWithEqualLogProb) {
  // [3] + EOS totals -2 and [3, 4] + EOS totals -2.1.
  TableModel m;
  m.table[{}] = {-1e9, -1e9, -1e9, -1.0, -1e9};
  m.table[{3}] = {-1e9, -1e9, -1.0, -1e9, -0.5};
  m.table[{3, 4}] = {-1e9, -1e9, -0.6, -1e9, -1e9};
  EXPECT_EQ(beam_search(m, table_config(2, 0.0)), TokenSeq{3});
  const Hypothesis h = beam_search_hypothesis(m, table_config(2, 5.0));
  EXPECT_EQ(h.tokens, (TokenSeq{3, 4}));
  EXPECT_DOUBLE_EQ(h.score, -2.1 / 243.0);
  // Equal totals: the longer hypothesis has the higher score for alpha > 0.
  EXPECT_GT(length_normalized(-2.0, 3, 5.0), length_normalized(-2.0, 2, 5.0));
  EXPECT_DOUBLE_EQ(length_normalized(-2.0, 2, 5.0), -2.0 / 32.0);
}

TEST(BeamSearch, FallsBackToBestLiveHypothesis) {
  TableModel m;
  m.table[{}] = {-1e9, -1e9, -1e9, -0.1, -2.0};
  m.table[{3}] = {-1e9, -1e9, -1e9, -0.1, -2.0};
  m.table[{4}] = {-1e9, -1e9, -1e9, -0.1, -2.0};
  DecodeConfig c = table_config(2, 0.0);
  c.max_len = 2;
  m.table[{3, 3}] = {-1e9, -1e9, -1e9, -0.1, -2.0};
  const Hypothesis h = beam_search_hypothesis(m, c);
  EXPECT_FALSE(h.finished);
  EXPECT_EQ(h.tokens, (TokenSeq{3, 3}));
}

// Wider beams never end on a lower-ranked result, checked on random models.
TEST(BeamSearch, WiderBeamNeverWorseOnRandomModels) {
  Rng rng(123);
  std::size_t violations = 0, cases = 0, single_pass_violations = 0;
  for (int trial = 0; trial < 100; ++trial) {
    ModelConfig cfg = small_config(7, 4);
    cfg.init_scale = 1.0;
    const ModelParams p = init_model(cfg, 1000 + trial);
    const TokenSeq src = testing::random_tokens(rng, 1 + rng.below(5), 7);
    const ModelScorer scorer(p, src);
    for (double alpha : {0.0, 1.0}) {
      Hypothesis prev, prev_pass;
      for (std::size_t w = 1; w <= 6; ++w) {
        DecodeConfig c;
        c.beam_width = w;
        c.length_penalty = alpha;
        c.max_len = 6;
        const Hypothesis h = beam_search_hypothesis(scorer, c);
        const Hypothesis single = beam_pass(scorer, c);
        ++cases;
        if (w > 1 && ranks_above(prev, h)) ++violations;
        if (w > 1 && ranks_above(prev_pass, single)) ++single_pass_violations;
        prev = h;
        prev_pass = single;
      }
    }
  }
  EXPECT_EQ(violations, 0u) << "out of " << cases;
  // A single standard pass is not monotone in width on these models.
  EXPECT_GT(single_pass_violations, 0u);
}

TEST(Checkpoint, RoundTripWithAndWithoutOptimizer) {
  ModelParams p = init_model(small_config(), 6);
  OptimState o = init_optim(p);
  train_step(p, o, tiny_batch(), ObjectiveSpec{}, 1e-2);
  std::stringstream with, without;
  write_checkpoint(with, p, &o);
  write_checkpoint(without, p);
  const Checkpoint a = read_checkpoint(with);
  ASSERT_TRUE(a.optim.has_value());
  EXPECT_EQ(a.params, p);
  EXPECT_EQ(*a.optim, o);
  const Checkpoint b = read_checkpoint(without);
  EXPECT_EQ(b.params, p);
  EXPECT_FALSE(b.optim.has_value());

  std::string bytes = with.str();
  EXPECT_EQ(bytes.substr(0, 7), "DNGCKPT");
  std::stringstream truncated(bytes.substr(0, bytes.size() / 2));
  EXPECT_THROW(read_checkpoint(truncated), InvalidInput);
  bytes[0] = 'X';
  std::stringstream bad(bytes);
  EXPECT_THROW(read_checkpoint(bad), InvalidInput);
}

TEST(EvaluateLoss, MeansMatchPerExampleComposite) {
  const ModelParams p = init_model(small_config(), 6);
  const data::Corpus c = data::gen_copy_task(10, 4, 5, 3);
  ObjectiveSpec spec;
  spec.matches_orders = {2};
  const EvalLoss e = evaluate_loss(p, c, spec);
  double total = 0.0, ce = 0.0;
  std::size_t tokens = 0;
  for (const auto& ex : c.examples) {
    const LogitMatrix l = forward_teacher_forced(p, ex.source, ex.target);
    total += composite(l, ex.target, spec).value;
    ce += cross_entropy(l, ex.target).value;
    tokens += ex.target.size();
  }
  EXPECT_NEAR(e.total, total / 5, 1e-12);
  EXPECT_NEAR(e.ce_per_token, ce / static_cast<double>(tokens), 1e-12);
  EXPECT_NEAR(e.terms[0].value + e.terms[1].value, e.total, 1e-12);
}

}  // namespace
}  // namespace dng::model
