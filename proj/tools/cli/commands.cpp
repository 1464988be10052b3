#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "dng/dng.hpp"
#include "dng/oracle/suite.hpp"
#include "output.hpp"
#include "run_config.hpp"

namespace dng::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class CheckFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

TokenSeq strip_eos(const TokenSeq& s) {
  if (!s.empty() && s.back() == kEos) return {s.begin(), s.end() - 1};
  return s;
}

json rouge_json(const RougeScore& s) {
  return {{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}};
}

json corpus_rouge_json(const CorpusReport& r) {
  return {{"rouge-1", rouge_json(r.mean_by_order.at(1))},
          {"rouge-2", rouge_json(r.mean_by_order.at(2))},
          {"rouge-l", rouge_json(r.mean_l)}};
}

std::string term_name(const Objective& o) { return objective_name(o); }

std::vector<TokenSeq> decode_corpus(const model::ModelParams& params, const data::Corpus& corpus,
                                    const model::DecodeConfig& decode) {
  std::vector<TokenSeq> out;
  out.reserve(corpus.size());
  for (const data::Example& ex : corpus.examples) out.push_back(model::decode(params, ex.source, decode));
  return out;
}

CorpusReport score(const std::vector<TokenSeq>& candidates, const std::vector<TokenSeq>& refs) {
  std::vector<CandidateRef> pairs;
  for (std::size_t i = 0; i < candidates.size(); ++i) pairs.push_back({candidates[i], refs[i]});
  return corpus_eval(pairs, {1, 2});
}

std::vector<TokenSeq> references(const data::Corpus& corpus) {
  std::vector<TokenSeq> refs;
  for (const data::Example& ex : corpus.examples) refs.push_back(strip_eos(ex.target));
  return refs;
}

// ------------------------------------------------------------------ gen-data

struct GenDataArgs {
  std::string config, out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> count, vocab, source_len, salient, length;
  std::optional<std::string> task;
};

int cmd_gen_data(const GenDataArgs& a, std::ostream& out) {
  RunConfig cfg = a.config.empty() ? RunConfig{} : load_run_config(a.config);
  if (a.task) cfg.task.name = *a.task;
  if (a.vocab) cfg.task.vocab_size = *a.vocab;
  if (a.source_len) cfg.task.source_len = *a.source_len;
  if (a.salient) cfg.task.n_salient = *a.salient;
  if (a.length) cfg.task.length = *a.length;
  if (a.count) cfg.data.count = *a.count;
  if (a.seed) cfg.data.seed = *a.seed;
  const data::Corpus corpus = generate_corpus(cfg.task, cfg.data);
  std::ostringstream text;
  data::write_corpus(text, corpus);
  write_file_atomic(a.out, text.str());
  out << "wrote " << corpus.size() << " examples (" << cfg.task.name << ", seed " << cfg.data.seed
      << ") to " << a.out << "\n";
  return kExitOk;
}

// ------------------------------------------------------------------ train

struct TrainArgs {
  std::string config, out, train, eval;
  std::optional<std::uint64_t> seed;
};

std::size_t resolve_steps(const OptimizerConfig& o, std::size_t corpus_size) {
  if (o.steps) return *o.steps;
  const std::size_t per_epoch = (corpus_size + o.batch_size - 1) / o.batch_size;
  if (o.epochs) return *o.epochs * per_epoch;
  return 1000;
}

model::ModelConfig resolve_model(const RunConfig& cfg, const data::Corpus& train,
                                 const data::Corpus& eval) {
  if (train.info.vocab_size != eval.info.vocab_size) {
    throw InvalidInput("train and eval corpora disagree on vocabulary size");
  }
  model::ModelConfig m = cfg.model;
  if (m.vocab_size == 0) m.vocab_size = train.info.vocab_size;
  if (m.vocab_size != train.info.vocab_size) {
    throw InvalidInput("model.vocab_size " + std::to_string(m.vocab_size) + " != corpus vocabulary " +
                       std::to_string(train.info.vocab_size));
  }
  m.validate();
  for (const data::Corpus* c : {&train, &eval}) {
    for (const data::Example& ex : c->examples) {
      if (ex.source.empty() || ex.source.size() > m.max_source_len ||
          ex.target.size() > m.max_target_len) {
        throw InvalidInput("corpus example exceeds model.max_source_len / max_target_len");
      }
    }
  }
  return m;
}

int cmd_train(const TrainArgs& a, std::ostream& out) {
  RunConfig cfg = load_run_config(a.config);
  if (!a.train.empty()) cfg.train_corpus = a.train;
  if (!a.eval.empty()) cfg.eval_corpus = a.eval;
  if (a.seed) {
    cfg.model_seed = *a.seed;
    cfg.optimizer.shuffle_seed = *a.seed;
  }
  if (cfg.train_corpus.empty() || cfg.eval_corpus.empty()) {
    throw InvalidInput("train needs corpora.train and corpora.eval");
  }
  const data::Corpus train_set = data::read_corpus(cfg.train_corpus);
  const data::Corpus eval_set = data::read_corpus(cfg.eval_corpus);
  cfg.model = resolve_model(cfg, train_set, eval_set);

  model::TrainerConfig tc;
  tc.steps = resolve_steps(cfg.optimizer, train_set.size());
  tc.batch_size = cfg.optimizer.batch_size;
  tc.lr = cfg.optimizer.lr;
  tc.warmup_steps = cfg.optimizer.warmup_steps;
  tc.adam.weight_decay = cfg.optimizer.weight_decay;
  tc.eval_every = cfg.eval_every;
  tc.shuffle_seed = cfg.optimizer.shuffle_seed;
  tc.validate();

  OutputDir dir(a.out);
  const std::vector<Objective> terms = cfg.objectives.terms();
  std::ostringstream curve_csv;
  curve_csv << "step,total";
  for (const Objective& o : terms) curve_csv << "," << term_name(o);
  curve_csv << "\n";
  json curve = json::array();

  const auto start = std::chrono::steady_clock::now();
  model::TrainResult result = model::train(
      model::init_model(cfg.model, cfg.model_seed), train_set, eval_set, cfg.objectives, tc,
      [&](const model::CurvePoint& p) {
        curve_csv << p.step << "," << fmt(p.eval.total);
        json term_values = json::object();
        for (const TermValue& t : p.eval.terms) {
          curve_csv << "," << fmt(t.value);
          term_values[term_name(t.objective)] = t.value;
        }
        curve_csv << "\n";
        curve.push_back({{"step", p.step},
                         {"train_loss", p.train_loss},
                         {"eval_total", p.eval.total},
                         {"eval_terms", term_values},
                         {"eval_ce_per_token", p.eval.ce_per_token}});
        out << "step " << p.step << "  train " << fmt(p.train_loss) << "  eval " << fmt(p.eval.total)
            << "  ce/token " << fmt(p.eval.ce_per_token) << "\n";
      });
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

  model::write_checkpoint(dir.file("checkpoint.bin"), result.best, &result.best_optim);
  const std::vector<TokenSeq> decoded = decode_corpus(result.best, eval_set, cfg.decode);
  const CorpusReport rouge = score(decoded, references(eval_set));
  json samples = json::array();
  for (std::size_t i = 0; i < std::min(cfg.samples, eval_set.size()); ++i) {
    samples.push_back({{"source", eval_set.examples[i].source},
                       {"reference", references(eval_set)[i]},
                       {"candidate", decoded[i]}});
  }
  json term_names = json::array();
  for (const Objective& o : terms) term_names.push_back(term_name(o));
  const json report = {
      {"config", to_json(cfg)},
      {"objectives", term_names},
      {"steps", tc.steps},
      {"curve", curve},
      {"best_step", result.best_step},
      {"best_eval_loss", result.best_eval},
      {"rouge", corpus_rouge_json(rouge)},
      {"samples", samples},
      {"wall_time_sec", elapsed.count()},
      {"examples_per_sec",
       static_cast<double>(tc.steps * tc.batch_size) / std::max(elapsed.count(), 1e-9)}};
  dir.write("report.json", report.dump(2) + "\n");
  dir.write("loss_curve.csv", curve_csv.str());
  dir.commit();
  out << "best step " << result.best_step << " (eval loss " << fmt(result.best_eval) << "), R-1 F1 "
      << fmt(rouge.mean_by_order.at(1).f1) << "; outputs in " << a.out << "\n";
  return kExitOk;
}

// ------------------------------------------------------------------ eval

struct EvalArgs {
  std::string checkpoint, corpus, candidates, config, out, preset;
  std::optional<std::size_t> beam_width, min_len, max_len;
  std::optional<double> length_penalty;
};

int cmd_eval(const EvalArgs& a, std::ostream& out) {
  if (a.checkpoint.empty() == a.candidates.empty()) {
    throw InvalidInput("eval needs exactly one of --checkpoint or --candidates");
  }
  model::DecodeConfig decode = a.config.empty() ? model::DecodeConfig{} : load_run_config(a.config).decode;
  if (a.preset == "long") decode = model::DecodeConfig::long_summary_preset();
  else if (a.preset == "short") decode = model::DecodeConfig::short_summary_preset();
  else if (!a.preset.empty()) throw InvalidInput("--preset must be long or short");
  if (a.beam_width) decode.beam_width = *a.beam_width;
  if (a.length_penalty) decode.length_penalty = *a.length_penalty;
  if (a.min_len) decode.min_len = *a.min_len;
  if (a.max_len) decode.max_len = *a.max_len;
  decode.validate();

  const data::Corpus corpus = data::read_corpus(a.corpus);
  if (corpus.size() == 0) throw InvalidInput("eval corpus is empty");
  std::vector<TokenSeq> candidates;
  if (!a.checkpoint.empty()) {
    const model::Checkpoint ck = model::read_checkpoint(a.checkpoint);
    if (ck.params.config.vocab_size != corpus.info.vocab_size) {
      throw InvalidInput("checkpoint vocabulary does not match the corpus");
    }
    candidates = decode_corpus(ck.params, corpus, decode);
  } else {
    const data::Corpus cands = data::read_corpus(a.candidates);
    if (cands.size() != corpus.size()) {
      throw InvalidInput("candidate file has " + std::to_string(cands.size()) + " records, corpus has " +
                         std::to_string(corpus.size()));
    }
    for (const data::Example& ex : cands.examples) candidates.push_back(strip_eos(ex.target));
  }
  const std::vector<TokenSeq> refs = references(corpus);
  const CorpusReport rouge = score(candidates, refs);

  OutputDir dir(a.out);
  std::ostringstream csv;
  csv << "example,r1_precision,r1_recall,r1_f1,r2_precision,r2_recall,r2_f1,rl_precision,rl_recall,rl_f1\n";
  auto row = [&](const std::string& label, const RougeScore& r1, const RougeScore& r2, const RougeScore& rl) {
    csv << label;
    for (const RougeScore* s : {&r1, &r2, &rl}) {
      csv << "," << fmt(s->precision) << "," << fmt(s->recall) << "," << fmt(s->f1);
    }
    csv << "\n";
  };
  json examples = json::array();
  for (std::size_t i = 0; i < rouge.count(); ++i) {
    const ExampleRouge& e = rouge.examples[i];
    row(std::to_string(i), e.by_order.at(1), e.by_order.at(2), e.l);
    examples.push_back({{"candidate", candidates[i]},
                        {"reference", refs[i]},
                        {"rouge-1", rouge_json(e.by_order.at(1))},
                        {"rouge-2", rouge_json(e.by_order.at(2))},
                        {"rouge-l", rouge_json(e.l)}});
  }
  row("mean", rouge.mean_by_order.at(1), rouge.mean_by_order.at(2), rouge.mean_l);
  const json report = {{"examples", rouge.count()},
                       {"decode",
                        {{"beam_width", decode.beam_width},
                         {"length_penalty", decode.length_penalty},
                         {"min_len", decode.min_len},
                         {"max_len", decode.max_len}}},
                       {"mean", corpus_rouge_json(rouge)},
                       {"per_example", examples}};
  dir.write("rouge.csv", csv.str());
  dir.write("rouge.json", report.dump(2) + "\n");

  data::Corpus decoded{corpus.info, {}};
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    TokenSeq t = candidates[i];
    t.push_back(kEos);
    decoded.examples.push_back({corpus.examples[i].source, std::move(t)});
  }
  std::ostringstream decoded_text;
  data::write_corpus(decoded_text, decoded);
  dir.write("candidates.jsonl", decoded_text.str());
  dir.commit();
  out << "R-1 F1 " << fmt(rouge.mean_by_order.at(1).f1) << "  R-2 F1 " << fmt(rouge.mean_by_order.at(2).f1)
      << "  R-L F1 " << fmt(rouge.mean_l.f1) << " over " << rouge.count() << " examples\n";
  return kExitOk;
}

// ------------------------------------------------------------------ gradcheck

struct GradArgs {
  GradSuiteOptions opt;
  std::vector<std::string> objectives;
  std::string out;
};

int cmd_gradcheck(GradArgs a, std::ostream& out) {
  if (!a.objectives.empty()) {
    a.opt.objectives.clear();
    for (const std::string& name : a.objectives) a.opt.objectives.push_back(parse_objective(name));
  }
  const GradSuiteReport r = run_grad_suite(a.opt);
  json families = json::array();
  char line[160];
  std::snprintf(line, sizeof line, "%-12s %7s %9s %14s  %s\n", "objective", "probes", "rejected",
                "max_rel_error", "status");
  out << line;
  for (const GradSuiteResult& res : r.results) {
    std::snprintf(line, sizeof line, "%-12s %7zu %9zu %14.3e  %s\n", objective_name(res.objective).c_str(),
                  res.probes, res.rejected, res.max_rel_error, res.passed ? "pass" : "FAIL");
    out << line;
    families.push_back({{"objective", objective_name(res.objective)},
                        {"probes", res.probes},
                        {"rejected", res.rejected},
                        {"max_rel_error", res.max_rel_error},
                        {"passed", res.passed}});
  }
  if (!a.out.empty()) {
    const json report = {{"h", a.opt.h},
                         {"tolerance", a.opt.tolerance},
                         {"margin_floor", a.opt.margin_floor},
                         {"seed", a.opt.seed},
                         {"results", families},
                         {"passed", r.passed}};
    write_file_atomic(a.out, report.dump(2) + "\n");
  }
  if (!r.passed) throw CheckFailed("gradient check failed (tolerance " + fmt(a.opt.tolerance) + ")");
  out << "all gradient checks passed\n";
  return kExitOk;
}

// ------------------------------------------------------------------ oracle-check

struct OracleArgs {
  oracle::SuiteOptions opt;
  std::string out;
};

int cmd_oracle_check(const OracleArgs& a, std::ostream& out) {
  const oracle::SuiteReport r = oracle::run_suite(a.opt);
  json results = json::array();
  char line[160];
  std::snprintf(line, sizeof line, "%-22s %10s %10s %14s\n", "check", "instances", "mismatches", "max_abs_diff");
  out << line;
  for (const oracle::SuiteResult& res : r.results) {
    std::snprintf(line, sizeof line, "%-22s %10zu %10zu %14.3e\n", res.name.c_str(), res.instances,
                  res.mismatches, res.max_abs_diff);
    out << line;
    results.push_back({{"check", res.name},
                       {"instances", res.instances},
                       {"mismatches", res.mismatches},
                       {"max_abs_diff", res.max_abs_diff}});
  }
  if (!a.out.empty()) {
    const json report = {{"trials", a.opt.trials},
                         {"seed", a.opt.seed},
                         {"tolerance", a.opt.tolerance},
                         {"lcs_max_len", a.opt.lcs_max_len},
                         {"results", results},
                         {"passed", r.passed}};
    write_file_atomic(a.out, report.dump(2) + "\n");
  }
  if (!r.passed) throw CheckFailed("oracle mismatch beyond " + fmt(a.opt.tolerance));
  out << "all oracle checks passed\n";
  return kExitOk;
}

// ------------------------------------------------------------------ bench

struct BenchArgs {
  std::string config, out;
  std::optional<std::size_t> steps, repetitions, batch_size, examples;
};

int cmd_bench(const BenchArgs& a, std::ostream& out) {
  RunConfig cfg = a.config.empty() ? RunConfig{} : load_run_config(a.config);
  if (a.steps) cfg.bench.steps = *a.steps;
  if (a.repetitions) cfg.bench.repetitions = *a.repetitions;
  if (a.batch_size) cfg.bench.batch_size = *a.batch_size;
  if (a.examples) cfg.bench.examples = *a.examples;
  if (fs::exists(a.out)) throw InvalidInput("refusing to overwrite existing " + a.out);

  const data::Corpus corpus = generate_corpus(cfg.task, {cfg.bench.examples, cfg.bench.seed});
  model::ModelConfig mc = resolve_model(cfg, corpus, corpus);
  const model::ModelParams init = model::init_model(mc, cfg.model_seed);
  const model::BenchOptions bo{cfg.bench.batch_size, cfg.bench.steps, cfg.bench.repetitions, cfg.optimizer.lr};
  const std::vector<model::BenchRow> rows = model::run_bench(init, corpus, model::default_bench_sweep(), bo);

  std::ostringstream csv;
  csv << "objectives,docs_per_sec,relative_to_ce\n";
  char line[160];
  for (const model::BenchRow& r : rows) {
    csv << "\"" << r.label << "\"," << fmt(r.docs_per_sec) << "," << fmt(r.relative) << "\n";
    std::snprintf(line, sizeof line, "%-24s %10.1f docs/s  (x%.2f)\n", r.label.c_str(), r.docs_per_sec,
                  r.relative);
    out << line;
  }
  write_file_atomic(a.out, csv.str());
  return kExitOk;
}

// ------------------------------------------------------------------ dispatch

std::string objectives_help() {
  std::string s;
  for (const Objective& o : verification_objectives()) s += (s.empty() ? "" : ",") + objective_name(o);
  return s;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Differentiable n-gram objectives: data, training, evaluation and checks", "dng"};
  app.require_subcommand(1);

  GenDataArgs gen;
  CLI::App* gen_cmd = app.add_subcommand("gen-data", "Generate a synthetic corpus file");
  gen_cmd->add_option("--config", gen.config, "Run config (JSON); its task and data sections are used")
      ->check(CLI::ExistingFile);
  gen_cmd->add_option("--out", gen.out, "Corpus file to create (must not exist)")->required();
  gen_cmd->add_option("--task", gen.task, "salient | copy | reverse");
  gen_cmd->add_option("--vocab", gen.vocab, "Vocabulary size including PAD/BOS/EOS");
  gen_cmd->add_option("--source-len", gen.source_len, "Source length (salient)");
  gen_cmd->add_option("--salient", gen.salient, "Salient tokens per source (salient)");
  gen_cmd->add_option("--length", gen.length, "Sequence length (copy / reverse)");
  gen_cmd->add_option("--count", gen.count, "Number of examples");
  gen_cmd->add_option("--seed", gen.seed, "Generation seed");

  TrainArgs train;
  CLI::App* train_cmd = app.add_subcommand("train", "Train a model and write checkpoint, report and curve");
  train_cmd->add_option("--config", train.config, "Run config (JSON)")->required()->check(CLI::ExistingFile);
  train_cmd->add_option("--out", train.out, "Run directory to create (must not exist)")->required();
  train_cmd->add_option("--seed", train.seed, "Overrides model.seed and optimizer.shuffle_seed");
  train_cmd->add_option("--train", train.train, "Overrides corpora.train")->check(CLI::ExistingFile);
  train_cmd->add_option("--eval", train.eval, "Overrides corpora.eval")->check(CLI::ExistingFile);

  EvalArgs ev;
  CLI::App* eval_cmd = app.add_subcommand("eval", "Decode a corpus and report ROUGE-1/2/L");
  eval_cmd->add_option("--corpus", ev.corpus, "Reference corpus")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--checkpoint", ev.checkpoint, "Model checkpoint to decode with")
      ->check(CLI::ExistingFile);
  eval_cmd->add_option("--candidates", ev.candidates, "Corpus file whose targets are the candidates")
      ->check(CLI::ExistingFile);
  eval_cmd->add_option("--config", ev.config, "Run config whose decode section is used")
      ->check(CLI::ExistingFile);
  eval_cmd->add_option("--out", ev.out, "Output directory to create (must not exist)")->required();
  eval_cmd->add_option("--preset", ev.preset, "Decoding preset: long (beam 4, alpha 2) | short (beam 6, alpha 1)");
  eval_cmd->add_option("--beam-width", ev.beam_width);
  eval_cmd->add_option("--length-penalty", ev.length_penalty);
  eval_cmd->add_option("--min-len", ev.min_len);
  eval_cmd->add_option("--max-len", ev.max_len);

  GradArgs grad;
  CLI::App* grad_cmd = app.add_subcommand("gradcheck", "Analytic vs central-difference gradients");
  grad_cmd->set_help_flag("--help", "Print this help message and exit");
  grad_cmd->add_option("--trials", grad.opt.probes, "Probes per objective")->capture_default_str();
  grad_cmd->add_option("--tolerance", grad.opt.tolerance, "Max relative error")->capture_default_str();
  grad_cmd->add_option("--h", grad.opt.h, "Finite-difference step")->capture_default_str();
  grad_cmd->add_option("--seed", grad.opt.seed)->capture_default_str();
  grad_cmd->add_option("--objectives", grad.objectives, "Subset of " + objectives_help())->delimiter(',');
  grad_cmd->add_flag("--corrupt-gradient", grad.opt.corrupt_gradient, "Test hook: perturb the analytic gradient");
  grad_cmd->add_option("--out", grad.out, "JSON report file to create");

  OracleArgs orc;
  CLI::App* oracle_cmd = app.add_subcommand("oracle-check", "Optimized code vs brute-force oracles");
  oracle_cmd->add_option("--trials", orc.opt.trials, "Random instances per check")->capture_default_str();
  oracle_cmd->add_option("--seed", orc.opt.seed)->capture_default_str();
  oracle_cmd->add_option("--lcs-max-len", orc.opt.lcs_max_len, "Exhaustive LCS sweep length bound")
      ->capture_default_str();
  oracle_cmd->add_flag("--inject-mismatch", orc.opt.inject_mismatch, "Test hook: perturb one optimized value");
  oracle_cmd->add_option("--out", orc.out, "JSON report file to create");

  BenchArgs bench;
  CLI::App* bench_cmd = app.add_subcommand("bench", "Training throughput per objective set");
  bench_cmd->add_option("--config", bench.config, "Run config (task, model and bench sections)")
      ->check(CLI::ExistingFile);
  bench_cmd->add_option("--out", bench.out, "CSV file to create")->required();
  bench_cmd->add_option("--steps", bench.steps, "Train steps per timed repetition");
  bench_cmd->add_option("--repetitions", bench.repetitions, "Repetitions (median is reported)");
  bench_cmd->add_option("--batch-size", bench.batch_size);
  bench_cmd->add_option("--examples", bench.examples, "Synthetic corpus size");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*gen_cmd) return cmd_gen_data(gen, out);
    if (*train_cmd) return cmd_train(train, out);
    if (*eval_cmd) return cmd_eval(ev, out);
    if (*grad_cmd) return cmd_gradcheck(grad, out);
    if (*oracle_cmd) return cmd_oracle_check(orc, out);
    if (*bench_cmd) return cmd_bench(bench, out);
  } catch (const TrainingDiverged& e) {
    err << "error: training diverged at " << e.what() << "\n";
    return kExitDiverged;
  } catch (const CheckFailed& e) {
    err << "check failed: " << e.what() << "\n";
    return kExitCheckFailed;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitValidation;
}

}  // namespace dng::cli
