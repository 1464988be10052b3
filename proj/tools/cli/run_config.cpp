#include "run_config.hpp"

#include <fstream>
#include <initializer_list>
#include <set>

#include "dng/core/error.hpp"
#include "dng/data/generate.hpp"

namespace dng::cli {

using nlohmann::json;

namespace {

static_assert(std::is_same_v<std::uint64_t, std::size_t>, "seeds are read as size_t");

// Typed accessors over one JSON object that reject unknown keys.
class Section {
 public:
  Section(const json& j, std::string path, std::initializer_list<const char*> allowed)
      : j_(j), path_(std::move(path)) {
    if (!j.is_object()) fail(path_.empty() ? "config" : path_, "expected an object");
    const std::set<std::string> keys(allowed.begin(), allowed.end());
    for (const auto& [k, v] : j.items()) {
      if (!keys.contains(k)) fail(where(k), "unknown key");
    }
  }

  bool has(const char* key) const { return j_.contains(key); }

  const json* child(const char* key) const { return has(key) ? &j_.at(key) : nullptr; }

  std::string where(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  void get(const char* key, std::size_t& out) const {
    if (!has(key)) return;
    const json& v = j_.at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
      fail(where(key), "expected a non-negative integer");
    }
    out = v.get<std::size_t>();
  }

  void get(const char* key, double& out) const {
    if (!has(key)) return;
    const json& v = j_.at(key);
    if (!v.is_number()) fail(where(key), "expected a number");
    out = v.get<double>();
  }

  void get(const char* key, bool& out) const {
    if (!has(key)) return;
    const json& v = j_.at(key);
    if (!v.is_boolean()) fail(where(key), "expected true or false");
    out = v.get<bool>();
  }

  void get(const char* key, std::string& out) const {
    if (!has(key)) return;
    const json& v = j_.at(key);
    if (!v.is_string()) fail(where(key), "expected a string");
    out = v.get<std::string>();
  }

  void get(const char* key, std::optional<std::size_t>& out) const {
    if (!has(key)) return;
    std::size_t v = 0;
    get(key, v);
    out = v;
  }

  void get(const char* key, std::set<std::size_t>& out) const {
    if (!has(key)) return;
    const json& v = j_.at(key);
    if (!v.is_array()) fail(where(key), "expected an array of orders");
    out.clear();
    for (const json& e : v) {
      if (!e.is_number_unsigned() && !(e.is_number_integer() && e.get<std::int64_t>() >= 0)) {
        fail(where(key), "orders must be non-negative integers");
      }
      out.insert(e.get<std::size_t>());
    }
  }

  [[noreturn]] static void fail(const std::string& where, const std::string& what) {
    throw InvalidInput("config " + where + ": " + what);
  }

 private:
  const json& j_;
  std::string path_;
};

}  // namespace

RunConfig parse_run_config(const json& j, const std::filesystem::path& base_dir) {
  RunConfig c;
  const Section root(j, "", {"task", "data", "corpora", "model", "objectives", "optimizer",
                             "eval_every", "decode", "report", "bench"});
  if (const json* t = root.child("task")) {
    const Section s(*t, "task", {"name", "vocab_size", "source_len", "n_salient", "length"});
    s.get("name", c.task.name);
    s.get("vocab_size", c.task.vocab_size);
    s.get("source_len", c.task.source_len);
    s.get("n_salient", c.task.n_salient);
    s.get("length", c.task.length);
    if (c.task.name != "salient" && c.task.name != "copy" && c.task.name != "reverse") {
      Section::fail("task.name", "expected salient, copy or reverse");
    }
  }
  if (const json* d = root.child("data")) {
    const Section s(*d, "data", {"count", "seed"});
    s.get("count", c.data.count);
    s.get("seed", c.data.seed);
  }
  if (const json* p = root.child("corpora")) {
    const Section s(*p, "corpora", {"train", "eval"});
    std::string train, eval;
    s.get("train", train);
    s.get("eval", eval);
    if (!train.empty()) c.train_corpus = base_dir / train;
    if (!eval.empty()) c.eval_corpus = base_dir / eval;
  }
  c.model.vocab_size = 0;
  if (const json* m = root.child("model")) {
    const Section s(*m, "model",
                    {"vocab_size", "embed_dim", "max_source_len", "max_target_len", "init_scale", "seed"});
    s.get("vocab_size", c.model.vocab_size);
    s.get("embed_dim", c.model.embed_dim);
    s.get("max_source_len", c.model.max_source_len);
    s.get("max_target_len", c.model.max_target_len);
    s.get("init_scale", c.model.init_scale);
    s.get("seed", c.model_seed);
  }
  if (const json* o = root.child("objectives")) {
    const Section s(*o, "objectives", {"ce", "rewards", "matches", "pp", "bon"});
    s.get("ce", c.objectives.use_ce);
    s.get("rewards", c.objectives.rewards_orders);
    s.get("matches", c.objectives.matches_orders);
    s.get("pp", c.objectives.pp_orders);
    s.get("bon", c.objectives.bon_orders);
  }
  c.objectives.validate();
  if (const json* o = root.child("optimizer")) {
    const Section s(*o, "optimizer", {"lr", "warmup_steps", "weight_decay", "steps", "epochs",
                                      "batch_size", "shuffle_seed"});
    s.get("lr", c.optimizer.lr);
    s.get("warmup_steps", c.optimizer.warmup_steps);
    s.get("weight_decay", c.optimizer.weight_decay);
    s.get("steps", c.optimizer.steps);
    s.get("epochs", c.optimizer.epochs);
    s.get("batch_size", c.optimizer.batch_size);
    s.get("shuffle_seed", c.optimizer.shuffle_seed);
    if (c.optimizer.steps && c.optimizer.epochs) {
      Section::fail("optimizer", "give either steps or epochs, not both");
    }
  }
  if (!(c.optimizer.lr >= 0.0)) Section::fail("optimizer.lr", "must be >= 0");
  if (!(c.optimizer.weight_decay >= 0.0)) Section::fail("optimizer.weight_decay", "must be >= 0");
  if (c.optimizer.batch_size == 0) Section::fail("optimizer.batch_size", "must be >= 1");
  root.get("eval_every", c.eval_every);
  if (c.eval_every == 0) Section::fail("eval_every", "must be >= 1");
  if (const json* d = root.child("decode")) {
    const Section s(*d, "decode", {"beam_width", "length_penalty", "min_len", "max_len", "preset"});
    std::string preset;
    s.get("preset", preset);
    if (preset == "long") c.decode = model::DecodeConfig::long_summary_preset();
    else if (preset == "short") c.decode = model::DecodeConfig::short_summary_preset();
    else if (!preset.empty()) Section::fail("decode.preset", "expected long or short");
    s.get("beam_width", c.decode.beam_width);
    s.get("length_penalty", c.decode.length_penalty);
    s.get("min_len", c.decode.min_len);
    s.get("max_len", c.decode.max_len);
  }
  c.decode.validate();
  if (const json* r = root.child("report")) {
    const Section s(*r, "report", {"samples"});
    s.get("samples", c.samples);
  }
  if (const json* b = root.child("bench")) {
    const Section s(*b, "bench", {"examples", "steps", "repetitions", "batch_size", "seed"});
    s.get("examples", c.bench.examples);
    s.get("steps", c.bench.steps);
    s.get("repetitions", c.bench.repetitions);
    s.get("batch_size", c.bench.batch_size);
    s.get("seed", c.bench.seed);
  }
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw InvalidInput("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(is);
  } catch (const json::parse_error& e) {
    throw InvalidInput("config " + path.string() + ": " + e.what());
  }
  return parse_run_config(j, path.parent_path());
}

namespace {

json orders(const std::set<std::size_t>& s) { return json(std::vector<std::size_t>(s.begin(), s.end())); }

}  // namespace

json to_json(const RunConfig& c) {
  json j;
  j["task"] = {{"name", c.task.name},           {"vocab_size", c.task.vocab_size},
               {"source_len", c.task.source_len}, {"n_salient", c.task.n_salient},
               {"length", c.task.length}};
  j["data"] = {{"count", c.data.count}, {"seed", c.data.seed}};
  j["corpora"] = {{"train", c.train_corpus.string()}, {"eval", c.eval_corpus.string()}};
  j["model"] = {{"vocab_size", c.model.vocab_size},
                {"embed_dim", c.model.embed_dim},
                {"max_source_len", c.model.max_source_len},
                {"max_target_len", c.model.max_target_len},
                {"init_scale", c.model.init_scale},
                {"seed", c.model_seed}};
  j["objectives"] = {{"ce", c.objectives.use_ce},
                     {"rewards", orders(c.objectives.rewards_orders)},
                     {"matches", orders(c.objectives.matches_orders)},
                     {"pp", orders(c.objectives.pp_orders)},
                     {"bon", orders(c.objectives.bon_orders)}};
  json opt = {{"lr", c.optimizer.lr},
              {"warmup_steps", c.optimizer.warmup_steps},
              {"weight_decay", c.optimizer.weight_decay},
              {"batch_size", c.optimizer.batch_size},
              {"shuffle_seed", c.optimizer.shuffle_seed}};
  if (c.optimizer.steps) opt["steps"] = *c.optimizer.steps;
  if (c.optimizer.epochs) opt["epochs"] = *c.optimizer.epochs;
  j["optimizer"] = opt;
  j["eval_every"] = c.eval_every;
  j["decode"] = {{"beam_width", c.decode.beam_width},
                 {"length_penalty", c.decode.length_penalty},
                 {"min_len", c.decode.min_len},
                 {"max_len", c.decode.max_len}};
  j["report"] = {{"samples", c.samples}};
  j["bench"] = {{"examples", c.bench.examples},
                {"steps", c.bench.steps},
                {"repetitions", c.bench.repetitions},
                {"batch_size", c.bench.batch_size},
                {"seed", c.bench.seed}};
  return j;
}

data::Corpus generate_corpus(const TaskConfig& task, const DataConfig& data) {
  if (task.name == "salient") {
    return data::gen_salient_task(task.vocab_size, task.source_len, task.n_salient, data.count,
                                  data.seed);
  }
  if (task.name == "copy") return data::gen_copy_task(task.vocab_size, task.length, data.count, data.seed);
  if (task.name == "reverse") {
    return data::gen_reverse_task(task.vocab_size, task.length, data.count, data.seed);
  }
  throw InvalidInput("unknown task " + task.name);
}

Objective parse_objective(const std::string& name) {
  if (name == "ce") return {Family::kCrossEntropy, 0};
  const auto dash = name.rfind('-');
  if (dash == std::string::npos) throw InvalidInput("unknown objective " + name);
  const std::string family = name.substr(0, dash), order = name.substr(dash + 1);
  std::size_t n = 0;
  try {
    std::size_t used = 0;
    n = std::stoul(order, &used);
    if (used != order.size()) throw std::invalid_argument(order);
  } catch (const std::exception&) {
    throw InvalidInput("bad objective order in " + name);
  }
  Objective o{Family::kCrossEntropy, n};
  if (family == "rewards") o.family = Family::kRewards;
  else if (family == "matches") o.family = Family::kMatches;
  else if (family == "pp") o.family = Family::kProbCount;
  else if (family == "bon") o.family = Family::kBagOfNgrams;
  else throw InvalidInput("unknown objective " + name);
  if (n < 1 || (o.family == Family::kRewards && n < 2)) throw InvalidInput("bad objective order in " + name);
  return o;
}

}  // namespace dng::cli
