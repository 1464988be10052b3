#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"

#include "dng/data/corpus.hpp"
#include "dng/model/config.hpp"
#include "dng/model/optim.hpp"
#include "dng/objectives/loss.hpp"

namespace dng::cli {

struct TaskConfig {
  std::string name = "salient";  // salient | copy | reverse
  std::size_t vocab_size = 50;
  std::size_t source_len = 20;   // salient only
  std::size_t n_salient = 3;     // salient only
  std::size_t length = 5;        // copy / reverse only
};

struct DataConfig {
  std::size_t count = 1000;
  std::uint64_t seed = 0;
};

struct OptimizerConfig {
  double lr = 3e-3;
  std::size_t warmup_steps = 100;
  double weight_decay = 0.01;
  std::optional<std::size_t> steps;
  std::optional<std::size_t> epochs;
  std::size_t batch_size = 16;
  std::uint64_t shuffle_seed = 0;
};

struct BenchConfig {
  std::size_t examples = 256;
  std::size_t steps = 20;
  std::size_t repetitions = 5;
  std::size_t batch_size = 16;
  std::uint64_t seed = 0;
};

struct RunConfig {
  TaskConfig task;
  DataConfig data;
  std::filesystem::path train_corpus;
  std::filesystem::path eval_corpus;
  model::ModelConfig model;  // vocab_size 0 means "take it from the corpus"
  std::uint64_t model_seed = 0;
  ObjectiveSpec objectives;
  OptimizerConfig optimizer;
  std::size_t eval_every = 50;
  model::DecodeConfig decode;
  std::size_t samples = 3;
  BenchConfig bench;
};

// Parses and validates a run configuration. Unknown keys and wrong types are
// rejected with the offending path; relative corpus paths resolve against
// `base_dir`.
RunConfig parse_run_config(const nlohmann::json& j, const std::filesystem::path& base_dir);
RunConfig load_run_config(const std::filesystem::path& path);

nlohmann::json to_json(const RunConfig& c);

data::Corpus generate_corpus(const TaskConfig& task, const DataConfig& data);

// "ce", "rewards-2", "matches-1", "pp-2", "bon-3".
Objective parse_objective(const std::string& name);

}  // namespace dng::cli
