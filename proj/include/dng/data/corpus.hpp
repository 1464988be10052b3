#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dng/ngram.hpp"

namespace dng::data {

struct Example {
  TokenSeq source;
  TokenSeq target;

  bool operator==(const Example&) const = default;
};

// Generation config echo carried in the corpus file header.
struct CorpusInfo {
  std::string task;
  std::size_t vocab_size = 0;
  std::uint64_t seed = 0;
  std::map<std::string, std::uint64_t> params;

  bool operator==(const CorpusInfo&) const = default;
};

struct Corpus {
  CorpusInfo info;
  std::vector<Example> examples;

  std::size_t size() const noexcept { return examples.size(); }
  bool operator==(const Corpus&) const = default;
};

}  // namespace dng::data
