#pragma once

#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "dng/core/error.hpp"
#include "dng/data/corpus.hpp"
#include "json.hpp"

// Corpus file format (UTF-8, one JSON object per line, compact, keys sorted):
//
//   {"format":"dng-corpus","params":{...},"seed":S,"task":"copy","version":1,"vocab_size":D}
//   {"source":[5,9,4],"target":[5,9,4,2]}
//   ...
//
// The first line is the header echoing the generation config; each following
// line is one example. An empty file is a valid empty corpus.

namespace dng::data {

inline constexpr const char* kCorpusFormat = "dng-corpus";
inline constexpr int kCorpusVersion = 1;

namespace detail {

inline nlohmann::json header_json(const CorpusInfo& info) {
  nlohmann::json params = nlohmann::json::object();
  for (const auto& [k, v] : info.params) params[k] = v;
  return {{"format", kCorpusFormat}, {"version", kCorpusVersion}, {"task", info.task},
          {"vocab_size", info.vocab_size}, {"seed", info.seed},  {"params", params}};
}

inline TokenSeq parse_tokens(const nlohmann::json& j, const char* field, std::size_t line,
                             std::size_t vocab) {
  auto it = j.find(field);
  if (it == j.end() || !it->is_array()) {
    throw ParseError(line, std::string("missing array field \"") + field + "\"");
  }
  TokenSeq out;
  out.reserve(it->size());
  for (const auto& v : *it) {
    if (!v.is_number_unsigned()) {
      throw ParseError(line, std::string("non-integer token in \"") + field + "\"");
    }
    const auto tok = v.get<std::uint64_t>();
    if (vocab > 0 && tok >= vocab) {
      throw InvalidInput("line " + std::to_string(line) + ": token " + std::to_string(tok) +
                         " >= vocabulary size " + std::to_string(vocab));
    }
    out.push_back(static_cast<TokenId>(tok));
  }
  return out;
}

}  // namespace detail

inline void write_corpus(std::ostream& os, const Corpus& corpus) {
  os << detail::header_json(corpus.info).dump() << '\n';
  for (const Example& ex : corpus.examples) {
    nlohmann::json j = {{"source", ex.source}, {"target", ex.target}};
    os << j.dump() << '\n';
  }
}

inline Corpus read_corpus(std::istream& is) {
  Corpus corpus;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(is, line)) {
    ++line_no;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(line_no, std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError(line_no, "expected a JSON object");

    if (!have_header) {
      if (j.value("format", std::string{}) != kCorpusFormat) {
        throw ParseError(line_no, "missing corpus header");
      }
      if (j.value("version", 0) != kCorpusVersion) throw ParseError(line_no, "unsupported version");
      try {
        corpus.info.task = j.at("task").get<std::string>();
        corpus.info.vocab_size = j.at("vocab_size").get<std::size_t>();
        corpus.info.seed = j.at("seed").get<std::uint64_t>();
        for (const auto& [k, v] : j.at("params").items()) {
          corpus.info.params[k] = v.get<std::uint64_t>();
        }
      } catch (const nlohmann::json::exception& e) {
        throw ParseError(line_no, std::string("bad header: ") + e.what());
      }
      have_header = true;
      continue;
    }
    if (j.size() != 2) throw ParseError(line_no, "expected exactly \"source\" and \"target\"");
    Example ex;
    ex.source = detail::parse_tokens(j, "source", line_no, corpus.info.vocab_size);
    ex.target = detail::parse_tokens(j, "target", line_no, corpus.info.vocab_size);
    corpus.examples.push_back(std::move(ex));
  }
  return corpus;
}

inline void write_corpus(const std::filesystem::path& path, const Corpus& corpus) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InvalidInput("cannot open " + path.string() + " for writing");
  write_corpus(os, corpus);
  if (!os) throw InvalidInput("write failed: " + path.string());
}

inline Corpus read_corpus(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw InvalidInput("cannot open " + path.string());
  return read_corpus(is);
}

}  // namespace dng::data
