#include "output.hpp"

#include <fstream>

#include "dng/core/error.hpp"

namespace dng::cli {

namespace fs = std::filesystem;

namespace {

fs::path partial_path(const fs::path& p) {
  fs::path q = p;
  q += ".partial";
  return q;
}

void refuse_existing(const fs::path& p) {
  if (fs::exists(p)) throw InvalidInput("refusing to overwrite existing " + p.string());
  if (fs::exists(partial_path(p))) {
    throw InvalidInput("stale " + partial_path(p).string() + " exists; remove it first");
  }
}

void write_plain(const fs::path& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InvalidInput("cannot open " + path.string() + " for writing");
  os << content;
  os.close();
  if (!os) throw InvalidInput("write failed: " + path.string());
}

}  // namespace

void write_file_atomic(const fs::path& path, const std::string& content) {
  refuse_existing(path);
  const fs::path tmp = partial_path(path);
  try {
    write_plain(tmp, content);
    fs::rename(tmp, path);
  } catch (...) {
    std::error_code ec;
    fs::remove(tmp, ec);
    throw;
  }
}

OutputDir::OutputDir(fs::path final_dir) : final_(std::move(final_dir)), staging_(partial_path(final_)) {
  if (final_.empty()) throw InvalidInput("output directory not given");
  refuse_existing(final_);
  if (final_.has_parent_path() && !fs::exists(final_.parent_path())) {
    throw InvalidInput("parent directory of " + final_.string() + " does not exist");
  }
  fs::create_directory(staging_);
}

OutputDir::~OutputDir() {
  if (!committed_) {
    std::error_code ec;
    fs::remove_all(staging_, ec);
  }
}

void OutputDir::write(const std::string& name, const std::string& content) const {
  write_plain(file(name), content);
}

void OutputDir::commit() {
  fs::rename(staging_, final_);
  committed_ = true;
}

}  // namespace dng::cli
