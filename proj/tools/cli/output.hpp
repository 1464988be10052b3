#pragma once

#include <filesystem>
#include <string>

namespace dng::cli {

// Refuses an existing target, writes `<path>.partial`, then renames it into
// place. Nothing is left behind on failure.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

// Output directory built under `<dir>.partial` and renamed into place by
// commit(). The final directory must not exist beforehand; an uncommitted
// staging directory is removed on destruction.
class OutputDir {
 public:
  explicit OutputDir(std::filesystem::path final_dir);
  ~OutputDir();
  OutputDir(const OutputDir&) = delete;
  OutputDir& operator=(const OutputDir&) = delete;

  std::filesystem::path file(const std::string& name) const { return staging_ / name; }
  void write(const std::string& name, const std::string& content) const;
  void commit();

 private:
  std::filesystem::path final_;
  std::filesystem::path staging_;
  bool committed_ = false;
};

}  // namespace dng::cli
