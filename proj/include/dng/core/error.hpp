#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dng {

// Raised for malformed arguments: shape mismatches, out-of-range ids,
// infeasible configurations.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A gradient probe sits too close to an argmax tie to be meaningful.
class ProbeRejected : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class TrainingDiverged : public std::runtime_error {
 public:
  TrainingDiverged(std::size_t step, const std::string& what)
      : std::runtime_error("step " + std::to_string(step) + ": " + what),
        step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

}  // namespace dng
