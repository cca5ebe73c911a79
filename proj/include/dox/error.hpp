#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dox {

// Error classes map one-to-one onto CLI exit codes (see cli.hpp).

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IngestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SchemaError : public std::runtime_error {
 public:
  SchemaError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  // 1-based line number of the offending record, 0 if not line-oriented.
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class BackendError : public std::runtime_error {
 public:
  BackendError(const std::string& what, std::vector<std::string> failed_batch = {})
      : std::runtime_error(what), failed_batch_(std::move(failed_batch)) {}

  // Texts of the request that could not be served.
  const std::vector<std::string>& failed_batch() const { return failed_batch_; }

 private:
  std::vector<std::string> failed_batch_;
};

class SizeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dox
