#pragma once

#include <stdexcept>
#include <string>

namespace shamfinder {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Malformed `.hex` input; carries the 1-based line number when known.
class FontError : public Error {
public:
  FontError(const std::string& what, std::size_t line = 0)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

class TableError : public Error {
public:
  using Error::Error;
};

class DbFormatError : public Error {
public:
  using Error::Error;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

}  // namespace shamfinder
