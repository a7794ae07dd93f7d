#pragma once

#include <stdexcept>
#include <string>

namespace berezin {

// Every failure carries a stable machine-readable code; the CLI prints
// "CODE: message" on a single line and exits nonzero.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& message) : Error("E_DIM", message) {}
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& message) : Error("E_DOMAIN", message) {}
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : Error("E_PARSE", message + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& message) : Error("E_CONFIG", message) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& message) : Error("E_IO", message) {}
};

class CrossCheckError : public Error {
 public:
  explicit CrossCheckError(const std::string& message) : Error("E_CROSSCHECK", message) {}
};

}  // namespace berezin
