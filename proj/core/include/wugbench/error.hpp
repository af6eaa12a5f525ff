#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace wugbench {

enum class ErrorKind {
  kParse,
  kValidation,
  kConfig,
  kShape,
  kEncoding,
  kLength,
  kContract,
  kDiverged,
  kIo,
};

std::string_view to_string(ErrorKind kind);

// Base of every exception thrown by the library. `kind()` is stable and is
// what the CLI prints in its machine-readable error line.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(ErrorKind::kParse, "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(ErrorKind::kValidation, what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorKind::kConfig, what) {}
};

class ShapeError : public Error {
 public:
  explicit ShapeError(const std::string& what) : Error(ErrorKind::kShape, what) {}
};

class EncodingError : public Error {
 public:
  EncodingError(const std::string& symbol, const std::string& what)
      : Error(ErrorKind::kEncoding, what), symbol_(symbol) {}

  const std::string& symbol() const noexcept { return symbol_; }

 private:
  std::string symbol_;
};

class LengthError : public Error {
 public:
  explicit LengthError(const std::string& what) : Error(ErrorKind::kLength, what) {}
};

class ContractError : public Error {
 public:
  explicit ContractError(const std::string& what) : Error(ErrorKind::kContract, what) {}
};

class DivergenceError : public Error {
 public:
  explicit DivergenceError(const std::string& what) : Error(ErrorKind::kDiverged, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::kIo, what) {}
};

}  // namespace wugbench
