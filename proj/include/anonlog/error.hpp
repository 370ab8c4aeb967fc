#pragma once

#include <stdexcept>
#include <string>

namespace anonlog {

// Error categories map 1:1 onto CLI exit codes: Io/Parse/Validation -> 1,
// Config/Usage -> 2, Unsupported -> 3.
enum class ErrorKind {
  Io,
  Parse,
  Validation,
  Config,
  Unsupported,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message)
      : std::runtime_error(std::move(message)), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class IoError : public Error {
 public:
  explicit IoError(std::string message) : Error(ErrorKind::Io, std::move(message)) {}
};

// Malformed input bytes (XML, metadata payload, timestamps).
class ParseError : public Error {
 public:
  ParseError(std::string message, std::size_t line = 0, std::size_t column = 0)
      : Error(ErrorKind::Parse, std::move(message)), line_(line), column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// A structurally broken event log handed to an operation that requires a valid one.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::string message)
      : Error(ErrorKind::Validation, std::move(message)) {}
};

// Bad parameters, bad pipeline configs, out-of-range layers.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::string message) : Error(ErrorKind::Config, std::move(message)) {}
};

// Recognized but deliberately unimplemented surface (e.g. subtree generalization).
class UnsupportedError : public Error {
 public:
  explicit UnsupportedError(std::string message)
      : Error(ErrorKind::Unsupported, std::move(message)) {}
};

// Wraps the failure of one pipeline layer; `layer` is 1-based.
class PipelineError : public Error {
 public:
  PipelineError(std::size_t layer, ErrorKind cause_kind, const std::string& message)
      : Error(cause_kind, "pipeline layer " + std::to_string(layer) + ": " + message),
        layer_(layer) {}

  std::size_t layer() const noexcept { return layer_; }

 private:
  std::size_t layer_;
};

}  // namespace anonlog
