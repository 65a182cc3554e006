#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace fbel {

enum class ErrorKind {
  invalid_argument,
  domain,
  numerical,
  parse,
  io,
};

/// Base class for every error raised by the engine. The kind maps one-to-one
/// onto the status codes of the C interface.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what)
      : Error(ErrorKind::invalid_argument, what) {}
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorKind::domain, what) {}
};

/// A non-finite value or failed factorization. Carries the offending step or
/// pivot when one is known.
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what,
                          std::optional<std::size_t> step = std::nullopt)
      : Error(ErrorKind::numerical,
              step ? what + " (step " + std::to_string(*step) + ")" : what),
        step_(step) {}
  std::optional<std::size_t> step() const noexcept { return step_; }

 private:
  std::optional<std::size_t> step_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(ErrorKind::parse, "line " + std::to_string(line) + ": " + what),
        line_(line) {}
  explicit ParseError(const std::string& what)
      : Error(ErrorKind::parse, what), line_(0) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::io, what) {}
};

}  // namespace fbel
