#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace agency {

/// Error classes. Each maps to a distinct CLI exit code.
enum class ErrorKind {
  validation,
  dimension,
  singularity,
  iteration_limit,
  resource,
  domain,
  file_not_found,
  parse,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what)
      : Error(ErrorKind::validation, what) {}
};

class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& what)
      : Error(ErrorKind::dimension, what) {}
};

/// Raised when a log argument hits zero on the support of the reference
/// distribution and no smoothing was requested.
class SingularityError : public Error {
 public:
  explicit SingularityError(const std::string& what)
      : Error(ErrorKind::singularity, what) {}
};

class IterationLimitError : public Error {
 public:
  IterationLimitError(const std::string& what, double last_gap)
      : Error(ErrorKind::iteration_limit, what), last_gap_(last_gap) {}

  double last_gap() const noexcept { return last_gap_; }

 private:
  double last_gap_;
};

class ResourceError : public Error {
 public:
  explicit ResourceError(const std::string& what)
      : Error(ErrorKind::resource, what) {}
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what)
      : Error(ErrorKind::domain, what) {}
};

class FileNotFoundError : public Error {
 public:
  explicit FileNotFoundError(const std::string& what)
      : Error(ErrorKind::file_not_found, what) {}
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what)
      : Error(ErrorKind::parse, what) {}
};

}  // namespace agency
