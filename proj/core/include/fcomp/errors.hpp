#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace fcomp {

/// Invalid configuration, parameters outside their domain, malformed input.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// A scene target lies outside the parameter domain of the radar.
class TargetDomainError : public ValidationError {
 public:
  TargetDomainError(std::size_t index, const std::string& what)
      : ValidationError(what), index_(index) {}

  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// Unrecoverable numerical failure (e.g. identical columns in a joint least squares).
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fcomp
