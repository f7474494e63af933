#pragma once

#include <stdexcept>
#include <string>

namespace vsl {

/// Argument outside the mathematical domain of an operation (sigma, dt, mass...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Pendulum equation requested with zero tip inertia.
class DegeneratePayloadError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Document does not match the published schema (missing/unknown field, wrong type).
class SchemaError : public std::runtime_error {
 public:
  SchemaError(std::string field, std::string location, const std::string& what)
      : std::runtime_error(what), field_(std::move(field)), location_(std::move(location)) {}
  const std::string& field() const noexcept { return field_; }
  const std::string& location() const noexcept { return location_; }

 private:
  std::string field_;
  std::string location_;
};

/// Document is well formed but semantically invalid (unordered events, sigma range...).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace vsl
