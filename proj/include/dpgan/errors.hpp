#pragma once

#include <stdexcept>
#include <string>

namespace dpgan {

// A caller broke a documented precondition (wrong shapes, invalid ids, ...).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Shape mismatch inside a differentiable primitive. Carries the primitive name.
class ShapeError : public ContractViolation {
 public:
  ShapeError(std::string primitive, const std::string& detail)
      : ContractViolation(primitive + ": " + detail), primitive_(std::move(primitive)) {}

  const std::string& primitive() const noexcept { return primitive_; }

 private:
  std::string primitive_;
};

// User-supplied data that fails validation (synthetic corpus specs, rates, ...).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Rejected configuration file or flag.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File system or file format failure.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dpgan
