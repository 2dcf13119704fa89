/**
 * @file error.hpp
 * @brief Exception types shared by every sdd module.
 */
#pragma once

#include <stdexcept>
#include <string>

namespace sdd {

enum class ErrorKind {
  Domain,            // argument outside the region where the object is defined
  Range,             // computed value outside its admissible range
  NonDifferentiable, // derivative requested at a kink
  Singular,          // vanishing denominator
  Parameter,         // invalid construction parameters
  Inapplicable,      // operation preconditions on the problem kind not met
};

[[nodiscard]] inline const char* to_string(ErrorKind k) noexcept {
  switch (k) {
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Range: return "range";
    case ErrorKind::NonDifferentiable: return "non-differentiable";
    case ErrorKind::Singular: return "singular";
    case ErrorKind::Parameter: return "parameter";
    case ErrorKind::Inapplicable: return "inapplicable";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + " error: " + what), kind_(kind) {}

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace sdd
