#pragma once

#include <stdexcept>
#include <string>

namespace wlab {

/// Raised when an iterative numerical method fails to meet its tolerance
/// within the configured budget (quadrature, ODE stepping, eigensolver).
class ConvergenceError : public std::runtime_error {
 public:
  explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when a root search cannot find a sign change in its window.
class BracketError : public std::runtime_error {
 public:
  explicit BracketError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace wlab
