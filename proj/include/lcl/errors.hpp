#pragma once

#include <stdexcept>
#include <string>

namespace lcl {

/// Argument outside [1, inf) x [1, inf) for a growth function.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class UnknownFunctionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A configured size limit (atom cap, tree depth, Laplacian node cap) would be exceeded.
class CapExceededError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Linear solve failed: disconnected terminals, singular system, or residual too large.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lcl
