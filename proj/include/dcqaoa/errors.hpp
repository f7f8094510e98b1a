#pragma once

#include <stdexcept>
#include <string>

namespace dcqaoa {

/// Raised when a required input file (weights, graph) cannot be read.
class ArtifactError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised on NaN/inf in a loss, gradient or cell input.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dcqaoa
