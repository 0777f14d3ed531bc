#pragma once

#include <stdexcept>
#include <string>

namespace pfreq {

/// Raised when an operation needs pointwise data (evaluation, quadrature,
/// geometry) on a background that only has a closed-form spectrum.
class UnsupportedBackground : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an evolution cannot meet its requested accuracy.
class EvolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pfreq
