// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace crdra {

/// Input violates an operation's preconditions (bad dimensions, non-PSD
/// covariance, out-of-range parameter).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Scenario or experiment configuration is unusable.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The problem instance admits no solution under the requested method
/// (e.g. no Slater point for the dual method).
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical self-check failed (rank test, rate-preservation check).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace crdra
