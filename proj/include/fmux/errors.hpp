// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace fmux {

/// Base class for all errors thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter or configuration value violates a documented invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A numeric procedure has no solution in its bracket / scan window,
/// or a series truncation is inadequate for the requested accuracy.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// A Monte Carlo run produced too few counts to form the requested ratio.
class StatsError : public Error {
 public:
  using Error::Error;
};

}  // namespace fmux
