#pragma once

#include <stdexcept>
#include <string>

namespace pointerlab {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside its documented range.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Layout mismatch, label collision or unknown label.
class LayoutError : public Error {
 public:
  using Error::Error;
};

/// A value violates its type invariant (norm, trace, hermiticity, unitarity...).
class InvariantError : public Error {
 public:
  using Error::Error;
};

class NumericalRankLoss : public Error {
 public:
  using Error::Error;
};

class NotRepeatable : public Error {
 public:
  using Error::Error;
};

class SpectrumMismatch : public Error {
 public:
  using Error::Error;
};

class NonFactorizing : public Error {
 public:
  using Error::Error;
};

class UnsupportedDimension : public Error {
 public:
  using Error::Error;
};

class DegenerateSystem : public Error {
 public:
  using Error::Error;
};

class DegenerateSchmidt : public Error {
 public:
  using Error::Error;
};

/// Malformed configuration document.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace pointerlab
