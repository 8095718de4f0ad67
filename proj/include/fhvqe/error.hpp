#pragma once

#include <stdexcept>
#include <string>

namespace fhvqe {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Lattice dimensions are zero or exceed the qubit cap.
class InvalidGeometry : public Error {
 public:
  using Error::Error;
};

/// A site, qubit, or level index is out of range.
class IndexError : public Error {
 public:
  using Error::Error;
};

/// A model parameter outside the supported regime (e.g. U < 0).
class UnsupportedParameter : public Error {
 public:
  using Error::Error;
};

/// A fermion term that cannot be mapped (e.g. a hopping term i == j).
class MalformedTerm : public Error {
 public:
  using Error::Error;
};

/// A dense materialization would exceed the configured size cap.
class SizeCapExceeded : public Error {
 public:
  using Error::Error;
};

/// Operand dimensions disagree (state sizes, parameter vector length, ...).
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Excited levels requested out of order, or beyond the sector dimension.
class OrderingError : public Error {
 public:
  using Error::Error;
};

/// The objective produced a non-finite value.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Bad user configuration (CLI flags or config file).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace fhvqe
