#pragma once

#include <stdexcept>
#include <string>

namespace wsparse {

// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Vector/matrix sizes do not line up.
struct DimensionMismatch : Error {
  using Error::Error;
};

// An atom's Euclidean norm is below the construction floor.
struct ZeroNormAtom : Error {
  using Error::Error;
};

// A generator was asked for an unsupported ambient dimension.
struct InvalidDimension : Error {
  using Error::Error;
};

// A numeric range parameter is empty or non-positive.
struct InvalidRange : Error {
  using Error::Error;
};

// p <= 0 passed to a p-norm.
struct InvalidExponent : Error {
  using Error::Error;
};

// Sparsity level outside [0, N].
struct InvalidSparsity : Error {
  using Error::Error;
};

// Coherence outside (0, 1].
struct InvalidCoherence : Error {
  using Error::Error;
};

// A guarantee's hypothesis mu*(2s-1) < 1 is violated.
struct NotApplicable : Error {
  using Error::Error;
};

// An exhaustive enumeration would exceed its configured cap.
struct TooLarge : Error {
  using Error::Error;
};

// Atom selection asked on an (exactly) zero residual.
struct ZeroResidual : Error {
  using Error::Error;
};

// Active atoms became numerically dependent during a pursuit.
struct RankDeficientActiveSet : Error {
  using Error::Error;
};

// Malformed file or generator spec.
struct ParseError : Error {
  using Error::Error;
};

}  // namespace wsparse
