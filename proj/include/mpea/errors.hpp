// Copyright 2026 the mpea-sim developers.
// SPDX-License-Identifier: Apache-2.0

#ifndef MPEA_ERRORS_HPP
#define MPEA_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mpea {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class NotHermitian : public Error {
public:
  using Error::Error;
};

class DimensionMismatch : public Error {
public:
  using Error::Error;
};

/// Eigenvector matrix too ill-conditioned to trust a diagonalization.
class Defective : public Error {
public:
  using Error::Error;
};

class CutoffTooSmall : public Error {
public:
  using Error::Error;
};

class InvalidDensityMatrix : public Error {
public:
  using Error::Error;
};

/// Post-selection probability fell below the numerical floor.
class ZeroProbability : public Error {
public:
  using Error::Error;
};

/// Measured |1>-frequency is larger than any decay rate b >= 0 allows.
class NonInvertible : public Error {
public:
  using Error::Error;
};

class AmbiguousQuadrant : public Error {
public:
  using Error::Error;
};

/// Sampling noise exceeds the bit decision margin in the measured-QFT readout.
class InsufficientContrast : public Error {
public:
  InsufficientContrast(const std::string& msg, std::size_t bit_index)
      : Error(msg), bit_index(bit_index) {}
  std::size_t bit_index;
};

/// Scenario file failed to parse or validate; message names the offending key.
class ScenarioError : public Error {
public:
  using Error::Error;
};

}  // namespace mpea

#endif  // MPEA_ERRORS_HPP
