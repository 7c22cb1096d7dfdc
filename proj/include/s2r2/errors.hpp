#pragma once

#include <stdexcept>
#include <string>

namespace s2r2 {

// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// A vector with norm below 1e-12 where a direction is required.
class DegenerateVector : public Error {
 public:
  using Error::Error;
};

// An operation received an empty input it cannot define a value for.
class EmptyInput : public Error {
 public:
  using Error::Error;
};

// Dimensions of the operands do not agree.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// A function evaluation produced a non-finite value.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// A file could not be parsed; the message carries the location.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Reading or writing a file failed at the OS level.
class IoError : public Error {
 public:
  using Error::Error;
};

// A scalar parameter is outside its admissible range.
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

// Transport marginals do not sum to the same total mass.
class MarginalMismatch : public Error {
 public:
  using Error::Error;
};

// Instance too large for the exact solver; use the entropic one.
class UseSinkhorn : public Error {
 public:
  using Error::Error;
};

// All raw importance scores are zero and no floor is applied.
class DegenerateWeights : public Error {
 public:
  using Error::Error;
};

// An aggregated attention row carries no mass over the source keys.
class ZeroSourceMass : public Error {
 public:
  using Error::Error;
};

// Model configuration violates an invariant.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Token sequence does not fit the model's maximum length.
class SequenceTooLong : public Error {
 public:
  using Error::Error;
};

// Checkpoint blob size or checksum does not match its manifest.
class ChecksumError : public Error {
 public:
  using Error::Error;
};

// PDR is undefined because the clean ROUGE-L score is zero.
class UndefinedPDR : public Error {
 public:
  using Error::Error;
};

}  // namespace s2r2
