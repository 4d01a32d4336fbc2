#pragma once

#include <stdexcept>
#include <string>

namespace frocc {

// Invalid parameter or precondition violated by the caller.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Data that cannot be used: ragged CSV, non-finite values, wrong dimension.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Model file problems.
class FormatError : public DataError {
 public:
  using DataError::DataError;
};

class VersionError : public FormatError {
 public:
  using FormatError::FormatError;
};

class ChecksumError : public FormatError {
 public:
  using FormatError::FormatError;
};

}  // namespace frocc
