#ifndef MFE_ERROR_HPP
#define MFE_ERROR_HPP

#include <stdexcept>
#include <string>

namespace mfe {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file (CSV/ARFF syntax, unreadable file).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A cell is empty, "NA" or "?"; datasets with missing values are unsupported.
class MissingValuesError : public Error {
 public:
  using Error::Error;
};

/// The requested target column does not exist.
class UnknownTargetError : public Error {
 public:
  using Error::Error;
};

/// Structural invariant violated (ragged columns, fewer than two classes, ...).
class InvalidDatasetError : public Error {
 public:
  using Error::Error;
};

/// Bad configuration or argument value.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace mfe

#endif  // MFE_ERROR_HPP
