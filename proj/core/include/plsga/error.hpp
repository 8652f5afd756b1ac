#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace plsga {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input data problems: missing columns, unparsable cells, too few rows.
class DataError : public Error {
 public:
  using Error::Error;
};

class ColumnNotFoundError : public DataError {
 public:
  explicit ColumnNotFoundError(const std::string& column)
      : DataError("column '" + column + "' not found in header"), column_(column) {}
  const std::string& column() const noexcept { return column_; }

 private:
  std::string column_;
};

/// A cell that is missing or not a finite number. Row and column are 1-based
/// positions in the file (the header is row 1).
class ParseError : public DataError {
 public:
  ParseError(std::size_t row, std::size_t column, const std::string& what)
      : DataError("row " + std::to_string(row) + ", column " + std::to_string(column) + ": " + what),
        row_(row),
        column_(column) {}
  std::size_t row() const noexcept { return row_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t row_;
  std::size_t column_;
};

class TooFewObservationsError : public DataError {
 public:
  using DataError::DataError;
};

class SegmentationError : public Error {
 public:
  using Error::Error;
};

class SplitError : public Error {
 public:
  using Error::Error;
};

/// Requested number of PLS components is not admissible for the data.
class ComponentsError : public Error {
 public:
  using Error::Error;
};

/// Matrix/vector dimensions do not agree.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Rank-deficient least-squares design.
class SingularDesignError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

class MetricError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// The data geometry admits no evaluable model for the configured criterion.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

}  // namespace plsga
