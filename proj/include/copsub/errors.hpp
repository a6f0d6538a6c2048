#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace copsub {

// Invalid sizes, parameters or configuration.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A rank-based estimator that requires tie-free component samples met ties.
class TiesPresent : public std::invalid_argument {
 public:
  explicit TiesPresent(std::size_t column)
      : std::invalid_argument("ties present in column " + std::to_string(column)),
        column_(column) {}
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t column_;
};

class GridMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class PointNotOnGrid : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class EmptyInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class IndexOutOfRange : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

class UnsupportedFamily : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Numerical routine did not reach its target accuracy.
class NumericFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class QuadratureNonconvergence : public NumericFailure {
 public:
  QuadratureNonconvergence(const std::string& what, double estimated_error)
      : NumericFailure(what), estimated_error_(estimated_error) {}
  double estimated_error() const noexcept { return estimated_error_; }

 private:
  double estimated_error_;
};

// CSV ingestion failure; row and column are 1-based positions in the file.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t row, std::size_t column)
      : std::runtime_error(what + " at row " + std::to_string(row) + ", column " +
                           std::to_string(column)),
        row_(row),
        column_(column) {}
  std::size_t row() const noexcept { return row_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t row_;
  std::size_t column_;
};

}  // namespace copsub
