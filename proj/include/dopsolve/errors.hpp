#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace dopsolve {

// Root of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInputError : public Error {
 public:
  using Error::Error;
};

// Cholesky hit a non-positive pivot.
class DefinitenessError : public Error {
 public:
  DefinitenessError(const std::string& what, std::size_t pivot)
      : Error(what), pivot_(pivot) {}
  std::size_t pivot() const noexcept { return pivot_; }

 private:
  std::size_t pivot_;
};

class GridError : public Error {
 public:
  using Error::Error;
};

// Basis synthesis produced a numerically zero column.
class DegeneracyError : public Error {
 public:
  DegeneracyError(const std::string& what, std::size_t degree)
      : Error(what), degree_(degree) {}
  std::size_t degree() const noexcept { return degree_; }

 private:
  std::size_t degree_;
};

// Constraint abscissa does not coincide with a grid node.
class PlacementError : public Error {
 public:
  PlacementError(const std::string& what, double nearest)
      : Error(what), nearest_(nearest) {}
  double nearest_node() const noexcept { return nearest_; }

 private:
  double nearest_;
};

class DependentConstraintsError : public Error {
 public:
  DependentConstraintsError(const std::string& what, std::size_t column)
      : Error(what), column_(column) {}
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t column_;
};

class ConstraintInconsistencyError : public Error {
 public:
  using Error::Error;
};

// Expression evaluation failed (domain violation, singularity).
class EvalError : public Error {
 public:
  EvalError(const std::string& what, double x) : Error(what), x_(x) {}
  double x() const noexcept { return x_; }

 private:
  double x_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset,
             std::vector<std::string> expected)
      : Error(what), offset_(offset), expected_(std::move(expected)) {}
  std::size_t offset() const noexcept { return offset_; }
  const std::vector<std::string>& expected() const noexcept {
    return expected_;
  }

 private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

// Problem file failed validation; `path` is the offending key path.
class SchemaError : public Error {
 public:
  SchemaError(const std::string& what, std::string path)
      : Error(what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace dopsolve
