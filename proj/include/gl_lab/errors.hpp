#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gl_lab {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotPositiveDefinite : Error {
  using Error::Error;
};

/// Power iteration failed to reach tolerance; carries the best estimate seen.
struct ConvergenceFailure : Error {
  ConvergenceFailure(const std::string& what, double best)
      : Error(what), best_estimate(best) {}
  double best_estimate;
};

struct UnsupportedOrder : Error {
  using Error::Error;
};

struct ZeroRow : Error {
  ZeroRow(const std::string& what, std::size_t row_index)
      : Error(what), row(row_index) {}
  std::size_t row;
};

struct ShapeMismatch : Error {
  using Error::Error;
};

struct DegenerateLogArgument : Error {
  using Error::Error;
};

struct IllConditioned : Error {
  using Error::Error;
};

struct EmptyColumnSupport : Error {
  EmptyColumnSupport(const std::string& what, std::size_t column_index)
      : Error(what), column(column_index) {}
  std::size_t column;
};

struct BadFamilyShape : Error {
  using Error::Error;
};

struct NoCrossing : Error {
  using Error::Error;
};

struct ParseError : Error {
  using Error::Error;
};

struct ValidationError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

}  // namespace gl_lab
