#pragma once

#include <Eigen/Core>
#include <Eigen/LU>

#include <stdexcept>
#include <string>

namespace nlfem {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;

// Error taxonomy. The CLI maps each family onto an exit code.

class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int line)
      : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Evaluation of a kernel on its singular locus.
class DomainError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// A child quadrature point that could not be placed in any parent element.
class BridgingFailure : public std::runtime_error {
 public:
  BridgingFailure(const std::string& msg, Vec2 x, int nearest)
      : std::runtime_error(msg), point_(x), nearest_(nearest) {}
  Vec2 point() const { return point_; }
  int nearest_element() const noexcept { return nearest_; }

 private:
  Vec2 point_;
  int nearest_;
};

/// A child mesh whose element interiors cross a singular line of the kernel.
class AlignmentViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

}  // namespace nlfem
