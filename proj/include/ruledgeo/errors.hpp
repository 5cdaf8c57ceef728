#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace ruledgeo {

/// Compact text for a real value in error messages (%g).
std::string number_text(double x);

/// Base class for every error raised by the kernel.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed DSL text. `offset` is a byte offset into the parsed string.
class ParseError : public Error {
 public:
  ParseError(std::size_t offset, std::vector<std::string> expected, const std::string& what);

  std::size_t offset() const { return offset_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

class UnknownIdentifier : public ParseError {
 public:
  UnknownIdentifier(std::size_t offset, std::string name);

  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

/// Evaluation outside the real domain of a DSL function (log of a nonpositive
/// number, division by zero, ...).
class DomainError : public Error {
 public:
  DomainError(std::string subexpression, double s, const std::string& reason);

  const std::string& subexpression() const { return subexpression_; }
  double parameter() const { return s_; }

 private:
  std::string subexpression_;
  double s_;
};

enum class GeometryErrorKind {
  ParameterOutOfRange,
  DegenerateTangent,
  VanishingCurvature,
  ZeroDirector,
  CylindricalPoint,
  SingularPoint,
  TangentRuling,
  CoincidentPoints,
  NotPerpendicular,
  FormulaNotApplicable,
};

const char* to_string(GeometryErrorKind kind);

class GeometryError : public Error {
 public:
  GeometryError(GeometryErrorKind kind, const std::string& detail);

  GeometryErrorKind kind() const { return kind_; }

 private:
  GeometryErrorKind kind_;
};

/// Invalid job configuration (missing keys, wrong types, inconsistent options).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace ruledgeo
