#include "ruledgeo/errors.hpp"

#include <cstdio>

namespace ruledgeo {

std::string number_text(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

ParseError::ParseError(std::size_t offset, std::vector<std::string> expected, const std::string& what)
    : Error(what), offset_(offset), expected_(std::move(expected)) {}

UnknownIdentifier::UnknownIdentifier(std::size_t offset, std::string name)
    : ParseError(offset, {}, "unknown identifier '" + name + "' at offset " + std::to_string(offset)),
      name_(std::move(name)) {}

DomainError::DomainError(std::string subexpression, double s, const std::string& reason)
    : Error(reason + " in '" + subexpression + "' at s=" + number_text(s)),
      subexpression_(std::move(subexpression)),
      s_(s) {}

const char* to_string(GeometryErrorKind kind) {
  switch (kind) {
    case GeometryErrorKind::ParameterOutOfRange: return "ParameterOutOfRange";
    case GeometryErrorKind::DegenerateTangent: return "DegenerateTangent";
    case GeometryErrorKind::VanishingCurvature: return "VanishingCurvature";
    case GeometryErrorKind::ZeroDirector: return "ZeroDirector";
    case GeometryErrorKind::CylindricalPoint: return "CylindricalPoint";
    case GeometryErrorKind::SingularPoint: return "SingularPoint";
    case GeometryErrorKind::TangentRuling: return "TangentRuling";
    case GeometryErrorKind::CoincidentPoints: return "CoincidentPoints";
    case GeometryErrorKind::NotPerpendicular: return "NotPerpendicular";
    case GeometryErrorKind::FormulaNotApplicable: return "FormulaNotApplicable";
  }
  return "Unknown";
}

GeometryError::GeometryError(GeometryErrorKind kind, const std::string& detail)
    : Error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

}  // namespace ruledgeo
