#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "ruledgeo/ruled.hpp"

namespace testing_support {

using namespace ruledgeo;

inline CurveDef curve(const std::string& x, const std::string& y, const std::string& z, double lo, double hi) {
  return CurveDef{parse(x), parse(y), parse(z), lo, hi};
}

/// (3/5 cos s, 3/5 sin s, 4/5 s): kappa = 0.6, tau = 0.8, unit speed.
inline CurveDef helix(double lo = -5.0, double hi = 5.0) {
  return curve("3/5*cos(s)", "3/5*sin(s)", "4/5*s", lo, hi);
}

inline DirectorField director(const std::string& x1, const std::string& x2, const std::string& x3) {
  return DirectorField{parse(x1), parse(x2), parse(x3)};
}

inline RuledSurfaceDef surface(CurveDef c, ThetaPolicy theta, DirectorField d) {
  RuledSurfaceDef def;
  def.curve = std::move(c);
  def.theta = std::move(theta);
  def.director = std::move(d);
  return def;
}

inline ThetaPolicy rmf(double theta0 = 0.0) { return RmfTheta{theta0}; }
inline ThetaPolicy explicit_theta(const std::string& e) { return ExplicitTheta{parse(e)}; }

inline double angle_between(const Vec3& a, const Vec3& b) {
  return std::atan2(a.cross(b).norm(), a.dot(b));
}

}  // namespace testing_support
