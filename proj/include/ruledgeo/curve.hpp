#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <vector>

#include "ruledgeo/expr.hpp"

namespace ruledgeo {

using Vec3 = Eigen::Vector3d;

/// Absolute threshold separating genuine degeneracy from roundoff. Assumes
/// geometry scaled to O(1).
inline constexpr double kRegularityEps = 1e-9;

struct CurveDef {
  Expr x;
  Expr y;
  Expr z;
  double t_min = 0.0;
  double t_max = 1.0;
};

/// Position and derivatives with respect to the curve's own parameter.
struct CurveJet {
  Vec3 position;
  Vec3 d1;
  Vec3 d2;
  Vec3 d3;
};

/// Frenet apparatus at a point. Curvature and torsion are per unit arc
/// length; `speed` is |r'| in the curve parameter.
struct FrenetData {
  Vec3 position;
  Vec3 T;
  Vec3 N;
  Vec3 B;
  double kappa = 0.0;
  double tau = 0.0;
  double speed = 1.0;
};

/// Partial apparatus that exists wherever the curve is regular.
struct TangentData {
  Vec3 position;
  Vec3 T;
  double speed = 1.0;
};

/// Throws GeometryError(ParameterOutOfRange) outside [t_min, t_max].
CurveJet eval_curve(const CurveDef& c, double t);

/// Same as eval_curve without the range check. Finite-difference stencils
/// centred on the end points step slightly outside the range.
CurveJet eval_curve_unchecked(const CurveDef& c, double t);

FrenetData frenet(const CurveJet& jet);
FrenetData frenet(const CurveDef& c, double t);

TangentData tangent(const CurveJet& jet);
TangentData tangent(const CurveDef& c, double t);

struct RegularityViolation {
  enum class Kind { Speed, Curvature };
  double t;
  Kind kind;
  double magnitude;
};

struct RegularityReport {
  std::vector<RegularityViolation> violations;
  bool usable_for_frenet = true;
  bool usable_for_tangent_only = false;
};

/// Samples `n_samples` uniformly spaced parameters (end points included).
RegularityReport validate_regular(const CurveDef& c, int n_samples);

/// `n` uniformly spaced values covering [lo, hi], end points included.
std::vector<double> uniform_grid(double lo, double hi, int n);

}  // namespace ruledgeo
