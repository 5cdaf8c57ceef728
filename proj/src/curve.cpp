#include "ruledgeo/curve.hpp"

#include <Eigen/Geometry>
#include <stdexcept>
#include <string>

#include "ruledgeo/errors.hpp"

namespace ruledgeo {

CurveJet eval_curve_unchecked(const CurveDef& c, double t) {
  const Jet3 x = eval_jet(c.x, t);
  const Jet3 y = eval_jet(c.y, t);
  const Jet3 z = eval_jet(c.z, t);
  return {Vec3(x.value, y.value, z.value), Vec3(x.d1, y.d1, z.d1), Vec3(x.d2, y.d2, z.d2),
          Vec3(x.d3, y.d3, z.d3)};
}

CurveJet eval_curve(const CurveDef& c, double t) {
  const double slack = 1e-12 * (c.t_max - c.t_min);
  if (!(t >= c.t_min - slack && t <= c.t_max + slack)) {
    throw GeometryError(GeometryErrorKind::ParameterOutOfRange,
                        "t=" + number_text(t) + " outside [" + number_text(c.t_min) + ", " +
                            number_text(c.t_max) + "]");
  }
  return eval_curve_unchecked(c, t);
}

TangentData tangent(const CurveJet& jet) {
  const double speed = jet.d1.norm();
  if (speed <= kRegularityEps) {
    throw GeometryError(GeometryErrorKind::DegenerateTangent, "|r'| = " + number_text(speed));
  }
  return {jet.position, jet.d1 / speed, speed};
}

TangentData tangent(const CurveDef& c, double t) { return tangent(eval_curve(c, t)); }

FrenetData frenet(const CurveJet& jet) {
  const TangentData td = tangent(jet);
  const Vec3 cross = jet.d1.cross(jet.d2);
  const double cross_norm = cross.norm();
  if (cross_norm <= kRegularityEps) {
    throw GeometryError(GeometryErrorKind::VanishingCurvature, "|r' x r''| = " + number_text(cross_norm));
  }
  FrenetData fd;
  fd.position = jet.position;
  fd.speed = td.speed;
  fd.T = td.T;
  fd.B = cross / cross_norm;
  fd.N = fd.B.cross(fd.T);
  fd.kappa = cross_norm / (td.speed * td.speed * td.speed);
  fd.tau = cross.dot(jet.d3) / (cross_norm * cross_norm);
  return fd;
}

FrenetData frenet(const CurveDef& c, double t) { return frenet(eval_curve(c, t)); }

RegularityReport validate_regular(const CurveDef& c, int n_samples) {
  if (n_samples < 2) throw std::invalid_argument("validate_regular needs at least 2 samples");
  RegularityReport report;
  bool speed_ok = true;
  for (double t : uniform_grid(c.t_min, c.t_max, n_samples)) {
    const CurveJet jet = eval_curve(c, t);
    const double speed = jet.d1.norm();
    if (speed <= kRegularityEps) {
      report.violations.push_back({t, RegularityViolation::Kind::Speed, speed});
      speed_ok = false;
      continue;
    }
    const double cross_norm = jet.d1.cross(jet.d2).norm();
    const double kappa = cross_norm / (speed * speed * speed);
    if (kappa <= kRegularityEps || cross_norm <= kRegularityEps) {
      report.violations.push_back({t, RegularityViolation::Kind::Curvature, kappa});
    }
  }
  report.usable_for_frenet = report.violations.empty();
  report.usable_for_tangent_only = speed_ok && !report.violations.empty();
  return report;
}

std::vector<double> uniform_grid(double lo, double hi, int n) {
  if (n < 1) return {};
  if (n == 1) return {lo};
  std::vector<double> grid(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) grid[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
  grid.back() = hi;
  return grid;
}

}  // namespace ruledgeo
