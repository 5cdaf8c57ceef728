#include "ruledgeo/frame.hpp"

#include <Eigen/Geometry>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "ruledgeo/errors.hpp"

namespace ruledgeo {

AdaptedFrame adapted_frame(const FrenetData& fd, double theta, double theta_prime) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  AdaptedFrame af;
  af.T = fd.T;
  af.U = c * fd.N + s * fd.B;
  af.V = -s * fd.N + c * fd.B;
  af.theta = theta;
  af.theta_prime = theta_prime;
  return af;
}

FrameDerivatives frame_derivatives(const FrenetData& fd, const AdaptedFrame& af) {
  const double c = std::cos(af.theta);
  const double s = std::sin(af.theta);
  FrameDerivatives d;
  d.phi = af.theta_prime / fd.speed + fd.tau;
  d.dT = fd.kappa * fd.N;
  d.dU = -fd.kappa * c * af.T + d.phi * af.V;
  d.dV = fd.kappa * s * af.T - d.phi * af.U;
  return d;
}

namespace {

struct ThetaRate {
  double rate;
  FrenetData frenet;
};

ThetaRate rmf_rate(const CurveDef& c, double t) {
  FrenetData fd = frenet(eval_curve_unchecked(c, t));
  return {-fd.speed * fd.tau, fd};
}

/// RK4 on dtheta/dt = -|r'| tau from (t0, theta0) to t1 in `steps` steps.
/// The right-hand side does not depend on theta, so each step is Simpson's
/// rule on the rate.
double integrate_theta(const CurveDef& c, double t0, double theta0, double t1, int steps, FrenetData* end) {
  const double h = (t1 - t0) / steps;
  double theta = theta0;
  ThetaRate start = rmf_rate(c, t0);
  for (int i = 0; i < steps; ++i) {
    const double a = t0 + h * i;
    const double b = (i + 1 == steps) ? t1 : t0 + h * (i + 1);
    const ThetaRate mid = rmf_rate(c, 0.5 * (a + b));
    const ThetaRate stop = rmf_rate(c, b);
    const double k1 = start.rate;
    const double k2 = mid.rate;
    const double k3 = mid.rate;
    const double k4 = stop.rate;
    theta += (b - a) / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    start = stop;
  }
  if (end) *end = start.frenet;
  return theta;
}

Vec3 reflect(const Vec3& x, const Vec3& normal, double normal_sq) {
  return x - (2.0 / normal_sq) * normal.dot(x) * normal;
}

/// One double-reflection step; returns the propagated U (unit, orthogonal
/// to t1).
Vec3 reflection_step(const Vec3& x0, const Vec3& t0, const Vec3& u0, const Vec3& x1, const Vec3& t1) {
  const Vec3 v1 = x1 - x0;
  const double c1 = v1.squaredNorm();
  if (c1 == 0.0) throw GeometryError(GeometryErrorKind::CoincidentPoints, "consecutive sample points coincide");
  const Vec3 u_l = reflect(u0, v1, c1);
  const Vec3 t_l = reflect(t0, v1, c1);
  const Vec3 v2 = t1 - t_l;
  const double c2 = v2.squaredNorm();
  Vec3 u1 = c2 > 0.0 ? reflect(u_l, v2, c2) : u_l;
  u1 -= u1.dot(t1) * t1;
  return u1.normalized();
}

double unwrap_near(double angle, double reference) {
  const double two_pi = 2.0 * std::numbers::pi;
  return angle + two_pi * std::round((reference - angle) / two_pi);
}

}  // namespace

std::vector<ThetaSample> theta_rmf(const CurveDef& c, double theta0, std::span<const double> grid, int substeps) {
  if (substeps < 1) throw std::invalid_argument("substeps must be positive");
  std::vector<ThetaSample> table;
  if (grid.empty()) return table;
  table.reserve(grid.size());
  eval_curve(c, grid.front());
  eval_curve(c, grid.back());
  double theta = theta0;
  rmf_rate(c, grid.front());
  table.push_back({grid.front(), theta});
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw std::invalid_argument("theta grid must be strictly increasing");
    theta = integrate_theta(c, grid[i - 1], theta, grid[i], substeps, nullptr);
    table.push_back({grid[i], theta});
  }
  return table;
}

std::vector<ReflectedFrame> double_reflection(std::span<const Vec3> points, std::span<const Vec3> tangents,
                                              const Vec3& U0) {
  if (points.size() != tangents.size() || points.size() < 2) {
    throw std::invalid_argument("double_reflection needs equally long point/tangent lists of length >= 2");
  }
  if (std::abs(U0.dot(tangents[0])) >= 1e-10) {
    throw GeometryError(GeometryErrorKind::NotPerpendicular, "U0 is not perpendicular to the initial tangent");
  }
  std::vector<ReflectedFrame> frames;
  frames.reserve(points.size());
  Vec3 u = U0;
  frames.push_back({u, tangents[0].cross(u)});
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    u = reflection_step(points[i], tangents[i], u, points[i + 1], tangents[i + 1]);
    frames.push_back({u, tangents[i + 1].cross(u)});
  }
  return frames;
}

Vec3 reference_normal(const Vec3& t) {
  int axis = 0;
  for (int k = 1; k < 3; ++k) {
    if (std::abs(t[k]) < std::abs(t[axis])) axis = k;
  }
  Vec3 n = Vec3::Unit(axis);
  n -= n.dot(t) * t;
  return n.normalized();
}

// --------------------------------------------------------------------------
// FrameField
// --------------------------------------------------------------------------

FrameField::FrameField(CurveDef curve, ThetaPolicy policy, std::vector<double> grid, FrameFieldOptions options)
    : curve_(std::move(curve)), policy_(std::move(policy)), grid_(std::move(grid)), options_(options) {
  if (grid_.empty()) throw std::invalid_argument("frame grid is empty");
  if (options_.substeps < 1) throw std::invalid_argument("substeps must be positive");
  for (std::size_t i = 1; i < grid_.size(); ++i) {
    if (!(grid_[i] > grid_[i - 1])) throw std::invalid_argument("frame grid must be strictly increasing");
  }
  double spacing = grid_.size() > 1 ? grid_[1] - grid_[0] : curve_.t_max - curve_.t_min;
  for (std::size_t i = 1; i < grid_.size(); ++i) spacing = std::min(spacing, grid_[i] - grid_[i - 1]);
  substep_length_ = spacing / options_.substeps;

  // A curve without a Frenet frame at any grid node is treated as straight.
  std::size_t missing = 0;
  std::vector<CurveJet> jets;
  jets.reserve(grid_.size());
  for (double t : grid_) {
    jets.push_back(eval_curve(curve_, t));
    try {
      tangent(jets.back());
    } catch (const GeometryError& e) {
      throw GeometryError(e.kind(), "|r'| vanishes at s=" + number_text(t));
    }
    try {
      frenet(jets.back());
    } catch (const GeometryError& e) {
      if (e.kind() != GeometryErrorKind::VanishingCurvature) throw;
      ++missing;
    }
  }
  straight_line_ = missing == grid_.size();
  if (straight_line_) reference_normal_ = reference_normal(tangent(jets.front()).T);

  nodes_.reserve(grid_.size());
  if (!is_rmf()) {
    for (double t : grid_) nodes_.push_back(explicit_point(t));
    return;
  }

  const double theta0 = std::get<RmfTheta>(policy_).theta0;
  try {
    nodes_.push_back(from_theta(grid_.front(), jets.front(), theta0));
  } catch (const GeometryError& e) {
    if (e.kind() != GeometryErrorKind::VanishingCurvature || !options_.double_reflection_fallback) throw;
    // Starts inside a gap: theta0 is measured from the reference normal.
    const TangentData td = tangent(jets.front());
    const Vec3 n = reference_normal(td.T);
    FramePoint p;
    p.t = grid_.front();
    p.status = FrenetStatus::Gap;
    p.frenet = {td.position, td.T, n, td.T.cross(n), 0.0, 0.0, td.speed};
    p.frame = adapted_frame(p.frenet, theta0, 0.0);
    nodes_.push_back(p);
  }
  for (std::size_t i = 1; i < grid_.size(); ++i) {
    nodes_.push_back(propagate(nodes_.back(), grid_[i], options_.substeps));
  }
}

FramePoint FrameField::from_theta(double t, const CurveJet& jet, double theta) const {
  FramePoint p;
  p.t = t;
  double theta_prime = 0.0;
  if (straight_line_) {
    const TangentData td = tangent(jet);
    Vec3 n = reference_normal_ - reference_normal_.dot(td.T) * td.T;
    n.normalize();
    p.frenet = {td.position, td.T, n, td.T.cross(n), 0.0, 0.0, td.speed};
    p.status = FrenetStatus::StraightLine;
  } else {
    p.frenet = frenet(jet);
    p.status = FrenetStatus::Defined;
    if (is_rmf()) theta_prime = -p.frenet.speed * p.frenet.tau;
  }
  if (!is_rmf()) theta_prime = eval_jet(std::get<ExplicitTheta>(policy_).theta, t).d1;
  p.frame = adapted_frame(p.frenet, theta, theta_prime);
  return p;
}

FramePoint FrameField::explicit_point(double t) const {
  const double theta = eval(std::get<ExplicitTheta>(policy_).theta, t);
  return from_theta(t, eval_curve_unchecked(curve_, t), theta);
}

FramePoint FrameField::propagate(const FramePoint& base, double t, int steps) const {
  if (straight_line_) return from_theta(t, eval_curve_unchecked(curve_, t), base.frame.theta);
  if (base.status == FrenetStatus::Defined) {
    try {
      FrenetData end;
      const double theta = integrate_theta(curve_, base.t, base.frame.theta, t, steps, &end);
      FramePoint p;
      p.t = t;
      p.frenet = end;
      p.frame = adapted_frame(end, theta, -end.speed * end.tau);
      return p;
    } catch (const GeometryError& e) {
      if (e.kind() != GeometryErrorKind::VanishingCurvature || !options_.double_reflection_fallback) throw;
    }
  } else if (!options_.double_reflection_fallback) {
    throw GeometryError(GeometryErrorKind::VanishingCurvature, "RMF propagation from a point without Frenet frame");
  }
  return reflect_across(base, t, steps * options_.reflection_refinement);
}

FramePoint FrameField::reflect_across(const FramePoint& base, double t, int steps) const {
  Vec3 x = base.frenet.position;
  Vec3 tan = base.frame.T;
  Vec3 u = base.frame.U;
  CurveJet jet;
  for (int k = 1; k <= steps; ++k) {
    const double tk = k == steps ? t : base.t + (t - base.t) * k / steps;
    jet = eval_curve_unchecked(curve_, tk);
    const TangentData td = tangent(jet);
    u = reflection_step(x, tan, u, td.position, td.T);
    x = td.position;
    tan = td.T;
  }

  FramePoint p;
  p.t = t;
  try {
    const FrenetData fd = frenet(jet);
    const double angle = std::atan2(u.dot(fd.B), u.dot(fd.N));
    p.frenet = fd;
    p.frame = adapted_frame(fd, unwrap_near(angle, base.frame.theta), -fd.speed * fd.tau);
    return p;
  } catch (const GeometryError& e) {
    if (e.kind() != GeometryErrorKind::VanishingCurvature) throw;
  }
  const double theta = base.frame.theta;
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const Vec3 v = tan.cross(u);
  p.status = FrenetStatus::Gap;
  p.frenet = {x, tan, c * u - s * v, s * u + c * v, 0.0, 0.0, jet.d1.norm()};
  p.frame = {tan, u, v, theta, 0.0};
  return p;
}

int FrameField::steps_for(double from, double to) const {
  return std::max(1, static_cast<int>(std::ceil(std::abs(to - from) / substep_length_ - 1e-9)));
}

FramePoint FrameField::at(double t) const {
  if (!is_rmf()) return explicit_point(t);
  auto it = std::upper_bound(grid_.begin(), grid_.end(), t);
  const std::size_t k = it == grid_.begin() ? 0 : static_cast<std::size_t>(it - grid_.begin()) - 1;
  if (grid_[k] == t) return nodes_[k];
  return continue_from(nodes_[k], t);
}

FramePoint FrameField::continue_from(const FramePoint& base, double t) const {
  if (!is_rmf()) return explicit_point(t);
  if (t == base.t) return base;
  return propagate(base, t, steps_for(base.t, t));
}

}  // namespace ruledgeo
