#pragma once

#include <span>
#include <variant>
#include <vector>

#include "ruledgeo/curve.hpp"
#include "ruledgeo/expr.hpp"

namespace ruledgeo {

/// True rotation-minimizing frame: theta(t_min) = theta0, then
/// dtheta/dt = -|r'| tau.
struct RmfTheta {
  double theta0 = 0.0;
};

/// User-supplied angle between N and U.
struct ExplicitTheta {
  Expr theta;
};

using ThetaPolicy = std::variant<RmfTheta, ExplicitTheta>;

/// Adapted frame {T, U, V}; U = cos(theta) N + sin(theta) B,
/// V = -sin(theta) N + cos(theta) B. theta_prime is dtheta/dt in the curve
/// parameter.
struct AdaptedFrame {
  Vec3 T;
  Vec3 U;
  Vec3 V;
  double theta = 0.0;
  double theta_prime = 0.0;
};

AdaptedFrame adapted_frame(const FrenetData& fd, double theta, double theta_prime);

struct ThetaSample {
  double t;
  double theta;
};

/// Integrates dtheta/dt = -|r'(t)| tau(t) with classical RK4, `substeps`
/// steps per grid interval. Throws GeometryError(VanishingCurvature) when a
/// stage lands on a point without a Frenet frame.
std::vector<ThetaSample> theta_rmf(const CurveDef& c, double theta0, std::span<const double> grid,
                                   int substeps = 4);

struct ReflectedFrame {
  Vec3 U;
  Vec3 V;
};

/// Discrete RMF propagation by two reflections per step. `tangents` must be
/// unit vectors and U0 must be a unit vector perpendicular to tangents[0].
std::vector<ReflectedFrame> double_reflection(std::span<const Vec3> points, std::span<const Vec3> tangents,
                                              const Vec3& U0);

/// Frame derivatives per unit arc length. phi = theta'/|r'| + tau is the
/// normal-plane rotation rate; it vanishes for the RMF.
struct FrameDerivatives {
  Vec3 dT;
  Vec3 dU;
  Vec3 dV;
  double phi = 0.0;
};

FrameDerivatives frame_derivatives(const FrenetData& fd, const AdaptedFrame& af);

// --------------------------------------------------------------------------
// FrameField: adapted frames along a whole curve for a given policy.
// --------------------------------------------------------------------------

enum class FrenetStatus {
  Defined,
  /// kappa == 0 on every grid node: a fixed reference normal stands in for N.
  StraightLine,
  /// Isolated kappa == 0 region crossed by double reflection. N and B are
  /// substitutes consistent with the carried theta; kappa = tau = 0.
  Gap,
};

struct FramePoint {
  double t = 0.0;
  FrenetData frenet;
  AdaptedFrame frame;
  FrenetStatus status = FrenetStatus::Defined;
};

struct FrameFieldOptions {
  int substeps = 4;
  bool double_reflection_fallback = true;
  /// Double-reflection steps per RK4 substep when crossing a gap.
  int reflection_refinement = 16;
};

class FrameField {
 public:
  FrameField(CurveDef curve, ThetaPolicy policy, std::vector<double> grid, FrameFieldOptions options = {});

  const CurveDef& curve() const { return curve_; }
  const ThetaPolicy& policy() const { return policy_; }
  bool is_rmf() const { return std::holds_alternative<RmfTheta>(policy_); }
  bool straight_line() const { return straight_line_; }
  const std::vector<double>& grid() const { return grid_; }
  const std::vector<FramePoint>& nodes() const { return nodes_; }

  /// Frame at an arbitrary parameter; RMF frames are integrated from the
  /// closest grid node at or below t.
  FramePoint at(double t) const;

  /// RMF frames are integrated from `base` to t. Finite-difference stencils
  /// use this so that all stencil points share one anchor.
  FramePoint continue_from(const FramePoint& base, double t) const;

 private:
  FramePoint explicit_point(double t) const;
  FramePoint from_theta(double t, const CurveJet& jet, double theta) const;
  FramePoint propagate(const FramePoint& base, double t, int steps) const;
  FramePoint reflect_across(const FramePoint& base, double t, int steps) const;
  int steps_for(double from, double to) const;

  CurveDef curve_;
  ThetaPolicy policy_;
  std::vector<double> grid_;
  FrameFieldOptions options_;
  bool straight_line_ = false;
  double substep_length_ = 0.0;
  Vec3 reference_normal_ = Vec3::Zero();
  std::vector<FramePoint> nodes_;
};

/// Deterministic unit vector perpendicular to `t`: the world axis least
/// aligned with t, with its t-component removed.
Vec3 reference_normal(const Vec3& t);

}  // namespace ruledgeo
