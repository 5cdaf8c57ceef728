#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ruledgeo/curve.hpp"
#include "ruledgeo/frame.hpp"

namespace ruledgeo {

/// Director X = x1 T + x2 U + x3 V in adapted-frame coordinates.
struct DirectorField {
  Expr x1;
  Expr x2;
  Expr x3;
};

struct RuledSurfaceDef {
  CurveDef curve;
  ThetaPolicy theta;
  DirectorField director;
  double v_min = -1.0;
  double v_max = 1.0;
};

/// Director coefficients and their derivatives per unit arc length.
struct DirectorCoefficients {
  Vec3 value;
  Vec3 d_ds;
};

DirectorCoefficients director_coefficients(const DirectorField& d, double s, double speed);

/// X in world coordinates. Throws GeometryError(ZeroDirector) when |X| is
/// below kRegularityEps.
Vec3 director(const DirectorField& d, const AdaptedFrame& af, double s);

/// Frame components (T, U, V) of dX/ds from the RMF derivative rules.
/// Refused (FormulaNotApplicable) when the frame rotates in the normal plane.
Vec3 director_derivative_closed(const DirectorField& d, const FrenetData& fd, const AdaptedFrame& af, double s);

/// dX/ds in world coordinates by the product rule with the general adapted
/// frame derivatives; valid for any theta policy.
Vec3 director_derivative_numeric(const DirectorField& d, const FrenetData& fd, const AdaptedFrame& af, double s);

/// Drall numerator from the RMF closed form:
/// (x2 x3' - x3 x2') - kappa x1 (x2 sin(theta) + x3 cos(theta)).
double closed_drall_numerator(const DirectorCoefficients& x, double kappa, double theta);

enum class SpecialCase { AlongT, AlongU, AlongV, SpanTU, SpanTV, SpanUV, General };

const char* to_string(SpecialCase c);

/// Drall from the reduced formulas for directors confined to a coordinate
/// plane of the RMF. Returns nullopt for SpecialCase::General or when the
/// denominator vanishes.
std::optional<double> special_case_drall(SpecialCase c, const DirectorCoefficients& x, double kappa, double theta);

struct DistributionParameter {
  /// det(T, X, X') with ' = d/ds.
  double det = 0.0;
  double closed_numerator = 0.0;
  double derivative_norm_sq = 0.0;
  /// Absent at cylindrical points (|X'| below kRegularityEps).
  std::optional<double> value;
  /// theta'/|r'| + tau; zero for the RMF.
  double phi = 0.0;
};

struct FundamentalForms {
  double E = 0.0, F = 0.0, G = 0.0;
  double e = 0.0, f = 0.0, g = 0.0;
  double K = 0.0, H = 0.0;
};

/// Everything the pointwise formulas need at one parameter value.
struct SurfaceLocal {
  FramePoint frame;
  DirectorCoefficients x;
  Vec3 X;
  Vec3 dX;  ///< world coordinates, per arc length
  FrameDerivatives dframe;
};

inline constexpr double kFiniteDifferenceStep = 1e-4;

class RuledSurface {
 public:
  /// Builds the frame table on `n_s` uniform samples of the curve range.
  RuledSurface(RuledSurfaceDef def, int n_s, FrameFieldOptions options = {});
  RuledSurface(RuledSurfaceDef def, std::vector<double> s_grid, FrameFieldOptions options = {});

  const RuledSurfaceDef& definition() const { return def_; }
  const FrameField& frames() const { return frames_; }
  const std::vector<double>& s_grid() const { return frames_.grid(); }

  SurfaceLocal local(double s) const;
  SurfaceLocal local(const FramePoint& frame) const;

  Vec3 director(double s) const;
  Vec3 director_derivative_closed(double s) const;
  Vec3 director_derivative_numeric(double s) const;
  DistributionParameter distribution_parameter(double s) const;
  DistributionParameter distribution_parameter(const SurfaceLocal& l) const;

  /// r(s) + v X(s); no zero-director check.
  Vec3 point(double s, double v) const;
  /// Unit normal from the partials. Throws GeometryError(SingularPoint).
  Vec3 normal(double s, double v) const;
  /// (x2 V - x3 U)/sqrt(x2^2 + x3^2), the normal along the base curve.
  /// Throws GeometryError(TangentRuling) when x2 = x3 = 0.
  Vec3 normal_closed(double s) const;

  /// Central differences of the parametrization with steps (1e-4, 1e-4).
  FundamentalForms fundamental_forms(double s, double v) const;

  /// Surface point using a frame propagated from `base`; finite-difference
  /// stencils use this so all stencil points share one frame anchor.
  Vec3 point_near(const FramePoint& base, double s, double v) const;
  Vec3 normal_near(const FramePoint& base, double s, double v) const;

 private:
  void check_range(double s) const;

  RuledSurfaceDef def_;
  FrameField frames_;
};

// --------------------------------------------------------------------------
// Classification
// --------------------------------------------------------------------------

/// Which coordinates of the director vanish identically on the s-grid.
/// Throws GeometryError(ZeroDirector) when all three do.
SpecialCase detect_special_case(const RuledSurface& surface);

enum class Verdict { Yes, No, Borderline };

const char* to_string(Verdict v);

struct ClassifyOptions {
  int n_v = 5;
  double tol_dev = 1e-7;
  double tol_K = 1e-5;
};

struct ClassificationReport {
  Verdict developable = Verdict::Borderline;
  double max_abs_det = 0.0;
  double tol_dev = 1e-7;
  std::size_t samples = 0;
  std::size_t cylindrical_points = 0;
  SpecialCase special_case = SpecialCase::General;
  bool rmf_policy = true;

  /// X along T, U or V.
  struct Corollary6 {
    double max_abs_P = 0.0;
    double max_abs_phi = 0.0;
    /// Drall of the surfaces ruled by U and by V along the same frame.
    double max_abs_PU_minus_PV = 0.0;
  } corollary6;

  /// X in span{T,U}: residual kappa x1 x2 sin(theta).
  struct Corollary7 {
    bool applies = false;
    double max_residual = 0.0;
    bool kappa_vanishes = false;
    bool x1x2_vanishes = false;
    bool sin_theta_vanishes = false;
  } corollary7;

  /// X in span{T,V}: residual kappa x1 x3 cos(theta).
  struct Corollary8 {
    bool applies = false;
    double max_residual = 0.0;
    bool kappa_vanishes = false;
    bool x1x3_vanishes = false;
    bool cos_theta_vanishes = false;
  } corollary8;

  /// X in span{U,V}: residual x2 x3' - x3 x2'.
  struct Corollary9 {
    bool applies = false;
    double max_residual = 0.0;
  } corollary9;

  /// max |det - closed numerator|; meaningful under the RMF policy only.
  std::optional<double> max_closed_vs_numeric_det;
  /// max |special-case drall - det/|X'|^2| on the detected span case.
  std::optional<double> max_special_vs_general_P;

  double max_abs_K = 0.0;
  double tol_K = 1e-5;
  std::size_t K_samples = 0;
  std::size_t K_singular = 0;
  bool K_consistent = true;
};

ClassificationReport classify(const RuledSurface& surface, const ClassifyOptions& options = {});
ClassificationReport classify(const RuledSurfaceDef& def, int n_s, int n_v, double tol_dev);

}  // namespace ruledgeo
