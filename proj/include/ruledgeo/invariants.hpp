#pragma once

#include <optional>
#include <span>
#include <vector>

#include "ruledgeo/ruled.hpp"

namespace ruledgeo {

// Base-curve invariants from the adapted-frame closed forms. All take the
// director coefficients x2, x3, the frame angle theta and the curvature
// kappa at the same parameter, and throw GeometryError(TangentRuling) when
// x2 = x3 = 0.

/// kappa (x2 cos(theta) - x3 sin(theta)) / sqrt(x2^2 + x3^2)
double geodesic_curvature(double x2, double x3, double theta, double kappa);

/// -kappa (x3 cos(theta) + x2 sin(theta)) / sqrt(x2^2 + x3^2)
double normal_curvature(double x2, double x3, double theta, double kappa);

/// -kappa^2 / (x2^2 + x3^2) * (sin(2 theta) (x3^2 - x2^2) / 2 - cos(2 theta) x2 x3)
double geodesic_torsion_paper(double x2, double x3, double theta, double kappa);

/// Rodrigues residual <N', N x T> along the base curve (v = 0), per unit arc
/// length. Zero exactly on lines of curvature.
struct LineOfCurvatureResidual {
  /// Central differences of the surface normal.
  double finite_difference = 0.0;
  /// -(theta'/|r'| + tau) + (x2' x3 - x2 x3') / (x2^2 + x3^2)
  double closed = 0.0;
};

LineOfCurvatureResidual line_of_curvature_standard(const RuledSurface& surface, double s);

// Independent world-coordinate oracles along the base curve.

/// <N x T, T'> with T' from central differences of the curve tangent.
double geodesic_curvature_oracle(const RuledSurface& surface, double s);
/// <r'', N> / |r'|^2 with the surface normal at v = 0.
double normal_curvature_oracle(const RuledSurface& surface, double s);
/// <N x N', T'> with N' and T' from central differences.
double geodesic_torsion_oracle(const RuledSurface& surface, double s);

struct BaseCurveInvariants {
  double s = 0.0;
  double kappa = 0.0;
  double tau = 0.0;
  /// Absent inside curvature gaps where the Frenet normal does not exist.
  std::optional<double> theta;
  Vec3 x = Vec3::Zero();
  std::optional<double> P;
  /// Absent when x2 = x3 = 0 (tangent ruling).
  std::optional<double> k_g;
  std::optional<double> k_n;
  std::optional<double> tau_g_paper;
  /// Standard geodesic torsion -rho.
  std::optional<double> tau_g_standard;
  std::optional<double> rho_standard;
  double residual_T1 = 0.0;
  double residual_T2 = 0.0;
  double residual_T3 = 0.0;
};

struct TheoremSummary {
  double tol_inv = 1e-9;
  bool rmf_policy = true;
  std::size_t samples = 0;
  std::size_t tangent_ruling_samples = 0;
  double max_abs_T1 = 0.0;
  double max_abs_T2 = 0.0;
  double max_abs_T3 = 0.0;
  double max_abs_rho = 0.0;
  double max_abs_k_g = 0.0;
  double max_abs_k_n = 0.0;
  bool geodesic = false;
  bool asymptotic = false;
  bool line_of_curvature_paper = false;
  bool line_of_curvature_standard = false;
  /// x2 = x3 = 0 on the whole grid, i.e. X parallel to T.
  bool corollary5 = false;
};

struct TheoremReport {
  std::vector<BaseCurveInvariants> rows;
  TheoremSummary summary;
};

/// Evaluated on the surface's own s-grid.
TheoremReport theorem_report(const RuledSurface& surface, double tol_inv = 1e-9);

// --------------------------------------------------------------------------
// Closed form versus oracle cross-checks.
// --------------------------------------------------------------------------

struct CrossCheck {
  std::string name;
  double max_error = 0.0;
  double tolerance = 0.0;
  std::size_t samples = 0;
  bool skipped = false;
  std::string note;

  bool passed() const { return skipped || max_error < tolerance; }
};

struct CrossCheckOptions {
  double tol_closed = 1e-9;
  double tol_fd = 1e-5;
};

/// Runs every applicable closed-form/oracle comparison on the surface grid.
std::vector<CrossCheck> cross_checks(const RuledSurface& surface, const CrossCheckOptions& options = {});

}  // namespace ruledgeo
