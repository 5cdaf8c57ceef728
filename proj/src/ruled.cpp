#include "ruledgeo/ruled.hpp"

#include <Eigen/Geometry>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ruledgeo/errors.hpp"

namespace ruledgeo {

namespace {

/// |phi| above this means the frame is not rotation minimizing.
constexpr double kPhiTolerance = 1e-9;

}  // namespace

DirectorCoefficients director_coefficients(const DirectorField& d, double s, double speed) {
  const Jet3 x1 = eval_jet(d.x1, s);
  const Jet3 x2 = eval_jet(d.x2, s);
  const Jet3 x3 = eval_jet(d.x3, s);
  return {Vec3(x1.value, x2.value, x3.value), Vec3(x1.d1, x2.d1, x3.d1) / speed};
}

Vec3 director(const DirectorField& d, const AdaptedFrame& af, double s) {
  const Vec3 x(eval(d.x1, s), eval(d.x2, s), eval(d.x3, s));
  const Vec3 X = x[0] * af.T + x[1] * af.U + x[2] * af.V;
  if (X.norm() <= kRegularityEps) {
    throw GeometryError(GeometryErrorKind::ZeroDirector, "|X| vanishes at s=" + number_text(s));
  }
  return X;
}

Vec3 director_derivative_closed(const DirectorField& d, const FrenetData& fd, const AdaptedFrame& af, double s) {
  const double phi = af.theta_prime / fd.speed + fd.tau;
  if (std::abs(phi) > kPhiTolerance) {
    throw GeometryError(GeometryErrorKind::FormulaNotApplicable,
                        "closed-form X' assumes a rotation minimizing frame; phi = " + number_text(phi));
  }
  const DirectorCoefficients x = director_coefficients(d, s, fd.speed);
  const double c = std::cos(af.theta);
  const double sn = std::sin(af.theta);
  const double k = fd.kappa;
  return {x.d_ds[0] - k * x.value[1] * c + k * x.value[2] * sn,
          k * x.value[0] * c + x.d_ds[1],
          x.d_ds[2] - k * x.value[0] * sn};
}

Vec3 director_derivative_numeric(const DirectorField& d, const FrenetData& fd, const AdaptedFrame& af, double s) {
  const DirectorCoefficients x = director_coefficients(d, s, fd.speed);
  const FrameDerivatives df = frame_derivatives(fd, af);
  return x.d_ds[0] * af.T + x.d_ds[1] * af.U + x.d_ds[2] * af.V + x.value[0] * df.dT + x.value[1] * df.dU +
         x.value[2] * df.dV;
}

double closed_drall_numerator(const DirectorCoefficients& x, double kappa, double theta) {
  const double x1 = x.value[0], x2 = x.value[1], x3 = x.value[2];
  return (x2 * x.d_ds[2] - x3 * x.d_ds[1]) - kappa * x1 * (x2 * std::sin(theta) + x3 * std::cos(theta));
}

const char* to_string(SpecialCase c) {
  switch (c) {
    case SpecialCase::AlongT: return "X=T";
    case SpecialCase::AlongU: return "X=U";
    case SpecialCase::AlongV: return "X=V";
    case SpecialCase::SpanTU: return "span{T,U}";
    case SpecialCase::SpanTV: return "span{T,V}";
    case SpecialCase::SpanUV: return "span{U,V}";
    case SpecialCase::General: return "general";
  }
  return "general";
}

std::optional<double> special_case_drall(SpecialCase sc, const DirectorCoefficients& x, double kappa, double theta) {
  const double x1 = x.value[0], x2 = x.value[1], x3 = x.value[2];
  const double dx1 = x.d_ds[0], dx2 = x.d_ds[1], dx3 = x.d_ds[2];
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double k = kappa;
  double numerator = 0.0;
  double denominator = 0.0;
  switch (sc) {
    case SpecialCase::AlongT:
    case SpecialCase::SpanTU: {
      numerator = -k * x1 * x2 * s;
      const double a = dx1 - k * x2 * c, b = dx2 + k * x1 * c, e = k * x1 * s;
      denominator = a * a + b * b + e * e;
      break;
    }
    case SpecialCase::SpanTV: {
      numerator = -k * x1 * x3 * c;
      const double a = dx1 + k * x3 * s, b = k * x1 * c, e = dx3 - k * x1 * s;
      denominator = a * a + b * b + e * e;
      break;
    }
    case SpecialCase::AlongU:
    case SpecialCase::AlongV:
    case SpecialCase::SpanUV: {
      numerator = x2 * dx3 - x3 * dx2;
      const double a = k * x3 * s - k * x2 * c;
      denominator = a * a + dx2 * dx2 + dx3 * dx3;
      break;
    }
    case SpecialCase::General: return std::nullopt;
  }
  if (std::sqrt(denominator) <= kRegularityEps) return std::nullopt;
  return numerator / denominator;
}

// --------------------------------------------------------------------------
// RuledSurface
// --------------------------------------------------------------------------

RuledSurface::RuledSurface(RuledSurfaceDef def, int n_s, FrameFieldOptions options)
    : RuledSurface(def, uniform_grid(def.curve.t_min, def.curve.t_max, n_s), options) {}

RuledSurface::RuledSurface(RuledSurfaceDef def, std::vector<double> s_grid, FrameFieldOptions options)
    : def_(std::move(def)), frames_(def_.curve, def_.theta, std::move(s_grid), options) {
  if (!(def_.v_min < def_.v_max)) throw std::invalid_argument("v_min must be below v_max");
}

void RuledSurface::check_range(double s) const {
  const CurveDef& c = def_.curve;
  const double slack = 1e-12 * (c.t_max - c.t_min);
  if (!(s >= c.t_min - slack && s <= c.t_max + slack)) {
    throw GeometryError(GeometryErrorKind::ParameterOutOfRange, "s=" + number_text(s) + " outside curve range");
  }
}

SurfaceLocal RuledSurface::local(double s) const {
  check_range(s);
  return local(frames_.at(s));
}

SurfaceLocal RuledSurface::local(const FramePoint& frame) const {
  SurfaceLocal l;
  l.frame = frame;
  l.x = director_coefficients(def_.director, frame.t, frame.frenet.speed);
  const AdaptedFrame& af = frame.frame;
  l.X = l.x.value[0] * af.T + l.x.value[1] * af.U + l.x.value[2] * af.V;
  l.dframe = frame_derivatives(frame.frenet, af);
  l.dX = l.x.d_ds[0] * af.T + l.x.d_ds[1] * af.U + l.x.d_ds[2] * af.V + l.x.value[0] * l.dframe.dT +
         l.x.value[1] * l.dframe.dU + l.x.value[2] * l.dframe.dV;
  return l;
}

Vec3 RuledSurface::director(double s) const {
  check_range(s);
  return ruledgeo::director(def_.director, frames_.at(s).frame, s);
}

Vec3 RuledSurface::director_derivative_closed(double s) const {
  check_range(s);
  const FramePoint fp = frames_.at(s);
  return ruledgeo::director_derivative_closed(def_.director, fp.frenet, fp.frame, s);
}

Vec3 RuledSurface::director_derivative_numeric(double s) const {
  check_range(s);
  const FramePoint fp = frames_.at(s);
  return ruledgeo::director_derivative_numeric(def_.director, fp.frenet, fp.frame, s);
}

DistributionParameter RuledSurface::distribution_parameter(double s) const {
  return distribution_parameter(local(s));
}

DistributionParameter RuledSurface::distribution_parameter(const SurfaceLocal& l) const {
  DistributionParameter p;
  // det(T, X, X') expanded in the orthonormal frame {T, U, V}.
  const AdaptedFrame& f = l.frame.frame;
  p.det = l.x.value[1] * l.dX.dot(f.V) - l.x.value[2] * l.dX.dot(f.U);
  p.closed_numerator = closed_drall_numerator(l.x, l.frame.frenet.kappa, l.frame.frame.theta);
  p.derivative_norm_sq = l.dX.squaredNorm();
  p.phi = l.dframe.phi;
  if (std::sqrt(p.derivative_norm_sq) > kRegularityEps) p.value = p.det / p.derivative_norm_sq;
  return p;
}

Vec3 RuledSurface::point(double s, double v) const {
  check_range(s);
  return point_near(frames_.at(s), s, v);
}

Vec3 RuledSurface::point_near(const FramePoint& base, double s, double v) const {
  const FramePoint fp = frames_.continue_from(base, s);
  const Vec3 x(eval(def_.director.x1, s), eval(def_.director.x2, s), eval(def_.director.x3, s));
  return fp.frenet.position + v * (x[0] * fp.frame.T + x[1] * fp.frame.U + x[2] * fp.frame.V);
}

Vec3 RuledSurface::normal(double s, double v) const {
  check_range(s);
  return normal_near(frames_.at(s), s, v);
}

Vec3 RuledSurface::normal_near(const FramePoint& base, double s, double v) const {
  const SurfaceLocal l = local(frames_.continue_from(base, s));
  const Vec3 d_s = l.frame.frenet.speed * (l.frame.frame.T + v * l.dX);
  const Vec3 n = d_s.cross(l.X);
  const double norm = n.norm();
  if (norm <= kRegularityEps) {
    throw GeometryError(GeometryErrorKind::SingularPoint,
                        "|phi_s x phi_v| vanishes at (s, v) = (" + number_text(s) + ", " + number_text(v) + ")");
  }
  return n / norm;
}

Vec3 RuledSurface::normal_closed(double s) const {
  const SurfaceLocal l = local(s);
  const double x2 = l.x.value[1], x3 = l.x.value[2];
  const double w2 = x2 * x2 + x3 * x3;
  if (w2 <= kRegularityEps) {
    throw GeometryError(GeometryErrorKind::TangentRuling, "x2 = x3 = 0 at s=" + number_text(s));
  }
  return (x2 * l.frame.frame.V - x3 * l.frame.frame.U) / std::sqrt(w2);
}

FundamentalForms RuledSurface::fundamental_forms(double s, double v) const {
  check_range(s);
  const FramePoint base = frames_.at(s);
  const double h = kFiniteDifferenceStep;
  auto P = [&](double ds, double dv) { return point_near(base, s + ds, v + dv); };

  const Vec3 p0 = P(0, 0);
  const Vec3 ps = P(h, 0), ms = P(-h, 0), pv = P(0, h), mv = P(0, -h);
  const Vec3 phi_s = (ps - ms) / (2 * h);
  const Vec3 phi_v = (pv - mv) / (2 * h);
  const Vec3 phi_ss = (ps - 2 * p0 + ms) / (h * h);
  const Vec3 phi_vv = (pv - 2 * p0 + mv) / (h * h);
  const Vec3 phi_sv = (P(h, h) - P(h, -h) - P(-h, h) + P(-h, -h)) / (4 * h * h);

  const Vec3 cross = phi_s.cross(phi_v);
  const double norm = cross.norm();
  if (norm <= kRegularityEps) {
    throw GeometryError(GeometryErrorKind::SingularPoint,
                        "degenerate tangent plane at (s, v) = (" + number_text(s) + ", " + number_text(v) + ")");
  }
  const Vec3 n = cross / norm;

  FundamentalForms ff;
  ff.E = phi_s.dot(phi_s);
  ff.F = phi_s.dot(phi_v);
  ff.G = phi_v.dot(phi_v);
  ff.e = phi_ss.dot(n);
  ff.f = phi_sv.dot(n);
  ff.g = phi_vv.dot(n);
  const double det1 = ff.E * ff.G - ff.F * ff.F;
  ff.K = (ff.e * ff.g - ff.f * ff.f) / det1;
  ff.H = (ff.e * ff.G - 2 * ff.f * ff.F + ff.g * ff.E) / (2 * det1);
  return ff;
}

// --------------------------------------------------------------------------
// classify
// --------------------------------------------------------------------------

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Yes: return "yes";
    case Verdict::No: return "no";
    case Verdict::Borderline: return "borderline";
  }
  return "borderline";
}

namespace {

double drall_of(const Vec3& T, const Vec3& Y, const Vec3& dY) {
  const double n2 = dY.squaredNorm();
  if (std::sqrt(n2) <= kRegularityEps) return 0.0;
  return T.dot(Y.cross(dY)) / n2;
}

SpecialCase detect_case(bool z1, bool z2, bool z3) {
  if (z1 && z2 && z3) throw GeometryError(GeometryErrorKind::ZeroDirector, "director vanishes on the whole grid");
  if (z2 && z3) return SpecialCase::AlongT;
  if (z1 && z3) return SpecialCase::AlongU;
  if (z1 && z2) return SpecialCase::AlongV;
  if (z3) return SpecialCase::SpanTU;
  if (z2) return SpecialCase::SpanTV;
  if (z1) return SpecialCase::SpanUV;
  return SpecialCase::General;
}

Vec3 max_abs_coefficients(const RuledSurface& surface) {
  Vec3 m = Vec3::Zero();
  for (const FramePoint& fp : surface.frames().nodes()) {
    const Vec3 x(eval(surface.definition().director.x1, fp.t), eval(surface.definition().director.x2, fp.t),
                 eval(surface.definition().director.x3, fp.t));
    m = m.cwiseMax(x.cwiseAbs());
  }
  return m;
}

}  // namespace

SpecialCase detect_special_case(const RuledSurface& surface) {
  const Vec3 m = max_abs_coefficients(surface);
  return detect_case(m[0] < kRegularityEps, m[1] < kRegularityEps, m[2] < kRegularityEps);
}

ClassificationReport classify(const RuledSurface& surface, const ClassifyOptions& options) {
  ClassificationReport r;
  r.tol_dev = options.tol_dev;
  r.tol_K = options.tol_K;
  r.rmf_policy = surface.frames().is_rmf();

  const auto& nodes = surface.frames().nodes();
  std::vector<SurfaceLocal> locals;
  locals.reserve(nodes.size());
  for (const FramePoint& fp : nodes) locals.push_back(surface.local(fp));
  r.samples = locals.size();
  const Vec3 max_abs_x = max_abs_coefficients(surface);
  const bool z1 = max_abs_x[0] < kRegularityEps;
  const bool z2 = max_abs_x[1] < kRegularityEps;
  const bool z3 = max_abs_x[2] < kRegularityEps;
  r.special_case = detect_case(z1, z2, z3);
  r.corollary7.applies = z3;
  r.corollary8.applies = z2;
  r.corollary9.applies = z1;

  double max_kappa = 0.0, max_x1x2 = 0.0, max_x1x3 = 0.0, max_sin = 0.0, max_cos = 0.0;
  double closed_gap = 0.0, special_gap = 0.0;
  bool special_compared = false;
  for (const SurfaceLocal& l : locals) {
    const DistributionParameter p = surface.distribution_parameter(l);
    const double kappa = l.frame.frenet.kappa;
    const double theta = l.frame.frame.theta;
    const double x1 = l.x.value[0], x2 = l.x.value[1], x3 = l.x.value[2];

    r.max_abs_det = std::max(r.max_abs_det, std::abs(p.det));
    if (!p.value) ++r.cylindrical_points;
    closed_gap = std::max(closed_gap, std::abs(p.det - p.closed_numerator));

    if (p.value) r.corollary6.max_abs_P = std::max(r.corollary6.max_abs_P, std::abs(*p.value));
    r.corollary6.max_abs_phi = std::max(r.corollary6.max_abs_phi, std::abs(p.phi));
    const AdaptedFrame& af = l.frame.frame;
    const double pu = drall_of(af.T, af.U, l.dframe.dU);
    const double pv = drall_of(af.T, af.V, l.dframe.dV);
    r.corollary6.max_abs_PU_minus_PV = std::max(r.corollary6.max_abs_PU_minus_PV, std::abs(pu - pv));

    r.corollary7.max_residual = std::max(r.corollary7.max_residual, std::abs(kappa * x1 * x2 * std::sin(theta)));
    r.corollary8.max_residual = std::max(r.corollary8.max_residual, std::abs(kappa * x1 * x3 * std::cos(theta)));
    r.corollary9.max_residual =
        std::max(r.corollary9.max_residual, std::abs(x2 * l.x.d_ds[2] - x3 * l.x.d_ds[1]));
    max_kappa = std::max(max_kappa, kappa);
    max_x1x2 = std::max(max_x1x2, std::abs(x1 * x2));
    max_x1x3 = std::max(max_x1x3, std::abs(x1 * x3));
    max_sin = std::max(max_sin, std::abs(std::sin(theta)));
    max_cos = std::max(max_cos, std::abs(std::cos(theta)));

    if (r.special_case != SpecialCase::General && p.value) {
      if (auto special = special_case_drall(r.special_case, l.x, kappa, theta)) {
        special_gap = std::max(special_gap, std::abs(*special - *p.value));
        special_compared = true;
      }
    }
  }
  r.corollary7.kappa_vanishes = r.corollary8.kappa_vanishes = max_kappa < kRegularityEps;
  r.corollary7.x1x2_vanishes = max_x1x2 < kRegularityEps;
  r.corollary8.x1x3_vanishes = max_x1x3 < kRegularityEps;
  r.corollary7.sin_theta_vanishes = max_sin < kRegularityEps;
  r.corollary8.cos_theta_vanishes = max_cos < kRegularityEps;
  if (r.rmf_policy) r.max_closed_vs_numeric_det = closed_gap;
  if (special_compared) r.max_special_vs_general_P = special_gap;

  if (r.max_abs_det < options.tol_dev) {
    r.developable = Verdict::Yes;
  } else if (r.max_abs_det > 10.0 * options.tol_dev) {
    r.developable = Verdict::No;
  } else {
    r.developable = Verdict::Borderline;
  }

  // Gaussian curvature at cell midpoints in s and interior v samples.
  const auto& grid = surface.s_grid();
  const auto& def = surface.definition();
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double s = 0.5 * (grid[i] + grid[i + 1]);
    for (int j = 0; j < options.n_v; ++j) {
      const double v = def.v_min + (def.v_max - def.v_min) * (j + 1) / (options.n_v + 1);
      try {
        const FundamentalForms ff = surface.fundamental_forms(s, v);
        r.max_abs_K = std::max(r.max_abs_K, std::abs(ff.K));
        ++r.K_samples;
      } catch (const GeometryError& e) {
        if (e.kind() != GeometryErrorKind::SingularPoint) throw;
        ++r.K_singular;
      }
    }
  }
  switch (r.developable) {
    case Verdict::Yes: r.K_consistent = r.max_abs_K < options.tol_K; break;
    case Verdict::No: r.K_consistent = r.max_abs_K > options.tol_K; break;
    case Verdict::Borderline: r.K_consistent = true; break;
  }
  return r;
}

ClassificationReport classify(const RuledSurfaceDef& def, int n_s, int n_v, double tol_dev) {
  ClassifyOptions options;
  options.n_v = n_v;
  options.tol_dev = tol_dev;
  return classify(RuledSurface(def, n_s), options);
}

}  // namespace ruledgeo
