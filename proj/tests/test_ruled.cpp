#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ruledgeo/errors.hpp"
#include "ruledgeo/ruled.hpp"
#include "support.hpp"

using namespace ruledgeo;
using namespace testing_support;

namespace {

bool near(const Vec3& a, const Vec3& b, double tol) { return (a - b).cwiseAbs().maxCoeff() < tol; }

constexpr double kTwoPi = 2 * std::numbers::pi;

}  // namespace

TEST_CASE("director in world coordinates") {
  const FrenetData fd = frenet(helix(), 0.0);
  CHECK(near(ruledgeo::director(director("1", "0", "0"), adapted_frame(fd, 0.4, 0), 0.0), fd.T, 1e-15));
  CHECK(near(ruledgeo::director(director("0", "1", "0"), adapted_frame(fd, 0.0, 0), 0.0), fd.N, 1e-15));
  CHECK_THROWS_AS(ruledgeo::director(director("s", "0", "s^2"), adapted_frame(fd, 0, 0), 0.0), GeometryError);

  // Example 1 director at s = 1: coefficients (1, 1, 1) in the frame with
  // theta = atan(1).
  const RuledSurface ex1(surface(helix(), explicit_theta("atan(s)"), director("s^2", "s^2", "s")), 11);
  const SurfaceLocal l = ex1.local(1.0);
  CHECK(near(l.x.value, Vec3(1, 1, 1), 1e-15));
  const FrenetData f1 = frenet(helix(), 1.0);
  const double c = std::cos(std::numbers::pi / 4), s = std::sin(std::numbers::pi / 4);
  const Vec3 expected = f1.T + (c * f1.N + s * f1.B) + (-s * f1.N + c * f1.B);
  CHECK(near(ex1.director(1.0), expected, 1e-14));
  // Independently evaluated: X(1) = T + sqrt(2) B.
  CHECK(near(ex1.director(1.0), Vec3(0.4471331523622798, -0.2871008954712599, 1.648528137423857), 1e-14));
}

TEST_CASE("closed-form director derivative") {
  const FrenetData fd = frenet(helix(), 0.7);
  SUBCASE("X = T") {
    const AdaptedFrame af = adapted_frame(fd, 0.3, -0.8);
    const Vec3 d = director_derivative_closed(director("1", "0", "0"), fd, af, 0.7);
    CHECK(near(d, Vec3(0, 0.6 * std::cos(0.3), -0.6 * std::sin(0.3)), 1e-15));
    CHECK(d.norm() == doctest::Approx(0.6));
  }
  SUBCASE("X = U under the RMF") {
    const AdaptedFrame af = adapted_frame(fd, 0.3, -0.8);
    CHECK(near(director_derivative_closed(director("0", "1", "0"), fd, af, 0.7), Vec3(-0.6 * std::cos(0.3), 0, 0),
               1e-15));
  }
  SUBCASE("refused off the RMF") {
    CHECK_THROWS_AS(director_derivative_closed(director("0", "1", "0"), fd, adapted_frame(fd, 0.3, 0.0), 0.7),
                    GeometryError);
  }
  SUBCASE("x2 = s^2, x3 = s at s = 1 versus finite differences") {
    const RuledSurface rs(surface(helix(0, 2), rmf(), director("0", "s^2", "s")), 21);
    const FramePoint p = rs.frames().at(1.0);
    const Vec3 closed = director_derivative_closed(rs.definition().director, p.frenet, p.frame, 1.0);
    const double h = kFiniteDifferenceStep;
    auto X = [&](double t) {
      const FramePoint q = rs.frames().continue_from(p, t);
      return Vec3(t * t * q.frame.U + t * q.frame.V);
    };
    const Vec3 fd_world = (X(1 + h) - X(1 - h)) / (2 * h);
    const Vec3 fd_frame(fd_world.dot(p.frame.T), fd_world.dot(p.frame.U), fd_world.dot(p.frame.V));
    CHECK(near(closed, fd_frame, 1e-6));
  }
}

TEST_CASE("numeric director derivative") {
  const FrenetData fd = frenet(helix(), 0.7);
  const DirectorField d = director("s", "cos(s)", "s^2");
  const AdaptedFrame af = adapted_frame(fd, -0.56, -0.8);
  const Vec3 closed = director_derivative_closed(d, fd, af, 0.7);
  const Vec3 world = director_derivative_numeric(d, fd, af, 0.7);
  CHECK(near(world, closed[0] * af.T + closed[1] * af.U + closed[2] * af.V, 1e-9));

  const AdaptedFrame frozen = adapted_frame(fd, 0.3, 0.0);
  const Vec3 dU = director_derivative_numeric(director("0", "1", "0"), fd, frozen, 0.7);
  CHECK(near(dU, -0.6 * std::cos(0.3) * frozen.T + 0.8 * frozen.V, 1e-15));

  const RuledSurface line(surface(curve("s", "0", "0", 0, 1), explicit_theta("0.5"), director("0", "1", "1")), 5);
  CHECK(line.director_derivative_numeric(0.5).norm() < 1e-15);
}

TEST_CASE("distribution parameter") {
  SUBCASE("X = T") {
    const RuledSurface rs(surface(helix(0, kTwoPi), rmf(), director("1", "0", "0")), 33);
    for (double s : rs.s_grid()) CHECK(std::abs(*rs.distribution_parameter(s).value) < 1e-15);
  }
  SUBCASE("X = U under the RMF") {
    const RuledSurface rs(surface(helix(0, kTwoPi), rmf(), director("0", "1", "0")), 33);
    for (double s : rs.s_grid()) CHECK(std::abs(*rs.distribution_parameter(s).value) < 1e-12);
  }
  SUBCASE("x2 = s^2, x3 = s at s = 1") {
    const RuledSurface rs(surface(helix(0, 2), rmf(), director("0", "s^2", "s")), 21);
    const DistributionParameter p = rs.distribution_parameter(1.0);
    CHECK(p.closed_numerator == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(p.det == doctest::Approx(-1.0).epsilon(1e-10));
    const SurfaceLocal l = rs.local(1.0);
    const double theta = l.frame.frame.theta;
    // |X'|^2 from the frame components of X' (x1 = 0 case).
    const Vec3 dx(-0.6 * (std::cos(theta) * 1 - std::sin(theta) * 1), 2.0, 1.0);
    CHECK(p.derivative_norm_sq == doctest::Approx(dx.squaredNorm()).epsilon(1e-12));
    CHECK(*p.value == doctest::Approx(-1.0 / dx.squaredNorm()).epsilon(1e-10));
    // 3x3 determinant oracle in world coordinates.
    Eigen::Matrix3d m;
    m.col(0) = l.frame.frame.T;
    m.col(1) = l.X;
    m.col(2) = rs.director_derivative_numeric(1.0);
    CHECK(m.determinant() == doctest::Approx(-1.0).epsilon(1e-10));
  }
}

TEST_CASE("surface points and normals") {
  const RuledSurface t(surface(helix(), rmf(), director("1", "0", "0")), 11);
  CHECK(near(t.point(0.0, 0.0), Vec3(0.6, 0, 0), 1e-15));
  CHECK(near(t.point(0.0, 1.0), Vec3(0.6, 0.6, 0.8), 1e-15));
  CHECK(near(t.point(0.3, 2.0) - t.point(0.3, 1.0), t.director(0.3), 1e-15));
  try {
    t.normal(0.0, 0.0);
    FAIL("expected SingularPoint");
  } catch (const GeometryError& e) {
    CHECK(e.kind() == GeometryErrorKind::SingularPoint);
  }
  CHECK_THROWS_AS(t.normal_closed(0.0), GeometryError);
  CHECK_THROWS_AS(t.point(6.0, 0.0), GeometryError);

  const RuledSurface u(surface(helix(), rmf(), director("0", "1", "0")), 11);
  CHECK(near(u.normal(1.0, 0.0), u.local(1.0).frame.frame.V, 1e-9));

  const RuledSurface uv(surface(helix(), rmf(), director("0", "sqrt(2)/2", "sqrt(2)/2")), 11);
  const AdaptedFrame f = uv.local(1.0).frame.frame;
  CHECK(near(uv.normal(1.0, 0.0), (f.V - f.U) / std::sqrt(2.0), 1e-9));
  CHECK(near(uv.normal_closed(1.0), (f.V - f.U) / std::sqrt(2.0), 1e-15));
}

TEST_CASE("fundamental forms") {
  const RuledSurface plane(surface(curve("s", "0", "0", -1, 1), rmf(), director("0", "1", "0")), 5);
  // Reference normal of the x-axis is the y-axis, so the surface is the plane z = 0.
  const FundamentalForms ff = plane.fundamental_forms(0.2, 0.3);
  CHECK(ff.E == doctest::Approx(1));
  CHECK(ff.G == doctest::Approx(1));
  CHECK(std::abs(ff.F) < 1e-12);
  CHECK(std::abs(ff.e) < 1e-6);
  CHECK(std::abs(ff.f) < 1e-6);
  CHECK(std::abs(ff.g) < 1e-6);

  const RuledSurface tangent_dev(surface(helix(), rmf(), director("1", "0", "0")), 21);
  CHECK(std::abs(tangent_dev.fundamental_forms(1.0, 0.5).K) < 1e-6);

  const RuledSurface helicoid(surface(helix(), explicit_theta("0"), director("0", "1", "0")), 21);
  CHECK(helicoid.fundamental_forms(1.0, 0.0).K < -1e-3);
}

TEST_CASE("special-case detection") {
  auto sc = [](const char* a, const char* b, const char* c) {
    return detect_special_case(RuledSurface(surface(helix(1, 5), rmf(), director(a, b, c)), 9));
  };
  CHECK(sc("1", "0", "0") == SpecialCase::AlongT);
  CHECK(sc("0", "2", "0") == SpecialCase::AlongU);
  CHECK(sc("0", "0", "s") == SpecialCase::AlongV);
  CHECK(sc("s", "1", "0") == SpecialCase::SpanTU);
  CHECK(sc("1", "0", "s") == SpecialCase::SpanTV);
  CHECK(sc("0", "2*s", "s") == SpecialCase::SpanUV);
  CHECK(sc("1", "1", "1") == SpecialCase::General);
  CHECK_THROWS_AS(sc("0", "0", "0"), GeometryError);
}

TEST_CASE("classification verdicts") {
  auto verdict = [](RuledSurfaceDef def, int n = 41) { return classify(RuledSurface(std::move(def), n)); };

  const ClassificationReport t = verdict(surface(helix(0, kTwoPi), rmf(), director("1", "0", "0")));
  CHECK(t.developable == Verdict::Yes);
  CHECK(t.special_case == SpecialCase::AlongT);
  CHECK(t.corollary6.max_abs_P < 1e-15);
  CHECK(t.K_consistent);

  const ClassificationReport pos = verdict(surface(helix(1, 5), rmf(), director("0", "2*s", "s")));
  CHECK(pos.developable == Verdict::Yes);
  CHECK(pos.corollary9.applies);
  CHECK(pos.corollary9.max_residual < 1e-12);
  CHECK(pos.K_consistent);

  const ClassificationReport neg = verdict(surface(helix(1, 5), rmf(), director("0", "s^2", "s")));
  CHECK(neg.developable == Verdict::No);
  CHECK(neg.max_abs_det > 0.1);
  CHECK(neg.K_consistent);

  // span{T, U} on a circle whose RMF angle stays at pi.
  const ClassificationReport c7 =
      verdict(surface(curve("cos(s)", "sin(s)", "0", 0, 6), rmf(std::numbers::pi), director("s", "1", "0")));
  CHECK(c7.developable == Verdict::Yes);
  CHECK(c7.corollary7.applies);
  CHECK(c7.corollary7.sin_theta_vanishes);

  const ClassificationReport c8 =
      verdict(surface(curve("cos(s)", "sin(s)", "0", 0, 6), rmf(std::numbers::pi / 2), director("1", "0", "1")));
  CHECK(c8.developable == Verdict::Yes);
  CHECK(c8.corollary8.applies);
  CHECK(c8.corollary8.cos_theta_vanishes);

  const ClassificationReport gen = verdict(surface(helix(), explicit_theta("atan(s)"), director("s^2", "s^2", "s")));
  CHECK(gen.developable == Verdict::No);
  CHECK_FALSE(gen.max_closed_vs_numeric_det.has_value());
}

TEST_CASE("property: developability is invariant under scaling the director") {
  for (const char* k : {"3", "-0.25"}) {
    for (auto [a, b, c] : {std::tuple{"0", "2*s", "s"}, std::tuple{"0", "s^2", "s"}, std::tuple{"1", "0", "0"}}) {
      const ClassificationReport base = classify(RuledSurface(surface(helix(1, 5), rmf(), director(a, b, c)), 33));
      const std::string ka = std::string(k) + "*(" + a + ")", kb = std::string(k) + "*(" + b + ")",
                        kc = std::string(k) + "*(" + c + ")";
      const ClassificationReport scaled =
          classify(RuledSurface(surface(helix(1, 5), rmf(), director(ka, kb, kc)), 33));
      CHECK(base.developable == scaled.developable);
    }
  }
}

TEST_CASE("property: RMF closed numerator equals det(T, X, X')") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> c(-1.5, 1.5);
  for (int k = 0; k < 5; ++k) {
    char x1[64], x2[64], x3[64];
    std::snprintf(x1, sizeof x1, "%.3f + %.3f*s^2", c(rng), c(rng));
    std::snprintf(x2, sizeof x2, "%.3f*sin(s) + %.3f", c(rng), c(rng));
    std::snprintf(x3, sizeof x3, "%.3f*s + %.3f*cos(2*s)", c(rng), c(rng));
    const RuledSurface rs(surface(helix(0, kTwoPi), rmf(c(rng)), director(x1, x2, x3)), 65);
    for (double s : rs.s_grid()) {
      const DistributionParameter p = rs.distribution_parameter(s);
      CHECK(std::abs(p.det - p.closed_numerator) < 1e-8);
    }
  }
}
