#include "doctest.h"

#include <cmath>
#include <random>

#include "bubbletower/candidate.hpp"

using namespace bubbletower;

namespace {

Vector point4(double a, double b, double c, double d) {
  Vector x(4);
  x << a, b, c, d;
  return x;
}

// finite-difference tangential gradient in a frame, step 1e-4
Vector fd_intrinsic_gradient(const CandidateFunction& K, const Vector& p, double h = 1e-4) {
  const Matrix frame = tangent_frame(p);
  Vector g(frame.cols());
  for (int i = 0; i < frame.cols(); ++i) {
    const Vector xp = normalized(p + h * frame.col(i));
    const Vector xm = normalized(p - h * frame.col(i));
    g[i] = (K.value(xp) - K.value(xm)) / (2 * h);
  }
  return frame * g;
}

// finite-difference Laplace-Beltrami on a geodesic normal chart
double fd_laplace_beltrami(const CandidateFunction& K, const Vector& p, double h = 1e-4) {
  const Matrix frame = tangent_frame(p);
  double lap = 0.0;
  for (int i = 0; i < frame.cols(); ++i) {
    const Vector dir = frame.col(i);
    const Vector xp = std::cos(h) * p + std::sin(h) * dir;   // geodesic steps
    const Vector xm = std::cos(h) * p - std::sin(h) * dir;
    lap += (K.value(xp) - 2.0 * K.value(p) + K.value(xm)) / (h * h);
  }
  return lap;
}

}  // namespace

TEST_CASE("height function gradient on S^3") {
  SphereSpec spec(3);
  const CandidateFunction K = parse_candidate("2 + x4", spec);

  SUBCASE("zero at the north pole") {
    CHECK(intrinsic_gradient(K, point4(0, 0, 0, 1)).norm() < 1e-14);
  }
  SUBCASE("equals e4 at (1,0,0,0)") {
    const Vector g = intrinsic_gradient(K, point4(1, 0, 0, 0));
    CHECK((g - point4(0, 0, 0, 1)).norm() < 1e-14);
  }
  SUBCASE("constant candidate has zero gradient") {
    const CandidateFunction c = parse_candidate("1", SphereSpec(5));
    Vector p = Vector::Zero(6);
    p[2] = 1.0;
    CHECK(intrinsic_gradient(c, p).norm() == 0.0);
  }
}

TEST_CASE("gradient is tangential and matches finite differences") {
  SphereSpec spec(3);
  const CandidateFunction K =
      parse_candidate("(2 + x4 + 0.3*x1*x2) / (3 - x3) + x2^2", spec);
  std::mt19937_64 rng(11);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 25; ++trial) {
    Vector p(4);
    for (int i = 0; i < 4; ++i) p[i] = normal(rng);
    p.normalize();
    const Vector g = intrinsic_gradient(K, p);
    CHECK(std::abs(g.dot(p)) < 1e-12);
    const Vector fd = fd_intrinsic_gradient(K, p);
    CHECK((g - fd).norm() < 1e-6 * std::max(1.0, g.norm()));
  }
}

TEST_CASE("Laplace-Beltrami of the height function") {
  SphereSpec spec(3);
  const CandidateFunction K = parse_candidate("2 + x4", spec);
  // x4 is a degree-1 spherical harmonic: Delta x4 = -3 x4 on S^3
  CHECK(laplace_beltrami(K, point4(0, 0, 0, 1)) == doctest::Approx(-3.0).epsilon(1e-12));
  CHECK(laplace_beltrami(K, point4(0, 0, 0, -1)) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(fd_laplace_beltrami(K, point4(0, 0, 0, 1)) == doctest::Approx(-3.0).epsilon(1e-5));

  const CandidateFunction c = parse_candidate("7", spec);
  CHECK(laplace_beltrami(c, point4(0, 1, 0, 0)) == 0.0);
}

TEST_CASE("intrinsic Hessian of the height function at the pole is -I") {
  SphereSpec spec(3);
  const CandidateFunction K = parse_candidate("2 + x4", spec);
  const Matrix h = intrinsic_hessian(K, point4(0, 0, 0, 1));
  CHECK((h + Matrix::Identity(3, 3)).norm() < 1e-12);

  const CandidateFunction c = parse_candidate("5", spec);
  CHECK(intrinsic_hessian(c, point4(0, 0, 0, 1)).norm() == 0.0);
}

TEST_CASE("Hessian is symmetric and its trace matches the Laplacian at critical points") {
  SphereSpec spec(3);
  const CandidateFunction K = parse_candidate("2 + x4 + 0.1*x1^2", spec);
  // north pole is still critical for this perturbation
  const Vector p = point4(0, 0, 0, 1);
  REQUIRE(intrinsic_gradient(K, p).norm() < 1e-14);
  const Matrix h = intrinsic_hessian(K, p);
  CHECK((h - h.transpose()).norm() < 1e-10);
  CHECK(std::abs(h.trace() - laplace_beltrami(K, p)) < 1e-8);
}

TEST_CASE("nonpositive candidates are rejected at validation sampling") {
  SphereSpec spec(3);
  CHECK_THROWS_AS(parse_candidate("x4", spec), std::domain_error);       // vanishes/negative
  CHECK_THROWS_AS(parse_candidate("-1 - x4^2", spec), std::domain_error);
  CHECK_NOTHROW(parse_candidate("2 + x4", spec));
}
