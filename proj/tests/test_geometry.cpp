#include "doctest.h"

#include <cmath>

#include "bubbletower/geometry.hpp"

using namespace bubbletower;

TEST_CASE("sphere volume matches known values") {
  CHECK(sphere_volume(1) == doctest::Approx(2.0 * M_PI).epsilon(1e-14));
  CHECK(sphere_volume(2) == doctest::Approx(4.0 * M_PI).epsilon(1e-14));
  CHECK(sphere_volume(3) == doctest::Approx(2.0 * M_PI * M_PI).epsilon(1e-14));
  CHECK(sphere_volume(5) == doctest::Approx(M_PI * M_PI * M_PI).epsilon(1e-14));
}

TEST_CASE("tangent frame is orthonormal and orthogonal to the point") {
  for (int n : {2, 3, 5}) {
    Vector p = Vector::Zero(n + 1);
    p[0] = 0.6;
    p[n] = 0.8;
    const Matrix frame = tangent_frame(p);
    REQUIRE(frame.cols() == n);
    for (int i = 0; i < n; ++i) {
      CHECK(std::abs(frame.col(i).dot(p)) < 1e-14);
      for (int j = 0; j < n; ++j)
        CHECK(frame.col(i).dot(frame.col(j)) == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-13));
    }
  }
}

TEST_CASE("log map length equals geodesic distance") {
  Vector a(4), b(4);
  a << 1, 0, 0, 0;
  b << 0.36, 0.48, 0.8, 0;
  b.normalize();
  const Vector log = sphere_log(a, b);
  CHECK(log.norm() == doctest::Approx(geodesic_distance(a, b)).epsilon(1e-12));
  CHECK(std::abs(log.dot(a)) < 1e-12);
}

TEST_CASE("theta/sin(theta) series agrees with the closed form") {
  // straddle the series switchover at 1 - u = 1e-3
  for (double u : {0.1, 0.9, 0.9985, 0.999, 0.99999}) {
    const double theta = std::acos(u);
    const double direct = theta / std::sin(theta);
    CHECK(theta_over_sin(u) == doctest::Approx(direct).epsilon(1e-11));
    const double h = 1e-6;
    const double fd1 = (theta_over_sin(u + h) - theta_over_sin(u - h)) / (2 * h);
    CHECK(theta_over_sin_d1(u) == doctest::Approx(fd1).epsilon(1e-5));
    const double fd2 = (theta_over_sin_d1(u + h) - theta_over_sin_d1(u - h)) / (2 * h);
    CHECK(theta_over_sin_d2(u) == doctest::Approx(fd2).epsilon(1e-4));
  }
}

TEST_CASE("fibonacci sphere points are unit and quasi-uniform") {
  const auto pts = fibonacci_sphere(500);
  REQUIRE(pts.size() == 500);
  for (const Vector& p : pts) CHECK(p.norm() == doctest::Approx(1.0).epsilon(1e-12));
  double worst = 0.0;
  for (const Vector& p : pts) {
    double nearest = 10.0;
    for (const Vector& q : pts)
      if (&p != &q) nearest = std::min(nearest, geodesic_distance(p, q));
    worst = std::max(worst, nearest);
  }
  CHECK(worst < 0.3);
}
