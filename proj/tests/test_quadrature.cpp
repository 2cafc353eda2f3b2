#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>

#include "bubbletower/quadrature.hpp"

using namespace bubbletower;

TEST_CASE("gauss-gegenbauer reduces to gauss-legendre at alpha = 0") {
  Vector nodes, weights;
  gauss_gegenbauer(2, 0.0, &nodes, &weights);
  CHECK(nodes[0] == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-14));
  CHECK(nodes[1] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));
  CHECK(weights[0] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("rule integrates constants to the sphere volume") {
  for (int n : {2, 3, 5, 7}) {
    const QuadratureRule rule = build_quadrature(n, 2);
    const double vol = integrate(rule, [](const Vector&) { return 1.0; });
    CHECK(vol == doctest::Approx(sphere_volume(n)).epsilon(1e-12));
    for (int i = 0; i < rule.size(); ++i) CHECK(rule.weights[i] > 0.0);
  }
}

TEST_CASE("odd moments vanish") {
  const QuadratureRule rule = build_quadrature(5, 3);
  for (int i = 0; i <= 5; ++i) {
    const double m = integrate(rule, [i](const Vector& x) { return x[i]; });
    CHECK(std::abs(m) < 1e-12 * sphere_volume(5));
  }
  const double mixed = integrate(rule, [](const Vector& x) { return x[0] * x[1]; });
  CHECK(std::abs(mixed) < 1e-12 * sphere_volume(5));
}

TEST_CASE("second moment splits the volume across coordinates") {
  const QuadratureRule rule = build_quadrature(3, 4);
  const double m2 = integrate(rule, [](const Vector& x) { return x[3] * x[3]; });
  CHECK(m2 == doctest::Approx(sphere_volume(3) / 4.0).epsilon(1e-12));
}

TEST_CASE("polynomial exactness up to degree 2*level") {
  // compare a degree-8 polynomial at level 4 against a much finer rule
  const QuadratureRule coarse = build_quadrature(3, 4);
  const QuadratureRule fine = build_quadrature(3, 12);
  auto poly = [](const Vector& x) {
    const double a = x[0], b = x[1], c = x[2], d = x[3];
    return std::pow(a, 8) + 3.0 * a * a * b * b * c * c * d * d - 2.0 * std::pow(b, 4) * c * c +
           0.5 * std::pow(d, 6) * a * a;
  };
  const double v1 = integrate(coarse, poly);
  const double v2 = integrate(fine, poly);
  CHECK(v1 == doctest::Approx(v2).epsilon(1e-10));
}

TEST_CASE("unsupported dimensions and levels are rejected") {
  CHECK_THROWS_AS(build_quadrature(8, 2), std::invalid_argument);
  CHECK_THROWS_AS(build_quadrature(0, 2), std::invalid_argument);
  CHECK_THROWS_AS(build_quadrature(3, 0), std::invalid_argument);
}

TEST_CASE("binary cache round-trips") {
  const std::string dir = std::filesystem::temp_directory_path() / "bt_quad_cache_test";
  std::filesystem::remove_all(dir);
  const QuadratureRule fresh = cached_quadrature(3, 3, dir);
  const QuadratureRule cached = cached_quadrature(3, 3, dir);
  REQUIRE(cached.size() == fresh.size());
  CHECK((cached.points - fresh.points).norm() == 0.0);
  CHECK((cached.weights - fresh.weights).norm() == 0.0);
  std::filesystem::remove_all(dir);
}
