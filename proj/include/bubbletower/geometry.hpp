#ifndef BUBBLETOWER_GEOMETRY_HPP
#define BUBBLETOWER_GEOMETRY_HPP

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

namespace bubbletower {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Round unit sphere S^n embedded in R^{n+1}.
struct SphereSpec {
  int n = 2;

  explicit SphereSpec(int dim) : n(dim) {
    if (n < 2) throw std::invalid_argument("SphereSpec: dimension must be >= 2");
  }

  int ambient_dim() const { return n + 1; }

  // The multi-bubble analysis requires n >= 5; n = 2,3 runs in single-bubble
  // mode. n = 4 is the balanced case and is rejected by the catalog layer.
  bool high_dim() const { return n >= 5; }
  bool single_bubble() const { return n == 2 || n == 3; }

  double scalar_curvature() const { return static_cast<double>(n) * (n - 1); }
  double conformal_constant() const { return 4.0 * (n - 1) / (n - 2); }
};

/// Surface measure of the unit n-sphere, 2 pi^{(n+1)/2} / Gamma((n+1)/2).
double sphere_volume(int n);

Vector normalized(const Vector& x);

/// Geodesic distance on the unit sphere (angle between unit vectors).
double geodesic_distance(const Vector& a, const Vector& b);

/// Projects an ambient vector onto the tangent space at unit vector p.
Vector tangent_project(const Vector& p, const Vector& v);

/// Deterministic orthonormal tangent frame at p, returned as columns of an
/// (n+1) x n matrix. Built from the coordinate axes, skipping the axis most
/// aligned with p, then Gram-Schmidt.
Matrix tangent_frame(const Vector& p);

/// Riemannian log map on the unit sphere: the tangent vector at `center`
/// pointing to `x` with length d(center, x).
Vector sphere_log(const Vector& center, const Vector& x);

/// theta / sin(theta) as a function of u = cos(theta), series-stabilized
/// near u = 1. Also first and second derivatives in u.
double theta_over_sin(double u);
double theta_over_sin_d1(double u);
double theta_over_sin_d2(double u);

/// Quasi-uniform point set on S^2 (Fibonacci lattice).
std::vector<Vector> fibonacci_sphere(int count);

}  // namespace bubbletower

#endif
