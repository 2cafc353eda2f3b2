#include "bubbletower/geometry.hpp"

#include <cmath>

namespace bubbletower {

double sphere_volume(int n) {
  const double half = 0.5 * (n + 1);
  return 2.0 * std::pow(M_PI, half) / std::tgamma(half);
}

Vector normalized(const Vector& x) {
  const double r = x.norm();
  if (r == 0.0) throw std::invalid_argument("normalized: zero vector");
  return x / r;
}

double geodesic_distance(const Vector& a, const Vector& b) {
  double c = a.dot(b);
  c = std::max(-1.0, std::min(1.0, c));
  return std::acos(c);
}

Vector tangent_project(const Vector& p, const Vector& v) {
  return v - p.dot(v) * p;
}

Matrix tangent_frame(const Vector& p) {
  const int d = static_cast<int>(p.size());
  int skip = 0;
  for (int i = 1; i < d; ++i)
    if (std::abs(p[i]) > std::abs(p[skip])) skip = i;

  Matrix frame(d, d - 1);
  int col = 0;
  for (int axis = 0; axis < d; ++axis) {
    if (axis == skip) continue;
    Vector v = Vector::Zero(d);
    v[axis] = 1.0;
    v -= p.dot(v) * p;
    for (int j = 0; j < col; ++j) v -= frame.col(j).dot(v) * frame.col(j);
    // second pass keeps orthogonality near machine precision
    v -= p.dot(v) * p;
    for (int j = 0; j < col; ++j) v -= frame.col(j).dot(v) * frame.col(j);
    frame.col(col++) = v.normalized();
  }
  return frame;
}

Vector sphere_log(const Vector& center, const Vector& x) {
  const double u = std::max(-1.0, std::min(1.0, center.dot(x)));
  const Vector tangential = x - u * center;
  return theta_over_sin(u) * tangential;
}

namespace {
constexpr double kSeriesCut = 1e-3;
}

double theta_over_sin(double u) {
  const double e = 1.0 - u;
  if (e < kSeriesCut) {
    return 1.0 + e * (1.0 / 3.0 + e * (2.0 / 15.0 + e * (2.0 / 35.0 + e * (8.0 / 315.0))));
  }
  const double s = std::sqrt(1.0 - u * u);
  return std::acos(u) / s;
}

double theta_over_sin_d1(double u) {
  const double e = 1.0 - u;
  if (e < kSeriesCut) {
    return -(1.0 / 3.0 + e * (4.0 / 15.0 + e * (6.0 / 35.0 + e * (32.0 / 315.0))));
  }
  const double s2 = 1.0 - u * u;
  return (u * theta_over_sin(u) - 1.0) / s2;
}

double theta_over_sin_d2(double u) {
  const double e = 1.0 - u;
  if (e < kSeriesCut) {
    return 4.0 / 15.0 + e * (12.0 / 35.0 + e * (96.0 / 315.0));
  }
  const double s2 = 1.0 - u * u;
  const double g = theta_over_sin(u);
  const double g1 = theta_over_sin_d1(u);
  return ((g + u * g1) * s2 + 2.0 * u * (u * g - 1.0)) / (s2 * s2);
}

std::vector<Vector> fibonacci_sphere(int count) {
  std::vector<Vector> pts;
  pts.reserve(count);
  const double golden = M_PI * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < count; ++i) {
    const double z = 1.0 - 2.0 * (i + 0.5) / count;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * i;
    Vector p(3);
    p << r * std::cos(phi), r * std::sin(phi), z;
    pts.push_back(p);
  }
  return pts;
}

}  // namespace bubbletower
