#ifndef BUBBLETOWER_FUNCTIONAL_HPP
#define BUBBLETOWER_FUNCTIONAL_HPP

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "bubbletower/candidate.hpp"
#include "bubbletower/quadrature.hpp"

namespace bubbletower {

/// Spherical Aubin-Talenti profile centered at `a` with concentration
/// lambda, normalized so that L phi = phi^{(n+2)/(n-2)} holds pointwise on
/// the round sphere:
///   phi(x) = (4n(n-1))^{(n-2)/4} * (lambda / D)^{(n-2)/2},
///   D = (1+lambda^2) - (lambda^2-1) <a,x>.
/// At lambda = 1 this is the constant Yamabe solution (n(n-1))^{(n-2)/4}.
struct Bubble {
  int n = 0;
  Vector center;
  double lambda = 1.0;

  double profile(double s) const;            // f(<a,x>)
  double profile_d1(double s) const;
  double profile_d2(double s) const;

  double value(const Vector& x) const;
  Vector tangent_gradient(const Vector& x) const;
  double laplace_beltrami(const Vector& x) const;

  /// |L phi - phi^{(n+2)/(n-2)}| / phi^{(n+2)/(n-2)} at x.
  double residual(const Vector& x) const;
};

Bubble make_bubble(const Vector& a, double lambda, int n);

/// Conformal dilation of S^n toward `a`: psi(z) concentrates mass at the
/// center as lambda grows; omega is its conformal factor, |det d psi| =
/// omega^n. Pulling bubble integrands back through psi removes the
/// concentration, which keeps product quadrature accurate for large lambda.
struct ConformalDilation {
  Vector a;
  double lambda = 1.0;

  Vector map(const Vector& z) const;
  double omega(const Vector& z) const;
};

/// Admissible test function: value and tangential gradient closures,
/// evaluated lazily at quadrature points. When the function is a pure
/// (scaled) bubble the profile is kept so energies can use the pullback.
struct DiscreteFunction {
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> tangent_gradient;
  std::shared_ptr<const Bubble> profile;
  double amplitude = 1.0;

  static DiscreteFunction from_candidate(std::shared_ptr<const CandidateFunction> K);
  static DiscreteFunction from_bubble(const Bubble& bubble, double amplitude = 1.0);
  static DiscreteFunction from_closures(std::function<double(const Vector&)> value,
                                        std::function<Vector(const Vector&)> tangent_gradient);
  /// u + h v, for finite-difference checks.
  static DiscreteFunction linear_combination(const DiscreteFunction& u, double h,
                                             const DiscreteFunction& v);
};

using WeightFunction = std::function<double(const Vector&)>;

WeightFunction unit_weight();
WeightFunction candidate_weight(std::shared_ptr<const CandidateFunction> K);

/// Scaling-invariant curvature energy
///   J_K(u) = int L u u dmu / (int K u^{2n/(n-2)} dmu)^{(n-2)/n},
/// numerator in Dirichlet form with c_n = 4(n-1)/(n-2), R0 = n(n-1).
double energy_JK(const WeightFunction& K, const DiscreteFunction& u, const QuadratureRule& rule);

/// Subcritical approximation with exponent p+1 = 2n/(n-2) - tau.
double energy_JK_subcritical(const WeightFunction& K, const DiscreteFunction& u, double tau,
                             const QuadratureRule& rule);

/// Directional derivative dJ_K(u)v.
double gradient_JK(const WeightFunction& K, const DiscreteFunction& u, const DiscreteFunction& v,
                   const QuadratureRule& rule);

/// Closed-form Y(S^n) = n(n-1) vol(S^n)^{2/n}, used as the test oracle for
/// the cached constant below.
double yamabe_invariant(int n);

/// The energy constant of pure critical points at infinity: the large-lambda
/// limit of J_1(phi_{a,lambda}), cached per (n, level).
double cpi_energy_constant(int n, const QuadratureRule& rule);

struct ExpansionReport {
  std::vector<double> lambdas;
  std::vector<double> energies;
  double limit = 0.0;            // fitted constant term
  double coefficient = 0.0;      // fitted lambda^{-2} coefficient
  double t_statistic = 0.0;
  bool sign_opposite_laplacian = false;
};

/// Bubble energy via the pulled-back K-mass, using that the bubble's
/// Dirichlet numerator is conformally invariant. Used for expansion fits.
double bubble_energy_mass(const WeightFunction& K, const Vector& a, double lambda,
                          const QuadratureRule& rule);

/// Fits J_K(phi_{a,lambda}) = A + B lambda^{-2} over lambda_list at a
/// critical point a of K and checks sign(B) = -sign(Delta K(a)).
ExpansionReport expansion_sign_check(std::shared_ptr<const CandidateFunction> K, const Vector& a,
                                     const std::vector<double>& lambda_list,
                                     const QuadratureRule& rule);

}  // namespace bubbletower

#endif
