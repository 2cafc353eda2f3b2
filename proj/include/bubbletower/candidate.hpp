#ifndef BUBBLETOWER_CANDIDATE_HPP
#define BUBBLETOWER_CANDIDATE_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bubbletower/expression.hpp"
#include "bubbletower/geometry.hpp"

namespace bubbletower {

/// Localized quadratic blend that retargets the Hessian trace at one
/// critical point. The patch adds
///   (1 - eta(d/delta)) * sum_j (c_j - b_j) w_j(x)^2
/// where w_j are normal coordinates at the center in the frame of Hessian
/// eigendirections, b_j are the quadratic normal-form coefficients (half the
/// Hessian eigenvalues) and eta is a quintic smoothstep supported on [1,2],
/// so the patch vanishes outside the 2*delta ball.
struct SurgeryPatch {
  Vector center;               // unit vector in R^{n+1}
  double delta = 0.0;          // inner radius of the blend
  double eps = 0.0;            // relative coefficient bound
  Matrix frame;                // (n+1) x n eigendirections
  std::vector<double> base_coeff;    // b_j
  std::vector<double> target_coeff;  // c_j
};

/// Positive function on S^n: either a parsed rational ambient expression or
/// a base candidate with surgery patches applied.
class CandidateFunction {
 public:
  CandidateFunction(SphereSpec spec, Expr::Ptr body);
  CandidateFunction(std::shared_ptr<const CandidateFunction> base, SurgeryPatch patch);

  const SphereSpec& spec() const { return spec_; }
  bool patched() const { return base_ != nullptr; }
  const std::vector<SurgeryPatch>& patches() const { return patches_; }
  std::string describe() const;

  double value(const Vector& x) const;
  Vector ambient_gradient(const Vector& x) const;
  Matrix ambient_hessian(const Vector& x) const;

 private:
  SphereSpec spec_;
  Expr::Ptr body_;
  std::vector<Expr::Ptr> grad_;
  std::vector<std::vector<Expr::Ptr>> hess_;

  std::shared_ptr<const CandidateFunction> base_;
  std::vector<SurgeryPatch> patches_;
};

/// Parses an expression into a candidate and rejects functions that are not
/// strictly positive at the deterministic validation sample.
CandidateFunction parse_candidate(const std::string& text, const SphereSpec& spec);

/// Loads a corpus file: a `dim=<n>` header line, `#` comments, and the
/// expression on the remaining lines.
CandidateFunction load_candidate_file(const std::string& path);

/// Tangential gradient P_T grad K at p, P_T = I - p p^T.
Vector intrinsic_gradient(const CandidateFunction& K, const Vector& p);

/// Laplace-Beltrami on the unit sphere from the ambient extension:
/// Delta_S f = Delta_amb f - d2f/dr2 - n df/dr at |p| = 1.
double laplace_beltrami(const CandidateFunction& K, const Vector& p);

/// Symmetric n x n intrinsic Hessian in the deterministic tangent frame.
Matrix intrinsic_hessian(const CandidateFunction& K, const Vector& p);

/// Deterministic on-sphere sample used for positivity validation.
std::vector<Vector> validation_sample(const SphereSpec& spec);

}  // namespace bubbletower

#endif
