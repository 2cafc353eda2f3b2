#ifndef BUBBLETOWER_CRITICAL_HPP
#define BUBBLETOWER_CRITICAL_HPP

#include <string>
#include <vector>

#include "bubbletower/candidate.hpp"

namespace bubbletower {

class DegeneracyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CriticalPoint {
  Vector location;             // unit vector in R^{n+1}
  double value = 0.0;          // K(x) > 0
  int morse_index = 0;         // number of negative Hessian eigenvalues
  double laplacian = 0.0;      // Laplace-Beltrami of K at x
  Vector hessian_eigenvalues;  // ascending
};

struct FindOptions {
  int grid_resolution = 0;          // 0 picks a per-dimension default
  double gradient_tol = 1e-10;
  double merge_tol = 1e-6;          // geodesic distance
  double degeneracy_tol = 1e-6;     // relative to the local Hessian scale
  int max_newton_steps = 120;
  bool check_morse_counts = true;   // index-0/index-n presence and Euler parity
};

/// Deterministic quasi-uniform seed grid: Fibonacci lattice on S^2,
/// tensorized angular grids for n >= 3, plus the coordinate poles.
std::vector<Vector> seed_grid(const SphereSpec& spec, int grid_resolution);

/// Projected-Newton refinement from every seed, duplicate merging, and
/// Morse classification. Throws DegeneracyError when a converged point
/// violates the Morse or Laplacian-separation tolerance.
std::vector<CriticalPoint> find_critical_points(const CandidateFunction& K,
                                                int grid_resolution = 0,
                                                const FindOptions& opts = {});

struct AdmissibilityReport {
  bool positive = false;
  bool morse = false;
  bool laplacian_separated = false;
  double min_value = 0.0;
  double laplacian_margin = 0.0;  // min over critical points of |Delta K|
  std::vector<CriticalPoint> points;
  std::string detail;

  bool pass() const { return positive && morse && laplacian_separated; }
};

/// Positivity, Morse property and gradient/Laplacian separation in one
/// report; never throws for analysis failures.
AdmissibilityReport check_admissibility(const CandidateFunction& K,
                                        int grid_resolution = 0);

/// Blends the quadratic normal form at a non-extremal critical point toward
/// the target coefficients c, changing Delta K(x0) to 2*sum(c) while keeping
/// the critical set. `all_points` must contain every critical point of K so
/// the 2*delta separation precondition can be checked.
CandidateFunction laplacian_surgery(const CandidateFunction& K,
                                    const CriticalPoint& x0,
                                    const std::vector<CriticalPoint>& all_points,
                                    const std::vector<double>& c,
                                    double delta, double eps);

}  // namespace bubbletower

#endif
