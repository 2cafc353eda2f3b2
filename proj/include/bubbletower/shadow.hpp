#ifndef BUBBLETOWER_SHADOW_HPP
#define BUBBLETOWER_SHADOW_HPP

#include <iosfwd>
#include <optional>
#include <vector>

#include "bubbletower/candidate.hpp"

namespace bubbletower {

/// Finite-dimensional bubble parameters along the gradient flow.
struct ShadowState {
  double alpha = 1.0;
  Vector a;             // unit vector
  double lambda = 1.0;  // > 1
  double v_sq = 0.0;    // models ||v||^2, >= 0
  double t = 0.0;

  void validate() const;
};

struct FlowConstants {
  double c1 = 1.0;
  double c2 = 1.0;
  double c3 = 1.0;
  double b = 1.0;        // source coefficient of the v^2 majorant
  double coupling = 0.0; // optional O(||v||^2) term in the lambda equation
};

struct ShadowDerivative {
  double alpha_dot = 0.0;
  Vector a_dot;
  double lambda_dot = 0.0;
  double v_sq_dot = 0.0;
};

/// Leading-order shadow system:
///   a'      = -c1 grad K(a) / (K^{5/4}(a) lambda^2)   (tangential)
///   lambda' = -c2 lambda Delta K(a) / (K^{5/4}(a) lambda^2)
///   (v^2)'  = -c3 v^2 + b (|grad K(a)|^2/lambda^2 + 1/lambda^4)
///   alpha'  = 0
ShadowDerivative shadow_rhs(const ShadowState& s, const CandidateFunction& K,
                            const FlowConstants& fc);

struct IntegrateOptions {
  double tolerance = 1e-9;      // local error control (abs and rel)
  double output_dt = 0.5;       // dense output spacing
  double lambda_cap = 1e6;      // stop early and flag as concentrated
  double initial_step = 1e-3;
  double min_step = 1e-13;
};

struct Trajectory {
  std::vector<ShadowState> samples;
  bool concentrated = false;    // lambda cap reached
  double error_estimate = 0.0;  // accumulated local truncation estimates

  const ShadowState& terminal() const { return samples.back(); }
};

/// Adaptive Dormand-Prince integration with per-step renormalization of a.
/// Throws on step-size underflow.
Trajectory integrate(const ShadowState& s0, const CandidateFunction& K, const FlowConstants& fc,
                     double horizon, const IntegrateOptions& opts = {});

struct MonitorReport {
  bool laplacian_negative_along_path = true;  // precondition of check (1)
  bool monotone_ok = true;                    // K^{-1}(a) ln(lambda) nondecreasing
  std::optional<double> first_violation_time;
  double c_v = 0.0;                           // max ratio after the transient
  double transient_time = 0.0;
  bool v_bound_ok = true;
  bool concentrated = false;                  // lambda(T) > lambda(0)
  double lambda_ratio = 0.0;
};

/// Concentration invariants along a trajectory: monotonicity of
/// K^{-1}(a) ln(lambda) (tolerance 1e-9 per step, applicable on Delta K < 0
/// segments), the v-norm bound ||v|| <= C_v (|grad K|/lambda + 1/lambda^2)
/// after a reported transient, and terminal concentration.
MonitorReport monitor_invariants(const Trajectory& trajectory, const CandidateFunction& K);

/// CSV columns: t, a-coordinates, lambda, ln lambda, v_sq, K(a), Delta K(a),
/// monotone flag, v-bound ratio.
void trajectory_csv(const Trajectory& trajectory, const CandidateFunction& K, std::ostream& out);

}  // namespace bubbletower

#endif
