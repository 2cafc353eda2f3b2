#include "bubbletower/shadow.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

namespace bubbletower {

void ShadowState::validate() const {
  if (std::abs(a.norm() - 1.0) > 1e-10)
    throw std::invalid_argument("ShadowState: a must be a unit vector");
  if (!(lambda > 1.0)) throw std::invalid_argument("ShadowState: lambda must exceed 1");
  if (v_sq < 0.0) throw std::invalid_argument("ShadowState: v_sq must be nonnegative");
  if (!(alpha > 0.0)) throw std::invalid_argument("ShadowState: alpha must be positive");
}

ShadowDerivative shadow_rhs(const ShadowState& s, const CandidateFunction& K,
                            const FlowConstants& fc) {
  const double k = K.value(s.a);
  const double k54 = std::pow(k, 1.25);
  const Vector grad = intrinsic_gradient(K, s.a);
  const double lap = laplace_beltrami(K, s.a);
  const double l2 = s.lambda * s.lambda;

  ShadowDerivative d;
  d.alpha_dot = 0.0;
  d.a_dot = -fc.c1 / (k54 * l2) * grad;
  d.lambda_dot = -fc.c2 * lap / (k54 * s.lambda) + fc.coupling * s.lambda * s.v_sq;
  d.v_sq_dot = -fc.c3 * s.v_sq + fc.b * (grad.squaredNorm() / l2 + 1.0 / (l2 * l2));
  return d;
}

namespace {

// Dormand-Prince 5(4) tableau
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
constexpr double kB5[7] = {35.0 / 384,      0.0,  500.0 / 1113, 125.0 / 192,
                           -2187.0 / 6784, 11.0 / 84, 0.0};
constexpr double kB4[7] = {5179.0 / 57600,  0.0,   7571.0 / 16695, 393.0 / 640,
                           -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

struct PackedState {
  Vector y;  // a (d), lambda, v_sq
};

Vector pack(const ShadowState& s) {
  Vector y(s.a.size() + 2);
  y.head(s.a.size()) = s.a;
  y[s.a.size()] = s.lambda;
  y[s.a.size() + 1] = s.v_sq;
  return y;
}

ShadowState unpack(const Vector& y, double alpha, double t) {
  ShadowState s;
  const int d = static_cast<int>(y.size()) - 2;
  s.alpha = alpha;
  s.a = normalized(y.head(d));
  s.lambda = y[d];
  s.v_sq = std::max(0.0, y[d + 1]);
  s.t = t;
  return s;
}

Vector eval_rhs(const Vector& y, double alpha, const CandidateFunction& K,
                const FlowConstants& fc) {
  const int d = static_cast<int>(y.size()) - 2;
  ShadowState s = unpack(y, alpha, 0.0);
  const ShadowDerivative der = shadow_rhs(s, K, fc);
  Vector out(y.size());
  out.head(d) = der.a_dot;
  out[d] = der.lambda_dot;
  out[d + 1] = der.v_sq_dot;
  return out;
}

}  // namespace

Trajectory integrate(const ShadowState& s0, const CandidateFunction& K, const FlowConstants& fc,
                     double horizon, const IntegrateOptions& opts) {
  s0.validate();
  Trajectory traj;
  traj.samples.push_back(s0);
  traj.samples.front().t = 0.0;

  const int d = static_cast<int>(s0.a.size());
  Vector y = pack(s0);
  double t = 0.0;
  double h = opts.initial_step;
  double next_output = opts.output_dt;

  Vector k[7];
  while (t < horizon) {
    bool output_step = false;
    double target = std::min(horizon, next_output);
    if (t + h >= target - 1e-14) {
      h = target - t;
      output_step = true;
    }

    k[0] = eval_rhs(y, s0.alpha, K, fc);
    for (int stage = 1; stage < 7; ++stage) {
      Vector yi = y;
      for (int j = 0; j < stage; ++j) yi += h * kA[stage][j] * k[j];
      k[stage] = eval_rhs(yi, s0.alpha, K, fc);
    }
    Vector y5 = y, y4 = y;
    for (int j = 0; j < 7; ++j) {
      y5 += h * kB5[j] * k[j];
      y4 += h * kB4[j] * k[j];
    }

    double err = 0.0;
    for (int i = 0; i < y.size(); ++i) {
      const double scale = opts.tolerance + opts.tolerance * std::max(std::abs(y[i]), std::abs(y5[i]));
      err = std::max(err, std::abs(y5[i] - y4[i]) / scale);
    }

    if (err <= 1.0) {
      t += h;
      y = y5;
      y.head(d) = normalized(Vector(y.head(d)));
      y[d + 1] = std::max(0.0, y[d + 1]);
      traj.error_estimate += (y5 - y4).norm();

      if (output_step && std::abs(t - next_output) < 1e-12) next_output += opts.output_dt;
      if (output_step || t >= horizon) traj.samples.push_back(unpack(y, s0.alpha, t));

      if (y[d] >= opts.lambda_cap) {
        traj.concentrated = true;
        if (traj.samples.back().t != t) traj.samples.push_back(unpack(y, s0.alpha, t));
        break;
      }
    }

    const double grow = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
    h *= std::min(5.0, std::max(0.2, grow));
    if (h < opts.min_step)
      throw std::runtime_error("shadow integrate: step size underflow at t = " +
                               std::to_string(t));
  }
  if (traj.samples.back().t < horizon - 1e-9 && !traj.concentrated)
    traj.samples.push_back(unpack(y, s0.alpha, t));
  return traj;
}

MonitorReport monitor_invariants(const Trajectory& trajectory, const CandidateFunction& K) {
  MonitorReport report;
  const auto& samples = trajectory.samples;
  if (samples.size() < 2) throw std::invalid_argument("monitor_invariants: trajectory too short");

  // (1) monotonicity of K^{-1}(a) ln lambda on Delta K < 0 segments
  double prev_q = 0.0;
  bool prev_neg = false;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const ShadowState& s = samples[i];
    const double q = std::log(s.lambda) / K.value(s.a);
    const bool neg = laplace_beltrami(K, s.a) < 0.0;
    if (!neg) report.laplacian_negative_along_path = false;
    if (i > 0 && prev_neg && neg) {
      if (q < prev_q - 1e-9) {
        report.monotone_ok = false;
        if (!report.first_violation_time) report.first_violation_time = s.t;
      }
    }
    prev_q = q;
    prev_neg = neg;
  }

  // (2) v-norm bound after a transient: C_v from the tail, transient = first
  // time the ratio stays under it
  std::vector<double> ratio(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const ShadowState& s = samples[i];
    const double bound = intrinsic_gradient(K, s.a).norm() / s.lambda +
                         1.0 / (s.lambda * s.lambda);
    ratio[i] = std::sqrt(std::max(0.0, s.v_sq)) / bound;
  }
  double tail_max = 0.0;
  for (std::size_t i = samples.size() / 2; i < samples.size(); ++i)
    tail_max = std::max(tail_max, ratio[i]);
  report.c_v = tail_max;
  report.v_bound_ok = std::isfinite(tail_max);
  report.transient_time = samples.back().t;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    bool tail_ok = true;
    for (std::size_t j = i; j < samples.size(); ++j)
      if (ratio[j] > tail_max * (1.0 + 1e-12)) {
        tail_ok = false;
        break;
      }
    if (tail_ok) {
      report.transient_time = samples[i].t;
      break;
    }
  }

  // (3) terminal concentration
  report.lambda_ratio = samples.back().lambda / samples.front().lambda;
  report.concentrated = report.lambda_ratio > 1.0;
  return report;
}

void trajectory_csv(const Trajectory& trajectory, const CandidateFunction& K, std::ostream& out) {
  const int d = static_cast<int>(trajectory.samples.front().a.size());
  out << "t";
  for (int i = 0; i < d; ++i) out << ",a" << i + 1;
  out << ",lambda,ln_lambda,v_sq,K,delta_K,monotone_ok,v_ratio\r\n";

  double prev_q = -std::numeric_limits<double>::infinity();
  for (const ShadowState& s : trajectory.samples) {
    const double k = K.value(s.a);
    const double lap = laplace_beltrami(K, s.a);
    const double q = std::log(s.lambda) / k;
    const double bound = intrinsic_gradient(K, s.a).norm() / s.lambda + 1.0 / (s.lambda * s.lambda);
    char buf[64];
    auto fmt = [&](double v) {
      std::snprintf(buf, sizeof(buf), "%.12g", v);
      return std::string(buf);
    };
    out << fmt(s.t);
    for (int i = 0; i < d; ++i) out << "," << fmt(s.a[i]);
    out << "," << fmt(s.lambda) << "," << fmt(std::log(s.lambda)) << "," << fmt(s.v_sq) << ","
        << fmt(k) << "," << fmt(lap) << "," << (q >= prev_q - 1e-9 ? 1 : 0) << ","
        << fmt(std::sqrt(std::max(0.0, s.v_sq)) / bound) << "\r\n";
    prev_q = q;
  }
}

}  // namespace bubbletower
