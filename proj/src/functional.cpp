#include "bubbletower/functional.hpp"

#include <cmath>
#include <map>
#include <sstream>

namespace bubbletower {

namespace {

double clamp_inner(double s) { return std::max(-1.0, std::min(1.0, s)); }

struct Accumulator {
  double sum = 0.0;
  double comp = 0.0;
  void add(double term) {
    const double t = sum + term;
    if (std::abs(sum) >= std::abs(term))
      comp += (sum - t) + term;
    else
      comp += (term - t) + sum;
    sum = t;
  }
  double total() const { return sum + comp; }
};

void check_lambda_cap(double lambda, const QuadratureRule& rule) {
  const double cap = 1000.0 * rule.level;
  if (lambda > cap) {
    std::ostringstream msg;
    msg << "bubble concentration lambda = " << lambda
        << " exceeds the resolvable cap 1000*level = " << cap;
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace

double Bubble::profile(double s) const {
  const double kappa = std::pow(4.0 * n * (n - 1), 0.25 * (n - 2));
  const double D = (1.0 + lambda * lambda) - (lambda * lambda - 1.0) * s;
  return kappa * std::pow(lambda / D, 0.5 * (n - 2));
}

double Bubble::profile_d1(double s) const {
  const double kappa = std::pow(4.0 * n * (n - 1), 0.25 * (n - 2));
  const double D = (1.0 + lambda * lambda) - (lambda * lambda - 1.0) * s;
  return 0.5 * (n - 2) * (lambda * lambda - 1.0) * kappa * std::pow(lambda, 0.5 * (n - 2)) *
         std::pow(D, -0.5 * n);
}

double Bubble::profile_d2(double s) const {
  const double kappa = std::pow(4.0 * n * (n - 1), 0.25 * (n - 2));
  const double B = lambda * lambda - 1.0;
  const double D = (1.0 + lambda * lambda) - B * s;
  return 0.25 * n * (n - 2) * B * B * kappa * std::pow(lambda, 0.5 * (n - 2)) *
         std::pow(D, -0.5 * (n + 2));
}

double Bubble::value(const Vector& x) const { return profile(clamp_inner(center.dot(x))); }

Vector Bubble::tangent_gradient(const Vector& x) const {
  const double s = clamp_inner(center.dot(x));
  return profile_d1(s) * (center - s * x);
}

double Bubble::laplace_beltrami(const Vector& x) const {
  const double s = clamp_inner(center.dot(x));
  return (1.0 - s * s) * profile_d2(s) - n * s * profile_d1(s);
}

double Bubble::residual(const Vector& x) const {
  const double c_n = 4.0 * (n - 1) / (n - 2);
  const double r0 = static_cast<double>(n) * (n - 1);
  const double phi = value(x);
  const double lhs = -c_n * laplace_beltrami(x) + r0 * phi;
  const double rhs = std::pow(phi, static_cast<double>(n + 2) / (n - 2));
  return std::abs(lhs - rhs) / rhs;
}

Bubble make_bubble(const Vector& a, double lambda, int n) {
  if (!(lambda >= 1.0)) throw std::invalid_argument("make_bubble: lambda must be >= 1");
  Bubble b;
  b.n = n;
  b.center = normalized(a);
  b.lambda = lambda;
  return b;
}

Vector ConformalDilation::map(const Vector& z) const {
  const double s = clamp_inner(a.dot(z));
  const double l2 = lambda * lambda;
  const double E = (1.0 + l2) + (l2 - 1.0) * s;
  const Vector zt = z - s * a;
  Vector x = ((l2 * (1.0 + s) - (1.0 - s)) * a + 2.0 * lambda * zt) / E;
  return x;
}

double ConformalDilation::omega(const Vector& z) const {
  const double s = clamp_inner(a.dot(z));
  const double l2 = lambda * lambda;
  return 2.0 * lambda / ((1.0 + l2) + (l2 - 1.0) * s);
}

DiscreteFunction DiscreteFunction::from_candidate(std::shared_ptr<const CandidateFunction> K) {
  DiscreteFunction u;
  u.value = [K](const Vector& x) { return K->value(x); };
  u.tangent_gradient = [K](const Vector& x) {
    return tangent_project(x, K->ambient_gradient(x));
  };
  return u;
}

DiscreteFunction DiscreteFunction::from_bubble(const Bubble& bubble, double amplitude) {
  DiscreteFunction u;
  auto profile = std::make_shared<const Bubble>(bubble);
  u.profile = profile;
  u.amplitude = amplitude;
  u.value = [profile, amplitude](const Vector& x) { return amplitude * profile->value(x); };
  u.tangent_gradient = [profile, amplitude](const Vector& x) {
    return Vector(amplitude * profile->tangent_gradient(x));
  };
  return u;
}

DiscreteFunction DiscreteFunction::from_closures(
    std::function<double(const Vector&)> value,
    std::function<Vector(const Vector&)> tangent_gradient) {
  DiscreteFunction u;
  u.value = std::move(value);
  u.tangent_gradient = std::move(tangent_gradient);
  return u;
}

DiscreteFunction DiscreteFunction::linear_combination(const DiscreteFunction& u, double h,
                                                      const DiscreteFunction& v) {
  DiscreteFunction w;
  const auto uv = u.value, vv = v.value;
  const auto ug = u.tangent_gradient, vg = v.tangent_gradient;
  w.value = [uv, vv, h](const Vector& x) { return uv(x) + h * vv(x); };
  w.tangent_gradient = [ug, vg, h](const Vector& x) { return Vector(ug(x) + h * vg(x)); };
  return w;
}

WeightFunction unit_weight() {
  return [](const Vector&) { return 1.0; };
}

WeightFunction candidate_weight(std::shared_ptr<const CandidateFunction> K) {
  return [K](const Vector& x) { return K->value(x); };
}

namespace {

// Dirichlet numerator and weighted denominator integral for a pure bubble,
// both pulled back through the conformal dilation so the integrands stay
// resolvable at high concentration. phi(psi(z)) * omega^{(n-2)/2}(z) equals
// (n(n-1))^{(n-2)/4} identically, which makes the denominator integrand
// K(psi(z)) up to a constant.
struct BubbleEnergyParts {
  double numerator = 0.0;       // int (c_n |grad phi|^2 + R0 phi^2)
  double weighted_mass = 0.0;   // int K(psi(z)) dmu(z)
};

BubbleEnergyParts bubble_energy_parts(const WeightFunction& K, const Bubble& bubble,
                                      const QuadratureRule& rule) {
  const int n = bubble.n;
  const double c_n = 4.0 * (n - 1) / (n - 2);
  const double r0 = static_cast<double>(n) * (n - 1);
  ConformalDilation psi{bubble.center, bubble.lambda};

  Accumulator num, mass;
  for (int i = 0; i < rule.size(); ++i) {
    const Vector z = rule.points.row(i).transpose();
    const Vector x = psi.map(z);
    const double w = rule.weights[i];
    const double jac = std::pow(psi.omega(z), n);
    const double phi = bubble.value(x);
    const Vector grad = bubble.tangent_gradient(x);
    num.add(w * jac * (c_n * grad.squaredNorm() + r0 * phi * phi));
    mass.add(w * K(x));
  }
  return {num.total(), mass.total()};
}

}  // namespace

double energy_JK(const WeightFunction& K, const DiscreteFunction& u, const QuadratureRule& rule) {
  const int n = rule.n;
  const double exponent = 2.0 * n / (n - 2);

  if (u.profile) {
    check_lambda_cap(u.profile->lambda, rule);
    const BubbleEnergyParts parts = bubble_energy_parts(K, *u.profile, rule);
    const double c = std::pow(static_cast<double>(n) * (n - 1), 0.25 * (n - 2));
    const double amp = std::abs(u.amplitude);
    const double num = amp * amp * parts.numerator;
    const double den = std::pow(amp * c, exponent) * parts.weighted_mass;
    if (!(den > 0.0)) throw std::domain_error("energy_JK: nonpositive denominator");
    return num / std::pow(den, (n - 2.0) / n);
  }

  const double c_n = 4.0 * (n - 1) / (n - 2);
  const double r0 = static_cast<double>(n) * (n - 1);
  Accumulator num, den;
  for (int i = 0; i < rule.size(); ++i) {
    const Vector x = rule.points.row(i).transpose();
    const double w = rule.weights[i];
    const double uv = u.value(x);
    const Vector ug = u.tangent_gradient(x);
    num.add(w * (c_n * ug.squaredNorm() + r0 * uv * uv));
    den.add(w * K(x) * std::pow(std::abs(uv), exponent));
  }
  if (!(den.total() > 0.0)) throw std::domain_error("energy_JK: nonpositive denominator (u = 0?)");
  return num.total() / std::pow(den.total(), (n - 2.0) / n);
}

double energy_JK_subcritical(const WeightFunction& K, const DiscreteFunction& u, double tau,
                             const QuadratureRule& rule) {
  const int n = rule.n;
  const double critical = 2.0 * n / (n - 2);
  if (tau < 0.0 || tau >= critical - 2.0)
    throw std::invalid_argument("energy_JK_subcritical: tau out of range");
  const double p1 = critical - tau;

  if (u.profile) {
    check_lambda_cap(u.profile->lambda, rule);
    const Bubble& bubble = *u.profile;
    const double c_n = 4.0 * (n - 1) / (n - 2);
    const double r0 = static_cast<double>(n) * (n - 1);
    const double c = std::pow(static_cast<double>(n) * (n - 1), 0.25 * (n - 2));
    ConformalDilation psi{bubble.center, bubble.lambda};
    Accumulator num, den;
    for (int i = 0; i < rule.size(); ++i) {
      const Vector z = rule.points.row(i).transpose();
      const Vector x = psi.map(z);
      const double w = rule.weights[i];
      const double omega = psi.omega(z);
      const double jac = std::pow(omega, n);
      const double phi = bubble.value(x);
      const Vector grad = bubble.tangent_gradient(x);
      num.add(w * jac * (c_n * grad.squaredNorm() + r0 * phi * phi));
      // (amp*phi)^{p+1} jac = (amp*c)^{p+1} omega^{n - (n-2)(p+1)/2}
      den.add(w * K(x) * std::pow(omega, n - 0.5 * (n - 2) * p1));
    }
    const double amp = std::abs(u.amplitude);
    const double d = std::pow(amp * c, p1) * den.total();
    if (!(d > 0.0)) throw std::domain_error("energy_JK_subcritical: nonpositive denominator");
    return amp * amp * num.total() / std::pow(d, 2.0 / p1);
  }

  const double c_n = 4.0 * (n - 1) / (n - 2);
  const double r0 = static_cast<double>(n) * (n - 1);
  Accumulator num, den;
  for (int i = 0; i < rule.size(); ++i) {
    const Vector x = rule.points.row(i).transpose();
    const double w = rule.weights[i];
    const double uv = u.value(x);
    const Vector ug = u.tangent_gradient(x);
    num.add(w * (c_n * ug.squaredNorm() + r0 * uv * uv));
    den.add(w * K(x) * std::pow(std::abs(uv), p1));
  }
  if (!(den.total() > 0.0))
    throw std::domain_error("energy_JK_subcritical: nonpositive denominator");
  return num.total() / std::pow(den.total(), 2.0 / p1);
}

double gradient_JK(const WeightFunction& K, const DiscreteFunction& u, const DiscreteFunction& v,
                   const QuadratureRule& rule) {
  const int n = rule.n;
  const double c_n = 4.0 * (n - 1) / (n - 2);
  const double r0 = static_cast<double>(n) * (n - 1);
  const double exponent = 2.0 * n / (n - 2);

  Accumulator r_acc, k_acc, luv_acc, kuv_acc;
  for (int i = 0; i < rule.size(); ++i) {
    const Vector x = rule.points.row(i).transpose();
    const double w = rule.weights[i];
    const double uv = u.value(x);
    const double vv = v.value(x);
    const Vector ug = u.tangent_gradient(x);
    const Vector vg = v.tangent_gradient(x);
    const double kx = K(x);
    r_acc.add(w * (c_n * ug.squaredNorm() + r0 * uv * uv));
    k_acc.add(w * kx * std::pow(std::abs(uv), exponent));
    luv_acc.add(w * (c_n * ug.dot(vg) + r0 * uv * vv));
    kuv_acc.add(w * kx * std::pow(std::abs(uv), exponent - 1.0) * vv);
  }
  const double r = r_acc.total();
  const double k = k_acc.total();
  if (!(k > 0.0)) throw std::domain_error("gradient_JK: nonpositive denominator");
  return 2.0 / std::pow(k, (n - 2.0) / n) * (luv_acc.total() - r / k * kuv_acc.total());
}

double yamabe_invariant(int n) {
  return static_cast<double>(n) * (n - 1) * std::pow(sphere_volume(n), 2.0 / n);
}

double cpi_energy_constant(int n, const QuadratureRule& rule) {
  static std::map<std::pair<int, int>, double> cache;
  const auto key = std::make_pair(n, rule.level);
  const auto hit = cache.find(key);
  if (hit != cache.end()) return hit->second;

  Vector a = Vector::Zero(n + 1);
  for (int i = 0; i <= n; ++i) a[i] = 1.0;
  a = normalized(a);
  const double lambda = std::min(200.0, 1000.0 * static_cast<double>(rule.level));
  const double value = energy_JK(unit_weight(), DiscreteFunction::from_bubble(make_bubble(a, lambda, n)), rule);
  cache[key] = value;
  return value;
}

double bubble_energy_mass(const WeightFunction& K, const Vector& a, double lambda,
                          const QuadratureRule& rule) {
  // The Dirichlet numerator of a bubble is conformally invariant, so the
  // whole lambda-dependence of J_K(phi_{a,lambda}) sits in the pulled-back
  // K-mass. Evaluating it this way keeps the lambda^{-2} fit free of the
  // numerator's discretization tail.
  const int n = rule.n;
  check_lambda_cap(lambda, rule);
  ConformalDilation psi{normalized(a), lambda};
  Accumulator volq, mass;
  for (int i = 0; i < rule.size(); ++i) {
    const Vector z = rule.points.row(i).transpose();
    volq.add(rule.weights[i]);
    mass.add(rule.weights[i] * K(psi.map(z)));
  }
  if (!(mass.total() > 0.0)) throw std::domain_error("bubble_energy_mass: nonpositive K-mass");
  const double c = std::pow(static_cast<double>(n) * (n - 1), 0.25 * (n - 2));
  return std::pow(c, 4.0 / (n - 2)) * volq.total() * std::pow(mass.total(), -(n - 2.0) / n);
}

ExpansionReport expansion_sign_check(std::shared_ptr<const CandidateFunction> K, const Vector& a,
                                     const std::vector<double>& lambda_list,
                                     const QuadratureRule& rule) {
  if (lambda_list.size() < 3)
    throw std::invalid_argument("expansion_sign_check: need at least three lambda values");

  ExpansionReport report;
  const WeightFunction weight = candidate_weight(K);
  for (double lambda : lambda_list) {
    report.lambdas.push_back(lambda);
    report.energies.push_back(bubble_energy_mass(weight, a, lambda, rule));
  }

  // least squares for J = A + B / lambda^2
  const int m = static_cast<int>(lambda_list.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < m; ++i) {
    const double x = 1.0 / (report.lambdas[i] * report.lambdas[i]);
    const double y = report.energies[i];
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double det = m * sxx - sx * sx;
  report.coefficient = (m * sxy - sx * sy) / det;
  report.limit = (sy - report.coefficient * sx) / m;

  double ss_res = 0, mean_x = sx / m;
  double sxx_centered = sxx - m * mean_x * mean_x;
  for (int i = 0; i < m; ++i) {
    const double x = 1.0 / (report.lambdas[i] * report.lambdas[i]);
    const double fit = report.limit + report.coefficient * x;
    ss_res += (report.energies[i] - fit) * (report.energies[i] - fit);
  }
  const int dof = std::max(1, m - 2);
  const double se = std::sqrt(ss_res / dof / sxx_centered);
  report.t_statistic = se > 0.0 ? report.coefficient / se
                                : std::copysign(std::numeric_limits<double>::infinity(),
                                                report.coefficient);

  const double lap = laplace_beltrami(*K, a);
  report.sign_opposite_laplacian = report.coefficient * lap < 0.0;
  return report;
}

}  // namespace bubbletower
