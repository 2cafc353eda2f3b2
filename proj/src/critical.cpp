#include "bubbletower/critical.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

namespace bubbletower {

namespace {

int default_resolution(int n) {
  switch (n) {
    case 2: return 24;
    case 3: return 10;
    case 4: return 8;
    case 5: return 6;
    default: return 5;
  }
}

struct Converged {
  Vector location;
  double grad_norm;
};

bool newton_refine(const CandidateFunction& K, Vector x, double tol, int max_steps,
                   Vector* out) {
  const int d = K.spec().ambient_dim();
  const int n = K.spec().n;
  for (int step = 0; step < max_steps; ++step) {
    const Vector g_amb = tangent_project(x, K.ambient_gradient(x));
    const double gnorm = g_amb.norm();
    if (gnorm <= tol) {
      *out = x;
      return true;
    }
    const Matrix frame = tangent_frame(x);
    Vector g(n);
    for (int i = 0; i < n; ++i) g[i] = frame.col(i).dot(g_amb);
    Matrix h = intrinsic_hessian(K, x);

    Vector xi = h.fullPivLu().solve(-g);
    if (!xi.allFinite() || xi.norm() > 0.5) {
      if (!xi.allFinite() || xi.norm() == 0.0)
        xi = -0.1 * g;  // gradient fallback
      else
        xi *= 0.5 / xi.norm();
    }

    bool moved = false;
    double t = 1.0;
    for (int back = 0; back < 30; ++back) {
      Vector trial = normalized(x + frame * (t * xi));
      const double trial_norm = tangent_project(trial, K.ambient_gradient(trial)).norm();
      if (trial_norm < gnorm || trial_norm <= tol) {
        x = trial;
        moved = true;
        break;
      }
      t *= 0.5;
    }
    if (!moved) return false;
  }
  const Vector g_amb = tangent_project(x, K.ambient_gradient(x));
  if (g_amb.norm() <= tol) {
    *out = x;
    return true;
  }
  return false;
}

CriticalPoint classify(const CandidateFunction& K, const Vector& x, double degeneracy_tol) {
  CriticalPoint cp;
  cp.location = x;
  cp.value = K.value(x);
  cp.laplacian = laplace_beltrami(K, x);

  const Matrix h = intrinsic_hessian(K, x);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  cp.hessian_eigenvalues = solver.eigenvalues();

  const double scale = cp.hessian_eigenvalues.cwiseAbs().maxCoeff();
  if (scale == 0.0)
    throw DegeneracyError("zero Hessian at a critical point (not a Morse function)");
  const double floor = degeneracy_tol * scale;
  int negatives = 0;
  for (int i = 0; i < cp.hessian_eigenvalues.size(); ++i) {
    const double ev = cp.hessian_eigenvalues[i];
    if (std::abs(ev) < floor) {
      std::ostringstream msg;
      msg << "degenerate critical point: Hessian eigenvalue " << ev
          << " below tolerance " << floor << " (K=" << cp.value << ")";
      throw DegeneracyError(msg.str());
    }
    if (ev < 0.0) ++negatives;
  }
  cp.morse_index = negatives;

  if (std::abs(cp.laplacian) < floor) {
    std::ostringstream msg;
    msg << "gradient/Laplacian separation violated: |Delta K| = " << std::abs(cp.laplacian)
        << " below tolerance " << floor;
    throw DegeneracyError(msg.str());
  }
  return cp;
}

}  // namespace

std::vector<Vector> seed_grid(const SphereSpec& spec, int grid_resolution) {
  const int n = spec.n;
  const int r = grid_resolution > 0 ? grid_resolution : default_resolution(n);
  std::vector<Vector> seeds;

  if (n == 2) {
    seeds = fibonacci_sphere(std::max(r * r, 32));
  } else {
    // tensorized angular grid: theta_1..theta_{n-1} in (0,pi), phi in [0,2pi)
    const int d = spec.ambient_dim();
    std::vector<int> idx(n, 0);
    std::vector<int> radix(n, r);
    radix[n - 1] = 2 * r;
    while (true) {
      std::vector<double> ang(n);
      for (int k = 0; k < n - 1; ++k) ang[k] = M_PI * (idx[k] + 0.5) / r;
      ang[n - 1] = 2.0 * M_PI * idx[n - 1] / (2 * r);
      Vector p(d);
      double sines = 1.0;
      for (int k = 0; k < n; ++k) {
        p[k] = sines * std::cos(ang[k]);
        sines *= std::sin(ang[k]);
      }
      p[n] = sines;
      seeds.push_back(p);
      int carry = n - 1;
      while (carry >= 0 && ++idx[carry] == radix[carry]) idx[carry--] = 0;
      if (carry < 0) break;
    }
  }

  const int d = spec.ambient_dim();
  for (int i = 0; i < d; ++i) {
    Vector p = Vector::Zero(d);
    p[i] = 1.0;
    seeds.push_back(p);
    p[i] = -1.0;
    seeds.push_back(p);
  }

  const double required = std::pow(10.0, 0.5 * n);
  if (static_cast<double>(seeds.size()) < required)
    throw std::invalid_argument("grid_resolution yields too few seed points");
  return seeds;
}

std::vector<CriticalPoint> find_critical_points(const CandidateFunction& K,
                                                int grid_resolution,
                                                const FindOptions& opts) {
  const SphereSpec& spec = K.spec();
  const std::vector<Vector> seeds = seed_grid(spec, grid_resolution > 0
                                                        ? grid_resolution
                                                        : opts.grid_resolution);

  std::vector<Converged> found;
  for (const Vector& seed : seeds) {
    Vector x;
    if (!newton_refine(K, seed, opts.gradient_tol, opts.max_newton_steps, &x)) continue;
    const double gnorm = tangent_project(x, K.ambient_gradient(x)).norm();
    bool merged = false;
    for (Converged& c : found) {
      if (geodesic_distance(c.location, x) < opts.merge_tol) {
        if (gnorm < c.grad_norm) c = {x, gnorm};
        merged = true;
        break;
      }
    }
    if (!merged) found.push_back({x, gnorm});
  }

  std::vector<CriticalPoint> points;
  points.reserve(found.size());
  for (const Converged& c : found) points.push_back(classify(K, c.location, opts.degeneracy_tol));

  std::sort(points.begin(), points.end(), [](const CriticalPoint& a, const CriticalPoint& b) {
    if (a.value != b.value) return a.value < b.value;
    for (int i = 0; i < a.location.size(); ++i)
      if (a.location[i] != b.location[i]) return a.location[i] < b.location[i];
    return false;
  });

  if (opts.check_morse_counts) {
    bool has_min = false, has_max = false;
    int parity = 0;
    for (const CriticalPoint& p : points) {
      has_min |= p.morse_index == 0;
      has_max |= p.morse_index == spec.n;
      parity += (p.morse_index % 2 == 0) ? 1 : -1;
    }
    const int euler = (spec.n % 2 == 0) ? 2 : 0;
    if (!has_min || !has_max || parity != euler) {
      std::ostringstream msg;
      msg << "critical catalog violates the S^n Morse counts (found " << points.size()
          << " points, index parity " << parity << ", expected Euler characteristic " << euler
          << "); increase grid_resolution";
      throw std::runtime_error(msg.str());
    }
  }
  return points;
}

AdmissibilityReport check_admissibility(const CandidateFunction& K, int grid_resolution) {
  AdmissibilityReport report;

  report.min_value = std::numeric_limits<double>::infinity();
  bool eval_ok = true;
  try {
    for (const Vector& p : validation_sample(K.spec()))
      report.min_value = std::min(report.min_value, K.value(p));
    for (const Vector& p : seed_grid(K.spec(), grid_resolution))
      report.min_value = std::min(report.min_value, K.value(p));
  } catch (const EvalError& err) {
    eval_ok = false;
    report.detail = err.what();
  }
  report.positive = eval_ok && report.min_value > 0.0;

  try {
    report.points = find_critical_points(K, grid_resolution);
    report.morse = true;
    report.laplacian_margin = std::numeric_limits<double>::infinity();
    for (const CriticalPoint& p : report.points)
      report.laplacian_margin = std::min(report.laplacian_margin, std::abs(p.laplacian));
    report.laplacian_separated = report.laplacian_margin > 0.0;
  } catch (const std::exception& err) {
    report.morse = false;
    report.laplacian_separated = false;
    report.laplacian_margin = 0.0;
    if (!report.detail.empty()) report.detail += "; ";
    report.detail += err.what();
  }
  return report;
}

CandidateFunction laplacian_surgery(const CandidateFunction& K,
                                    const CriticalPoint& x0,
                                    const std::vector<CriticalPoint>& all_points,
                                    const std::vector<double>& c,
                                    double delta, double eps) {
  const SphereSpec& spec = K.spec();
  const int n = spec.n;
  if (x0.morse_index == 0 || x0.morse_index == n)
    throw std::invalid_argument("laplacian_surgery: center must be a non-extremal critical point");
  if (static_cast<int>(c.size()) != n)
    throw std::invalid_argument("laplacian_surgery: need n target coefficients");
  if (!(delta > 0.0) || !(eps > 0.0))
    throw std::invalid_argument("laplacian_surgery: delta and eps must be positive");

  for (const CriticalPoint& other : all_points) {
    const double dist = geodesic_distance(other.location, x0.location);
    if (dist < 1e-9) continue;  // that is x0 itself
    if (dist <= 2.0 * delta)
      throw std::invalid_argument(
          "laplacian_surgery: the 2*delta ball meets another critical point");
  }

  // quadratic normal-form coefficients and eigendirections at x0
  const Matrix frame = tangent_frame(x0.location);
  const Matrix h = intrinsic_hessian(K, x0.location);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);

  SurgeryPatch patch;
  patch.center = x0.location;
  patch.delta = delta;
  patch.eps = eps;
  patch.frame = Matrix(spec.ambient_dim(), n);
  patch.base_coeff.resize(n);
  patch.target_coeff = c;
  for (int j = 0; j < n; ++j) {
    patch.base_coeff[j] = 0.5 * solver.eigenvalues()[j];
    Vector dir = frame * solver.eigenvectors().col(j);
    int lead = 0;
    for (int i = 1; i < dir.size(); ++i)
      if (std::abs(dir[i]) > std::abs(dir[lead])) lead = i;
    if (dir[lead] < 0.0) dir = -dir;
    patch.frame.col(j) = dir;
  }

  for (int j = 0; j < n; ++j) {
    const double b = patch.base_coeff[j];
    if (std::abs(c[j] - b) > eps * std::abs(b) * (1.0 + 1e-12)) {
      std::ostringstream msg;
      msg << "laplacian_surgery: coefficient " << j + 1 << " moves " << std::abs(c[j] - b)
          << " > eps*|b| = " << eps * std::abs(b);
      throw std::invalid_argument(msg.str());
    }
  }

  auto base = std::make_shared<const CandidateFunction>(K);
  return CandidateFunction(base, std::move(patch));
}

}  // namespace bubbletower
