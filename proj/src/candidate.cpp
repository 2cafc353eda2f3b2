#include "bubbletower/candidate.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace bubbletower {

namespace {

// Quintic smoothstep ramp on [1,2]; eta' stays within [0, 1.875].
double eta(double r) {
  if (r <= 1.0) return 0.0;
  if (r >= 2.0) return 1.0;
  const double t = r - 1.0;
  return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

double eta_d1(double r) {
  if (r <= 1.0 || r >= 2.0) return 0.0;
  const double t = r - 1.0;
  const double s = t * (1.0 - t);
  return 30.0 * s * s;
}

double eta_d2(double r) {
  if (r <= 1.0 || r >= 2.0) return 0.0;
  const double t = r - 1.0;
  return 60.0 * t * (1.0 - t) * (1.0 - 2.0 * t);
}

struct PatchEval {
  double value = 0.0;
  Vector grad;
  Matrix hess;
};

PatchEval eval_patch(const SurgeryPatch& patch, const Vector& x, bool need_hess) {
  const int d = static_cast<int>(x.size());
  PatchEval out;
  out.grad = Vector::Zero(d);
  if (need_hess) out.hess = Matrix::Zero(d, d);

  double u = patch.center.dot(x);
  u = std::max(-1.0, std::min(1.0, u));
  const double support = std::cos(std::min(2.0 * patch.delta, M_PI));
  if (u <= support) return out;  // outside the 2*delta ball

  const int n = static_cast<int>(patch.base_coeff.size());
  const double g = theta_over_sin(u);
  const double g1 = theta_over_sin_d1(u);
  const double g2 = theta_over_sin_d2(u);
  const double G = g * g;          // g^2 and derivatives in u
  const double G1 = 2.0 * g * g1;
  const double G2 = 2.0 * (g1 * g1 + g * g2);

  // R = sum_j gamma_j <E_j,x>^2 with gamma_j = c_j - b_j
  double R = 0.0;
  Vector gradR = Vector::Zero(d);
  for (int j = 0; j < n; ++j) {
    const double gamma = patch.target_coeff[j] - patch.base_coeff[j];
    const double v = patch.frame.col(j).dot(x);
    R += gamma * v * v;
    gradR += 2.0 * gamma * v * patch.frame.col(j);
  }

  // h = 1 - eta(acos(u)/delta) and derivatives in u
  double h, h1, h2;
  const double inner = std::cos(patch.delta);
  if (u >= inner) {
    h = 1.0;
    h1 = 0.0;
    h2 = 0.0;
  } else {
    const double theta = std::acos(u);
    const double r = theta / patch.delta;
    const double s = std::sqrt(std::max(1e-300, 1.0 - u * u));
    h = 1.0 - eta(r);
    h1 = eta_d1(r) / (patch.delta * s);
    h2 = -eta_d2(r) / (patch.delta * patch.delta * s * s) + eta_d1(r) * u / (patch.delta * s * s * s);
  }

  const double P = h * G;
  const double P1 = h1 * G + h * G1;
  const double P2 = h2 * G + 2.0 * h1 * G1 + h * G2;

  out.value = P * R;
  out.grad = P1 * R * patch.center + P * gradR;
  if (need_hess) {
    out.hess = P2 * R * (patch.center * patch.center.transpose());
    out.hess += P1 * (patch.center * gradR.transpose() + gradR * patch.center.transpose());
    for (int j = 0; j < n; ++j) {
      const double gamma = patch.target_coeff[j] - patch.base_coeff[j];
      out.hess += 2.0 * P * gamma * (patch.frame.col(j) * patch.frame.col(j).transpose());
    }
  }
  return out;
}

}  // namespace

CandidateFunction::CandidateFunction(SphereSpec spec, Expr::Ptr body)
    : spec_(spec), body_(std::move(body)) {
  const int d = spec_.ambient_dim();
  grad_.resize(d);
  hess_.assign(d, std::vector<Expr::Ptr>(d));
  for (int i = 0; i < d; ++i) grad_[i] = body_->derivative(i);
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) hess_[i][j] = grad_[i]->derivative(j);
}

CandidateFunction::CandidateFunction(std::shared_ptr<const CandidateFunction> base,
                                     SurgeryPatch patch)
    : spec_(base->spec()), base_(std::move(base)) {
  patches_ = base_->patches_;
  patches_.push_back(std::move(patch));
}

std::string CandidateFunction::describe() const {
  if (patched()) {
    std::ostringstream out;
    out << base_->describe() << " + " << patches_.size() << " patch(es)";
    return out.str();
  }
  return body_->to_string();
}

double CandidateFunction::value(const Vector& x) const {
  if (!patched()) return body_->eval(x);
  double v = base_->value(x);
  // only the last patch belongs to this layer; earlier ones are the base's
  v += eval_patch(patches_.back(), x, false).value;
  return v;
}

Vector CandidateFunction::ambient_gradient(const Vector& x) const {
  const int d = spec_.ambient_dim();
  if (!patched()) {
    Vector g(d);
    for (int i = 0; i < d; ++i) g[i] = grad_[i]->eval(x);
    return g;
  }
  Vector g = base_->ambient_gradient(x);
  g += eval_patch(patches_.back(), x, false).grad;
  return g;
}

Matrix CandidateFunction::ambient_hessian(const Vector& x) const {
  const int d = spec_.ambient_dim();
  if (!patched()) {
    Matrix h(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j) {
        h(i, j) = hess_[i][j]->eval(x);
        h(j, i) = h(i, j);
      }
    return h;
  }
  Matrix h = base_->ambient_hessian(x);
  h += eval_patch(patches_.back(), x, true).hess;
  return h;
}

std::vector<Vector> validation_sample(const SphereSpec& spec) {
  const int d = spec.ambient_dim();
  std::vector<Vector> pts;
  for (int i = 0; i < d; ++i) {
    Vector p = Vector::Zero(d);
    p[i] = 1.0;
    pts.push_back(p);
    p[i] = -1.0;
    pts.push_back(p);
  }
  // all +-1 sign patterns, normalized
  const int count = 1 << d;
  for (int mask = 0; mask < count; ++mask) {
    Vector p(d);
    for (int i = 0; i < d; ++i) p[i] = (mask >> i) & 1 ? 1.0 : -1.0;
    pts.push_back(p / std::sqrt(static_cast<double>(d)));
  }
  // diagonal two-coordinate points
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      for (double si : {1.0, -1.0})
        for (double sj : {1.0, -1.0}) {
          Vector p = Vector::Zero(d);
          p[i] = si * M_SQRT1_2;
          p[j] = sj * M_SQRT1_2;
          pts.push_back(p);
        }
  return pts;
}

CandidateFunction parse_candidate(const std::string& text, const SphereSpec& spec) {
  CandidateFunction K(spec, parse_expression(text, spec.ambient_dim()));
  for (const Vector& p : validation_sample(spec)) {
    const double v = K.value(p);  // throws EvalError on division by zero
    if (!(v > 0.0)) {
      std::ostringstream msg;
      msg << "candidate is not positive on the sphere: K = " << v << " at sample point";
      throw std::domain_error(msg.str());
    }
  }
  return K;
}

CandidateFunction load_candidate_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open candidate file: " + path);
  std::string line;
  int dim = -1;
  std::ostringstream expr;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto begin = line.find_first_not_of(" \t\r");
    if (begin == std::string::npos) continue;
    auto end = line.find_last_not_of(" \t\r");
    std::string body = line.substr(begin, end - begin + 1);
    if (dim < 0) {
      if (body.rfind("dim=", 0) != 0)
        throw std::runtime_error(path + ": first line must be dim=<n>");
      dim = std::stoi(body.substr(4));
      continue;
    }
    expr << body << ' ';
  }
  if (dim < 0) throw std::runtime_error(path + ": missing dim=<n> header");
  return parse_candidate(expr.str(), SphereSpec(dim));
}

Vector intrinsic_gradient(const CandidateFunction& K, const Vector& p) {
  return tangent_project(p, K.ambient_gradient(p));
}

double laplace_beltrami(const CandidateFunction& K, const Vector& p) {
  const Vector g = K.ambient_gradient(p);
  const Matrix h = K.ambient_hessian(p);
  const double radial2 = p.dot(h * p);
  const double radial1 = g.dot(p);
  return h.trace() - radial2 - K.spec().n * radial1;
}

Matrix intrinsic_hessian(const CandidateFunction& K, const Vector& p) {
  const Matrix frame = tangent_frame(p);
  const Matrix h = K.ambient_hessian(p);
  const double radial1 = K.ambient_gradient(p).dot(p);
  const int n = K.spec().n;
  Matrix out(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double v = frame.col(i).dot(h * frame.col(j));
      if (i == j) v -= radial1;
      out(i, j) = v;
      out(j, i) = v;
    }
  return out;
}

}  // namespace bubbletower
