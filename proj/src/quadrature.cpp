#include "bubbletower/quadrature.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>

namespace bubbletower {

void gauss_gegenbauer(int m, double alpha, Vector* nodes, Vector* weights) {
  if (m < 1) throw std::invalid_argument("gauss_gegenbauer: need at least one node");

  // total mass of (1-t^2)^alpha
  const double mu0 = std::sqrt(M_PI) * std::exp(std::lgamma(alpha + 1.0) - std::lgamma(alpha + 1.5));

  Vector diag = Vector::Zero(m);
  Vector sub = Vector::Zero(std::max(0, m - 1));
  for (int k = 1; k < m; ++k) {
    double beta_k;
    if (k == 1) {
      beta_k = 1.0 / (2.0 * alpha + 3.0);
    } else {
      const double s = 2.0 * k + 2.0 * alpha;
      beta_k = 4.0 * k * (k + alpha) * (k + alpha) * (k + 2.0 * alpha) /
               (s * s * (s + 1.0) * (s - 1.0));
    }
    sub[k - 1] = std::sqrt(beta_k);
  }

  Eigen::SelfAdjointEigenSolver<Matrix> solver;
  solver.computeFromTridiagonal(diag, sub);
  *nodes = solver.eigenvalues();
  weights->resize(m);
  for (int i = 0; i < m; ++i) {
    const double v = solver.eigenvectors()(0, i);
    (*weights)[i] = mu0 * v * v;
  }
}

QuadratureRule build_quadrature(int n, int level) {
  if (n < 1 || n > 7) throw std::invalid_argument("build_quadrature: supported dimensions are 1..7");
  if (level < 1) throw std::invalid_argument("build_quadrature: level must be >= 1");

  const int m = level + 1;
  QuadratureRule rule;
  rule.n = n;
  rule.level = level;

  if (n == 1) {
    const int count = 2 * m;
    rule.points.resize(count, 2);
    rule.weights.resize(count);
    for (int j = 0; j < count; ++j) {
      const double phi = 2.0 * M_PI * j / count;
      rule.points(j, 0) = std::cos(phi);
      rule.points(j, 1) = std::sin(phi);
      rule.weights[j] = 2.0 * M_PI / count;
    }
    return rule;
  }

  const QuadratureRule lower = build_quadrature(n - 1, level);
  Vector t, wt;
  gauss_gegenbauer(m, 0.5 * (n - 2), &t, &wt);

  const int count = m * lower.size();
  rule.points.resize(count, n + 1);
  rule.weights.resize(count);
  int row = 0;
  for (int i = 0; i < m; ++i) {
    const double s = std::sqrt(std::max(0.0, 1.0 - t[i] * t[i]));
    for (int j = 0; j < lower.size(); ++j) {
      for (int k = 0; k < n; ++k) rule.points(row, k) = s * lower.points(j, k);
      rule.points(row, n) = t[i];
      rule.weights[row] = wt[i] * lower.weights[j];
      ++row;
    }
  }
  return rule;
}

double integrate(const QuadratureRule& rule, const std::function<double(const Vector&)>& f) {
  double sum = 0.0, comp = 0.0;
  for (int i = 0; i < rule.size(); ++i) {
    const double term = rule.weights[i] * f(rule.points.row(i).transpose());
    const double t = sum + term;
    if (std::abs(sum) >= std::abs(term))
      comp += (sum - t) + term;
    else
      comp += (term - t) + sum;
    sum = t;
  }
  return sum + comp;
}

namespace {
constexpr char kMagic[8] = {'B', 'T', 'Q', 'U', 'A', 'D', '0', '1'};
}

void save_rule(const QuadratureRule& rule, const std::string& path) {
  std::filesystem::create_directories(std::filesystem::path(path).parent_path());
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write quadrature cache: " + tmp);
    out.write(kMagic, sizeof(kMagic));
    const std::int32_t header[3] = {static_cast<std::int32_t>(rule.n),
                                    static_cast<std::int32_t>(rule.level),
                                    static_cast<std::int32_t>(rule.size())};
    out.write(reinterpret_cast<const char*>(header), sizeof(header));
    out.write(reinterpret_cast<const char*>(rule.points.data()),
              static_cast<std::streamsize>(sizeof(double) * rule.points.size()));
    out.write(reinterpret_cast<const char*>(rule.weights.data()),
              static_cast<std::streamsize>(sizeof(double) * rule.weights.size()));
  }
  std::filesystem::rename(tmp, path);
}

bool load_rule(const std::string& path, QuadratureRule* rule) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) return false;
  std::int32_t header[3];
  in.read(reinterpret_cast<char*>(header), sizeof(header));
  if (!in) return false;
  rule->n = header[0];
  rule->level = header[1];
  const int count = header[2];
  rule->points.resize(count, rule->n + 1);
  rule->weights.resize(count);
  in.read(reinterpret_cast<char*>(rule->points.data()),
          static_cast<std::streamsize>(sizeof(double) * rule->points.size()));
  in.read(reinterpret_cast<char*>(rule->weights.data()),
          static_cast<std::streamsize>(sizeof(double) * rule->weights.size()));
  return static_cast<bool>(in);
}

QuadratureRule cached_quadrature(int n, int level, const std::string& cache_dir,
                                 bool bypass_cache) {
  if (cache_dir.empty() || bypass_cache) return build_quadrature(n, level);
  const std::string path = cache_dir + "/sphere_rule_n" + std::to_string(n) + "_l" +
                           std::to_string(level) + ".bin";
  QuadratureRule rule;
  if (load_rule(path, &rule) && rule.n == n && rule.level == level) return rule;
  rule = build_quadrature(n, level);
  save_rule(rule, path);
  return rule;
}

}  // namespace bubbletower
