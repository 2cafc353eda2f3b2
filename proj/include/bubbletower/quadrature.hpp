#ifndef BUBBLETOWER_QUADRATURE_HPP
#define BUBBLETOWER_QUADRATURE_HPP

#include <functional>
#include <string>

#include "bubbletower/geometry.hpp"

namespace bubbletower {

/// Product Gauss rule on S^n. With `level` = L the rule integrates every
/// ambient polynomial of degree <= 2L exactly (degree 2L+1 in fact), using
/// 2*(L+1)^n nodes.
struct QuadratureRule {
  int n = 0;
  int level = 0;
  Matrix points;   // N x (n+1), rows are unit vectors
  Vector weights;  // positive, summing to vol(S^n)

  int size() const { return static_cast<int>(weights.size()); }
};

/// Gauss nodes/weights for the weight (1-t^2)^alpha on [-1,1]
/// (Golub-Welsch on the Jacobi matrix).
void gauss_gegenbauer(int m, double alpha, Vector* nodes, Vector* weights);

QuadratureRule build_quadrature(int n, int level);

/// Compensated (Neumaier) summation of f over the rule.
double integrate(const QuadratureRule& rule, const std::function<double(const Vector&)>& f);

/// Binary cache keyed by (n, level) under a version-keyed directory.
/// Returns the cached rule when present, otherwise builds and stores it.
QuadratureRule cached_quadrature(int n, int level, const std::string& cache_dir,
                                 bool bypass_cache = false);

void save_rule(const QuadratureRule& rule, const std::string& path);
bool load_rule(const std::string& path, QuadratureRule* rule);

}  // namespace bubbletower

#endif
