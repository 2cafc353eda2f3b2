#include "bubbletower/cpi.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace bubbletower {

namespace {
constexpr int kEnumerationCap = 20;
}

CriticalCatalog make_catalog(int n, std::vector<CriticalPoint> points,
                             std::vector<std::string> labels) {
  if (n == 4)
    throw std::invalid_argument(
        "n = 4 is the balanced case (Laplacian and mass terms compete at the same order); "
        "this toolkit covers n in {2,3} and n >= 5");
  if (n < 2) throw std::invalid_argument("make_catalog: n must be >= 2");

  CriticalCatalog catalog;
  catalog.n = n;
  catalog.mode = n >= 5 ? CatalogMode::HighDim : CatalogMode::SingleBubble;
  catalog.points = std::move(points);
  catalog.labels = std::move(labels);
  if (!catalog.labels.empty() && catalog.labels.size() != catalog.points.size())
    throw std::invalid_argument("make_catalog: labels must match points");
  if (catalog.labels.empty()) {
    for (std::size_t i = 0; i < catalog.points.size(); ++i)
      catalog.labels.push_back("p" + std::to_string(i + 1));
  }

  for (std::size_t i = 0; i < catalog.points.size(); ++i) {
    const CriticalPoint& p = catalog.points[i];
    if (!(p.value > 0.0)) throw std::invalid_argument("make_catalog: K must be positive");
    if (p.laplacian == 0.0)
      throw std::invalid_argument("make_catalog: Delta K = 0 at a critical point");
    if (p.morse_index < 0 || p.morse_index > n)
      throw std::invalid_argument("make_catalog: Morse index out of range");
    for (std::size_t j = i + 1; j < catalog.points.size(); ++j)
      if (geodesic_distance(p.location, catalog.points[j].location) < 1e-9)
        throw std::invalid_argument("make_catalog: coincident critical points");
  }
  return catalog;
}

CriticalPoint synthetic_point(int n, int ordinal, double value, int morse_index,
                              double laplacian) {
  CriticalPoint p;
  p.location = Vector::Zero(n + 1);
  const double angle = 0.1 + 0.17 * ordinal;
  p.location[0] = std::cos(angle);
  p.location[1] = std::sin(angle);
  p.value = value;
  p.morse_index = morse_index;
  p.laplacian = laplacian;
  p.hessian_eigenvalues = Vector::Ones(n);
  for (int i = 0; i < morse_index; ++i) p.hessian_eigenvalues[i] = -1.0;
  return p;
}

std::vector<int> negative_set(const CriticalCatalog& catalog) {
  std::vector<int> neg;
  for (std::size_t i = 0; i < catalog.points.size(); ++i)
    if (catalog.points[i].laplacian < 0.0) neg.push_back(static_cast<int>(i));
  return neg;
}

double cpi_energy(const CriticalCatalog& catalog, const std::vector<int>& neg,
                  std::uint32_t mask, double c_n) {
  const double ex = 0.5 * (catalog.n - 2);
  double sum = 0.0;
  for (std::size_t j = 0; j < neg.size(); ++j)
    if (mask >> j & 1u) sum += std::pow(catalog.points[neg[j]].value, -ex);
  return c_n * std::pow(sum, 2.0 / catalog.n);
}

namespace {

int cpi_index(const CriticalCatalog& catalog, const std::vector<int>& neg, std::uint32_t mask) {
  int q = 0, sum = 0;
  for (std::size_t j = 0; j < neg.size(); ++j)
    if (mask >> j & 1u) {
      ++q;
      sum += catalog.n - catalog.points[neg[j]].morse_index;
    }
  return (q - 1) + sum;
}

}  // namespace

std::vector<CPI> enumerate_cpi(const CriticalCatalog& catalog, double c_n) {
  if (catalog.mode != CatalogMode::HighDim)
    throw std::invalid_argument("enumerate_cpi: subset enumeration needs n >= 5");
  const std::vector<int> neg = negative_set(catalog);
  if (neg.size() > kEnumerationCap) {
    std::ostringstream msg;
    msg << "enumerate_cpi: |C_-| = " << neg.size() << " exceeds the 2^" << kEnumerationCap
        << " enumeration cap";
    throw std::invalid_argument(msg.str());
  }

  std::vector<CPI> out;
  const std::uint32_t total = 1u << neg.size();
  out.reserve(total - 1);
  for (std::uint32_t mask = 1; mask < total; ++mask) {
    CPI cpi;
    cpi.subset = mask;
    cpi.energy = cpi_energy(catalog, neg, mask, c_n);
    cpi.index = cpi_index(catalog, neg, mask);
    out.push_back(cpi);
  }
  std::sort(out.begin(), out.end(), [](const CPI& a, const CPI& b) {
    if (a.energy != b.energy) return a.energy < b.energy;
    return a.subset < b.subset;
  });
  return out;
}

double mu_max(const CriticalCatalog& catalog, double c_n) {
  const std::vector<int> neg = negative_set(catalog);
  if (neg.empty()) throw std::invalid_argument("mu_max: C_-(K) is empty");
  if (catalog.mode == CatalogMode::HighDim) {
    const std::uint32_t full = (1u << neg.size()) - 1u;
    return cpi_energy(catalog, neg, full, c_n);
  }
  // single bubbling: the worst singleton, attained at the minimal K value
  double worst = 0.0;
  for (std::size_t j = 0; j < neg.size(); ++j)
    worst = std::max(worst, cpi_energy(catalog, neg, 1u << j, c_n));
  return worst;
}

long long index_count(const CriticalCatalog& catalog) {
  const std::vector<int> neg = negative_set(catalog);
  if (catalog.mode == CatalogMode::SingleBubble) {
    long long count = 0;
    for (int i : neg)
      count += (catalog.n - catalog.points[i].morse_index) % 2 == 0 ? 1 : -1;
    return count;
  }

  if (neg.size() <= kEnumerationCap) {
    long long count = 0;
    const std::uint32_t total = 1u << neg.size();
    for (std::uint32_t mask = 1; mask < total; ++mask)
      count += cpi_index(catalog, neg, mask) % 2 == 0 ? 1 : -1;
    return count;
  }

  // sum over nonempty subsets of (-1)^{(q-1)+sum(n-m_i)} collapses to
  // 1 - prod_i (1 - (-1)^{n-m_i})
  long long prod = 1;
  for (int i : neg) {
    const int sign = (catalog.n - catalog.points[i].morse_index) % 2 == 0 ? 1 : -1;
    prod *= 1 - sign;  // 0 or 2
    if (prod == 0) break;
  }
  return 1 - prod;
}

std::vector<std::uint32_t> nonexistence_candidates(const std::vector<StructurePoint>& structure,
                                                   int n) {
  if (structure.size() > kEnumerationCap)
    throw std::invalid_argument("nonexistence_candidates: too many points");

  std::vector<int> forced(structure.size(), 0);
  std::vector<std::size_t> free_slots;
  for (std::size_t i = 0; i < structure.size(); ++i) {
    const StructurePoint& p = structure[i];
    if (p.morse_index < 0 || p.morse_index > n)
      throw std::invalid_argument("nonexistence_candidates: Morse index out of range");
    int sign = p.forced_sign;
    if (p.morse_index == n) {
      if (sign > 0)
        throw std::invalid_argument("a maximum of K always has Delta K < 0");
      sign = -1;
    } else if (p.morse_index == 0) {
      if (sign < 0)
        throw std::invalid_argument("a minimum of K always has Delta K > 0");
      sign = +1;
    }
    forced[i] = sign;
    if (sign == 0) free_slots.push_back(i);
  }

  std::vector<std::uint32_t> admissible;
  const std::uint32_t assignments = 1u << free_slots.size();
  for (std::uint32_t choice = 0; choice < assignments; ++choice) {
    std::uint32_t member_mask = 0;
    std::vector<CriticalPoint> pts;
    for (std::size_t i = 0; i < structure.size(); ++i) {
      int sign = forced[i];
      if (sign == 0) {
        const std::size_t slot =
            std::find(free_slots.begin(), free_slots.end(), i) - free_slots.begin();
        sign = (choice >> slot & 1u) ? -1 : +1;
      }
      if (sign < 0) member_mask |= 1u << i;
      pts.push_back(synthetic_point(n, static_cast<int>(i), 1.0 + 0.1 * i,
                                    structure[i].morse_index, sign));
    }
    CriticalCatalog catalog = make_catalog(n, std::move(pts));
    if (index_count(catalog) == 1) admissible.push_back(member_mask);
  }
  return admissible;
}

}  // namespace bubbletower
