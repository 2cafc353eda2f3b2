#ifndef BUBBLETOWER_CPI_HPP
#define BUBBLETOWER_CPI_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "bubbletower/critical.hpp"

namespace bubbletower {

enum class CatalogMode { HighDim, SingleBubble };

/// Critical-point data feeding the critical-points-at-infinity layer.
/// n >= 5 runs multi-bubble (subset) enumeration; n = 2,3 single-bubble.
struct CriticalCatalog {
  int n = 0;
  CatalogMode mode = CatalogMode::HighDim;
  std::vector<CriticalPoint> points;
  std::vector<std::string> labels;  // optional, parallel to points
};

CriticalCatalog make_catalog(int n, std::vector<CriticalPoint> points,
                             std::vector<std::string> labels = {});

/// Deterministic synthetic critical point for combinatorial catalogs.
CriticalPoint synthetic_point(int n, int ordinal, double value, int morse_index,
                              double laplacian);

/// Indices into catalog.points with negative Laplacian (the set C_-).
std::vector<int> negative_set(const CriticalCatalog& catalog);

/// One pure critical point at infinity: a nonempty subset of C_-(K).
struct CPI {
  std::uint32_t subset = 0;  // bitmask over negative_set ordering
  double energy = 0.0;
  int index = 0;
};

/// Energy of the subset given by `mask` over the points listed in C_-.
double cpi_energy(const CriticalCatalog& catalog, const std::vector<int>& neg,
                  std::uint32_t mask, double c_n);

/// All 2^{|C_-|}-1 pure critical points at infinity, sorted by energy with
/// bitmask tie-breaks. Requires HighDim mode and |C_-| <= 20.
std::vector<CPI> enumerate_cpi(const CriticalCatalog& catalog, double c_n);

/// Maximal pure energy mu(K): the full-set energy in HighDim mode, the
/// worst singleton in single-bubble mode.
double mu_max(const CriticalCatalog& catalog, double c_n);

/// sum over C_infinity of (-1)^{ind}: subsets in HighDim mode (closed form
/// above the enumeration cap), single Diracs otherwise.
long long index_count(const CriticalCatalog& catalog);

/// One point of a Morse structure with an optional forced Laplacian sign.
/// Extremal points are forced automatically: maxima of K carry Delta K < 0,
/// minima Delta K > 0.
struct StructurePoint {
  std::string label;
  int morse_index = 0;
  int forced_sign = 0;  // -1: Delta K < 0, +1: Delta K > 0, 0: free
};

/// All Laplacian sign assignments compatible with the forced signs whose
/// index count equals 1 = chi of the contractible variational space, i.e.
/// the assignments *not* ruled out by the counting formula.
std::vector<std::uint32_t> nonexistence_candidates(const std::vector<StructurePoint>& structure,
                                                   int n);

}  // namespace bubbletower

#endif
