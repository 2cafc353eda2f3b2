#ifndef BUBBLETOWER_SPREAD_HPP
#define BUBBLETOWER_SPREAD_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bubbletower/geometry.hpp"

namespace bubbletower {

/// Interleaved energy strips 0 < lo_1 <= hi_1 < lo_2 <= hi_2 < ...
/// Strip indices are 1-based throughout, matching the ladder subscripts.
struct StripLadder {
  std::vector<double> lower;
  std::vector<double> upper;

  int size() const { return static_cast<int>(lower.size()); }
  void validate() const;
  /// 1-based index of the strip containing v, or 0 when v falls in a gap.
  int strip_of(double v) const;
};

/// One admissible function, reduced to the data the energy combinatorics
/// needs: K at the m non-minimal critical points (ordered to match the
/// fixed strip indices) and the Laplacian signs. `solvable` is the external
/// oracle flag: whether {dJ_K = 0} n {J_K <= L} is known nonempty.
struct SpreadMember {
  std::string label;
  std::vector<double> values;
  std::vector<int> laplacian_signs;  // +-1 per point
  bool solvable = false;

  std::uint32_t signature() const;  // bitmask of points with Delta K < 0
};

/// A family of members sharing one ladder, fixed indices and Morse shape.
/// subset_conditions selects the multi-bubble (n >= 5) strip conditions over
/// all subsets; the single-bubble relaxation checks elements only.
struct SpreadInstance {
  int n = 5;
  double c_n = 1.0;
  bool subset_conditions = true;
  StripLadder ladder;
  std::vector<int> fixed_indices;  // 1-based, strictly increasing
  std::vector<SpreadMember> members;

  int point_count() const { return static_cast<int>(fixed_indices.size()); }
  void validate_shape() const;

  /// c_n (sum_{j in mask} K_j^{-(n-2)/2})^{2/n}
  double subset_energy(const SpreadMember& member, std::uint32_t mask) const;
  /// 1/K^{(n-2)/n}(x_j), the single-point strip quantity
  double singleton_value(const SpreadMember& member, int j) const;
  double mu(const SpreadMember& member) const;
};

SpreadInstance load_spread_file(const std::string& path);
void save_spread_file(const SpreadInstance& instance, const std::string& path);

struct SpreadingReport {
  bool ok = true;
  bool signs_nonzero = true;
  bool count_matches = true;
  bool singletons_in_strips = true;
  bool subsets_in_strips = true;
  std::optional<std::uint32_t> first_violated_subset;
  std::optional<int> first_violated_singleton;  // 0-based point
  std::vector<std::string> detail;
};

/// Conditions (i)-(iv) for one member against the instance's ladder.
SpreadingReport validate_spreading(const SpreadInstance& instance, const SpreadMember& member);

struct SpreadReport {
  bool ok = true;
  std::vector<SpreadingReport> member_reports;
  /// strip index per subset mask (masks 1..2^m-1; singletons only in
  /// single-bubble mode), 0 entries unused
  std::vector<int> strip_by_subset;
  std::optional<std::uint32_t> first_inconsistent_subset;
  std::vector<std::string> detail;
};

/// Condition (v): every subset's strip index is member-independent.
SpreadReport validate_spread(const SpreadInstance& instance);

struct SpreadClass {
  std::uint32_t signature = 0;
  std::vector<int> member_indices;
  int strip_index = 0;  // i(class), 1-based ladder strip of mu
};

struct ClassPartition {
  std::vector<SpreadClass> classes;     // ascending strip order
  std::vector<int> occupied_strips;     // the set N, ascending
};

class Lemma5Violation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Signature fibers ordered by the strip of the maximal pure energy; checks
/// the energetic identification (equal signature <=> shared mu strip) on the
/// data and throws Lemma5Violation if the spread data is corrupt.
ClassPartition partition(const SpreadInstance& instance);

/// Definition-3 index: the highest occupied strip whose class contains a
/// member not flagged solvable; 0 when every member is flagged solvable.
int sigma(const ClassPartition& classes, const SpreadInstance& instance);

enum class RejectionKind { Gap, Pinching, Bound, StripOrder, Isolation };

class CertificationError : public std::runtime_error {
 public:
  CertificationError(RejectionKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}
  RejectionKind kind() const { return kind_; }

 private:
  RejectionKind kind_;
};

struct Certificate {
  enum class Kind { ExclusiveClass, ComparisonWindow };
  Kind kind = Kind::ExclusiveClass;
  double energy_bound = 0.0;   // L
  double window_lo = 0.0;      // comparison: solution energy window
  double window_hi = 0.0;
  double gap_margin = 0.0;
  double pinching_margin = 0.0;
  std::vector<std::string> audit;
};

/// Separation certificate: if kappa_hi/kappa_lo stays below every
/// consecutive occupied strip ratio and all member pairs are pinched, then
/// at most one class can contain a member with no solution below
/// L = (kappa_hi/kappa_lo) * max occupied upper bound.
Certificate certify_spread(const SpreadInstance& instance, double kappa_lo, double kappa_hi);

/// The same certificate re-checked at the four corners of a +-margin box
/// around (kappa_lo, kappa_hi); models the o_tau(1) drift of the subcritical
/// comparison constants.
Certificate certify_spread_robust(const SpreadInstance& instance, double kappa_lo,
                                  double kappa_hi, double tau_margin = 1e-3);

/// Comparison certificate between a member of a lower class (index_lo) and
/// one of a higher class (index_hi): conditional on the higher member having
/// no solution below (kappa_cur/kappa_prev) * upper_sigma, the lower member
/// has a solution with energy in [kappa_prev * lower_sigma_strip_lo,
/// kappa_cur * upper_sigma]. kappa_bounds optionally supplies the
/// (kappa_lo, kappa_hi) cap of the separation certificate for the bound
/// check; by default (kappa_prev, kappa_cur) is used.
Certificate certify_comparison(const SpreadInstance& instance, int member_lo, int member_hi,
                               double kappa_prev, double kappa_cur,
                               std::optional<std::pair<double, double>> kappa_bounds = {});

}  // namespace bubbletower

#endif
