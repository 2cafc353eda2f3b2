#ifndef BUBBLETOWER_SCHEME_HPP
#define BUBBLETOWER_SCHEME_HPP

#include <optional>
#include <string>
#include <vector>

#include "bubbletower/chain.hpp"
#include "bubbletower/cpi.hpp"

namespace bubbletower {

class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Comparison scenario for two functionals kappa1 J <= I <= kappa2 J:
/// all critical events of J except one sit at levels <= k1; the
/// distinguished event c lies in (k2, k3]. The thresholds of the argument
/// are A = kappa1 k2, B_lo = k2, C = kappa2 k3, D = (kappa2/kappa1) k3.
struct FiltrationScenario {
  double k1 = 0.0, k2 = 0.0, k3 = 0.0;
  double kappa1 = 1.0, kappa2 = 1.0;
  ChainComplex base_complex;                    // sublevel {J <= B_lo}
  std::vector<std::vector<double>> base_levels; // per degree, parallel to generators
  std::string cell_label = "c";
  double cell_level = 0.0;
  int cell_index = 0;
  std::vector<std::uint8_t> attaching_cycle;    // over degree cell_index-1

  double threshold_A() const { return kappa1 * k2; }
  double threshold_B_lo() const { return k2; }
  double threshold_C() const { return kappa2 * k3; }
  double threshold_D() const { return kappa2 / kappa1 * k3; }

  void validate() const;  // throws ScenarioError
};

struct SchemeConclusion {
  std::vector<int> betti_without;   // sublevel B_lo
  std::vector<int> betti_with;      // B_lo with the c-cell attached
  int changed_degree = -1;
  int change = 0;                   // +-1
  double window_lo = 0.0;           // A
  double window_hi = 0.0;           // C
  std::vector<std::string> audit;
};

/// Runs the deformation contradiction: attaching the distinguished cell
/// changes exactly one Betti number, which is incompatible with the
/// homotopy equivalence chains A ~ B_hi ~ C ~ D and O ~ A ~ B_lo ~ C that
/// would follow if I had no critical value in [A, C]. Returns the forced
/// conclusion; throws ScenarioError when the scenario invariants fail.
SchemeConclusion check_deformation_scheme(const FiltrationScenario& scenario);

FiltrationScenario load_scenario_file(const std::string& path, const std::string& complex_dir);

/// Labeled smooth-heart data on S^3: the six points ordered
/// x0, x1, x2^1, x2^2, x3^1, x3^2 by the Morse index of 1/K with the
/// index-2 pair sorted by increasing 1/K.
struct HeartData {
  std::vector<std::string> labels;
  std::vector<double> values;      // K(x)
  std::vector<double> laplacians;  // Delta K(x)
  std::vector<int> inverse_index;  // m(1/K, x)
};

/// Identifies the heart labeling inside a 6-point catalog on S^3.
HeartData label_heart_catalog(const CriticalCatalog& catalog);

struct HeartReport {
  bool certified = false;
  double energy_bound = 0.0;         // c_3 / K^{1/3}(x2^2)
  std::vector<int> betti_assumed;    // Morse side of the assumed sublevel
  std::vector<int> betti_injected;   // after injecting the 2-cell
  std::vector<std::string> failures; // precondition violations, one each
  std::vector<std::string> audit;
};

/// Existence certifier for the heart configuration: under
/// 1/K(x2^1) <= 1/K(x2^2) and Delta K(x2^1) > 0 > Delta K(x2^2), Delta K(x1),
/// assumed non-existence forces beta_1 = 1 on the Morse side while the
/// injected 2-cell kills the same cycle, so a solution with energy at most
/// c_3 / K^{1/3}(x2^2) must exist.
HeartReport certify_heart_existence(const HeartData& data, double c3);

}  // namespace bubbletower

#endif
