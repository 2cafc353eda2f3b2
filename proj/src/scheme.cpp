#include "bubbletower/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace bubbletower {

void FiltrationScenario::validate() const {
  if (!(0.0 < k1 && k1 < k2 && k2 < k3))
    throw ScenarioError("scenario needs 0 < k1 < k2 < k3");
  if (!(0.0 < kappa1 && kappa1 < 1.0 && 1.0 < kappa2))
    throw ScenarioError("scenario needs 0 < kappa1 < 1 < kappa2");
  if (!(kappa2 * k1 < kappa1 * k2))
    throw ScenarioError("scenario needs kappa2*k1 < kappa1*k2");
  if (!(k2 < cell_level && cell_level <= k3))
    throw ScenarioError("the distinguished event must sit in (k2, k3]");

  const ComplexViolation check = validate_complex(base_complex);
  if (!check.ok) throw ScenarioError("base complex invalid: " + check.detail);
  if (base_levels.size() != base_complex.generators.size())
    throw ScenarioError("base levels must parallel the base complex");
  int events_in_window = 1;  // the distinguished cell
  for (std::size_t k = 0; k < base_levels.size(); ++k) {
    if (base_levels[k].size() != base_complex.generators[k].size())
      throw ScenarioError("base levels must parallel the base complex");
    for (double level : base_levels[k]) {
      if (level > k1)
        throw ScenarioError("a base event sits above k1 (two events in (B_lo, D]?)");
      if (level > k2 && level <= threshold_D()) ++events_in_window;
    }
  }
  if (events_in_window != 1)
    throw ScenarioError("exactly one critical event of J may lie in (B_lo, D]");
  if (cell_index < 0 || cell_index > base_complex.top_degree() + 1)
    throw ScenarioError("cell dimension out of range");
}

SchemeConclusion check_deformation_scheme(const FiltrationScenario& scenario) {
  scenario.validate();

  SchemeConclusion out;
  out.betti_without = homology(scenario.base_complex);
  const ChainComplex attached =
      attach_cell(scenario.base_complex, scenario.cell_index, scenario.attaching_cycle,
                  scenario.cell_label);
  out.betti_with = homology(attached);

  const int degrees = std::max(out.betti_without.size(), out.betti_with.size());
  out.betti_without.resize(degrees, 0);
  out.betti_with.resize(degrees, 0);
  for (int k = 0; k < degrees; ++k) {
    const int diff = out.betti_with[k] - out.betti_without[k];
    if (diff != 0) {
      out.changed_degree = k;
      out.change = diff;
      break;
    }
  }
  if (out.changed_degree < 0)
    throw ScenarioError("attaching the cell left homology unchanged (corrupt data)");

  out.window_lo = scenario.threshold_A();
  out.window_hi = scenario.threshold_C();

  std::ostringstream line;
  line << "attaching " << scenario.cell_label << " (dim " << scenario.cell_index
       << ") moves beta_" << out.changed_degree << " by " << out.change;
  out.audit.push_back(line.str());
  line.str("");
  line << "so {J <= " << scenario.threshold_B_lo() << "} and its extension are not homotopy "
       << "equivalent, contradicting A ~ B_hi ~ C ~ D and O ~ A ~ B_lo ~ C";
  out.audit.push_back(line.str());
  line.str("");
  line << "conclusion: I has a critical value in [" << out.window_lo << ", " << out.window_hi
       << "]";
  out.audit.push_back(line.str());
  return out;
}

namespace {

std::string trimmed(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

FiltrationScenario load_scenario_file(const std::string& path, const std::string& complex_dir) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file: " + path);

  FiltrationScenario sc;
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& message) {
    throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + message);
  };

  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trimmed(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail("expected key = value");
    std::string key = trimmed(line.substr(0, eq));
    const std::string value = trimmed(line.substr(eq + 1));

    if (key == "complex") {
      const std::string full = complex_dir.empty() ? value : complex_dir + "/" + value;
      sc.base_complex = load_chain_file(full);
      sc.base_levels.assign(sc.base_complex.generators.size(), {});
    } else if (key == "k1") {
      sc.k1 = std::stod(value);
    } else if (key == "k2") {
      sc.k2 = std::stod(value);
    } else if (key == "k3") {
      sc.k3 = std::stod(value);
    } else if (key == "kappa1") {
      sc.kappa1 = std::stod(value);
    } else if (key == "kappa2") {
      sc.kappa2 = std::stod(value);
    } else if (key == "cell_label") {
      sc.cell_label = value;
    } else if (key == "cell_index") {
      sc.cell_index = std::stoi(value);
    } else if (key == "cell_level") {
      sc.cell_level = std::stod(value);
    } else if (key == "attach") {
      sc.attaching_cycle.clear();
      for (char c : value) {
        if (c == ' ') continue;
        if (c != '0' && c != '1') fail("attach must be a bitstring");
        sc.attaching_cycle.push_back(c == '1');
      }
    } else if (key.rfind("levels ", 0) == 0) {
      const int k = std::stoi(key.substr(7));
      if (k < 0 || k >= static_cast<int>(sc.base_levels.size()))
        fail("levels degree out of range (complex must come first)");
      std::istringstream nums(value);
      double v;
      sc.base_levels[k].clear();
      while (nums >> v) sc.base_levels[k].push_back(v);
    } else {
      fail("unknown key '" + key + "'");
    }
  }
  return sc;
}

HeartData label_heart_catalog(const CriticalCatalog& catalog) {
  if (catalog.n != 3)
    throw std::invalid_argument("label_heart_catalog: heart data lives on S^3");
  if (catalog.points.size() != 6)
    throw std::invalid_argument("label_heart_catalog: expected exactly six critical points, got " +
                                std::to_string(catalog.points.size()));

  std::vector<int> order(6);
  for (int i = 0; i < 6; ++i) order[i] = i;
  // sort by m(1/K) = 3 - m(K), ties by increasing 1/K (decreasing K)
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const int ia = 3 - catalog.points[a].morse_index;
    const int ib = 3 - catalog.points[b].morse_index;
    if (ia != ib) return ia < ib;
    return catalog.points[a].value > catalog.points[b].value;
  });

  HeartData data;
  const char* names[6] = {"x0", "x1", "x2^1", "x2^2", "x3^1", "x3^2"};
  for (int i = 0; i < 6; ++i) {
    const CriticalPoint& p = catalog.points[order[i]];
    data.labels.push_back(names[i]);
    data.values.push_back(p.value);
    data.laplacians.push_back(p.laplacian);
    data.inverse_index.push_back(3 - p.morse_index);
  }
  return data;
}

HeartReport certify_heart_existence(const HeartData& data, double c3) {
  HeartReport report;

  if (data.values.size() != 6 || data.laplacians.size() != 6 || data.inverse_index.size() != 6) {
    report.failures.push_back("heart data must carry exactly six points");
    return report;
  }
  std::vector<int> sorted_index = data.inverse_index;
  std::sort(sorted_index.begin(), sorted_index.end());
  if (sorted_index != std::vector<int>{0, 1, 2, 2, 3, 3})
    report.failures.push_back("index multiset of 1/K is not {0,1,2,2,3,3}");

  if (report.failures.empty()) {
    const double inv_21 = 1.0 / data.values[2];
    const double inv_22 = 1.0 / data.values[3];
    if (!(inv_21 <= inv_22))
      report.failures.push_back("need 1/K(x2^1) <= 1/K(x2^2)");
    if (!(data.laplacians[2] > 0.0))
      report.failures.push_back("need Delta K(x2^1) > 0 (scenario 2 configuration is not covered)");
    if (!(data.laplacians[3] < 0.0)) report.failures.push_back("need Delta K(x2^2) < 0");
    if (!(data.laplacians[1] < 0.0)) report.failures.push_back("need Delta K(x1) < 0");
  }
  if (!report.failures.empty()) return report;

  // assumed sublevel below J(u_{tau,x2^2}): critical points u_{x0} (index 0)
  // and u_{x1} (index 1), boundary zero
  ChainComplex assumed;
  assumed.generators = {{"u_x0"}, {"u_x1"}};
  assumed.boundaries = {GF2Matrix(0, 1), GF2Matrix(1, 1)};
  report.betti_assumed = homology(assumed);

  // the unstable disk of x2^1 injects as a 2-cell along the x1 cycle
  const ChainComplex injected = attach_cell(assumed, 2, {1}, "i(W_u(x2^1))");
  report.betti_injected = homology(injected);

  const bool contradiction =
      report.betti_assumed.size() > 1 && report.betti_assumed[1] == 1 &&
      report.betti_injected.size() > 1 && report.betti_injected[1] == 0;
  if (!contradiction) {
    report.failures.push_back("internal: expected beta_1 to drop from 1 to 0");
    return report;
  }

  report.certified = true;
  report.energy_bound = c3 / std::cbrt(data.values[3]);
  std::ostringstream line;
  line << "assumed critical set {u_x0, u_x1, u_x2^2} forces beta_1 = 1, but the injected "
       << "2-cell i(W_u(x2^1)) kills the x1 cycle (beta_1 = 0)";
  report.audit.push_back(line.str());
  line.str("");
  line << "existence: some y solves the equation with J_K(y) <= " << report.energy_bound;
  report.audit.push_back(line.str());
  return report;
}

}  // namespace bubbletower
