#include "bubbletower/spread.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace bubbletower {

namespace {
constexpr int kSubsetCap = 20;

std::string mask_to_string(std::uint32_t mask, int m) {
  std::ostringstream out;
  out << "{";
  bool first = true;
  for (int j = 0; j < m; ++j)
    if (mask >> j & 1u) {
      if (!first) out << ",";
      out << j + 1;
      first = false;
    }
  out << "}";
  return out.str();
}

}  // namespace

void StripLadder::validate() const {
  if (lower.size() != upper.size())
    throw std::invalid_argument("StripLadder: lower/upper size mismatch");
  if (lower.empty()) throw std::invalid_argument("StripLadder: empty ladder");
  if (!(lower[0] > 0.0)) throw std::invalid_argument("StripLadder: strips must be positive");
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (!(lower[i] <= upper[i]))
      throw std::invalid_argument("StripLadder: lo_" + std::to_string(i + 1) + " > hi_" +
                                  std::to_string(i + 1));
    if (i + 1 < lower.size() && !(upper[i] < lower[i + 1]))
      throw std::invalid_argument("StripLadder: strips " + std::to_string(i + 1) + " and " +
                                  std::to_string(i + 2) + " are not strictly interleaved");
  }
}

int StripLadder::strip_of(double v) const {
  for (std::size_t i = 0; i < lower.size(); ++i)
    if (lower[i] <= v && v <= upper[i]) return static_cast<int>(i) + 1;
  return 0;
}

std::uint32_t SpreadMember::signature() const {
  std::uint32_t mask = 0;
  for (std::size_t j = 0; j < laplacian_signs.size(); ++j)
    if (laplacian_signs[j] < 0) mask |= 1u << j;
  return mask;
}

void SpreadInstance::validate_shape() const {
  if (n < 2 || n == 4)
    throw std::invalid_argument("SpreadInstance: n must be 2, 3 or >= 5");
  if (subset_conditions != (n >= 5))
    throw std::invalid_argument(
        "SpreadInstance: subset conditions apply for n >= 5, the element relaxation for n = 2,3");
  if (!(c_n > 0.0)) throw std::invalid_argument("SpreadInstance: c_n must be positive");
  ladder.validate();
  const int m = point_count();
  if (m < 1 || m > kSubsetCap)
    throw std::invalid_argument("SpreadInstance: need 1..20 distinguished points");
  for (int j = 0; j < m; ++j) {
    if (fixed_indices[j] < 1 || fixed_indices[j] > ladder.size())
      throw std::invalid_argument("SpreadInstance: fixed index out of ladder range");
    if (j > 0 && fixed_indices[j] <= fixed_indices[j - 1])
      throw std::invalid_argument("SpreadInstance: fixed indices must be strictly increasing");
  }
  if (members.empty()) throw std::invalid_argument("SpreadInstance: no members");
  for (const SpreadMember& member : members) {
    if (static_cast<int>(member.values.size()) != m ||
        static_cast<int>(member.laplacian_signs.size()) != m)
      throw std::invalid_argument("SpreadInstance: member '" + member.label +
                                  "' has wrong point count");
    for (double v : member.values)
      if (!(v > 0.0))
        throw std::invalid_argument("SpreadInstance: member '" + member.label +
                                    "' has a nonpositive K value");
    for (int s : member.laplacian_signs)
      if (s != 1 && s != -1)
        throw std::invalid_argument("SpreadInstance: Laplacian signs must be +-1");
  }
}

double SpreadInstance::subset_energy(const SpreadMember& member, std::uint32_t mask) const {
  const double ex = 0.5 * (n - 2);
  double sum = 0.0;
  const int m = static_cast<int>(member.values.size());
  for (int j = 0; j < m; ++j)
    if (mask >> j & 1u) sum += std::pow(member.values[j], -ex);
  return c_n * std::pow(sum, 2.0 / n);
}

double SpreadInstance::singleton_value(const SpreadMember& member, int j) const {
  return std::pow(member.values[j], -(n - 2.0) / n);
}

double SpreadInstance::mu(const SpreadMember& member) const {
  const std::uint32_t sig = member.signature();
  if (sig == 0) throw std::invalid_argument("mu: member '" + member.label + "' has empty C_-");
  if (subset_conditions) return subset_energy(member, sig);
  double worst = 0.0;
  const int m = static_cast<int>(member.values.size());
  for (int j = 0; j < m; ++j)
    if (sig >> j & 1u) worst = std::max(worst, subset_energy(member, 1u << j));
  return worst;
}

SpreadingReport validate_spreading(const SpreadInstance& instance, const SpreadMember& member) {
  SpreadingReport report;
  const int m = instance.point_count();

  for (int s : member.laplacian_signs)
    if (s == 0) {
      report.signs_nonzero = false;
      report.detail.push_back("Laplacian sign missing (Delta K = 0?)");
      break;
    }
  report.count_matches = static_cast<int>(member.values.size()) == m;
  if (!report.count_matches) report.detail.push_back("non-minimal point count does not match m");

  for (int j = 0; j < m && report.count_matches; ++j) {
    const int strip = instance.ladder.strip_of(instance.singleton_value(member, j));
    if (strip != instance.fixed_indices[j]) {
      report.singletons_in_strips = false;
      if (!report.first_violated_singleton) report.first_violated_singleton = j;
      std::ostringstream msg;
      msg << "1/K^{(n-2)/n}(x_" << j + 1 << ") = " << instance.singleton_value(member, j)
          << " lies in strip " << strip << ", fixed index is " << instance.fixed_indices[j];
      report.detail.push_back(msg.str());
      break;
    }
  }

  if (report.count_matches) {
    const std::uint32_t total = 1u << m;
    for (std::uint32_t mask = 1; mask < total; ++mask) {
      if (!instance.subset_conditions && (mask & (mask - 1)) != 0) continue;
      if (instance.ladder.strip_of(instance.subset_energy(member, mask)) == 0) {
        report.subsets_in_strips = false;
        report.first_violated_subset = mask;
        std::ostringstream msg;
        msg << "subset " << mask_to_string(mask, m) << " energy "
            << instance.subset_energy(member, mask) << " falls between strips";
        report.detail.push_back(msg.str());
        break;
      }
    }
  }

  report.ok = report.signs_nonzero && report.count_matches && report.singletons_in_strips &&
              report.subsets_in_strips;
  return report;
}

SpreadReport validate_spread(const SpreadInstance& instance) {
  instance.validate_shape();
  SpreadReport report;
  const int m = instance.point_count();
  const std::uint32_t total = 1u << m;
  report.strip_by_subset.assign(total, 0);

  for (const SpreadMember& member : instance.members) {
    report.member_reports.push_back(validate_spreading(instance, member));
    if (!report.member_reports.back().ok) {
      report.ok = false;
      report.detail.push_back("member '" + member.label + "' is not spreading");
    }
  }
  if (!report.ok) return report;

  for (std::uint32_t mask = 1; mask < total; ++mask) {
    if (!instance.subset_conditions && (mask & (mask - 1)) != 0) continue;
    int strip = 0;
    for (std::size_t i = 0; i < instance.members.size(); ++i) {
      const int s = instance.ladder.strip_of(instance.subset_energy(instance.members[i], mask));
      if (i == 0) {
        strip = s;
      } else if (s != strip) {
        report.ok = false;
        if (!report.first_inconsistent_subset) report.first_inconsistent_subset = mask;
        std::ostringstream msg;
        msg << "subset " << mask_to_string(mask, m) << ": member '" << instance.members[i].label
            << "' sits in strip " << s << " but member '" << instance.members[0].label
            << "' in strip " << strip;
        report.detail.push_back(msg.str());
        break;
      }
    }
    if (!report.ok) break;
    report.strip_by_subset[mask] = strip;
  }
  return report;
}

ClassPartition partition(const SpreadInstance& instance) {
  instance.validate_shape();
  std::map<std::uint32_t, SpreadClass> by_signature;
  for (std::size_t i = 0; i < instance.members.size(); ++i) {
    const SpreadMember& member = instance.members[i];
    const std::uint32_t sig = member.signature();
    const int strip = instance.ladder.strip_of(instance.mu(member));
    if (strip == 0)
      throw Lemma5Violation("mu of member '" + member.label + "' falls between strips");
    auto [it, fresh] = by_signature.try_emplace(sig);
    if (fresh) {
      it->second.signature = sig;
      it->second.strip_index = strip;
    } else if (it->second.strip_index != strip) {
      throw Lemma5Violation("members with signature " +
                            mask_to_string(sig, instance.point_count()) +
                            " land in different mu strips");
    }
    it->second.member_indices.push_back(static_cast<int>(i));
  }

  // converse direction: distinct signatures may not share a strip
  std::map<int, std::uint32_t> strip_owner;
  for (const auto& [sig, cls] : by_signature) {
    auto [it, fresh] = strip_owner.try_emplace(cls.strip_index, sig);
    if (!fresh && it->second != sig)
      throw Lemma5Violation("signatures " + mask_to_string(it->second, instance.point_count()) +
                            " and " + mask_to_string(sig, instance.point_count()) +
                            " share mu strip " + std::to_string(cls.strip_index));
  }

  ClassPartition out;
  for (const auto& [sig, cls] : by_signature) out.classes.push_back(cls);
  std::sort(out.classes.begin(), out.classes.end(),
            [](const SpreadClass& a, const SpreadClass& b) { return a.strip_index < b.strip_index; });
  for (const SpreadClass& cls : out.classes) out.occupied_strips.push_back(cls.strip_index);
  return out;
}

int sigma(const ClassPartition& classes, const SpreadInstance& instance) {
  int result = 0;
  for (const SpreadClass& cls : classes.classes)
    for (int idx : cls.member_indices)
      if (!instance.members[idx].solvable) result = std::max(result, cls.strip_index);
  return result;
}

namespace {

struct PinchingCheck {
  double margin = std::numeric_limits<double>::infinity();
  std::string violation;
};

PinchingCheck check_pinching_pair(const SpreadInstance& instance, const SpreadMember& a,
                                  const SpreadMember& b, double kappa_lo, double kappa_hi) {
  // a / kappa_hi^{n/(n-2)} < b < a / kappa_lo^{n/(n-2)} at every sample
  PinchingCheck check;
  const double p = static_cast<double>(instance.n) / (instance.n - 2);
  const double hi_pow = std::pow(kappa_hi, p);
  const double lo_pow = std::pow(kappa_lo, p);
  for (int j = 0; j < instance.point_count(); ++j) {
    const double left = b.values[j] - a.values[j] / hi_pow;
    const double right = a.values[j] / lo_pow - b.values[j];
    if (!(left > 0.0) || !(right > 0.0)) {
      std::ostringstream msg;
      msg << "pinching fails for pair ('" << a.label << "','" << b.label << "') at point "
          << j + 1 << ": need " << a.values[j] / hi_pow << " < " << b.values[j] << " < "
          << a.values[j] / lo_pow;
      check.violation = msg.str();
      check.margin = std::min(left, right);
      return check;
    }
    check.margin = std::min({check.margin, left, right});
  }
  return check;
}

}  // namespace

Certificate certify_spread(const SpreadInstance& instance, double kappa_lo, double kappa_hi) {
  if (!(0.0 < kappa_lo && kappa_lo < 1.0 && 1.0 < kappa_hi))
    throw std::invalid_argument("certify_spread: need 0 < kappa_lo < 1 < kappa_hi");
  SpreadReport spread = validate_spread(instance);
  if (!spread.ok)
    throw std::invalid_argument("certify_spread: instance is not a validated spread: " +
                                (spread.detail.empty() ? std::string("unknown") : spread.detail[0]));
  const ClassPartition classes = partition(instance);

  Certificate cert;
  cert.kind = Certificate::Kind::ExclusiveClass;

  // gap condition over consecutive occupied strips
  const double ratio_needed = kappa_hi / kappa_lo;
  double min_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < classes.occupied_strips.size(); ++i) {
    const int prev = classes.occupied_strips[i - 1];
    const int cur = classes.occupied_strips[i];
    min_ratio = std::min(min_ratio, instance.ladder.lower[cur - 1] / instance.ladder.upper[prev - 1]);
  }
  if (!(ratio_needed < min_ratio)) {
    std::ostringstream msg;
    msg << "gap condition fails: kappa_hi/kappa_lo = " << ratio_needed
        << " >= min strip ratio " << min_ratio;
    throw CertificationError(RejectionKind::Gap, msg.str());
  }
  cert.gap_margin = min_ratio - ratio_needed;

  for (std::size_t i = 0; i < instance.members.size(); ++i)
    for (std::size_t j = 0; j < instance.members.size(); ++j) {
      if (i == j) continue;
      const PinchingCheck check = check_pinching_pair(instance, instance.members[i],
                                                      instance.members[j], kappa_lo, kappa_hi);
      if (!check.violation.empty())
        throw CertificationError(RejectionKind::Pinching, check.violation);
      cert.pinching_margin = std::min(cert.pinching_margin == 0.0
                                          ? std::numeric_limits<double>::infinity()
                                          : cert.pinching_margin,
                                      check.margin);
    }

  double max_upper = 0.0;
  for (int strip : classes.occupied_strips)
    max_upper = std::max(max_upper, instance.ladder.upper[strip - 1]);
  cert.energy_bound = ratio_needed * max_upper;

  std::ostringstream line;
  line << "at most one class may contain a member with no solution of energy <= "
       << cert.energy_bound;
  cert.audit.push_back(line.str());
  line.str("");
  line << "gap: kappa_hi/kappa_lo = " << ratio_needed << " < " << min_ratio
       << " = inf consecutive occupied strip ratios";
  cert.audit.push_back(line.str());
  line.str("");
  line << "pinching margin over all member pairs and points: " << cert.pinching_margin;
  cert.audit.push_back(line.str());
  return cert;
}

Certificate certify_spread_robust(const SpreadInstance& instance, double kappa_lo,
                                  double kappa_hi, double tau_margin) {
  Certificate base = certify_spread(instance, kappa_lo, kappa_hi);
  for (double slo : {1.0 - tau_margin, 1.0 + tau_margin})
    for (double shi : {1.0 - tau_margin, 1.0 + tau_margin}) {
      const double klo = kappa_lo * slo;
      const double khi = kappa_hi * shi;
      if (!(0.0 < klo && klo < 1.0 && 1.0 < khi))
        throw CertificationError(RejectionKind::Bound,
                                 "tau margin pushes kappa outside (0,1)x(1,inf)");
      certify_spread(instance, klo, khi);
    }
  base.audit.push_back("stable under +-" + std::to_string(tau_margin) +
                       " drift of the comparison constants");
  return base;
}

Certificate certify_comparison(const SpreadInstance& instance, int member_lo, int member_hi,
                               double kappa_prev, double kappa_cur,
                               std::optional<std::pair<double, double>> kappa_bounds) {
  if (!(0.0 < kappa_prev && kappa_prev < 1.0 && 1.0 < kappa_cur))
    throw std::invalid_argument("certify_comparison: need 0 < kappa_prev < 1 < kappa_cur");
  instance.validate_shape();
  const SpreadMember& lo = instance.members.at(member_lo);
  const SpreadMember& hi = instance.members.at(member_hi);

  const int strip_lo = instance.ladder.strip_of(instance.mu(lo));
  const int strip_hi = instance.ladder.strip_of(instance.mu(hi));
  if (strip_lo == 0 || strip_hi == 0)
    throw CertificationError(RejectionKind::StripOrder, "mu falls between strips");
  if (!(strip_lo < strip_hi)) {
    std::ostringstream msg;
    msg << "strip ordering fails: mu('" << lo.label << "') in strip " << strip_lo
        << ", mu('" << hi.label << "') in strip " << strip_hi
        << " (need strictly lower class first)";
    throw CertificationError(RejectionKind::StripOrder, msg.str());
  }

  // (i) pinching K_hi / kappa_cur^{n/(n-2)} < K_lo < K_hi / kappa_prev^{n/(n-2)}
  const PinchingCheck pinch = check_pinching_pair(instance, hi, lo, kappa_prev, kappa_cur);
  if (!pinch.violation.empty())
    throw CertificationError(RejectionKind::Pinching, pinch.violation);

  // (ii) gap kappa_cur * upper_{sigma-1} < kappa_prev * lower_sigma
  const double upper_prev = instance.ladder.upper[strip_hi - 2];
  const double lower_sigma = instance.ladder.lower[strip_hi - 1];
  const double upper_sigma = instance.ladder.upper[strip_hi - 1];
  if (!(kappa_cur * upper_prev < kappa_prev * lower_sigma)) {
    std::ostringstream msg;
    msg << "gap fails: kappa_cur * hi_" << strip_hi - 1 << " = " << kappa_cur * upper_prev
        << " >= kappa_prev * lo_" << strip_hi << " = " << kappa_prev * lower_sigma;
    throw CertificationError(RejectionKind::Gap, msg.str());
  }

  // isolation: every other pure energy of the higher member stays below
  // the ladder strip preceding sigma
  {
    const std::uint32_t sig = hi.signature();
    double second = 0.0;
    if (instance.subset_conditions) {
      for (std::uint32_t mask = (sig - 1) & sig; mask;
           mask = (mask - 1) & sig)  // proper nonempty subsets
        second = std::max(second, instance.subset_energy(hi, mask));
    } else {
      const double worst = instance.mu(hi);
      for (int j = 0; j < instance.point_count(); ++j)
        if (sig >> j & 1u) {
          const double e = instance.subset_energy(hi, 1u << j);
          if (e < worst) second = std::max(second, e);
        }
    }
    if (second > upper_prev) {
      std::ostringstream msg;
      msg << "isolation fails: a second pure energy " << second << " of '" << hi.label
          << "' exceeds hi_" << strip_hi - 1 << " = " << upper_prev;
      throw CertificationError(RejectionKind::Isolation, msg.str());
    }
  }

  // (iii) bound (kappa_cur/kappa_prev) * upper_sigma <= (kappa_hi/kappa_lo) * max occupied upper
  {
    const double klo = kappa_bounds ? kappa_bounds->first : kappa_prev;
    const double khi = kappa_bounds ? kappa_bounds->second : kappa_cur;
    const ClassPartition classes = partition(instance);
    double max_upper = 0.0;
    for (int strip : classes.occupied_strips)
      max_upper = std::max(max_upper, instance.ladder.upper[strip - 1]);
    const double lhs = kappa_cur / kappa_prev * upper_sigma;
    const double rhs = khi / klo * max_upper;
    if (!(lhs <= rhs)) {
      std::ostringstream msg;
      msg << "bound fails: (kappa_cur/kappa_prev)*hi_sigma = " << lhs
          << " > (kappa_hi/kappa_lo)*max occupied upper = " << rhs;
      throw CertificationError(RejectionKind::Bound, msg.str());
    }
  }

  Certificate cert;
  cert.kind = Certificate::Kind::ComparisonWindow;
  cert.window_lo = kappa_prev * lower_sigma;
  cert.window_hi = kappa_cur * upper_sigma;
  cert.energy_bound = kappa_cur / kappa_prev * upper_sigma;
  cert.gap_margin = kappa_prev * lower_sigma - kappa_cur * upper_prev;
  cert.pinching_margin = pinch.margin;

  std::ostringstream line;
  line << "if '" << hi.label << "' has no solution with J <= " << cert.energy_bound << " then '"
       << lo.label << "' has a solution with energy in [" << cert.window_lo << ", "
       << cert.window_hi << "]";
  cert.audit.push_back(line.str());
  return cert;
}

namespace {

std::vector<double> parse_number_list(const std::string& text, const std::string& where) {
  std::vector<double> out;
  std::istringstream in(text);
  double v;
  while (in >> v) out.push_back(v);
  std::string rest;
  in.clear();
  if (in >> rest && !rest.empty())
    throw std::runtime_error(where + ": malformed number list '" + text + "'");
  return out;
}

std::string trimmed(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

SpreadInstance load_spread_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open spread file: " + path);

  SpreadInstance instance;
  instance.members.clear();
  SpreadMember* current = nullptr;
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

    if (line.front() == '[') {
      if (line.back() != ']') fail("unterminated section header");
      std::string header = trimmed(line.substr(1, line.size() - 2));
      if (header.rfind("member", 0) != 0) fail("unknown section '" + header + "'");
      SpreadMember member;
      member.label = trimmed(header.substr(6));
      if (member.label.empty()) member.label = "member" + std::to_string(instance.members.size() + 1);
      instance.members.push_back(member);
      current = &instance.members.back();
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) fail("expected key = value");
    const std::string key = trimmed(line.substr(0, eq));
    const std::string value = trimmed(line.substr(eq + 1));

    if (!current) {
      if (key == "n") {
        instance.n = std::stoi(value);
        instance.subset_conditions = instance.n >= 5;
      } else if (key == "c_n") {
        instance.c_n = std::stod(value);
      } else if (key == "ladder") {
        std::istringstream strips(value);
        std::string strip;
        instance.ladder.lower.clear();
        instance.ladder.upper.clear();
        while (std::getline(strips, strip, '|')) {
          const std::vector<double> pair = parse_number_list(trimmed(strip), path);
          if (pair.size() != 2) fail("each ladder strip needs exactly 'lo hi'");
          instance.ladder.lower.push_back(pair[0]);
          instance.ladder.upper.push_back(pair[1]);
        }
      } else if (key == "fixed_indices") {
        instance.fixed_indices.clear();
        for (double v : parse_number_list(value, path))
          instance.fixed_indices.push_back(static_cast<int>(v));
      } else {
        fail("unknown key '" + key + "'");
      }
    } else {
      if (key == "values") {
        current->values = parse_number_list(value, path);
      } else if (key == "signs") {
        current->laplacian_signs.clear();
        for (double v : parse_number_list(value, path))
          current->laplacian_signs.push_back(v < 0 ? -1 : 1);
      } else if (key == "solvable") {
        current->solvable = value == "yes" || value == "true" || value == "1";
      } else {
        fail("unknown member key '" + key + "'");
      }
    }
  }
  instance.validate_shape();
  return instance;
}

void save_spread_file(const SpreadInstance& instance, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write spread file: " + path);
  out.precision(17);
  out << "n = " << instance.n << "\n";
  out << "c_n = " << instance.c_n << "\n";
  out << "ladder =";
  for (int i = 0; i < instance.ladder.size(); ++i) {
    if (i) out << " |";
    out << " " << instance.ladder.lower[i] << " " << instance.ladder.upper[i];
  }
  out << "\nfixed_indices =";
  for (int idx : instance.fixed_indices) out << " " << idx;
  out << "\n";
  for (const SpreadMember& member : instance.members) {
    out << "\n[member " << member.label << "]\n";
    out << "values =";
    for (double v : member.values) out << " " << v;
    out << "\nsigns =";
    for (int s : member.laplacian_signs) out << " " << s;
    out << "\nsolvable = " << (member.solvable ? "yes" : "no") << "\n";
  }
}

}  // namespace bubbletower
