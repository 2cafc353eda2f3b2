#include "bubbletower/chain.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace bubbletower {

GF2Matrix::GF2Matrix(int rows, int cols)
    : rows_(rows), cols_(cols), words_per_row_((cols + 63) / 64), data_(rows * words_per_row_, 0) {}

bool GF2Matrix::get(int r, int c) const {
  return data_[r * words_per_row_ + c / 64] >> (c % 64) & 1u;
}

void GF2Matrix::set(int r, int c, bool v) {
  std::uint64_t& word = data_[r * words_per_row_ + c / 64];
  const std::uint64_t bit = 1ull << (c % 64);
  if (v)
    word |= bit;
  else
    word &= ~bit;
}

GF2Matrix GF2Matrix::multiplied_by(const GF2Matrix& rhs) const {
  if (cols_ != rhs.rows_) throw std::invalid_argument("GF2Matrix: dimension mismatch in product");
  GF2Matrix out(rows_, rhs.cols_);
  for (int i = 0; i < rows_; ++i)
    for (int k = 0; k < cols_; ++k)
      if (get(i, k))
        for (int w = 0; w < rhs.words_per_row_; ++w)
          out.data_[i * out.words_per_row_ + w] ^= rhs.data_[k * rhs.words_per_row_ + w];
  return out;
}

std::vector<std::uint8_t> GF2Matrix::apply(const std::vector<std::uint8_t>& v) const {
  if (static_cast<int>(v.size()) != cols_)
    throw std::invalid_argument("GF2Matrix: vector length mismatch");
  std::vector<std::uint8_t> out(rows_, 0);
  for (int i = 0; i < rows_; ++i) {
    std::uint8_t acc = 0;
    for (int c = 0; c < cols_; ++c) acc ^= static_cast<std::uint8_t>(get(i, c) & (v[c] & 1));
    out[i] = acc;
  }
  return out;
}

int GF2Matrix::rank() const {
  GF2Matrix work = *this;
  int rank = 0;
  for (int col = 0; col < cols_ && rank < rows_; ++col) {
    int pivot = -1;
    for (int r = rank; r < rows_; ++r)
      if (work.get(r, col)) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    if (pivot != rank)
      for (int w = 0; w < words_per_row_; ++w)
        std::swap(work.data_[pivot * words_per_row_ + w], work.data_[rank * words_per_row_ + w]);
    for (int r = 0; r < rows_; ++r) {
      if (r != rank && work.get(r, col))
        for (int w = 0; w < words_per_row_; ++w)
          work.data_[r * words_per_row_ + w] ^= work.data_[rank * words_per_row_ + w];
    }
    ++rank;
  }
  return rank;
}

bool GF2Matrix::is_zero() const {
  for (std::uint64_t w : data_)
    if (w) return false;
  return true;
}

void GF2Matrix::append_column(const std::vector<std::uint8_t>& column) {
  if (static_cast<int>(column.size()) != rows_)
    throw std::invalid_argument("GF2Matrix: column length mismatch");
  GF2Matrix out(rows_, cols_ + 1);
  for (int r = 0; r < rows_; ++r) {
    for (int c = 0; c < cols_; ++c) out.set(r, c, get(r, c));
    out.set(r, cols_, column[r] & 1);
  }
  *this = std::move(out);
}

long long ChainComplex::euler_characteristic() const {
  long long chi = 0;
  for (int k = 0; k <= top_degree(); ++k) chi += (k % 2 == 0 ? 1 : -1) * dim(k);
  return chi;
}

ComplexViolation validate_complex(const ChainComplex& cc) {
  ComplexViolation result;
  if (cc.boundaries.size() != cc.generators.size()) {
    result.ok = false;
    result.detail = "boundary count does not match degree count";
    return result;
  }
  for (int k = 1; k <= cc.top_degree(); ++k) {
    const GF2Matrix& d = cc.boundaries[k];
    if (d.rows() != cc.dim(k - 1) || d.cols() != cc.dim(k)) {
      result.ok = false;
      result.degree = k;
      result.detail = "boundary " + std::to_string(k) + " has wrong shape";
      return result;
    }
  }
  for (int k = 2; k <= cc.top_degree(); ++k) {
    const GF2Matrix square = cc.boundaries[k - 1].multiplied_by(cc.boundaries[k]);
    if (!square.is_zero()) {
      for (int c = 0; c < square.cols(); ++c)
        for (int r = 0; r < square.rows(); ++r)
          if (square.get(r, c)) {
            result.ok = false;
            result.degree = k;
            result.generator = cc.generators[k][c];
            result.detail = "d_" + std::to_string(k - 1) + " d_" + std::to_string(k) +
                            " != 0 on generator " + result.generator;
            return result;
          }
    }
  }
  return result;
}

std::vector<int> homology(const ChainComplex& cc) {
  const ComplexViolation check = validate_complex(cc);
  if (!check.ok) throw std::invalid_argument("homology: " + check.detail);
  std::vector<int> betti(cc.top_degree() + 1, 0);
  for (int k = 0; k <= cc.top_degree(); ++k) {
    const int rank_k = k >= 1 ? cc.boundaries[k].rank() : 0;
    const int rank_k1 = k + 1 <= cc.top_degree() ? cc.boundaries[k + 1].rank() : 0;
    betti[k] = cc.dim(k) - rank_k - rank_k1;
  }
  return betti;
}

ChainComplex attach_cell(const ChainComplex& cc, int m, const std::vector<std::uint8_t>& cycle,
                         const std::string& label) {
  if (m < 0) throw std::invalid_argument("attach_cell: negative degree");
  ChainComplex out = cc;
  while (out.top_degree() < m) {
    out.generators.emplace_back();
    const int k = out.top_degree();
    out.boundaries.emplace_back(k > 0 ? out.dim(k - 1) : 0, 0);
  }

  std::vector<std::uint8_t> chain = cycle;
  chain.resize(out.dim(m - 1), 0);
  if (m >= 2) {
    const std::vector<std::uint8_t> image = out.boundaries[m - 1].apply(chain);
    for (std::uint8_t bit : image)
      if (bit) throw std::invalid_argument("attach_cell: attaching chain is not a cycle");
  }

  out.generators[m].push_back(label);
  if (m >= 1) {
    out.boundaries[m].append_column(chain);
  } else {
    out.boundaries[0] = GF2Matrix(0, out.dim(0));
  }
  if (m + 1 <= out.top_degree()) {
    // existing d_{m+1} gains a row of zeros
    GF2Matrix grown(out.dim(m), out.dim(m + 1));
    const GF2Matrix& old = out.boundaries[m + 1];
    for (int r = 0; r < old.rows(); ++r)
      for (int c = 0; c < old.cols(); ++c) grown.set(r, c, old.get(r, c));
    out.boundaries[m + 1] = grown;
  }
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

ChainComplex load_chain_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open chain file: " + path);

  ChainComplex cc;
  std::string line;
  int lineno = 0;
  int pending_boundary = -1;
  int pending_row = 0;
  auto fail = [&](const std::string& message) {
    throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + message);
  };

  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trimmed(line);
    if (line.empty()) continue;

    if (pending_boundary >= 0) {
      GF2Matrix& d = cc.boundaries[pending_boundary];
      if (static_cast<int>(line.size()) != d.cols())
        fail("boundary row has " + std::to_string(line.size()) + " bits, expected " +
             std::to_string(d.cols()));
      for (int c = 0; c < d.cols(); ++c) {
        if (line[c] != '0' && line[c] != '1') fail("boundary rows must be bitstrings");
        d.set(pending_row, c, line[c] == '1');
      }
      if (++pending_row == d.rows()) pending_boundary = -1;
      continue;
    }

    std::istringstream words(line);
    std::string keyword;
    words >> keyword;
    if (keyword == "degree") {
      int k;
      char colon;
      if (!(words >> k) || k != static_cast<int>(cc.generators.size()))
        fail("degrees must appear in order 0,1,2,...");
      words >> colon;
      cc.generators.emplace_back();
      std::string label;
      while (words >> label) cc.generators.back().push_back(label);
      cc.boundaries.emplace_back(k > 0 ? cc.dim(k - 1) : 0, cc.dim(k));
    } else if (keyword == "boundary") {
      int k;
      if (!(words >> k) || k < 1 || k > cc.top_degree()) fail("boundary degree out of range");
      pending_boundary = k;
      pending_row = 0;
      if (cc.boundaries[k].rows() == 0) pending_boundary = -1;  // nothing to read
    } else {
      fail("unknown keyword '" + keyword + "'");
    }
  }
  if (pending_boundary >= 0) fail("unterminated boundary block");
  const ComplexViolation check = validate_complex(cc);
  if (!check.ok) throw std::runtime_error(path + ": " + check.detail);
  return cc;
}

void save_chain_file(const ChainComplex& cc, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write chain file: " + path);
  for (int k = 0; k <= cc.top_degree(); ++k) {
    out << "degree " << k << ":";
    for (const std::string& label : cc.generators[k]) out << " " << label;
    out << "\n";
  }
  for (int k = 1; k <= cc.top_degree(); ++k) {
    const GF2Matrix& d = cc.boundaries[k];
    if (d.rows() == 0) continue;
    out << "boundary " << k << ":\n";
    for (int r = 0; r < d.rows(); ++r) {
      for (int c = 0; c < d.cols(); ++c) out << (d.get(r, c) ? '1' : '0');
      out << "\n";
    }
  }
}

}  // namespace bubbletower
