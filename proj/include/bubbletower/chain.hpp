#ifndef BUBBLETOWER_CHAIN_HPP
#define BUBBLETOWER_CHAIN_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace bubbletower {

/// Dense bit matrix over GF(2), rows packed into 64-bit words.
class GF2Matrix {
 public:
  GF2Matrix() = default;
  GF2Matrix(int rows, int cols);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool get(int r, int c) const;
  void set(int r, int c, bool v);

  GF2Matrix multiplied_by(const GF2Matrix& rhs) const;  // this * rhs
  std::vector<std::uint8_t> apply(const std::vector<std::uint8_t>& v) const;
  int rank() const;
  bool is_zero() const;
  void append_column(const std::vector<std::uint8_t>& column);

 private:
  int rows_ = 0, cols_ = 0;
  int words_per_row_ = 0;
  std::vector<std::uint64_t> data_;
};

/// Graded GF(2) chain complex with labeled generators. boundary(k) maps
/// degree k to degree k-1; boundary(0) is empty by convention.
struct ChainComplex {
  std::vector<std::vector<std::string>> generators;  // per degree
  std::vector<GF2Matrix> boundaries;                 // boundaries[k] = d_k

  int top_degree() const { return static_cast<int>(generators.size()) - 1; }
  int dim(int k) const {
    return k >= 0 && k <= top_degree() ? static_cast<int>(generators[k].size()) : 0;
  }
  long long euler_characteristic() const;
};

struct ComplexViolation {
  bool ok = true;
  int degree = -1;            // k with d_{k-1} d_k != 0
  std::string generator;      // first violating generator of degree k
  std::string detail;
};

/// Checks dimensional consistency and d^2 = 0.
ComplexViolation validate_complex(const ChainComplex& cc);

/// Betti numbers over GF(2) for degrees 0..top via Gaussian elimination.
std::vector<int> homology(const ChainComplex& cc);

/// Attaches one m-cell along a GF(2) cycle in degree m-1 (empty chain
/// allowed). Throws std::invalid_argument when the chain is not a cycle.
ChainComplex attach_cell(const ChainComplex& cc, int m, const std::vector<std::uint8_t>& cycle,
                         const std::string& label = "cell");

ChainComplex load_chain_file(const std::string& path);
void save_chain_file(const ChainComplex& cc, const std::string& path);

}  // namespace bubbletower

#endif
