#ifndef BUBBLETOWER_EXPRESSION_HPP
#define BUBBLETOWER_EXPRESSION_HPP

#include <memory>
#include <stdexcept>
#include <string>

#include "bubbletower/geometry.hpp"

namespace bubbletower {

/// Syntax error with a 0-based character position into the source text.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : std::runtime_error(message + " (at position " + std::to_string(position) + ")"),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Immutable expression tree over ambient coordinates x1..x{dim}.
/// Rational operations plus integer powers, so derivatives stay exact.
class Expr {
 public:
  enum class Kind { Const, Var, Add, Sub, Mul, Div, Neg, Pow };

  using Ptr = std::shared_ptr<const Expr>;

  static Ptr constant(double v);
  static Ptr var(int index);  // 0-based coordinate index
  static Ptr add(Ptr a, Ptr b);
  static Ptr sub(Ptr a, Ptr b);
  static Ptr mul(Ptr a, Ptr b);
  static Ptr div(Ptr a, Ptr b);
  static Ptr neg(Ptr a);
  static Ptr pow(Ptr base, int exponent);

  Kind kind() const { return kind_; }
  double value() const { return value_; }
  int var_index() const { return var_index_; }
  int exponent() const { return exponent_; }
  const Ptr& left() const { return left_; }
  const Ptr& right() const { return right_; }

  double eval(const Vector& x) const;
  Ptr derivative(int index) const;
  std::string to_string() const;

 private:
  Expr() = default;

  Kind kind_ = Kind::Const;
  double value_ = 0.0;
  int var_index_ = -1;
  int exponent_ = 0;
  Ptr left_, right_;
};

/// Parses a rational expression over x1..x{dim}. Throws ParseError on bad
/// syntax and on coordinate indices beyond dim.
Expr::Ptr parse_expression(const std::string& text, int dim);

}  // namespace bubbletower

#endif
