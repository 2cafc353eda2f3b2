#include "bubbletower/expression.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

namespace bubbletower {

namespace {

bool is_const(const Expr::Ptr& e, double v) {
  return e->kind() == Expr::Kind::Const && e->value() == v;
}

}  // namespace

Expr::Ptr Expr::constant(double v) {
  auto e = std::shared_ptr<Expr>(new Expr());
  e->kind_ = Kind::Const;
  e->value_ = v;
  return e;
}

Expr::Ptr Expr::var(int index) {
  auto e = std::shared_ptr<Expr>(new Expr());
  e->kind_ = Kind::Var;
  e->var_index_ = index;
  return e;
}

Expr::Ptr Expr::add(Ptr a, Ptr b) {
  if (is_const(a, 0.0)) return b;
  if (is_const(b, 0.0)) return a;
  if (a->kind() == Kind::Const && b->kind() == Kind::Const)
    return constant(a->value() + b->value());
  auto e = std::shared_ptr<Expr>(new Expr());
  e->kind_ = Kind::Add;
  e->left_ = std::move(a);
  e->right_ = std::move(b);
  return e;
}

Expr::Ptr Expr::sub(Ptr a, Ptr b) {
  if (is_const(b, 0.0)) return a;
  if (a->kind() == Kind::Const && b->kind() == Kind::Const)
    return constant(a->value() - b->value());
  if (is_const(a, 0.0)) return neg(std::move(b));
  auto e = std::shared_ptr<Expr>(new Expr());
  e->kind_ = Kind::Sub;
  e->left_ = std::move(a);
  e->right_ = std::move(b);
  return e;
}

Expr::Ptr Expr::mul(Ptr a, Ptr b) {
  if (is_const(a, 0.0) || is_const(b, 0.0)) return constant(0.0);
  if (is_const(a, 1.0)) return b;
  if (is_const(b, 1.0)) return a;
  if (a->kind() == Kind::Const && b->kind() == Kind::Const)
    return constant(a->value() * b->value());
  auto e = std::shared_ptr<Expr>(new Expr());
  e->kind_ = Kind::Mul;
  e->left_ = std::move(a);
  e->right_ = std::move(b);
  return e;
}

Expr::Ptr Expr::div(Ptr a, Ptr b) {
  if (is_const(a, 0.0)) return constant(0.0);
  if (is_const(b, 1.0)) return a;
  if (a->kind() == Kind::Const && b->kind() == Kind::Const && b->value() != 0.0)
    return constant(a->value() / b->value());
  auto e = std::shared_ptr<Expr>(new Expr());
  e->kind_ = Kind::Div;
  e->left_ = std::move(a);
  e->right_ = std::move(b);
  return e;
}

Expr::Ptr Expr::neg(Ptr a) {
  if (a->kind() == Kind::Const) return constant(-a->value());
  if (a->kind() == Kind::Neg) return a->left();
  auto e = std::shared_ptr<Expr>(new Expr());
  e->kind_ = Kind::Neg;
  e->left_ = std::move(a);
  return e;
}

Expr::Ptr Expr::pow(Ptr base, int exponent) {
  if (exponent == 0) return constant(1.0);
  if (exponent == 1) return base;
  if (base->kind() == Kind::Const)
    return constant(std::pow(base->value(), exponent));
  auto e = std::shared_ptr<Expr>(new Expr());
  e->kind_ = Kind::Pow;
  e->left_ = std::move(base);
  e->exponent_ = exponent;
  return e;
}

double Expr::eval(const Vector& x) const {
  switch (kind_) {
    case Kind::Const:
      return value_;
    case Kind::Var:
      if (var_index_ >= x.size()) throw EvalError("coordinate index out of range");
      return x[var_index_];
    case Kind::Add:
      return left_->eval(x) + right_->eval(x);
    case Kind::Sub:
      return left_->eval(x) - right_->eval(x);
    case Kind::Mul:
      return left_->eval(x) * right_->eval(x);
    case Kind::Div: {
      const double d = right_->eval(x);
      if (d == 0.0) throw EvalError("division by zero");
      return left_->eval(x) / d;
    }
    case Kind::Neg:
      return -left_->eval(x);
    case Kind::Pow: {
      const double b = left_->eval(x);
      if (exponent_ < 0 && b == 0.0) throw EvalError("zero raised to negative power");
      return std::pow(b, exponent_);
    }
  }
  throw EvalError("corrupt expression node");
}

Expr::Ptr Expr::derivative(int index) const {
  switch (kind_) {
    case Kind::Const:
      return constant(0.0);
    case Kind::Var:
      return constant(var_index_ == index ? 1.0 : 0.0);
    case Kind::Add:
      return add(left_->derivative(index), right_->derivative(index));
    case Kind::Sub:
      return sub(left_->derivative(index), right_->derivative(index));
    case Kind::Mul:
      return add(mul(left_->derivative(index), right_),
                 mul(left_, right_->derivative(index)));
    case Kind::Div:
      // (a/b)' = a'/b - a b'/b^2
      return sub(div(left_->derivative(index), right_),
                 div(mul(left_, right_->derivative(index)), pow(right_, 2)));
    case Kind::Neg:
      return neg(left_->derivative(index));
    case Kind::Pow:
      return mul(mul(constant(exponent_), pow(left_, exponent_ - 1)),
                 left_->derivative(index));
  }
  throw EvalError("corrupt expression node");
}

std::string Expr::to_string() const {
  std::ostringstream out;
  switch (kind_) {
    case Kind::Const: {
      out << value_;
      break;
    }
    case Kind::Var:
      out << "x" << (var_index_ + 1);
      break;
    case Kind::Add:
      out << "(" << left_->to_string() << " + " << right_->to_string() << ")";
      break;
    case Kind::Sub:
      out << "(" << left_->to_string() << " - " << right_->to_string() << ")";
      break;
    case Kind::Mul:
      out << "(" << left_->to_string() << " * " << right_->to_string() << ")";
      break;
    case Kind::Div:
      out << "(" << left_->to_string() << " / " << right_->to_string() << ")";
      break;
    case Kind::Neg:
      out << "(-" << left_->to_string() << ")";
      break;
    case Kind::Pow:
      out << left_->to_string() << "^" << exponent_;
      break;
  }
  return out.str();
}

namespace {

class Parser {
 public:
  Parser(const std::string& text, int dim) : text_(text), dim_(dim) {}

  Expr::Ptr run() {
    auto e = expression();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(message, pos_);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_space();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  Expr::Ptr expression() {
    auto e = term();
    while (true) {
      if (eat('+'))
        e = Expr::add(e, term());
      else if (eat('-'))
        e = Expr::sub(e, term());
      else
        return e;
    }
  }

  Expr::Ptr term() {
    auto e = factor();
    while (true) {
      if (eat('*'))
        e = Expr::mul(e, factor());
      else if (eat('/'))
        e = Expr::div(e, factor());
      else
        return e;
    }
  }

  Expr::Ptr factor() {
    if (eat('-')) return Expr::neg(factor());
    if (eat('+')) return factor();
    auto base = atom();
    if (eat('^')) {
      bool negative = eat('-');
      skip_space();
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (pos_ == start) fail("expected integer exponent");
      int exp = std::stoi(text_.substr(start, pos_ - start));
      return Expr::pow(base, negative ? -exp : exp);
    }
    return base;
  }

  Expr::Ptr atom() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      auto e = expression();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (c == 'x' || c == 'X') {
      const std::size_t var_pos = pos_;
      ++pos_;
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (pos_ == start) throw ParseError("expected coordinate index after 'x'", var_pos);
      const int idx = std::stoi(text_.substr(start, pos_ - start));
      if (idx < 1) throw ParseError("coordinate indices start at 1", var_pos);
      if (idx > dim_)
        throw ParseError("coordinate x" + std::to_string(idx) + " exceeds ambient dimension " +
                             std::to_string(dim_),
                         var_pos);
      return Expr::var(idx - 1);
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
        ++pos_;
      }
      // scientific notation
      if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
        std::size_t probe = pos_ + 1;
        if (probe < text_.size() && (text_[probe] == '+' || text_[probe] == '-')) ++probe;
        if (probe < text_.size() && std::isdigit(static_cast<unsigned char>(text_[probe]))) {
          ++probe;
          while (probe < text_.size() && std::isdigit(static_cast<unsigned char>(text_[probe])))
            ++probe;
          pos_ = probe;
        }
      }
      try {
        return Expr::constant(std::stod(text_.substr(start, pos_ - start)));
      } catch (const std::exception&) {
        throw ParseError("malformed number literal", start);
      }
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  const std::string& text_;
  int dim_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr::Ptr parse_expression(const std::string& text, int dim) {
  return Parser(text, dim).run();
}

}  // namespace bubbletower
