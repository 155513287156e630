#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/rational.hpp>

namespace icrl::game24 {

using Rational = boost::rational<std::int64_t>;

enum class Op : char { Add = '+', Sub = '-', Mul = '*', Div = '/' };

inline constexpr Op kAllOps[] = {Op::Add, Op::Sub, Op::Mul, Op::Div};

class DivisionByZero : public std::domain_error {
 public:
  DivisionByZero() : std::domain_error("division by zero") {}
};

/// op(lhs, rhs) exactly; throws DivisionByZero.
Rational apply(Op op, Rational lhs, Rational rhs);

/// "3", "-5", "8/3".
std::string format_rational(const Rational& r);

/// Parses "12", "-3", "2.5", "8/3". Returns false on anything else or on
/// literals too long to be exact in 64 bits.
bool parse_rational(std::string_view text, Rational& out);

/// Immutable binary arithmetic tree. Children are shared, so copies are cheap.
class Expr {
 public:
  static Expr leaf(Rational value);
  static Expr binary(Op op, Expr lhs, Expr rhs);

  bool is_leaf() const { return node_->lhs == nullptr; }
  const Rational& value() const { return node_->value; }
  Op op() const { return node_->op; }
  const Expr& lhs() const { return *node_->lhs; }
  const Expr& rhs() const { return *node_->rhs; }

  /// Exact evaluation; throws DivisionByZero.
  Rational evaluate() const;
  /// Leaf values in left-to-right order.
  std::vector<Rational> leaves() const;
  /// Infix text with the minimum parentheses, e.g. "(10 - 8) * (11 + 1)".
  std::string to_string() const;

 private:
  struct Node {
    Rational value{0};
    Op op = Op::Add;
    std::shared_ptr<const Expr> lhs;
    std::shared_ptr<const Expr> rhs;
  };
  std::shared_ptr<const Node> node_;
};

class ExprParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses an infix expression over + - * / and parentheses. Accepts the
/// unicode operators × ÷ − –. Throws ExprParseError.
Expr parse_expression(std::string_view text);

/// Replaces × ÷ − – and non-breaking spaces with their ASCII forms.
std::string normalize_operators(std::string_view text);

/// Multiset equality over rationals.
bool same_multiset(std::vector<Rational> a, std::vector<Rational> b);

}  // namespace icrl::game24
