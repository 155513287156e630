#include "icrl/game24/oracle.hpp"

#include <algorithm>
#include <array>
#include <sstream>

namespace icrl::game24 {

namespace {

// The five binary-tree shapes over four ordered leaves a b c d:
// ((a b) c) d, (a (b c)) d, (a b) (c d), a ((b c) d), a (b (c d)).
constexpr int kShapeCount = 5;

using Ops = std::array<Op, 3>;

template <typename T, typename Combine>
T build_shape(int shape, const std::array<T, 4>& l, const Ops& o, Combine combine) {
  switch (shape) {
    case 0:
      return combine(o[2], combine(o[1], combine(o[0], l[0], l[1]), l[2]), l[3]);
    case 1:
      return combine(o[2], combine(o[1], l[0], combine(o[0], l[1], l[2])), l[3]);
    case 2:
      return combine(o[2], combine(o[0], l[0], l[1]), combine(o[1], l[2], l[3]));
    case 3:
      return combine(o[2], l[0], combine(o[1], combine(o[0], l[1], l[2]), l[3]));
    default:
      return combine(o[2], l[0], combine(o[1], l[1], combine(o[0], l[2], l[3])));
  }
}

void post_order(const Expr& e, std::vector<const Expr*>& out) {
  if (e.is_leaf()) return;
  post_order(e.lhs(), out);
  post_order(e.rhs(), out);
  out.push_back(&e);
}

std::string format_pool(std::vector<Rational> pool) {
  std::sort(pool.begin(), pool.end());
  std::ostringstream out;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (i > 0) out << ' ';
    out << format_rational(pool[i]);
  }
  return out.str();
}

}  // namespace

OracleResult solvable_oracle(const std::vector<Rational>& inputs, Rational target) {
  if (inputs.size() != 4) return {};
  std::array<Rational, 4> order = {inputs[0], inputs[1], inputs[2], inputs[3]};
  std::sort(order.begin(), order.end());
  do {
    for (int shape = 0; shape < kShapeCount; ++shape) {
      for (Op o0 : kAllOps) {
        for (Op o1 : kAllOps) {
          for (Op o2 : kAllOps) {
            const Ops ops{o0, o1, o2};
            try {
              Rational v = build_shape(shape, order, ops, apply);
              if (v != target) continue;
            } catch (const DivisionByZero&) {
              continue;
            }
            std::array<Expr, 4> leaves = {Expr::leaf(order[0]), Expr::leaf(order[1]),
                                          Expr::leaf(order[2]), Expr::leaf(order[3])};
            return {true, build_shape(shape, leaves, ops, Expr::binary)};
          }
        }
      }
    }
  } while (std::next_permutation(order.begin(), order.end()));
  return {};
}

std::string solution_text_from_expression(const Expr& expr, const std::vector<Rational>& inputs) {
  std::vector<const Expr*> nodes;
  post_order(expr, nodes);
  std::vector<Rational> pool = inputs;
  std::ostringstream out;
  int n = 1;
  for (const Expr* node : nodes) {
    Rational lhs = node->lhs().evaluate();
    Rational rhs = node->rhs().evaluate();
    Rational result = apply(node->op(), lhs, rhs);
    for (const Rational& used : {lhs, rhs}) {
      auto it = std::find(pool.begin(), pool.end(), used);
      if (it != pool.end()) pool.erase(it);
    }
    pool.push_back(result);
    out << "Step" << n++ << ": " << format_rational(lhs) << ' ' << static_cast<char>(node->op())
        << ' ' << format_rational(rhs) << " = " << format_rational(result) << " (left: "
        << format_pool(pool) << ")\n";
  }
  out << "Answer: " << expr.to_string() << " = " << format_rational(expr.evaluate()) << "\n";
  return out.str();
}

}  // namespace icrl::game24
