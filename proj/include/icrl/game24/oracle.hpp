#pragma once

#include <optional>
#include <string>
#include <vector>

#include "icrl/game24/expr.hpp"

namespace icrl::game24 {

struct OracleResult {
  bool solvable = false;
  std::optional<Expr> witness;
};

/// Exhaustive search over every 4-leaf tree shape, distinct leaf ordering
/// and operator assignment, in exact arithmetic. Division-by-zero branches
/// are skipped.
OracleResult solvable_oracle(const std::vector<Rational>& inputs, Rational target = Rational(24));

/// Renders an expression as a three-step solution in the task's answer
/// format ("Step1: ... (left: ...)" ... "Answer: ... = v"), computing the
/// steps in post-order.
std::string solution_text_from_expression(const Expr& expr, const std::vector<Rational>& inputs);

}  // namespace icrl::game24
