#pragma once

#include <optional>
#include <string>
#include <vector>

#include "icrl/game24/expr.hpp"
#include "icrl/game24/solution.hpp"

namespace icrl::game24 {

enum class VerdictKind { Valid24, ValidButNot24, Invalid };

enum class InvalidReason {
  None,
  MultisetMismatch,        // answer leaves differ from the inputs
  StepOperandUnavailable,  // a step uses a number not currently remaining
  StepArithmetic,          // stated result differs from the exact result
  StepRemaining,           // stated "left:" list differs from the actual multiset
  DivZero,
  StepsAnswerMismatch,     // final step result differs from the answer's value
};

struct Verdict {
  VerdictKind kind = VerdictKind::Invalid;
  InvalidReason reason = InvalidReason::None;
  int step = 0;                  // 1-based step index for step reasons
  std::optional<Rational> value; // answer value when it could be computed

  bool success() const { return kind == VerdictKind::Valid24; }
  /// "valid24", "valid_but_not_24 (value 36)", "invalid: multiset_mismatch".
  std::string to_string() const;
};

const char* to_string(InvalidReason reason);

/// Ground-truth check r*: answer uses exactly the inputs, every step is exact
/// and consistent, steps and answer agree, and the value is 24.
Verdict verify_solution(const Game24Solution& solution, const std::vector<Rational>& inputs);

/// parse + verify; parse failures are reported as std::nullopt.
std::optional<Verdict> verify_text(std::string_view text, const std::vector<Rational>& inputs);

}  // namespace icrl::game24
