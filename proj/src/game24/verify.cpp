#include "icrl/game24/verify.hpp"

#include <algorithm>

namespace icrl::game24 {

namespace {

bool take(std::vector<Rational>& pool, const Rational& x) {
  auto it = std::find(pool.begin(), pool.end(), x);
  if (it == pool.end()) return false;
  pool.erase(it);
  return true;
}

Verdict invalid(InvalidReason reason, int step = 0) {
  Verdict v;
  v.kind = VerdictKind::Invalid;
  v.reason = reason;
  v.step = step;
  return v;
}

}  // namespace

const char* to_string(InvalidReason reason) {
  switch (reason) {
    case InvalidReason::None:
      return "none";
    case InvalidReason::MultisetMismatch:
      return "multiset_mismatch";
    case InvalidReason::StepOperandUnavailable:
      return "step_operand_unavailable";
    case InvalidReason::StepArithmetic:
      return "step_arithmetic";
    case InvalidReason::StepRemaining:
      return "step_remaining";
    case InvalidReason::DivZero:
      return "div_zero";
    case InvalidReason::StepsAnswerMismatch:
      return "steps_answer_mismatch";
  }
  return "unknown";
}

std::string Verdict::to_string() const {
  switch (kind) {
    case VerdictKind::Valid24:
      return "valid24";
    case VerdictKind::ValidButNot24:
      return "valid_but_not_24 (value " + (value ? format_rational(*value) : "?") + ")";
    case VerdictKind::Invalid: {
      std::string s = std::string("invalid: ") + game24::to_string(reason);
      if (step > 0) s += " at Step" + std::to_string(step);
      return s;
    }
  }
  return "invalid";
}

Verdict verify_solution(const Game24Solution& solution, const std::vector<Rational>& inputs) {
  if (!same_multiset(solution.answer.leaves(), inputs)) {
    return invalid(InvalidReason::MultisetMismatch);
  }

  std::vector<Rational> pool = inputs;
  for (std::size_t i = 0; i < solution.steps.size(); ++i) {
    const Game24Step& s = solution.steps[i];
    const int n = static_cast<int>(i) + 1;
    if (!take(pool, s.lhs) || !take(pool, s.rhs)) {
      return invalid(InvalidReason::StepOperandUnavailable, n);
    }
    Rational exact;
    try {
      exact = apply(s.op, s.lhs, s.rhs);
    } catch (const DivisionByZero&) {
      return invalid(InvalidReason::DivZero, n);
    }
    if (exact != s.result) return invalid(InvalidReason::StepArithmetic, n);
    pool.push_back(exact);
    if (!same_multiset(pool, s.remaining)) return invalid(InvalidReason::StepRemaining, n);
  }
  if (solution.steps.size() != 3 || pool.size() != 1) {
    return invalid(InvalidReason::StepRemaining, static_cast<int>(solution.steps.size()));
  }

  Rational value;
  try {
    value = solution.answer.evaluate();
  } catch (const DivisionByZero&) {
    return invalid(InvalidReason::DivZero);
  }
  if (value != pool.front()) {
    Verdict v = invalid(InvalidReason::StepsAnswerMismatch);
    v.value = value;
    return v;
  }

  Verdict v;
  v.value = value;
  v.kind = value == Rational(24) ? VerdictKind::Valid24 : VerdictKind::ValidButNot24;
  return v;
}

std::optional<Verdict> verify_text(std::string_view text, const std::vector<Rational>& inputs) {
  try {
    return verify_solution(parse_solution(text), inputs);
  } catch (const SolutionParseError&) {
    return std::nullopt;
  }
}

}  // namespace icrl::game24
