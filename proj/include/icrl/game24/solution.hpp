#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "icrl/game24/expr.hpp"

namespace icrl::game24 {

/// Reward positions of a Game-of-24 response, in rendering order.
inline constexpr std::array<std::string_view, 4> kRewardLabels = {"Step1", "Step2", "Step3",
                                                                  "Answer"};

/// The raw text of each labelled line of a response, located by its marker
/// ("Step1:", ..., "**Answer**:"). Tolerates the single-line
/// "<answer>**Response** Step1: ... **Answer**: ...</answer>" wrapper.
struct SolutionSegments {
  std::array<std::optional<std::string>, 3> steps;
  std::optional<std::string> answer;

  /// Segment for kRewardLabels[i].
  const std::optional<std::string>& at(std::size_t i) const { return i < 3 ? steps[i] : answer; }
};

SolutionSegments extract_segments(std::string_view response);

struct Game24Step {
  Rational lhs;
  Op op = Op::Add;
  Rational rhs;
  Rational result;                 // as written
  std::vector<Rational> remaining; // the "left:" list as written
};

struct Game24Solution {
  std::vector<Game24Step> steps;  // exactly 3
  Expr answer;
  std::string answer_text;
};

class SolutionParseError : public std::runtime_error {
 public:
  SolutionParseError(const std::string& what, std::string line)
      : std::runtime_error(what), line_(std::move(line)) {}
  const std::string& line() const { return line_; }

 private:
  std::string line_;
};

/// "Step2: 13 - 6 = 7 (left: 7 9)" -> step. Throws SolutionParseError.
Game24Step parse_step_line(std::string_view line);

/// The expression part of an answer line ("**Answer**: (6 - 4) * (4 + 8) = 24"
/// -> "(6 - 4) * (4 + 8)").
std::string answer_expression_text(std::string_view answer_line);

/// Parses Step1..Step3 and the Answer expression. Numbers are exact
/// rationals. Throws SolutionParseError naming the offending line.
Game24Solution parse_solution(std::string_view text);

/// Numbers listed inside "(left: ...)" of a step segment, or the value after
/// "=" of an answer segment. Empty when nothing can be read.
std::vector<std::string> remaining_numbers(std::string_view segment);

}  // namespace icrl::game24
