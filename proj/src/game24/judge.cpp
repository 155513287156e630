#include "icrl/game24/judge.hpp"

#include <regex>
#include <stdexcept>

namespace icrl::game24 {

std::string render_step_judge_prompt(std::string_view step, const std::vector<std::string>& remaining) {
  if (remaining.empty()) throw std::invalid_argument("step judge needs remaining numbers");
  std::string out;
  out +=
      "Rule of the Game of 24: Use all four numbers provided in the input, without repetition, "
      "and only basic arithmetic operations (+, \xE2\x80\x93, \xC3\x97, \xC3\xB7) to obtain 24. "
      "Only three steps are allowed.\n\n";
  out += "Given the following two remaining numbers from a previous step in the Game of 24, the "
         "current step is: ";
  out += step;
  out += ". Evaluate this step.\n\n";
  out += "Examine the numbers shown in each \xE2\x80\x9C" "left: \xE2\x80\xA6\xE2\x80\x9D after the "
         "step and reason whether it is still possible to reach 24:\n";
  out += "\xE2\x80\xA2 Sure \xE2\x86\x92 3\n";
  out += "\xE2\x80\xA2 Likely \xE2\x86\x92 1\n";
  out += "\xE2\x80\xA2 Impossible \xE2\x86\x92 0\n\n";
  out += "Return the score in the following format: **Answer**: <integer score>\n\n";
  out += "Response:";
  return out;
}

std::optional<int> parse_judge_score(std::string_view reply) {
  static const std::regex kScore(R"(\*\*Answer\*\*\s*:\s*(-?\d+))");
  const std::string text(reply);
  std::optional<std::string> last;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), kScore);
       it != std::sregex_iterator(); ++it) {
    last = (*it)[1].str();
  }
  if (!last || last->size() > 3) return std::nullopt;
  int score = std::stoi(*last);
  if (score < 0 || score > 3) return std::nullopt;
  return score;
}

}  // namespace icrl::game24
