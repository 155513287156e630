#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace icrl::game24 {

/// The single-step judge prompt: rules, the step, the Sure/Likely/Impossible
/// rubric and the "**Answer**: <integer score>" return format. `remaining`
/// must be nonempty (std::invalid_argument otherwise).
std::string render_step_judge_prompt(std::string_view step, const std::vector<std::string>& remaining);

/// Last "**Answer**: n" in a judge reply, n in 0..3. std::nullopt when absent
/// or out of range.
std::optional<int> parse_judge_score(std::string_view reply);

}  // namespace icrl::game24
