#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "icrl/core/attempt.hpp"
#include "icrl/core/instruction.hpp"

namespace icrl {

enum class Segment { Buffer, Instruction, Task };

const char* to_string(Segment segment);
Segment parse_segment(std::string_view text);

using PromptLayout = std::array<Segment, 3>;

/// buffer -> instruction -> task for game24 and writing; task -> instruction
/// -> buffer for text-world tasks.
PromptLayout default_layout(TaskKind kind);

/// True iff `segments` names each of the three segments exactly once.
bool is_valid_layout(const std::vector<Segment>& segments);

struct PromptBundle {
  std::optional<std::string> system_text;
  std::string user_text;
  /// [begin, end) of each segment that contributed text.
  std::map<Segment, std::pair<std::size_t, std::size_t>> segment_spans;

  /// Text of one segment; empty if absent.
  std::string segment_text(Segment segment) const;
};

/// Renders one buffer entry in the task's attempt format. With
/// `zero_rewards` every rendered scalar is zero. Throws StructuralError when
/// the reward count does not fit the task.
std::string render_attempt(const AttemptRecord& attempt, TaskKind kind, bool zero_rewards);

/// Concatenates the rendered segments in layout order, separated by blank
/// lines. Empty segments contribute nothing, so an empty buffer with no
/// instruction yields exactly `task_text`.
PromptBundle assemble_prompt(std::span<const AttemptRecord> attempts, const std::string& task_text,
                             InstructionKind instruction, const PromptLayout& layout,
                             bool zero_rewards, TaskKind kind);

}  // namespace icrl
