#pragma once

#include <string_view>

namespace icrl {

enum class InstructionKind { None, Exploration, Exploitation, Autonomous };

enum class Schedule { Preset, Autonomous, ExplorationOnly, ExploitationOnly, NoEE };

const char* to_string(InstructionKind kind);
const char* to_string(Schedule schedule);
Schedule parse_schedule(std::string_view text);
InstructionKind parse_instruction_kind(std::string_view text);

/// Template text for a kind; empty for None.
std::string_view instruction_text(InstructionKind kind);

/// Which instruction episode `episode_index` (1-based) gets. Preset
/// alternates: odd -> Exploitation, even -> Exploration. Every schedule
/// yields None while the buffer is empty, and NoEE always does.
InstructionKind select_instruction(Schedule schedule, int episode_index, std::size_t buffer_len);

}  // namespace icrl
