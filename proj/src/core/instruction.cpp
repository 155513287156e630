#include "icrl/core/instruction.hpp"

#include <stdexcept>
#include <string>

namespace icrl {

namespace {

constexpr std::string_view kExploration =
    "Instruction: Examine all the <attempt> ...</attempt> examples, each showing a candidate "
    "Response, and the Rewards for each step of the Response. Provide a response that is "
    "completely different for any steps from every single one of the previous attempts "
    "demonstrated in the context.";

constexpr std::string_view kExploitation =
    "Instruction: You will be given multiple <attempt> ...</attempt> examples, each showing a "
    "candidate Response, and the Rewards for each step of the Response. Your task: Based on the "
    "previous attempts, try your best to produce a response that can achieve higher rewards.";

constexpr std::string_view kAutonomous =
    "Instruction: Examine all the <attempt> ...</attempt> examples, each showing a candidate "
    "Response and its Reward. You have two options: exploration or exploitation.\n"
    "\n"
    "For exploration, provide a response that is completely different for any steps from every "
    "single one of the previous attempts demonstrated in the context, while making sure it "
    "correctly follows the task instruction.\n"
    "\n"
    "For exploitation, based on the previous attempts, try your best to produce a response that "
    "can achieve higher rewards.\n"
    "\n"
    "Pick one option to follow.";

}  // namespace

const char* to_string(InstructionKind kind) {
  switch (kind) {
    case InstructionKind::None:
      return "none";
    case InstructionKind::Exploration:
      return "exploration";
    case InstructionKind::Exploitation:
      return "exploitation";
    case InstructionKind::Autonomous:
      return "autonomous";
  }
  return "none";
}

const char* to_string(Schedule schedule) {
  switch (schedule) {
    case Schedule::Preset:
      return "preset";
    case Schedule::Autonomous:
      return "autonomous";
    case Schedule::ExplorationOnly:
      return "exploration_only";
    case Schedule::ExploitationOnly:
      return "exploitation_only";
    case Schedule::NoEE:
      return "no_ee";
  }
  return "preset";
}

Schedule parse_schedule(std::string_view text) {
  if (text == "preset") return Schedule::Preset;
  if (text == "autonomous") return Schedule::Autonomous;
  if (text == "exploration_only") return Schedule::ExplorationOnly;
  if (text == "exploitation_only") return Schedule::ExploitationOnly;
  if (text == "no_ee") return Schedule::NoEE;
  throw std::invalid_argument(
      "unknown schedule '" + std::string(text) +
      "' (expected preset, autonomous, exploration_only, exploitation_only or no_ee)");
}

InstructionKind parse_instruction_kind(std::string_view text) {
  if (text == "none") return InstructionKind::None;
  if (text == "exploration") return InstructionKind::Exploration;
  if (text == "exploitation") return InstructionKind::Exploitation;
  if (text == "autonomous") return InstructionKind::Autonomous;
  throw std::invalid_argument("unknown instruction kind '" + std::string(text) + "'");
}

std::string_view instruction_text(InstructionKind kind) {
  switch (kind) {
    case InstructionKind::None:
      return {};
    case InstructionKind::Exploration:
      return kExploration;
    case InstructionKind::Exploitation:
      return kExploitation;
    case InstructionKind::Autonomous:
      return kAutonomous;
  }
  return {};
}

InstructionKind select_instruction(Schedule schedule, int episode_index, std::size_t buffer_len) {
  if (buffer_len == 0) return InstructionKind::None;
  switch (schedule) {
    case Schedule::Preset:
      return episode_index % 2 == 0 ? InstructionKind::Exploration : InstructionKind::Exploitation;
    case Schedule::Autonomous:
      return InstructionKind::Autonomous;
    case Schedule::ExplorationOnly:
      return InstructionKind::Exploration;
    case Schedule::ExploitationOnly:
      return InstructionKind::Exploitation;
    case Schedule::NoEE:
      return InstructionKind::None;
  }
  return InstructionKind::None;
}

}  // namespace icrl
