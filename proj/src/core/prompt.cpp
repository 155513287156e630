#include "icrl/core/prompt.hpp"

#include <algorithm>
#include <set>

#include "icrl/game24/task.hpp"
#include "icrl/textworld/render.hpp"
#include "icrl/writing/writing.hpp"

namespace icrl {

const char* to_string(Segment segment) {
  switch (segment) {
    case Segment::Buffer:
      return "buffer";
    case Segment::Instruction:
      return "instruction";
    case Segment::Task:
      return "task";
  }
  return "task";
}

Segment parse_segment(std::string_view text) {
  if (text == "buffer") return Segment::Buffer;
  if (text == "instruction") return Segment::Instruction;
  if (text == "task") return Segment::Task;
  throw std::invalid_argument("unknown prompt segment '" + std::string(text) +
                              "' (expected buffer, instruction or task)");
}

PromptLayout default_layout(TaskKind kind) {
  if (kind == TaskKind::Textworld) return {Segment::Task, Segment::Instruction, Segment::Buffer};
  return {Segment::Buffer, Segment::Instruction, Segment::Task};
}

bool is_valid_layout(const std::vector<Segment>& segments) {
  std::set<Segment> seen(segments.begin(), segments.end());
  return segments.size() == 3 && seen.size() == 3;
}

std::string PromptBundle::segment_text(Segment segment) const {
  auto it = segment_spans.find(segment);
  if (it == segment_spans.end()) return {};
  return user_text.substr(it->second.first, it->second.second - it->second.first);
}

std::string render_attempt(const AttemptRecord& attempt, TaskKind kind, bool zero_rewards) {
  switch (kind) {
    case TaskKind::Game24:
      return game24::render_attempt_block(attempt, zero_rewards);
    case TaskKind::Writing:
      return writing::render_attempt_block(attempt, zero_rewards);
    case TaskKind::Textworld:
      return textworld::render_trajectory(attempt, zero_rewards);
  }
  throw StructuralError("unknown task kind");
}

PromptBundle assemble_prompt(std::span<const AttemptRecord> attempts, const std::string& task_text,
                             InstructionKind instruction, const PromptLayout& layout,
                             bool zero_rewards, TaskKind kind) {
  const bool wrapped = kind == TaskKind::Textworld;

  auto render_segment = [&](Segment segment) -> std::string {
    switch (segment) {
      case Segment::Task:
        return task_text;
      case Segment::Instruction: {
        std::string text(instruction_text(instruction));
        if (text.empty() || !wrapped) return text;
        return "<Instruction>\n" + text + "\n</Instruction>";
      }
      case Segment::Buffer: {
        if (attempts.empty()) return {};
        std::string text;
        for (std::size_t i = 0; i < attempts.size(); ++i) {
          if (i > 0) text += "\n\n";
          text += render_attempt(attempts[i], kind, zero_rewards);
        }
        return wrapped ? "<Attempts>\n" + text + "\n</Attempts>" : text;
      }
    }
    return {};
  };

  PromptBundle bundle;
  for (Segment segment : layout) {
    std::string text = render_segment(segment);
    if (text.empty()) continue;
    if (!bundle.user_text.empty()) bundle.user_text += "\n\n";
    std::size_t begin = bundle.user_text.size();
    bundle.user_text += text;
    bundle.segment_spans[segment] = {begin, bundle.user_text.size()};
  }
  return bundle;
}

}  // namespace icrl
