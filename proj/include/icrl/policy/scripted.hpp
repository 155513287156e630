#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "icrl/policy/policy.hpp"

namespace icrl {

/// A check over a prompt. Used both to pick rule-based responses and to
/// assert golden expectations before a canned response is served.
struct PromptPredicate {
  enum class Kind { Contains, NotContains, Count, Regex, Blocks, Equals };

  Kind kind = Kind::Contains;
  std::string text;  // substring, regex, or expected prompt
  std::optional<int> at_least;
  std::optional<int> at_most;
  std::optional<int> equals;
  std::string open;   // Blocks only
  std::string close;  // Blocks only

  bool holds(std::string_view prompt) const;
  /// Human-readable reason the predicate fails on `prompt`; empty if it holds.
  std::string explain_failure(std::string_view prompt) const;

  static PromptPredicate from_json(const nlohmann::json& j);
};

/// Substring occurrence count (non-overlapping).
int count_occurrences(std::string_view haystack, std::string_view needle);

/// Number of open...close blocks whose body matches `pattern` (all blocks
/// when `pattern` is empty).
int count_blocks(std::string_view text, std::string_view open, std::string_view close,
                 const std::string& pattern);

/// "first difference at offset N" plus a short excerpt of both sides.
std::string character_diff(std::string_view expected, std::string_view actual);

struct ScriptStep {
  std::string response;
  std::vector<PromptPredicate> expects;
};

struct ScriptRule {
  std::vector<PromptPredicate> when;
  std::string response;
};

/// Deterministic offline policy. Responses come from, in order of lookup:
/// steps keyed by (problem_id, episode), a plain cursor-driven sequence, and
/// predicate-matched rules. A request nothing answers is an error.
class ScriptedPolicy : public Policy {
 public:
  ScriptedPolicy() = default;
  ScriptedPolicy(ScriptedPolicy&& other) noexcept;

  void add_keyed(const std::string& problem_id, int episode, ScriptStep step);
  void add_step(ScriptStep step);
  void add_rule(ScriptRule rule);

  GenResponse generate(const GenRequest& request) override;
  std::string backend_id() const override { return "scripted"; }

  /// Serves the next step of the cursor-driven sequence.
  GenResponse step(std::string_view prompt);

  std::size_t cursor() const;
  std::size_t calls() const;

  static ScriptedPolicy from_json(const nlohmann::json& j);
  static ScriptedPolicy from_file(const std::string& path);

 private:
  GenResponse serve(const ScriptStep& step, std::string_view prompt, const std::string& where);

  mutable std::mutex mu_;
  std::map<std::pair<std::string, int>, std::vector<ScriptStep>> keyed_;
  std::map<std::pair<std::string, int>, std::size_t> keyed_cursor_;
  std::vector<ScriptStep> sequence_;
  std::size_t cursor_ = 0;
  std::vector<ScriptRule> rules_;
  std::size_t calls_ = 0;
};

}  // namespace icrl
