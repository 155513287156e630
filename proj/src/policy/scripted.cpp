#include "icrl/policy/scripted.hpp"

#include <algorithm>
#include <fstream>
#include <regex>
#include <sstream>

namespace icrl {

namespace {

bool compare_count(int n, const PromptPredicate& p) {
  if (p.equals && n != *p.equals) return false;
  if (p.at_least && n < *p.at_least) return false;
  if (p.at_most && n > *p.at_most) return false;
  return true;
}

std::string bounds_text(const PromptPredicate& p) {
  std::ostringstream out;
  if (p.equals) out << " ==" << *p.equals;
  if (p.at_least) out << " >=" << *p.at_least;
  if (p.at_most) out << " <=" << *p.at_most;
  return out.str();
}

void read_bounds(const nlohmann::json& j, PromptPredicate& p) {
  if (j.contains("equals")) p.equals = j.at("equals").get<int>();
  if (j.contains("at_least")) p.at_least = j.at("at_least").get<int>();
  if (j.contains("at_most")) p.at_most = j.at("at_most").get<int>();
  if (!p.equals && !p.at_least && !p.at_most) p.at_least = 1;
}

std::string excerpt(std::string_view s, std::size_t at) {
  std::size_t begin = at > 30 ? at - 30 : 0;
  std::string out(s.substr(begin, 60));
  std::string escaped;
  for (char c : out) {
    if (c == '\n') {
      escaped += "\\n";
    } else {
      escaped += c;
    }
  }
  return escaped;
}

std::string key_text(const std::string& problem_id, int episode) {
  return "(" + problem_id + ", " + std::to_string(episode) + ")";
}

}  // namespace

int count_occurrences(std::string_view haystack, std::string_view needle) {
  if (needle.empty()) return 0;
  int n = 0;
  for (std::size_t pos = haystack.find(needle); pos != std::string_view::npos;
       pos = haystack.find(needle, pos + needle.size())) {
    ++n;
  }
  return n;
}

int count_blocks(std::string_view text, std::string_view open, std::string_view close,
                 const std::string& pattern) {
  std::optional<std::regex> re;
  if (!pattern.empty()) re.emplace(pattern);
  int n = 0;
  std::size_t pos = 0;
  while (true) {
    std::size_t begin = text.find(open, pos);
    if (begin == std::string_view::npos) break;
    std::size_t body = begin + open.size();
    std::size_t end = text.find(close, body);
    if (end == std::string_view::npos) break;
    std::string inner(text.substr(body, end - body));
    if (!re || std::regex_search(inner, *re)) ++n;
    pos = end + close.size();
  }
  return n;
}

std::string character_diff(std::string_view expected, std::string_view actual) {
  std::size_t i = 0;
  while (i < expected.size() && i < actual.size() && expected[i] == actual[i]) ++i;
  if (i == expected.size() && i == actual.size()) return {};
  std::ostringstream out;
  out << "first difference at offset " << i << " (expected " << expected.size()
      << " chars, got " << actual.size() << ")\n"
      << "  expected: ..." << excerpt(expected, i) << "...\n"
      << "  actual:   ..." << excerpt(actual, i) << "...";
  return out.str();
}

bool PromptPredicate::holds(std::string_view prompt) const {
  return explain_failure(prompt).empty();
}

std::string PromptPredicate::explain_failure(std::string_view prompt) const {
  switch (kind) {
    case Kind::Contains:
      if (prompt.find(text) != std::string_view::npos) return {};
      return "prompt does not contain \"" + text + "\"";
    case Kind::NotContains:
      if (prompt.find(text) == std::string_view::npos) return {};
      return "prompt unexpectedly contains \"" + text + "\"";
    case Kind::Count: {
      int n = count_occurrences(prompt, text);
      if (compare_count(n, *this)) return {};
      return "count of \"" + text + "\" is " + std::to_string(n) + ", wanted" + bounds_text(*this);
    }
    case Kind::Regex: {
      std::string s(prompt);
      if (std::regex_search(s, std::regex(text))) return {};
      return "prompt does not match /" + text + "/";
    }
    case Kind::Blocks: {
      int n = count_blocks(prompt, open, close, text);
      if (compare_count(n, *this)) return {};
      return "blocks " + open + "..." + close + " matching /" + text + "/ number " +
             std::to_string(n) + ", wanted" + bounds_text(*this);
    }
    case Kind::Equals: {
      std::string diff = character_diff(text, prompt);
      if (diff.empty()) return {};
      return "prompt differs from golden: " + diff;
    }
  }
  return "unknown predicate";
}

PromptPredicate PromptPredicate::from_json(const nlohmann::json& j) {
  PromptPredicate p;
  if (j.contains("contains")) {
    p.kind = Kind::Contains;
    p.text = j.at("contains").get<std::string>();
  } else if (j.contains("not_contains")) {
    p.kind = Kind::NotContains;
    p.text = j.at("not_contains").get<std::string>();
  } else if (j.contains("count")) {
    p.kind = Kind::Count;
    p.text = j.at("count").get<std::string>();
    read_bounds(j, p);
  } else if (j.contains("regex")) {
    p.kind = Kind::Regex;
    p.text = j.at("regex").get<std::string>();
  } else if (j.contains("blocks")) {
    const auto& b = j.at("blocks");
    p.kind = Kind::Blocks;
    p.open = b.at("open").get<std::string>();
    p.close = b.at("close").get<std::string>();
    p.text = b.value("matching", std::string{});
    read_bounds(j, p);
  } else if (j.contains("equals_text")) {
    p.kind = Kind::Equals;
    p.text = j.at("equals_text").get<std::string>();
  } else {
    throw ScriptError("unrecognized prompt predicate: " + j.dump());
  }
  return p;
}

ScriptedPolicy::ScriptedPolicy(ScriptedPolicy&& other) noexcept
    : keyed_(std::move(other.keyed_)),
      keyed_cursor_(std::move(other.keyed_cursor_)),
      sequence_(std::move(other.sequence_)),
      cursor_(other.cursor_),
      rules_(std::move(other.rules_)),
      calls_(other.calls_) {}

void ScriptedPolicy::add_keyed(const std::string& problem_id, int episode, ScriptStep step) {
  std::lock_guard lock(mu_);
  keyed_[{problem_id, episode}].push_back(std::move(step));
}

void ScriptedPolicy::add_step(ScriptStep step) {
  std::lock_guard lock(mu_);
  sequence_.push_back(std::move(step));
}

void ScriptedPolicy::add_rule(ScriptRule rule) {
  std::lock_guard lock(mu_);
  rules_.push_back(std::move(rule));
}

std::size_t ScriptedPolicy::cursor() const {
  std::lock_guard lock(mu_);
  return cursor_;
}

std::size_t ScriptedPolicy::calls() const {
  std::lock_guard lock(mu_);
  return calls_;
}

GenResponse ScriptedPolicy::serve(const ScriptStep& step, std::string_view prompt,
                                  const std::string& where) {
  for (const auto& expect : step.expects) {
    std::string why = expect.explain_failure(prompt);
    if (!why.empty()) throw ScriptError("script expectation failed at " + where + ": " + why);
  }
  ++calls_;
  GenResponse response;
  response.text = step.response;
  response.tokens_in = estimate_tokens(std::string(prompt));
  response.tokens_out = estimate_tokens(step.response);
  response.finish_reason = FinishReason::Stop;
  return response;
}

GenResponse ScriptedPolicy::step(std::string_view prompt) {
  std::lock_guard lock(mu_);
  if (cursor_ >= sequence_.size()) {
    throw ScriptError("script exhausted after " + std::to_string(sequence_.size()) + " steps");
  }
  const ScriptStep& s = sequence_[cursor_];
  std::string where = "step " + std::to_string(cursor_);
  GenResponse r = serve(s, prompt, where);
  ++cursor_;
  return r;
}

GenResponse ScriptedPolicy::generate(const GenRequest& request) {
  {
    std::lock_guard lock(mu_);
    auto key = std::make_pair(request.tag.problem_id, request.tag.episode);
    if (auto it = keyed_.find(key); it != keyed_.end()) {
      std::size_t& at = keyed_cursor_[key];
      if (at >= it->second.size()) {
        throw ScriptError("script exhausted for " + key_text(key.first, key.second));
      }
      GenResponse r = serve(it->second[at], request.user_text,
                            key_text(key.first, key.second) + " call " + std::to_string(at));
      ++at;
      return r;
    }
    if (cursor_ >= sequence_.size()) {
      for (const auto& rule : rules_) {
        bool all = std::all_of(rule.when.begin(), rule.when.end(),
                               [&](const PromptPredicate& p) { return p.holds(request.user_text); });
        if (all) return serve(ScriptStep{rule.response, {}}, request.user_text, "rule");
      }
      if (!sequence_.empty()) {
        throw ScriptError("script exhausted after " + std::to_string(sequence_.size()) + " steps");
      }
      throw ScriptError("no script entry for " +
                        key_text(request.tag.problem_id, request.tag.episode));
    }
  }
  return step(request.user_text);
}

ScriptedPolicy ScriptedPolicy::from_json(const nlohmann::json& j) {
  auto read_step = [](const nlohmann::json& s) {
    ScriptStep step;
    step.response = s.at("response").get<std::string>();
    if (s.contains("expect")) {
      for (const auto& p : s.at("expect")) step.expects.push_back(PromptPredicate::from_json(p));
    }
    return step;
  };

  ScriptedPolicy policy;
  if (j.contains("keyed")) {
    for (const auto& entry : j.at("keyed")) {
      std::string pid = entry.at("problem_id").get<std::string>();
      int episode = entry.at("episode").get<int>();
      if (entry.contains("responses")) {
        for (const auto& s : entry.at("responses")) policy.add_keyed(pid, episode, read_step(s));
      } else {
        policy.add_keyed(pid, episode, read_step(entry));
      }
    }
  }
  if (j.contains("sequence")) {
    for (const auto& s : j.at("sequence")) policy.add_step(read_step(s));
  }
  if (j.contains("rules")) {
    for (const auto& r : j.at("rules")) {
      ScriptRule rule;
      rule.response = r.at("response").get<std::string>();
      if (r.contains("when")) {
        for (const auto& p : r.at("when")) rule.when.push_back(PromptPredicate::from_json(p));
      }
      policy.add_rule(std::move(rule));
    }
  }
  return policy;
}

ScriptedPolicy ScriptedPolicy::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScriptError("cannot open script file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ScriptError("malformed script file " + path + ": " + e.what());
  }
  return from_json(j);
}

}  // namespace icrl
