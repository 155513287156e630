#include "icrl/cli/config_io.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>

namespace icrl::cli {

namespace {

using nlohmann::json;

const std::vector<std::string> kBackendKeys = {
    "backend",   "script",          "base_url",  "model",       "api_key_env",
    "temperature", "max_output_tokens", "timeout_s", "max_retries", "requests_per_minute"};

const std::vector<std::string> kTopKeys = {
    "name",        "task_kind",   "method",        "schedule",          "episodes",
    "buffer_capacity", "zero_rewards", "prompt_layout", "max_prompt_chars", "seed",
    "best_of_n",   "reflection_window", "problems", "problem_limit",     "base_answer",
    "worlds",      "env_command", "parallel",      "policy",            "judge"};

std::string leaf(const std::string& key) {
  auto dot = key.rfind('.');
  return dot == std::string::npos ? key : key.substr(dot + 1);
}

[[noreturn]] void unknown_key(const std::string& key) {
  std::string msg = "unknown config key '" + key + "'";
  if (auto s = suggest_key(key)) msg += " (did you mean '" + *s + "'?)";
  throw ConfigError(msg);
}

void check_keys(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (std::find(kTopKeys.begin(), kTopKeys.end(), key) == kTopKeys.end()) unknown_key(key);
    if (key == "policy" || key == "judge") {
      if (!value.is_object()) throw ConfigError("config key '" + key + "': expected an object");
      for (const auto& [sub, v] : value.items()) {
        (void)v;
        if (std::find(kBackendKeys.begin(), kBackendKeys.end(), sub) == kBackendKeys.end()) {
          unknown_key(key + "." + sub);
        }
      }
    }
  }
}

template <typename T>
T get(const json& obj, const std::string& key, const std::string& full, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config key '" + full + "': unexpected value " + obj.at(key).dump());
  }
}

template <typename F>
auto enum_value(const json& doc, const std::string& key, F parse, decltype(parse("")) fallback) {
  if (!doc.contains(key)) return fallback;
  if (!doc.at(key).is_string()) throw ConfigError("config key '" + key + "': expected a string");
  try {
    return parse(doc.at(key).get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw ConfigError("config key '" + key + "': " + e.what());
  }
}

std::optional<std::size_t> optional_size(const json& doc, const std::string& key) {
  if (!doc.contains(key) || doc.at(key).is_null()) return std::nullopt;
  const json& v = doc.at(key);
  if (v.is_string() && v.get<std::string>() == "unbounded") return std::nullopt;
  if (!v.is_number_integer() || v.get<long long>() < 1) {
    throw ConfigError("config key '" + key + "': expected a positive integer, got " + v.dump());
  }
  return v.get<std::size_t>();
}

BackendSettings backend_from_json(const json& doc, const std::string& name, BackendSettings b) {
  if (!doc.contains(name)) return b;
  const json& o = doc.at(name);
  b.backend = get(o, "backend", name + ".backend", b.backend);
  b.script = get(o, "script", name + ".script", b.script);
  b.base_url = get(o, "base_url", name + ".base_url", b.base_url);
  b.model = get(o, "model", name + ".model", b.model);
  b.api_key_env = get(o, "api_key_env", name + ".api_key_env", b.api_key_env);
  b.temperature = get(o, "temperature", name + ".temperature", b.temperature);
  b.max_output_tokens = get(o, "max_output_tokens", name + ".max_output_tokens", b.max_output_tokens);
  b.timeout_s = get(o, "timeout_s", name + ".timeout_s", b.timeout_s);
  b.max_retries = get(o, "max_retries", name + ".max_retries", b.max_retries);
  b.requests_per_minute =
      get(o, "requests_per_minute", name + ".requests_per_minute", b.requests_per_minute);
  return b;
}

json backend_to_json(const BackendSettings& b) {
  return {{"backend", b.backend},
          {"script", b.script},
          {"base_url", b.base_url},
          {"model", b.model},
          {"api_key_env", b.api_key_env},
          {"temperature", b.temperature},
          {"max_output_tokens", b.max_output_tokens},
          {"timeout_s", b.timeout_s},
          {"max_retries", b.max_retries},
          {"requests_per_minute", b.requests_per_minute}};
}

std::string resolve(const std::filesystem::path& base, const std::string& p) {
  if (p.empty() || std::filesystem::path(p).is_absolute()) return p;
  return (base / p).lexically_normal().string();
}

}  // namespace

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> out;
    for (const auto& k : kTopKeys) {
      if (k == "policy" || k == "judge") {
        for (const auto& b : kBackendKeys) out.push_back(k + "." + b);
      } else {
        out.push_back(k);
      }
    }
    return out;
  }();
  return keys;
}

std::size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::size_t> prev(b.size() + 1);
  std::vector<std::size_t> cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] != b[j - 1] ? 1u : 0u)});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::optional<std::string> suggest_key(const std::string& unknown) {
  std::optional<std::string> best;
  std::size_t best_d = 0;
  for (const auto& key : known_keys()) {
    std::size_t d = std::min(edit_distance(unknown, key), edit_distance(leaf(unknown), leaf(key)));
    if (!best || d < best_d) {
      best = key;
      best_d = d;
    }
  }
  if (!best || best_d > std::max<std::size_t>(2, leaf(unknown).size() / 3)) return std::nullopt;
  return best;
}

void apply_override(json& doc, const std::string& assignment) {
  auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("override '" + assignment + "' is not of the form key=value");
  }
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  if (std::find(known_keys().begin(), known_keys().end(), key) == known_keys().end()) {
    unknown_key(key);
  }
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;

  json* node = &doc;
  std::size_t start = 0;
  for (std::size_t dot; (dot = key.find('.', start)) != std::string::npos; start = dot + 1) {
    json& child = (*node)[key.substr(start, dot - start)];
    if (child.is_null()) child = json::object();
    node = &child;
  }
  (*node)[key.substr(start)] = value;
}

RunConfig config_from_json(const json& doc) {
  check_keys(doc);
  RunConfig c;
  c.name = get(doc, "name", "name", c.name);
  c.task_kind = enum_value(doc, "task_kind", parse_task_kind, c.task_kind);
  c.method = enum_value(doc, "method", parse_method, c.method);
  c.schedule = enum_value(doc, "schedule", parse_schedule, c.schedule);
  c.episodes = get(doc, "episodes", "episodes", c.episodes);
  c.buffer_capacity = optional_size(doc, "buffer_capacity");
  c.zero_rewards = get(doc, "zero_rewards", "zero_rewards", c.zero_rewards);
  c.prompt_layout = default_layout(c.task_kind);
  if (doc.contains("prompt_layout")) {
    auto names = get(doc, "prompt_layout", "prompt_layout", std::vector<std::string>{});
    std::vector<Segment> segments;
    try {
      for (const auto& n : names) segments.push_back(parse_segment(n));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("config key 'prompt_layout': ") + e.what());
    }
    if (!is_valid_layout(segments)) {
      throw ConfigError("config key 'prompt_layout': must name buffer, instruction and task once each");
    }
    std::copy(segments.begin(), segments.end(), c.prompt_layout.begin());
  }
  c.max_prompt_chars = optional_size(doc, "max_prompt_chars");
  c.policy = backend_from_json(doc, "policy", c.policy);
  c.judge = backend_from_json(doc, "judge", c.judge);
  c.seed = get(doc, "seed", "seed", c.seed);
  c.best_of_n = get(doc, "best_of_n", "best_of_n", c.best_of_n);
  c.reflection_window = get(doc, "reflection_window", "reflection_window", c.reflection_window);
  c.problems = get(doc, "problems", "problems", c.problems);
  if (doc.contains("problem_limit") && !doc.at("problem_limit").is_null()) {
    c.problem_limit = get(doc, "problem_limit", "problem_limit", 0);
    if (*c.problem_limit < 1) throw ConfigError("config key 'problem_limit': expected a positive integer");
  }
  c.base_answer = get(doc, "base_answer", "base_answer", c.base_answer);
  c.worlds = get(doc, "worlds", "worlds", c.worlds);
  c.env_command = get(doc, "env_command", "env_command", c.env_command);
  c.parallel = get(doc, "parallel", "parallel", c.parallel);
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return c;
}

RunConfig parse_config(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  json doc = json::parse(in, nullptr, false, true);
  if (doc.is_discarded()) throw ConfigError("config file " + path + " is not valid JSON");
  check_keys(doc);

  const auto base = std::filesystem::path(path).parent_path();
  for (const char* key : {"problems", "base_answer"}) {
    if (doc.contains(key) && doc[key].is_string()) doc[key] = resolve(base, doc[key].get<std::string>());
  }
  if (doc.contains("worlds") && doc["worlds"].is_array()) {
    for (auto& w : doc["worlds"]) {
      if (w.is_string()) w = resolve(base, w.get<std::string>());
    }
  }
  for (const char* backend : {"policy", "judge"}) {
    if (doc.contains(backend) && doc[backend].contains("script") && doc[backend]["script"].is_string()) {
      doc[backend]["script"] = resolve(base, doc[backend]["script"].get<std::string>());
    }
  }
  for (const auto& o : overrides) apply_override(doc, o);
  return config_from_json(doc);
}

json config_to_json(const RunConfig& c) {
  json layout = json::array();
  for (Segment s : c.prompt_layout) layout.push_back(to_string(s));
  json j = {{"name", c.name},
            {"task_kind", to_string(c.task_kind)},
            {"method", to_string(c.method)},
            {"schedule", to_string(c.schedule)},
            {"episodes", c.episodes},
            {"buffer_capacity", c.buffer_capacity ? json(*c.buffer_capacity) : json("unbounded")},
            {"zero_rewards", c.zero_rewards},
            {"prompt_layout", layout},
            {"max_prompt_chars", c.max_prompt_chars ? json(*c.max_prompt_chars) : json(nullptr)},
            {"policy", backend_to_json(c.policy)},
            {"judge", backend_to_json(c.judge)},
            {"seed", c.seed},
            {"best_of_n", c.best_of_n},
            {"reflection_window", c.reflection_window},
            {"problems", c.problems},
            {"problem_limit", c.problem_limit ? json(*c.problem_limit) : json(nullptr)},
            {"base_answer", c.base_answer},
            {"worlds", c.worlds},
            {"env_command", c.env_command},
            {"parallel", c.parallel}};
  return j;
}

}  // namespace icrl::cli
