#include "icrl/game24/task.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "icrl/game24/judge.hpp"
#include "icrl/game24/solution.hpp"
#include "icrl/game24/verify.hpp"

namespace icrl::game24 {

namespace {

// Largest input accepted; keeps every exact intermediate within 64 bits.
constexpr int kMaxInput = 9999;

constexpr const char* kDemonstrations =
    "<attempt>\n"
    "Input: 4 4 6 8\n"
    "Step1: 4 + 8 = 12 (left: 4 6 12)\n"
    "Step2: 6 - 4 = 2 (left: 2 12)\n"
    "Step3: 2 * 12 = 24 (left: 24)\n"
    "Answer: (6 - 4) * (4 + 8) = 24\n"
    "</attempt>\n"
    "\n"
    "<attempt>\n"
    "Input: 2 9 10 12\n"
    "Step1: 12 * 2 = 24 (left: 9 10 24)\n"
    "Step2: 10 - 9 = 1 (left: 1 24)\n"
    "Step3: 24 * 1 = 24 (left: 24)\n"
    "Answer: (12 * 2) * (10 - 9) = 24\n"
    "</attempt>\n"
    "\n"
    "<attempt>\n"
    "Input: 4 9 10 13\n"
    "Step1: 13 - 10 = 3 (left: 3 4 9)\n"
    "Step2: 9 - 3 = 6 (left: 4 6)\n"
    "Step3: 4 * 6 = 24 (left: 24)\n"
    "Answer: 4 * (9 - (13 - 10)) = 24\n"
    "</attempt>\n"
    "\n"
    "<attempt>\n"
    "Input: 1 4 8 8\n"
    "Step1: 8 / 4 = 2 (left: 1 2 8)\n"
    "Step2: 1 + 2 = 3 (left: 3 8)\n"
    "Step3: 3 * 8 = 24 (left: 24)\n"
    "Answer: (1 + 8 / 4) * 8 = 24\n"
    "</attempt>\n"
    "\n"
    "<attempt>\n"
    "Input: 5 5 5 9\n"
    "Step1: 5 + 5 = 10 (left: 5 9 10)\n"
    "Step2: 10 + 5 = 15 (left: 9 15)\n"
    "Step3: 15 + 9 = 24 (left: 24)\n"
    "Answer: ((5 + 5) + 5) + 9 = 24\n"
    "</attempt>\n";

constexpr const char* kTaskInstruction =
    "**Task**: Use numbers and basic arithmetic operations (+ - * /) to obtain 24. Put your "
    "answer in this format `<answer>**Response** Step1: ... (left: ...) Step2: ... (left: ...) "
    "Step3: ... (left: ...) **Answer**: <math operations of the 4 input numbers, even if it does "
    "not equal 24></answer>`. Whether it is correct or not, do not try again.\n";

std::string missing_line(std::string_view label) {
  return label == "Answer" ? "**Answer**: (missing)" : std::string(label) + ": (missing)";
}

}  // namespace

std::vector<Rational> Game24Problem::rationals() const {
  return {Rational(inputs[0]), Rational(inputs[1]), Rational(inputs[2]), Rational(inputs[3])};
}

std::string Game24Problem::inputs_text() const {
  std::ostringstream out;
  out << inputs[0] << ' ' << inputs[1] << ' ' << inputs[2] << ' ' << inputs[3];
  return out.str();
}

Game24Problem parse_problem_line(const std::string& line, std::string problem_id) {
  std::istringstream in(line);
  std::vector<long long> values;
  for (std::string tok; in >> tok;) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size()) throw std::runtime_error("not an integer: '" + tok + "' in '" + line + "'");
    values.push_back(v);
  }
  if (values.size() != 4) {
    throw std::runtime_error("expected 4 numbers, got " + std::to_string(values.size()) + " in '" +
                             line + "'");
  }
  Game24Problem p;
  p.problem_id = std::move(problem_id);
  for (std::size_t i = 0; i < 4; ++i) {
    if (values[i] < 1 || values[i] > kMaxInput) {
      throw std::runtime_error("numbers must be in 1.." + std::to_string(kMaxInput) + " in '" +
                               line + "'");
    }
    p.inputs[i] = static_cast<int>(values[i]);
  }
  return p;
}

std::vector<Game24Problem> load_problems(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open problem file " + path);
  std::vector<Game24Problem> out;
  int line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    char id[16];
    std::snprintf(id, sizeof id, "p%03zu", out.size() + 1);
    try {
      out.push_back(parse_problem_line(line, id));
    } catch (const std::runtime_error& e) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::string render_task_text(const Game24Problem& problem) {
  return std::string(kDemonstrations) + "\n" + kTaskInstruction +
         "**Prompt**: Input: " + problem.inputs_text();
}

std::string render_attempt_block(const AttemptRecord& attempt, bool zero_rewards) {
  if (attempt.rewards.size() != kRewardLabels.size()) {
    throw StructuralError("game24 attempt needs " + std::to_string(kRewardLabels.size()) +
                          " rewards, got " + std::to_string(attempt.rewards.size()));
  }
  SolutionSegments seg = extract_segments(attempt.response_text);
  bool any = seg.answer.has_value();
  for (const auto& s : seg.steps) any = any || s.has_value();

  std::string out = "<attempt>\n";
  if (!attempt.header.empty()) out += attempt.header + "\n";
  out += "Response:\n";
  if (!any) {
    std::string raw = attempt.response_text;
    while (!raw.empty() && std::isspace(static_cast<unsigned char>(raw.back()))) raw.pop_back();
    out += "Unparsed: " + raw + "\n";
  }
  for (std::size_t i = 0; i < kRewardLabels.size(); ++i) {
    const auto& text = seg.at(i);
    double value = zero_rewards ? 0.0 : attempt.rewards[i].value;
    out += (text ? *text : missing_line(kRewardLabels[i])) + " <Reward: " + format_reward(value) +
           ">\n";
  }
  out += "</attempt>";
  return out;
}

Game24Task::Game24Task(Game24Problem problem, Policy& judge, JudgeSettings judge_settings)
    : problem_(std::move(problem)),
      judge_(judge),
      judge_settings_(judge_settings),
      task_text_(render_task_text(problem_)) {}

EpisodeOutcome Game24Task::run_episode(const std::string& prompt, Policy& policy,
                                       const EpisodeContext& ctx) {
  GenRequest request;
  request.user_text = prompt;
  request.temperature = ctx.generation.temperature;
  request.max_output_tokens = ctx.generation.max_output_tokens;
  request.seed = ctx.generation.seed;
  request.backend_id = policy.backend_id();
  request.tag = {ctx.problem_id, ctx.episode, CallRole::Policy};
  GenResponse response = policy.generate(request);

  EpisodeOutcome outcome = score_response(response.text, ctx);
  outcome.tokens_in += response.tokens_in;
  outcome.tokens_out += response.tokens_out;
  outcome.policy_calls += 1;
  if (response.finish_reason == FinishReason::Length) {
    outcome.diagnostics.push_back("policy response truncated at max_output_tokens");
  }
  return outcome;
}

EpisodeOutcome Game24Task::score_response(const std::string& response, const EpisodeContext& ctx) {
  EpisodeOutcome outcome;
  AttemptRecord& attempt = outcome.attempt;
  attempt.episode_index = ctx.episode;
  attempt.response_text = response;
  attempt.header = "Input: " + problem_.inputs_text() + ".";

  SolutionSegments seg = extract_segments(response);
  for (std::size_t i = 0; i < kRewardLabels.size(); ++i) {
    const std::string label(kRewardLabels[i]);
    double value = 0.0;
    const auto& text = seg.at(i);
    if (!text) {
      outcome.diagnostics.push_back("missing " + label + " line; reward 0");
    } else if (auto remaining = remaining_numbers(*text); remaining.empty()) {
      outcome.diagnostics.push_back("no remaining numbers in " + label + "; reward 0");
    } else {
      GenRequest request;
      request.user_text = render_step_judge_prompt(*text, remaining);
      request.temperature = judge_settings_.temperature;
      request.max_output_tokens = judge_settings_.max_output_tokens;
      request.backend_id = judge_.backend_id();
      request.tag = {ctx.problem_id, ctx.episode, CallRole::Judge};
      GenResponse reply = judge_.generate(request);
      outcome.tokens_in += reply.tokens_in;
      outcome.tokens_out += reply.tokens_out;
      outcome.judge_calls += 1;
      if (auto score = parse_judge_score(reply.text)) {
        value = *score;
      } else {
        outcome.diagnostics.push_back("unparseable judge score for " + label + "; reward 0");
      }
    }
    attempt.rewards.push_back({label, value});
  }
  attempt.total_reward = sum_rewards(attempt.rewards);

  try {
    Verdict verdict = verify_solution(parse_solution(response), problem_.rationals());
    outcome.ground_truth = verdict.success() ? 1.0 : 0.0;
    if (!verdict.success()) outcome.diagnostics.push_back("r*: " + verdict.to_string());
  } catch (const SolutionParseError& e) {
    outcome.ground_truth = 0.0;
    outcome.diagnostics.push_back(std::string("r*: unparseable solution: ") + e.what());
  }
  return outcome;
}

double Game24Task::selection_score(const EpisodeOutcome& outcome) const {
  return outcome.ground_truth.value_or(0.0);
}

bool Game24Task::evaluable(const EpisodeOutcome& outcome) const {
  try {
    parse_solution(outcome.attempt.response_text);
    return true;
  } catch (const SolutionParseError&) {
    return false;
  }
}

}  // namespace icrl::game24
