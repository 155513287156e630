#include "icrl/writing/writing.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <regex>
#include <sstream>
#include <stdexcept>

namespace icrl::writing {

namespace {

constexpr const char* kBaseAnswer =
    "At dawn, golden light slips past pale curtains, rousing the world in quiet celebration. A "
    "lone robin greets the morning with a clear, cheerful trill, its song drifting across "
    "dew-laden grass. A gentle breeze stirs the leaves, carrying the fresh, earthy scent of new "
    "growth. Nearby, rooftops and empty streets lie poised between night\xE2\x80\x99s calm and "
    "the city\xE2\x80\x99s stirring pulse, promising simple comforts like a warm cup of coffee. "
    "In this tranquil pause, one senses life\xE2\x80\x99s renewal and the gentle invitation to "
    "greet the day with hope and gratitude.";

std::string single_line(std::string_view s) {
  std::string out;
  bool space = false;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      space = !out.empty();
    } else {
      if (space) out += ' ';
      out += c;
      space = false;
    }
  }
  return out;
}

std::string replace_all(std::string s, std::string_view from, std::string_view to) {
  for (std::size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) {
    s.replace(pos, from.size(), to);
  }
  return s;
}

bool ends_with(std::string_view s, std::string_view tail) {
  return s.size() >= tail.size() && s.substr(s.size() - tail.size()) == tail;
}

std::vector<std::string> split_paragraphs(std::string_view passage) {
  std::vector<std::string> paragraphs;
  std::vector<std::string> lines;
  std::istringstream in{std::string(passage)};
  for (std::string line; std::getline(in, line);) lines.push_back(line);

  std::string current;
  for (const auto& line : lines) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      if (!current.empty()) paragraphs.push_back(current);
      current.clear();
    } else {
      if (!current.empty()) current += ' ';
      current += line;
    }
  }
  if (!current.empty()) paragraphs.push_back(current);

  // No blank lines: fall back to one paragraph per line.
  if (paragraphs.size() == 1) {
    std::vector<std::string> by_line;
    for (const auto& line : lines) {
      if (line.find_first_not_of(" \t\r") != std::string::npos) by_line.push_back(line);
    }
    if (by_line.size() > 1) return by_line;
  }
  return paragraphs;
}

}  // namespace

std::vector<WritingProblem> load_problems(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open problem file " + path);
  std::vector<WritingProblem> out;
  int line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      auto j = nlohmann::json::parse(line);
      WritingProblem p;
      char id[16];
      std::snprintf(id, sizeof id, "w%03zu", out.size() + 1);
      p.problem_id = j.value("id", std::string(id));
      p.end_sentences = j.at("sentences").get<std::vector<std::string>>();
      if (p.end_sentences.size() != 4) throw std::runtime_error("expected 4 sentences");
      out.push_back(std::move(p));
    } catch (const std::exception& e) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::string default_base_answer() { return kBaseAnswer; }

std::string load_base_answer(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open base answer " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  std::string text = ss.str();
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.pop_back();
  if (text.empty()) throw std::runtime_error("base answer " + path + " is empty");
  return text;
}

std::string render_writing_task(const WritingProblem& problem) {
  if (problem.end_sentences.size() != 4) {
    throw std::invalid_argument("writing problem needs exactly 4 end sentences");
  }
  std::string out =
      "Prompt: Write a coherent passage of 4 short paragraphs. The end sentence of each "
      "paragraph must be:";
  for (const auto& s : problem.end_sentences) {
    std::string line = single_line(s);
    if (line.empty()) throw std::invalid_argument("writing problem has an empty end sentence");
    out += ' ' + line;
  }
  out +=
      " Make a plan then write. Your output should be of the following format: Plan: Your plan "
      "here. Passage: Your passage here.";
  return out;
}

bool ConstraintReport::all_ok() const {
  return has_plan_and_passage && paragraph_count_ok &&
         std::all_of(ends_with_sentence.begin(), ends_with_sentence.end(), [](bool b) { return b; });
}

std::string normalize_sentence(std::string_view text) {
  std::string s(text);
  s = replace_all(s, "\xE2\x80\x99", "'");  // ’
  s = replace_all(s, "\xE2\x80\x98", "'");  // ‘
  s = replace_all(s, "\xE2\x80\x9C", "\""); // “
  s = replace_all(s, "\xE2\x80\x9D", "\""); // ”
  s = single_line(s);
  while (!s.empty() && (s.back() == '"' || s.back() == '\'' || s.back() == '*' ||
                        std::isspace(static_cast<unsigned char>(s.back())))) {
    s.pop_back();
  }
  return s;
}

ConstraintReport check_constraints(std::string_view response, const WritingProblem& problem) {
  ConstraintReport report;
  const std::string text(response);
  auto plan = text.find("Plan:");
  auto passage = text.find("Passage:");
  report.has_plan_and_passage =
      plan != std::string::npos && passage != std::string::npos && plan < passage;

  std::string_view body = passage != std::string::npos
                              ? std::string_view(text).substr(passage + std::string("Passage:").size())
                              : std::string_view(text);
  auto paragraphs = split_paragraphs(body);
  report.paragraph_count = paragraphs.size();
  report.paragraph_count_ok = paragraphs.size() == 4;
  for (std::size_t i = 0; i < 4 && i < paragraphs.size() && i < problem.end_sentences.size(); ++i) {
    report.ends_with_sentence[i] =
        ends_with(normalize_sentence(paragraphs[i]), normalize_sentence(problem.end_sentences[i]));
  }
  return report;
}

std::string render_coherence_prompt(std::string_view candidate, std::string_view base_answer) {
  if (candidate.empty()) throw std::invalid_argument("coherence judge needs a nonempty candidate");
  std::string out =
      "Instruction: You are a seasoned text coherence evaluator. Read the TEXT below and rate its "
      "overall coherence on a scale from 1 to 10, where 1 means significantly less coherent than "
      "the Base Answer, 5 means equally coherent, and 10 means significantly more coherent. Be a "
      "strict and conservative evaluator-only assign high scores when the TEXT is clearly better "
      "than the Base Answer.\n\n";
  out += "Base Answer:\n";
  out += base_answer;
  out += "\n\nTEXT: ";
  out += candidate;
  out += "\n\nReturn your answer in exactly this format: Coherency score: <integer 1\xE2\x80\x93" "10>.\n";
  out += "Response:";
  return out;
}

std::optional<int> parse_coherence_score(std::string_view reply) {
  static const std::regex kScore(R"(Coherency score:\s*\**\s*(\d+))", std::regex::icase);
  const std::string text(reply);
  std::optional<std::string> last;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), kScore);
       it != std::sregex_iterator(); ++it) {
    last = (*it)[1].str();
  }
  if (!last || last->size() > 2) return std::nullopt;
  int score = std::stoi(*last);
  if (score < 1 || score > 10) return std::nullopt;
  return score;
}

std::string render_attempt_block(const AttemptRecord& attempt, bool zero_rewards) {
  if (attempt.rewards.size() != 1) {
    throw StructuralError("writing attempt needs 1 reward, got " +
                          std::to_string(attempt.rewards.size()));
  }
  std::string response = attempt.response_text;
  while (!response.empty() && std::isspace(static_cast<unsigned char>(response.back()))) {
    response.pop_back();
  }
  double value = zero_rewards ? 0.0 : attempt.rewards.front().value;
  return "<attempt>\nResponse:\n" + response + "\nReward: " + format_reward(value) + "\n</attempt>";
}

WritingTask::WritingTask(WritingProblem problem, std::string base_answer, Policy& judge,
                         JudgeSettings judge_settings)
    : problem_(std::move(problem)),
      base_answer_(std::move(base_answer)),
      judge_(judge),
      judge_settings_(judge_settings),
      task_text_(render_writing_task(problem_)) {}

EpisodeOutcome WritingTask::run_episode(const std::string& prompt, Policy& policy,
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
  return outcome;
}

EpisodeOutcome WritingTask::score_response(const std::string& response, const EpisodeContext& ctx) {
  EpisodeOutcome outcome;
  outcome.attempt.episode_index = ctx.episode;
  outcome.attempt.response_text = response;

  double value = 0.0;
  if (response.find_first_not_of(" \t\r\n") == std::string::npos) {
    outcome.diagnostics.push_back("empty response; reward 0");
  } else {
    GenRequest request;
    request.user_text = render_coherence_prompt(response, base_answer_);
    request.temperature = judge_settings_.temperature;
    request.max_output_tokens = judge_settings_.max_output_tokens;
    request.backend_id = judge_.backend_id();
    request.tag = {ctx.problem_id, ctx.episode, CallRole::Judge};
    GenResponse reply = judge_.generate(request);
    outcome.tokens_in += reply.tokens_in;
    outcome.tokens_out += reply.tokens_out;
    outcome.judge_calls += 1;
    if (auto score = parse_coherence_score(reply.text)) {
      value = *score;
    } else {
      outcome.diagnostics.push_back("unparseable coherence score; reward 0");
    }
  }
  outcome.attempt.rewards.push_back({"Coherence", value});
  outcome.attempt.total_reward = value;

  ConstraintReport report = check_constraints(response, problem_);
  if (!report.all_ok()) {
    outcome.diagnostics.push_back("format: plan/passage=" +
                                  std::to_string(report.has_plan_and_passage) +
                                  " paragraphs=" + std::to_string(report.paragraph_count));
  }
  return outcome;
}

double WritingTask::selection_score(const EpisodeOutcome& outcome) const {
  return outcome.attempt.total_reward;
}

nlohmann::json export_pairwise_records(const std::vector<ExportRecord>& records) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : records) {
    out.push_back({{"instruction", r.instruction},
                   {"output", r.output},
                   {"generator", r.generator},
                   {"dataset", r.problem_id}});
  }
  return out;
}

}  // namespace icrl::writing
