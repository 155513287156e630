#include <doctest.h>

#include "icrl/baselines/baselines.hpp"
#include "icrl/game24/task.hpp"
#include "icrl/policy/scripted.hpp"
#include "icrl/writing/writing.hpp"

using namespace icrl;
using namespace icrl::baselines;

namespace {

const char* kWrong =
    "Step1: 10 - 4 = 6 (left: 6 9 13)\nStep2: 13 - 6 = 7 (left: 7 9)\n"
    "Step3: 9 * 7 = 63 (left: 63)\n**Answer**: (13 - (10 - 4)) * 9 = 63";
const char* kRight =
    "Step1: 10 - 4 = 6 (left: 6 9 13)\nStep2: 13 - 9 = 4 (left: 4 6)\n"
    "Step3: 6 * 4 = 24 (left: 24)\n**Answer**: (10 - 4) * (13 - 9) = 24";

bool ends_with(const std::string& s, const std::string& tail) {
  return s.size() >= tail.size() && s.compare(s.size() - tail.size(), tail.size(), tail) == 0;
}

/// Routes auxiliary prompts by their closing template and records every call.
struct RecordingPolicy {
  std::vector<std::string> prompts;
  int reflections = 0;
  FunctionPolicy policy{[this](const GenRequest& r) -> std::string {
    prompts.push_back(r.user_text);
    if (ends_with(r.user_text, kReflexionReflect)) {
      return "Lesson " + std::to_string(++reflections) + ": check the   arithmetic.";
    }
    if (ends_with(r.user_text, kSelfRefineFeedback)) return "The answer is not 24.";
    return kWrong;
  }};
};

struct Game24Fixture {
  ScriptedPolicy judge;
  game24::Game24Task task;
  Game24Fixture() : task(game24::parse_problem_line("4 9 10 13", "p001"), judge) {
    judge.add_rule({{}, "**Answer**: 3"});
  }
};

}  // namespace

TEST_SUITE("baselines") {

TEST_CASE("select_best takes the earliest maximum") {
  CHECK(select_best({0, 1, 1}) == 1u);
  CHECK(select_best({2, 5, 5, 1}) == 1u);
  CHECK_FALSE(select_best({}));
}

TEST_CASE("best of n with [fail, pass, pass] selects trial 2") {
  Game24Fixture f;
  ScriptedPolicy policy;
  for (const char* r : {kWrong, kRight, kRight}) policy.add_step({r, {}});
  RunConfig config;
  BestOfNResult result = run_best_of_n(f.task, config, policy, 3);
  REQUIRE(result.logs.size() == 3);
  CHECK(result.selected == 2);
  CHECK(result.best_score == 1.0);
  CHECK_FALSE(result.no_valid_candidate);
  for (const auto& log : result.logs) CHECK(log.prompt == f.task.task_text());
}

TEST_CASE("best of n reports when nothing is evaluable") {
  Game24Fixture f;
  ScriptedPolicy policy;
  policy.add_rule({{}, "no idea"});
  BestOfNResult result = run_best_of_n(f.task, RunConfig{}, policy, 2);
  CHECK(result.no_valid_candidate);
  CHECK_FALSE(result.selected);
}

TEST_CASE("chain of thought is one call on the task text") {
  Game24Fixture f;
  RecordingPolicy rec;
  EpisodeLog log = run_cot(f.task, RunConfig{}, rec.policy, false);
  CHECK(log.method == "cot");
  CHECK(rec.prompts.size() == 1);
  CHECK(rec.prompts[0] == f.task.task_text());
  run_cot(f.task, RunConfig{}, rec.policy, true);
  CHECK(rec.prompts[1].find("<think>") != std::string::npos);
  CHECK(rec.prompts[1].rfind(f.task.task_text(), 0) == 0);
}

TEST_CASE("self-refine makes 1 + 2(K-1) policy calls and shows no rewards") {
  ScriptedPolicy judge;
  judge.add_rule({{}, "Coherency score: 5."});
  writing::WritingTask task({"w001", {"A.", "B.", "C.", "D."}}, writing::default_base_answer(),
                            judge);
  RecordingPolicy rec;
  RunConfig config;
  config.task_kind = TaskKind::Writing;
  config.episodes = 2;
  auto logs = run_self_refine(task, config, rec.policy);
  REQUIRE(logs.size() == 2);
  CHECK(rec.prompts.size() == 3);
  CHECK(ends_with(rec.prompts[1], kSelfRefineFeedback));
  CHECK(ends_with(rec.prompts[2], kSelfRefineRefine));
  CHECK(rec.prompts[2].find("Feedback:\nThe answer is not 24.") != std::string::npos);
  for (const auto& p : rec.prompts) CHECK(p.find("Reward") == std::string::npos);
  CHECK(logs[1].calls == 3);  // feedback, refine, judge
}

TEST_CASE("reflexion keeps the last three reflections and no prior responses") {
  Game24Fixture f;
  RecordingPolicy rec;
  RunConfig config;
  config.episodes = 5;
  config.reflection_window = 3;
  auto logs = run_reflexion(f.task, config, rec.policy);
  REQUIRE(logs.size() == 5);
  const std::string& last = logs[4].prompt;
  CHECK(count_occurrences(last, "<reflection>") == 3);
  CHECK(last.find("Lesson 1") == std::string::npos);
  CHECK(last.find("Lesson 4: check the arithmetic.") != std::string::npos);
  CHECK(last.find("Reward") == std::string::npos);
  CHECK(last.find("Step2: 13 - 6 = 7") == std::string::npos);
  CHECK(ends_with(last, f.task.task_text()));
  CHECK(rec.reflections == 4);
  CHECK(logs[0].prompt == f.task.task_text());
}

TEST_CASE("reflection sanitizing") {
  CHECK(sanitize_reflection("  a\n\n b\tc  ") == "a b c");
  std::string long_text(50, 'x');
  long_text += "\xC3\xA9";
  CHECK(sanitize_reflection(long_text, 51).size() == 50);
  ReflectionBuffer b(2);
  CHECK(b.render().empty());
  b.push("one");
  b.push("two");
  b.push("three");
  CHECK(b.recent() == std::vector<std::string>{"two", "three"});
  CHECK(count_occurrences(b.render(), "</reflection>") == 2);
}

TEST_CASE("run_method dispatch") {
  Game24Fixture f;
  RecordingPolicy rec;
  RunConfig config;
  config.episodes = 2;
  config.method = Method::Cot;
  CHECK(run_method(f.task, config, rec.policy).size() == 1);
  config.method = Method::Icrl;
  CHECK(run_method(f.task, config, rec.policy).size() == 2);
  config.method = Method::BestOfN;
  config.best_of_n = 3;
  CHECK(run_method(f.task, config, rec.policy).size() == 3);
}

}  // TEST_SUITE
