#include <doctest.h>

#include <sstream>

#include "icrl/core/prompt.hpp"
#include "icrl/policy/scripted.hpp"
#include "icrl/textworld/adapter.hpp"
#include "icrl/textworld/render.hpp"
#include "icrl/textworld/sim.hpp"
#include "icrl/textworld/task.hpp"
#include "icrl/textworld/world.hpp"
#include "support.hpp"

using namespace icrl;
using namespace icrl::textworld;
using test_support::data_path;

namespace {

WorldSpec boil_water() { return load_world(data_path("worlds/boil-water.json")); }

nlohmann::json boil_water_json() {
  return nlohmann::json::parse(test_support::read_file(data_path("worlds/boil-water.json")));
}

std::vector<std::string> lines_of(const std::string& path) {
  std::istringstream in(test_support::read_file(path));
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

}  // namespace

TEST_SUITE("textworld") {

TEST_CASE("shipped worlds load") {
  for (const char* name : {"boil-water", "find-highest-friction", "grow-plant"}) {
    WorldSpec spec = load_world(data_path(std::string("worlds/") + name + ".json"));
    CHECK(spec.name == name);
    int sum = 0;
    for (const auto& g : spec.subgoals) sum += g.reward;
    CHECK(sum == 100);
    CHECK(spec.focus_budget == count_focus_mentions(spec.task_description));
  }
}

TEST_CASE("load errors name the field") {
  auto j = boil_water_json();
  j["subgoals"][0]["reward"] = 2;
  CHECK_THROWS_WITH_AS(world_from_json(j), doctest::Contains("sum to 99"), WorldLoadError);

  j = boil_water_json();
  j["adjacency"]["kitchen"].push_back("attic");
  CHECK_THROWS_WITH_AS(world_from_json(j), doctest::Contains("adjacency.kitchen"), WorldLoadError);

  j = boil_water_json();
  j["objects"][0]["location"] = "nowhere";
  CHECK_THROWS_AS(world_from_json(j), WorldLoadError);

  j = boil_water_json();
  j["focus_budget"] = 2;
  CHECK_THROWS_WITH_AS(world_from_json(j), doctest::Contains("focus_budget"), WorldLoadError);

  j = boil_water_json();
  j["rooms"][0] = "Kitchen";
  CHECK_THROWS_AS(world_from_json(j), WorldLoadError);

  CHECK_THROWS_AS(load_world(data_path("worlds/missing.json")), WorldLoadError);
}

TEST_CASE("action parsing") {
  WorldSpec spec = boil_water();
  auto kind = [&](const std::string& text) { return parse_action(text, spec).kind; };
  using K = ParseResult::Kind;
  CHECK(kind("dunk cup into sink") == K::NoMatch);
  CHECK(kind("use cup on substance in toilet") == K::Unsupported);
  CHECK(kind("Teleport to the Kitchen.") == K::Matched);
  CHECK(kind("teleport to attic") == K::Unsupported);
  CHECK(kind("move cup to table") == K::Matched);
  CHECK(kind("use thermometer on water") == K::Matched);

  ParseResult focus = parse_action("focus on substance in toilet", spec);
  REQUIRE(focus.kind == K::Matched);
  CHECK(focus.action.verb == ActionVerb::Focus);
  CHECK(focus.action.args == std::vector<std::string>{"water"});
  CHECK(action_templates().size() == 15);
}

TEST_CASE("figure observations") {
  WorldSpec spec = boil_water();
  Simulator sim(spec);
  CHECK(sim.step("teleport to bathroom").observation == "You teleport to the bathroom.");
  CHECK(sim.step("use cup on substance in toilet").observation == kNotSure);
  CHECK(sim.step("dunk cup into sink").observation == kNoMatch);
  CHECK(sim.step("activate sink").observation == "The sink is now activated.");
  CHECK(sim.step("move cup to sink").observation == "You move the glass cup to the sink.");
  CHECK(sim.step("examine cup").observation == "a glass cup (containing nothing)");
}

TEST_CASE("optimal trajectories succeed with 100") {
  for (const char* name : {"boil-water", "find-highest-friction", "grow-plant"}) {
    WorldSpec spec = load_world(data_path(std::string("worlds/") + name + ".json"));
    Simulator sim(spec);
    ActionOutcome last;
    for (const auto& action : lines_of(data_path(std::string("worlds/") + name + ".optimal.txt"))) {
      last = sim.step(action);
    }
    CHECK(last.terminated);
    CHECK(sim.state().status == Status::Success);
    CHECK(sim.state().total_reward == 100);
    CHECK(sim.terminal_line() == "Task Completed.");
    CHECK_THROWS_AS(sim.step("wait"), std::logic_error);
  }
}

TEST_CASE("focus misuse terminates and freezes the reward") {
  Simulator sim(boil_water());
  CHECK(sim.step("teleport to bathroom").reward == 3);
  ActionOutcome o = sim.step("focus on sink");
  CHECK(o.terminated);
  CHECK(o.reward == 0);
  CHECK(sim.state().status == Status::FailFocus);
  CHECK(sim.state().total_reward == 3);
  CHECK(sim.terminal_line().rfind("Task Failed.", 0) == 0);

  Simulator twice(boil_water());
  twice.step("teleport to bathroom");
  CHECK(twice.step("focus on water").reward == 66);
  CHECK(twice.step("focus on water").terminated);
  CHECK(twice.state().status == Status::FailFocus);
  CHECK(twice.state().total_reward == 69);
}

TEST_CASE("exceeding max steps gives the failure line") {
  WorldSpec spec = boil_water();
  Simulator sim(spec);
  for (int i = 0; i < spec.max_steps - 1; ++i) CHECK_FALSE(sim.step("look around").terminated);
  CHECK(sim.step("look around").terminated);
  CHECK(sim.state().status == Status::FailSteps);
  CHECK(sim.terminal_line() == "Task Failed. You have exceeded the maximum number of steps.");
}

TEST_CASE("figure trajectory renders with its rewards") {
  std::vector<Transition> t = {
      {"teleport to bathroom", "You teleport to the bathroom.", 3},
      {"focus on substance in toilet", "You focus on the water.", 66},
      {"use cup on substance in toilet", "I'm not sure how to do that.", 0},
      {"activate stove", "The stove is now activated.", 2},
      {"examine cup", "a glass cup (containing nothing)", 0},
  };
  AttemptRecord a;
  a.episode_index = 2;
  a.transitions = t;
  a.rewards = trajectory_rewards(t);
  a.total_reward = 71;
  a.outcome_note = "Task Failed. You have exceeded the maximum number of steps.";
  CHECK(a.rewards.size() == 4);
  std::string text = render_trajectory(a, false);
  CHECK(text.rfind("Attempt 2:\nteleport to bathroom -> Observation: You teleport to the "
                   "bathroom. (reward=3)\n-> focus on substance in toilet",
                   0) == 0);
  const std::string tail =
      "\nTask Failed. You have exceeded the maximum number of steps. (reward=0) Total reward: 71";
  CHECK(text.substr(text.size() - tail.size()) == tail);
  std::string zeroed = render_trajectory(a, true);
  CHECK(zeroed.find("(reward=3)") == std::string::npos);
  CHECK(zeroed.find("Total reward: 0") != std::string::npos);

  a.rewards.pop_back();
  CHECK_THROWS_AS(render_trajectory(a, false), StructuralError);
  a.rewards = trajectory_rewards(t);
  a.outcome_note.reset();
  CHECK_THROWS_AS(render_trajectory(a, false), StructuralError);
}

TEST_CASE("action extraction from replies") {
  CHECK(extract_action("teleport to kitchen") == "teleport to kitchen");
  CHECK(extract_action("Next action: `activate stove`.") == "activate stove");
  CHECK(extract_action("\n\n-> wait -> Observation: ...") == "wait");
  CHECK(extract_action("<think>hmm</think>\nAction: focus on water") == "focus on water");
}

TEST_CASE("task text lists rooms, actions and the focus warning") {
  WorldSpec spec = boil_water();
  std::string s = render_task_text(spec);
  CHECK(s.find("<Environment description>") != std::string::npos);
  CHECK(s.find("teleport to <room>") != std::string::npos);
  CHECK(s.find("FOCUS is a extremely critical action") != std::string::npos);
  CHECK(s.find(spec.task_description) != std::string::npos);
}

TEST_CASE("episode driven by the optimal script") {
  TextworldTask task(boil_water());
  ScriptedPolicy policy = ScriptedPolicy::from_file(data_path("scripts/boil_water_optimal.json"));
  std::string prompt = assemble_prompt({}, task.task_text(), InstructionKind::None,
                                       default_layout(TaskKind::Textworld), false,
                                       TaskKind::Textworld)
                           .user_text;
  EpisodeOutcome o = task.run_episode(prompt, policy, {"boil-water", 1, {}});
  CHECK(o.policy_calls == 8);
  CHECK(o.attempt.total_reward == 100);
  CHECK(o.ground_truth == 100);
  CHECK(o.attempt.outcome_note == "Task Completed.");
  CHECK(o.attempt.transitions.size() == 8);
  CHECK(o.attempt.response_text.find("(reward=") == std::string::npos);
}

TEST_CASE("stdio adapter against the CLI simulator") {
  std::string cmd = std::string(ICRL_CLI_PATH) + " sim --json -w '" +
                    data_path("worlds/boil-water.json") + "'";
  auto native = std::make_unique<MiniLabEnvironment>(boil_water());
  StdioEnvironment remote(cmd);
  for (const auto& action : lines_of(data_path("worlds/boil-water.optimal.txt"))) {
    EnvStep a = native->step(action);
    EnvStep b = remote.step(action);
    CHECK(a.observation == b.observation);
    CHECK(a.reward == b.reward);
    CHECK(a.done == b.done);
    CHECK(a.total == b.total);
  }
  CHECK(remote.terminal_line() == "Task Completed.");

  TextworldTask task(boil_water(), [cmd] { return std::make_unique<StdioEnvironment>(cmd); });
  ScriptedPolicy policy = ScriptedPolicy::from_file(data_path("scripts/boil_water_optimal.json"));
  EpisodeOutcome o = task.run_episode(task.task_text(), policy, {"boil-water", 1, {}});
  CHECK(o.attempt.total_reward == 100);
}

TEST_CASE("stdio protocol round trip") {
  std::istringstream in("{\"action\": \"teleport to bathroom\"}\n{\"action\": \"focus on sink\"}\n");
  std::ostringstream out;
  serve_stdio(boil_water(), in, out);
  std::istringstream replies(out.str());
  std::string line;
  REQUIRE(std::getline(replies, line));
  EnvStep first = env_step_from_json(nlohmann::json::parse(line));
  CHECK(first.reward == 3);
  CHECK_FALSE(first.done);
  REQUIRE(std::getline(replies, line));
  EnvStep second = env_step_from_json(nlohmann::json::parse(line));
  CHECK(second.done);
  CHECK(second.status == "fail_focus");
  CHECK(second.total == 3);
}

}  // TEST_SUITE
