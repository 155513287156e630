// Acceptance suite: one PASS/FAIL/SKIP line per criterion.
//   acceptance          run every criterion
//   acceptance 3 6      run the listed ones
// Exit status: 0 all selected passed, 1 any failed, 77 nothing failed but
// something was skipped.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <regex>
#include <set>
#include <sstream>

#include <unistd.h>

#include "icrl/baselines/baselines.hpp"
#include "icrl/cli/app.hpp"
#include "icrl/cli/config_io.hpp"
#include "icrl/core/loop.hpp"
#include "icrl/game24/oracle.hpp"
#include "icrl/game24/task.hpp"
#include "icrl/game24/verify.hpp"
#include "icrl/metrics/metrics.hpp"
#include "icrl/policy/scripted.hpp"
#include "icrl/textworld/sim.hpp"
#include "icrl/textworld/world.hpp"
#include "icrl/writing/writing.hpp"

using namespace icrl;
using game24::Rational;

namespace {

enum class Status { Pass, Fail, Skip };

struct Result {
  Status status = Status::Fail;
  std::string detail;
};

Result pass(std::string detail) { return {Status::Pass, std::move(detail)}; }
Result fail(std::string detail) { return {Status::Fail, std::move(detail)}; }
Result skip(std::string detail) { return {Status::Skip, std::move(detail)}; }

std::string data_path(const std::string& relative) {
  return std::string(ICRL_SOURCE_DIR) + "/data/" + relative;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::vector<std::string> nonempty_lines(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

std::vector<Rational> rats(std::initializer_list<int> xs) {
  std::vector<Rational> out;
  for (int x : xs) out.emplace_back(x);
  return out;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

// ---------------------------------------------------------------------------
// 1. verifier agrees with the oracle

/// Re-checks a solution text line by line with exact arithmetic, without the
/// verifier: every step uses numbers still in the pool, states the exact
/// result and the exact remaining multiset, and the answer expression uses
/// exactly the inputs and evaluates to 24.
bool independently_valid(const std::string& text, const std::vector<Rational>& inputs) {
  static const std::regex kStep(
      R"(^Step([123]): (\S+) ([-+*/]) (\S+) = (\S+) \(left: ([^)]*)\)\s*$)");
  static const std::regex kAnswer(R"(^(?:\*\*Answer\*\*|Answer): (.*) = (\S+)\s*$)");
  std::vector<Rational> pool = inputs;
  int steps = 0;
  std::optional<std::string> answer;
  for (const auto& line : nonempty_lines(text)) {
    std::smatch m;
    if (std::regex_match(line, m, kStep)) {
      if (std::stoi(m[1]) != steps + 1) return false;
      Rational lhs, rhs, stated;
      if (!game24::parse_rational(m[2].str(), lhs) || !game24::parse_rational(m[4].str(), rhs) ||
          !game24::parse_rational(m[5].str(), stated)) {
        return false;
      }
      for (const Rational& used : {lhs, rhs}) {
        auto it = std::find(pool.begin(), pool.end(), used);
        if (it == pool.end()) return false;
        pool.erase(it);
      }
      Rational exact;
      try {
        exact = game24::apply(static_cast<game24::Op>(m[3].str()[0]), lhs, rhs);
      } catch (const game24::DivisionByZero&) {
        return false;
      }
      if (exact != stated) return false;
      pool.push_back(exact);
      std::vector<Rational> left;
      std::istringstream in(m[6].str());
      for (std::string tok; in >> tok;) {
        Rational r;
        if (!game24::parse_rational(tok, r)) return false;
        left.push_back(r);
      }
      if (!game24::same_multiset(left, pool)) return false;
      ++steps;
    } else if (std::regex_match(line, m, kAnswer)) {
      answer = m[1].str();
    }
  }
  if (steps != 3 || !answer || pool.size() != 1 || pool[0] != Rational(24)) return false;
  try {
    game24::Expr e = game24::parse_expression(*answer);
    return e.evaluate() == Rational(24) && game24::same_multiset(e.leaves(), inputs);
  } catch (const std::exception&) {
    return false;
  }
}

/// One random edit of a solution: an operator or an operand in a step or in
/// the answer line, or a step's stated result.
std::string mutate(const std::string& text, std::mt19937& rng) {
  std::vector<std::string> lines = nonempty_lines(text);
  std::uniform_int_distribution<int> pick_line(0, static_cast<int>(lines.size()) - 1);
  std::uniform_int_distribution<int> pick_num(1, 13);
  static const char kOps[] = {'+', '-', '*', '/'};
  for (int tries = 0; tries < 100; ++tries) {
    std::size_t li = static_cast<std::size_t>(pick_line(rng));
    std::string line = lines[li];
    // candidate edit positions: operators surrounded by spaces, and numbers
    std::vector<std::pair<std::size_t, std::size_t>> ops, nums;
    std::size_t body = line.find(':') + 1;
    std::size_t stop = line.find(" (left:");
    if (stop == std::string::npos) stop = line.rfind(" = ");
    for (std::size_t i = body; i + 1 < line.size() && i < stop; ++i) {
      if (line[i] == ' ' && std::string("+-*/").find(line[i + 1]) != std::string::npos &&
          i + 2 < line.size() && line[i + 2] == ' ') {
        ops.push_back({i + 1, 1});
      }
    }
    std::regex number(R"(\d+(/\d+)?)");
    const std::string head = line.substr(0, stop == std::string::npos ? line.size() : stop);
    for (auto it = std::sregex_iterator(head.begin() + static_cast<long>(body), head.end(), number);
         it != std::sregex_iterator(); ++it) {
      nums.push_back({body + static_cast<std::size_t>(it->position()),
                      static_cast<std::size_t>(it->length())});
    }
    bool edit_op = !ops.empty() && (nums.empty() || rng() % 2 == 0);
    if (edit_op) {
      auto [pos, len] = ops[rng() % ops.size()];
      char replacement = kOps[rng() % 4];
      if (replacement == line[pos]) continue;
      line[pos] = replacement;
    } else if (!nums.empty()) {
      auto [pos, len] = nums[rng() % nums.size()];
      std::string replacement = std::to_string(pick_num(rng));
      if (replacement == line.substr(pos, len)) continue;
      line.replace(pos, len, replacement);
    } else {
      continue;
    }
    lines[li] = line;
    return join(lines, "\n") + "\n";
  }
  return text;
}

Result criterion_1() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937 rng(24);
  std::uniform_int_distribution<int> card(1, 13);
  int solvable = 0, valid = 0, exceptions = 0;
  std::vector<std::pair<std::string, std::vector<Rational>>> solutions;
  for (int i = 0; i < 1000; ++i) {
    std::vector<Rational> in;
    for (int j = 0; j < 4; ++j) in.emplace_back(card(rng));
    try {
      auto r = game24::solvable_oracle(in);
      if (!r.solvable) continue;
      ++solvable;
      std::string text = game24::solution_text_from_expression(*r.witness, in);
      auto verdict = game24::verify_text(text, in);
      if (verdict && verdict->success()) {
        ++valid;
        solutions.push_back({text, in});
      }
    } catch (const std::exception&) {
      ++exceptions;
    }
  }

  std::mt19937 mrng(2024);
  int mutants = 0, still_valid = 0, false_valid = 0, unparseable = 0;
  while (mutants < 200 && !solutions.empty()) {
    const auto& [text, in] = solutions[mrng() % solutions.size()];
    std::string mutant = mutate(text, mrng);
    if (mutant == text) continue;
    ++mutants;
    try {
      auto verdict = game24::verify_text(mutant, in);
      if (!verdict) {
        ++unparseable;
      } else if (verdict->success()) {
        if (independently_valid(mutant, in)) {
          ++still_valid;
        } else {
          ++false_valid;
        }
      }
    } catch (const std::exception&) {
      ++exceptions;
    }
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::ostringstream d;
  d << solvable << " solvable of 1000 tuples, " << valid << " witnesses verified valid24; "
    << mutants << " mutants, " << false_valid << " false valid24 (" << still_valid
    << " still correct after exact re-check, " << unparseable << " unparseable); " << exceptions
    << " exceptions; " << std::fixed << std::setprecision(1) << seconds << " s";
  bool ok = solvable > 0 && valid == solvable && exceptions == 0 && mutants == 200 &&
            false_valid == 0 && seconds < 60.0;
  return ok ? pass(d.str()) : fail(d.str());
}

// ---------------------------------------------------------------------------
// 2. oracle spot checks

int count_divisions(const game24::Expr& e) {
  if (e.is_leaf()) return 0;
  return (e.op() == game24::Op::Div ? 1 : 0) + count_divisions(e.lhs()) + count_divisions(e.rhs());
}

Result criterion_2() {
  std::vector<std::string> problems;
  if (game24::solvable_oracle(rats({1, 1, 1, 1})).solvable) problems.push_back("{1,1,1,1} solvable");
  if (!game24::solvable_oracle(rats({1, 8, 10, 11})).solvable) {
    problems.push_back("{1,8,10,11} unsolvable");
  }
  auto r = game24::solvable_oracle(rats({3, 3, 8, 8}));
  std::string witness;
  if (!r.solvable) {
    problems.push_back("{3,3,8,8} unsolvable");
  } else {
    witness = r.witness->to_string();
    if (r.witness->evaluate() != Rational(24)) problems.push_back("witness is not 24");
    if (count_divisions(*r.witness) < 2) problems.push_back("witness has no division chain");
    auto v = game24::verify_text(game24::solution_text_from_expression(*r.witness, rats({3, 3, 8, 8})),
                                 rats({3, 3, 8, 8}));
    if (!v || !v->success()) problems.push_back("witness solution does not verify");
  }
  if (!problems.empty()) return fail(join(problems, "; "));
  return pass("{1,1,1,1} unsolvable, {1,8,10,11} solvable, {3,3,8,8} witness " + witness);
}

// ---------------------------------------------------------------------------
// 3. golden prompts

Result criterion_3() {
  RunConfig config = cli::parse_config(data_path("configs/game24_scripted.json"), {"episodes=3"});
  auto logs = cli::run_experiment(config, {true, "", ""});
  if (logs.size() != 3) return fail("expected 3 episodes, got " + std::to_string(logs.size()));
  std::vector<std::string> problems;
  for (int k = 1; k <= 3; ++k) {
    const std::string golden_path = std::string(ICRL_SOURCE_DIR) + "/tests/golden/game24_p001_episode" +
                                    std::to_string(k) + ".txt";
    const std::string golden = read_file(golden_path);
    const std::string& actual = logs[static_cast<std::size_t>(k - 1)].prompt;
    if (golden != actual) {
      problems.push_back("episode " + std::to_string(k) + ": " + character_diff(golden, actual));
      continue;
    }
    // structure: buffer before instruction before task, two-decimal tags
    const auto task_at = actual.find("**Task**:");
    const auto instr_at = actual.find("Instruction:");
    const auto buffer_at = actual.find("<attempt>\nInput: 4 9 10 13.\nResponse:");
    if (k > 1 && !(buffer_at < instr_at && instr_at < task_at)) {
      problems.push_back("episode " + std::to_string(k) + ": segment order");
    }
    const int tags = count_blocks(actual, "<Reward: ", ">", R"(^\d+\.\d\d$)");
    if (tags != 4 * (k - 1) || count_occurrences(actual, "<Reward: ") != tags) {
      problems.push_back("episode " + std::to_string(k) + ": reward tags");
    }
  }
  if (!problems.empty()) return fail(join(problems, "; "));
  return pass("3 episode prompts byte-match tests/golden");
}

// ---------------------------------------------------------------------------
// 4. schedule law

std::vector<InstructionKind> run_schedule(Schedule schedule) {
  RunConfig config = cli::parse_config(data_path("configs/game24_scripted.json"), {"episodes=10"});
  config.schedule = schedule;
  std::vector<InstructionKind> kinds;
  for (const auto& log : cli::run_experiment(config, {true, "", ""})) {
    kinds.push_back(log.instruction_kind);
    std::string_view text = instruction_text(log.instruction_kind);
    if (log.instruction_kind == InstructionKind::None) {
      if (log.prompt.find("Instruction:") != std::string::npos) kinds.back() = InstructionKind::Autonomous;
    } else if (log.prompt.find(text) == std::string::npos) {
      kinds.back() = InstructionKind::Autonomous;  // logged kind not in the prompt
    }
  }
  return kinds;
}

std::string kinds_text(const std::vector<InstructionKind>& kinds) {
  std::vector<std::string> parts;
  for (auto k : kinds) parts.push_back(to_string(k));
  return join(parts, ",");
}

Result criterion_4() {
  using IK = InstructionKind;
  std::vector<IK> preset = {IK::None};
  for (int k = 2; k <= 10; ++k) preset.push_back(k % 2 == 0 ? IK::Exploration : IK::Exploitation);
  auto constant = [](IK kind) {
    std::vector<IK> v(10, kind);
    v[0] = IK::None;
    return v;
  };
  const std::vector<std::pair<Schedule, std::vector<IK>>> expected = {
      {Schedule::Preset, preset},
      {Schedule::ExplorationOnly, constant(IK::Exploration)},
      {Schedule::ExploitationOnly, constant(IK::Exploitation)},
      {Schedule::NoEE, std::vector<IK>(10, IK::None)},
  };
  std::vector<std::string> problems;
  for (const auto& [schedule, want] : expected) {
    auto got = run_schedule(schedule);
    if (got != want) {
      problems.push_back(std::string(to_string(schedule)) + " gave " + kinds_text(got));
    }
  }
  if (!problems.empty()) return fail(join(problems, "; "));
  return pass("preset " + kinds_text(preset) + "; constant sequences for the other three");
}

// ---------------------------------------------------------------------------
// 5. ablation effects on prompts

const RunConfig& variant(const std::vector<std::pair<std::string, RunConfig>>& variants,
                         const std::string& name) {
  for (const auto& [n, c] : variants) {
    if (n == name) return c;
  }
  throw std::runtime_error("no ablation variant " + name);
}

Result criterion_5() {
  std::vector<std::string> problems;
  RunConfig base = cli::parse_config(data_path("configs/game24_scripted.json"), {"episodes=10"});
  auto variants = cli::ablation_variants(base);

  auto shorter = cli::run_experiment(variant(variants, "short_context"), {true, "", ""});
  const int blocks = count_blocks(shorter.at(9).prompt, "<attempt>", "</attempt>", "<Reward: ");
  if (blocks != 3) problems.push_back("short_context: " + std::to_string(blocks) + " attempt blocks");

  static const std::regex kGameTag(R"(<Reward: (\d+\.\d\d)>)");
  int tags = 0;
  for (const auto& log : cli::run_experiment(variant(variants, "zero_rewards"), {true, "", ""})) {
    for (auto it = std::sregex_iterator(log.prompt.begin(), log.prompt.end(), kGameTag);
         it != std::sregex_iterator(); ++it) {
      ++tags;
      if ((*it)[1] != "0.00") problems.push_back("zero_rewards: rendered " + (*it)[0].str());
    }
  }
  if (tags == 0) problems.push_back("zero_rewards: no reward tags rendered at all");

  // the same ablation on a text-world run, whose rewards are bare integers
  RunConfig world = cli::parse_config(data_path("configs/minilab_scripted.json"), {"episodes=3"});
  world.zero_rewards = true;
  static const std::regex kWorldTag(R"((reward=|Total reward: )(-?\d+))");
  for (const auto& log : cli::run_experiment(world, {true, "", ""})) {
    for (auto it = std::sregex_iterator(log.prompt.begin(), log.prompt.end(), kWorldTag);
         it != std::sregex_iterator(); ++it) {
      if ((*it)[2] != "0") problems.push_back("zero_rewards (textworld): rendered " + (*it)[0].str());
    }
  }

  for (const auto& log : cli::run_experiment(variant(variants, "no_ee"), {true, "", ""})) {
    for (auto kind : {InstructionKind::Exploration, InstructionKind::Exploitation,
                      InstructionKind::Autonomous}) {
      if (log.prompt.find(instruction_text(kind)) != std::string::npos ||
          log.prompt.find("Instruction:") != std::string::npos) {
        problems.push_back("no_ee: instruction in episode " + std::to_string(log.episode));
        break;
      }
    }
  }
  if (!problems.empty()) return fail(join(problems, "; "));
  return pass("short_context episode 10 shows 3 attempts; zero_rewards renders only zeros (" +
              std::to_string(tags) + " game24 tags checked, text-world too); no_ee has no instruction");
}

// ---------------------------------------------------------------------------
// 6. MiniLab

std::string replay(const textworld::WorldSpec& spec, const std::vector<std::string>& actions,
                   textworld::Simulator*& out_sim, std::unique_ptr<textworld::Simulator>& holder) {
  holder = std::make_unique<textworld::Simulator>(spec);
  out_sim = holder.get();
  std::string stream;
  for (const auto& a : actions) {
    if (holder->state().status != textworld::Status::Running) break;
    auto o = holder->step(a);
    stream += a + " -> " + o.observation + " (reward=" + std::to_string(o.reward) + ")\n";
  }
  stream += holder->terminal_line() + " Total reward: " + std::to_string(holder->state().total_reward);
  return stream;
}

Result criterion_6() {
  std::vector<std::string> problems;
  for (const char* name : {"boil-water", "find-highest-friction", "grow-plant"}) {
    auto spec = textworld::load_world(data_path(std::string("worlds/") + name + ".json"));
    auto actions = nonempty_lines(read_file(data_path(std::string("worlds/") + name + ".optimal.txt")));
    textworld::Simulator* sim = nullptr;
    std::unique_ptr<textworld::Simulator> a, b;
    std::string first = replay(spec, actions, sim, a);
    if (sim->state().status != textworld::Status::Success || sim->state().total_reward != 100) {
      problems.push_back(std::string(name) + ": " + first.substr(first.rfind('\n') + 1));
    }
    std::string second = replay(spec, actions, sim, b);
    if (first != second) problems.push_back(std::string(name) + ": replay differs");
  }

  auto spec = textworld::load_world(data_path("worlds/boil-water.json"));
  {
    textworld::Simulator sim(spec);
    sim.step("teleport to bathroom");
    auto o = sim.step("focus on toilet");
    if (!o.terminated || sim.state().status != textworld::Status::FailFocus ||
        sim.state().total_reward != 3 || o.reward != 0) {
      problems.push_back("focus on a wrong object did not end the episode with reward 3");
    }
  }
  {
    textworld::Simulator sim(spec);
    sim.step("teleport to bathroom");
    sim.step("focus on water");
    auto o = sim.step("focus on water");
    if (!o.terminated || sim.state().status != textworld::Status::FailFocus ||
        sim.state().total_reward != 69) {
      problems.push_back("exceeding the focus budget did not end the episode with reward 69");
    }
  }
  {
    textworld::Simulator sim(spec);
    for (int i = 0; i < spec.max_steps; ++i) sim.step("look around");
    const std::string want = "Task Failed. You have exceeded the maximum number of steps.";
    if (sim.state().status != textworld::Status::FailSteps || sim.terminal_line() != want) {
      problems.push_back("max_steps line was '" + sim.terminal_line() + "'");
    }
  }
  if (!problems.empty()) return fail(join(problems, "; "));
  return pass("3 optimal trajectories reach success with 100 and replay byte-identically; "
              "focus misuse ends at fail_focus with frozen reward; step limit line exact");
}

// ---------------------------------------------------------------------------
// 7. baseline contracts

bool ends_with(const std::string& s, const std::string& tail) {
  return s.size() >= tail.size() && s.compare(s.size() - tail.size(), tail.size(), tail) == 0;
}

Result criterion_7() {
  std::vector<std::string> problems;
  ScriptedPolicy judge;
  judge.add_rule({{}, "Coherency score: 4."});
  writing::WritingTask task(writing::load_problems(data_path("writing/problems.jsonl")).at(0),
                            writing::default_base_answer(), judge);
  int answers = 0, reflections = 0;
  FunctionPolicy policy([&](const GenRequest& r) -> std::string {
    if (ends_with(r.user_text, baselines::kReflexionReflect)) {
      return "Reflection " + std::to_string(++reflections) + ": end each paragraph exactly.";
    }
    if (ends_with(r.user_text, baselines::kSelfRefineFeedback)) return "Tighten the plan.";
    return "Plan: draft " + std::to_string(++answers) + "\n\nPassage:\nText.";
  });

  RunConfig config;
  config.task_kind = TaskKind::Writing;
  config.episodes = 5;
  config.reflection_window = 3;
  auto logs = baselines::run_reflexion(task, config, policy);
  const std::string& fifth = logs.at(4).prompt;
  const int blocks = count_occurrences(fifth, "<reflection>");
  const int reward_tags = count_occurrences(fifth, "Reward");
  const int prior = count_occurrences(fifth, "<attempt>") + count_occurrences(fifth, "Plan: draft");
  if (blocks != 3) problems.push_back("reflexion: " + std::to_string(blocks) + " reflection blocks");
  if (reward_tags != 0) problems.push_back("reflexion: Reward tags present");
  if (prior != 0) problems.push_back("reflexion: prior responses present");

  config.episodes = 3;
  auto refine = baselines::run_self_refine(task, config, policy);
  for (const auto& log : refine) {
    if (log.prompt.find("Reward") != std::string::npos) {
      problems.push_back("self-refine: Reward tag in episode " + std::to_string(log.episode));
    }
  }

  ScriptedPolicy game_judge;
  game_judge.add_rule({{}, "**Answer**: 0"});
  game24::Game24Task game(game24::parse_problem_line("4 9 10 13", "p001"), game_judge);
  ScriptedPolicy samples;
  samples.add_step({"Step1: 10 - 4 = 6 (left: 6 9 13)\nStep2: 13 - 6 = 7 (left: 7 9)\n"
                    "Step3: 9 * 7 = 63 (left: 63)\n**Answer**: (13 - (10 - 4)) * 9 = 63",
                    {}});
  for (int i = 0; i < 2; ++i) {
    samples.add_step({"Step1: 10 - 4 = 6 (left: 6 9 13)\nStep2: 13 - 9 = 4 (left: 4 6)\n"
                      "Step3: 6 * 4 = 24 (left: 24)\n**Answer**: (10 - 4) * (13 - 9) = 24",
                      {}});
  }
  auto best = baselines::run_best_of_n(game, RunConfig{}, samples, 3);
  if (best.selected != 2) {
    problems.push_back("best-of-n selected " +
                       (best.selected ? std::to_string(*best.selected) : std::string("nothing")));
  }
  if (!problems.empty()) return fail(join(problems, "; "));
  return pass("reflexion episode 5: 3 reflection blocks, 0 Reward tags, 0 prior responses; "
              "self-refine prompts have no Reward tags; best-of-n [fail, pass, pass] -> 2");
}

// ---------------------------------------------------------------------------
// 8. metrics

Result criterion_8() {
  std::vector<std::string> problems;
  if (metrics::running_max_series({1, 0, 2, 0}) != std::vector<double>{1, 1, 2, 2}) {
    problems.push_back("running_max_series([1,0,2,0])");
  }
  // p1 = 0 1 0, p2 = 0 0 1: per-problem running max then mean = 0, .5, 1;
  // the mean curve itself is 0, .5, .5 (its running max would be 0, .5, .5).
  std::vector<EpisodeLog> logs;
  const double values[2][3] = {{0, 1, 0}, {0, 0, 1}};
  for (int p = 0; p < 2; ++p) {
    for (int k = 0; k < 3; ++k) {
      EpisodeLog log;
      log.problem_id = "p" + std::to_string(p + 1);
      log.episode = k + 1;
      log.ground_truth = values[p][k];
      logs.push_back(log);
    }
  }
  auto curves = metrics::build_curves(logs);
  if (curves.size() != 1 || curves[0].running_max_mean.values != std::vector<double>{0, 0.5, 1} ||
      curves[0].mean.values != std::vector<double>{0, 0.5, 0.5}) {
    problems.push_back("2-problem fixture curves");
  }
  auto rows = metrics::summarize(logs);
  if (rows.size() != 3 || std::abs(rows[1].stderr_value - 0.5) > 1e-12 || rows[2].stderr_value != 0) {
    problems.push_back("2-problem fixture stderr");
  }
  std::vector<metrics::MetricSeries> series = {curves.at(0).mean, curves.at(0).running_max_mean};
  auto dir = std::filesystem::temp_directory_path() / ("icrl-acceptance-" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  metrics::emit_plot(series, (dir / "a.svg").string(), {"fixture"});
  metrics::emit_plot(series, (dir / "b.svg").string(), {"fixture"});
  const bool same = read_file((dir / "a.svg").string()) == read_file((dir / "b.svg").string()) &&
                    read_file((dir / "a.svg").string()) == metrics::render_svg(series, {"fixture"});
  std::filesystem::remove_all(dir);
  if (!same) problems.push_back("SVG bytes differ between emissions");
  if (!problems.empty()) return fail(join(problems, "; "));
  return pass("running max [1,1,2,2]; fixture running-max mean 0,0.5,1 vs mean 0,0.5,0.5; "
              "SVG byte-identical across emissions");
}

// ---------------------------------------------------------------------------
// 9. end-to-end offline

Result criterion_9() {
  RunConfig config = cli::parse_config(data_path("configs/game24_scripted.json"), {"episodes=5"});
  auto curve = [](const RunConfig& c) {
    return metrics::build_curves(cli::run_experiment(c, {true, "", ""})).at(0).mean.values;
  };
  auto icrl = curve(config);
  RunConfig zero = config;
  zero.zero_rewards = true;
  auto zeroed = curve(zero);
  auto text = [](const std::vector<double>& v) {
    std::vector<std::string> parts;
    for (double x : v) parts.push_back(std::to_string(static_cast<int>(x)));
    return join(parts, ",");
  };
  const std::string detail = "preset mean success " + text(icrl) + "; zero rewards " + text(zeroed);
  const bool ok = icrl.size() == 5 && icrl[0] == 0 && icrl[2] == 1 && icrl[4] == 1 &&
                  std::all_of(zeroed.begin(), zeroed.end(), [](double x) { return x == 0; });
  return ok ? pass(detail) : fail(detail);
}

// ---------------------------------------------------------------------------
// 10. live smoke test

double env_number(const char* name, double fallback) {
  const char* v = std::getenv(name);
  return v && *v ? std::atof(v) : fallback;
}

/// Upper-bound token estimate for a game24 run: the ICRL prompt grows by one
/// rendered attempt per episode; every episode adds four judge calls.
double projected_cost(const RunConfig& config, int problems, double in_price, double out_price) {
  const double task = 300, attempt = 90, answer = 80, judge_in = 150, judge_out = 60;
  double tokens_in = 0, tokens_out = 0;
  for (int k = 1; k <= config.episodes; ++k) {
    tokens_in += task + attempt * (k - 1) + 4 * judge_in;
    tokens_out += answer + 4 * judge_out;
  }
  tokens_in += task + 4 * judge_in;  // the CoT pass
  tokens_out += answer + 4 * judge_out;
  return problems * (tokens_in * in_price + tokens_out * out_price) / 1e6;
}

Result criterion_10() {
  const char* flag = std::getenv("ICRL_LIVE");
  if (!flag || std::string(flag) != "1") return skip("live smoke test disabled (set ICRL_LIVE=1)");
  RunConfig config = cli::parse_config(data_path("configs/game24_live.json"),
                                       {"episodes=10", "problem_limit=10"});
  if (!std::getenv(config.policy.api_key_env.c_str())) {
    return skip("live smoke test needs " + config.policy.api_key_env);
  }
  const double cap = env_number("ICRL_LIVE_COST_CAP_USD", 5.0);
  const double cost = projected_cost(config, 10, env_number("ICRL_PRICE_IN_PER_MTOK", 2.0),
                                     env_number("ICRL_PRICE_OUT_PER_MTOK", 8.0));
  std::cout << "criterion 10: projected cost $" << std::fixed << std::setprecision(2) << cost
            << " (cap $" << cap << ")" << std::endl;
  if (cost > cap) return skip("aborted: projected cost exceeds ICRL_LIVE_COST_CAP_USD");

  auto icrl_logs = cli::run_experiment(config);
  RunConfig cot = config;
  cot.method = Method::Cot;
  auto cot_logs = cli::run_experiment(cot);
  auto icrl_curve = metrics::build_curves(icrl_logs).at(0);
  auto cot_curve = metrics::build_curves(cot_logs).at(0);
  const double icrl_best = icrl_curve.running_max_mean.values.back();
  const double cot_mean = cot_curve.mean.values.front();
  std::ostringstream d;
  d << "ICRL preset running-max mean " << icrl_best << " vs CoT single pass " << cot_mean;
  return icrl_best >= cot_mean ? pass(d.str()) : fail(d.str());
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Result()>>> criteria = {
      {"verifier agrees with the oracle", criterion_1},
      {"oracle spot checks", criterion_2},
      {"golden prompts", criterion_3},
      {"schedule law", criterion_4},
      {"ablation effects on prompts", criterion_5},
      {"MiniLab trajectories", criterion_6},
      {"baseline contracts", criterion_7},
      {"metrics", criterion_8},
      {"end-to-end offline", criterion_9},
      {"live smoke test", criterion_10},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  bool failed = false, skipped = false;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int number = static_cast<int>(i + 1);
    if (!selected.empty() && !selected.count(number)) continue;
    Result r;
    try {
      r = criteria[i].second();
    } catch (const std::exception& e) {
      r = fail(std::string("exception: ") + e.what());
    }
    const char* label = r.status == Status::Pass ? "PASS" : r.status == Status::Fail ? "FAIL" : "SKIP";
    std::cout << label << " " << number << " " << criteria[i].first << ": " << r.detail << std::endl;
    failed |= r.status == Status::Fail;
    skipped |= r.status == Status::Skip;
  }
  if (failed) return 1;
  return skipped ? 77 : 0;
}
