#include "icrl/cli/app.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <regex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "icrl/baselines/baselines.hpp"
#include "icrl/cli/config_io.hpp"
#include "icrl/game24/oracle.hpp"
#include "icrl/game24/task.hpp"
#include "icrl/game24/verify.hpp"
#include "icrl/metrics/metrics.hpp"
#include "icrl/policy/scripted.hpp"
#include "icrl/textworld/adapter.hpp"
#include "icrl/textworld/task.hpp"
#include "icrl/writing/writing.hpp"

namespace icrl::cli {

namespace fs = std::filesystem;

namespace {

/// Stands in for the judge where none may be called (dry runs, counting).
class OfflinePolicy : public Policy {
 public:
  GenResponse generate(const GenRequest&) override {
    throw BackendError("no backend available in this mode");
  }
  std::string backend_id() const override { return "offline"; }
};

bool needs_judge(TaskKind kind) { return kind != TaskKind::Textworld; }

BackendSettings judge_settings(const RunConfig& config) {
  BackendSettings judge = config.judge;
  if (judge.backend == "scripted" && judge.script.empty()) judge.script = config.policy.script;
  return judge;
}

std::string replace_all(std::string s, const std::string& from, const std::string& to) {
  for (std::size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) {
    s.replace(pos, from.size(), to);
  }
  return s;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out.flush()) throw std::runtime_error("write failed for " + path.string());
}

std::string first_prompt(const RunConfig& config, const Task& task) {
  std::string prompt = task.task_text();
  if (config.method == Method::LongCot) prompt += std::string("\n\n") + baselines::kLongCotInstruction;
  return prompt;
}

void export_writing_pairs(const RunConfig& config, const std::vector<EpisodeLog>& logs,
                          const fs::path& dir) {
  std::map<std::string, std::string> instructions;
  for (const auto& p : writing::load_problems(config.problems)) {
    instructions[p.problem_id] = writing::render_writing_task(p);
  }
  std::map<std::string, const EpisodeLog*> final_log;
  std::map<std::string, const EpisodeLog*> best_log;
  std::vector<std::string> order;
  for (const auto& log : logs) {
    if (log.failed) continue;
    if (!final_log.count(log.problem_id)) order.push_back(log.problem_id);
    final_log[log.problem_id] = &log;  // logs are in episode order
    auto& best = best_log[log.problem_id];
    if (!best || log.total_reward > best->total_reward) best = &log;
  }
  std::vector<writing::ExportRecord> finals;
  std::vector<writing::ExportRecord> bests;
  const std::string generator = config.name + ":" + to_string(config.method);
  for (const auto& id : order) {
    finals.push_back({instructions[id], final_log[id]->response, generator, id});
    bests.push_back({instructions[id], best_log[id]->response, generator, id});
  }
  write_text(dir / "pairwise_final.json", writing::export_pairwise_records(finals).dump(2) + "\n");
  write_text(dir / "pairwise_best.json", writing::export_pairwise_records(bests).dump(2) + "\n");
}

void write_run_outputs(const RunConfig& config, const std::vector<EpisodeLog>& logs,
                       const fs::path& dir) {
  fs::create_directories(dir);
  write_text(dir / "config.json", config_to_json(config).dump(2) + "\n");
  metrics::export_results(logs, dir.string());
  if (config.task_kind == TaskKind::Writing) export_writing_pairs(config, logs, dir);
}

void print_final_summary(const std::vector<EpisodeLog>& logs, std::ostream& out) {
  for (const auto& c : metrics::build_curves(logs)) {
    const double mean = c.mean.values.back();
    out << c.method << " " << c.task << ": " << c.problem_ids.size() << " problems, "
        << c.mean.values.size() << " episodes, last-episode mean " << mean
        << ", running max " << metrics::format_mean_stderr(c.running_max_mean.values.back(),
                                                             c.running_max_stderr.back(), 3, 3)
        << "\n";
  }
}

std::vector<game24::Rational> parse_inputs(const std::vector<std::string>& words) {
  if (words.size() != 4) throw std::invalid_argument("expected exactly 4 numbers");
  std::string line;
  for (const auto& w : words) line += w + " ";
  auto problem = game24::parse_problem_line(line, "cli");
  return problem.rationals();
}

}  // namespace

std::unique_ptr<Policy> make_backend(const BackendSettings& settings,
                                     std::shared_ptr<RateLimiter> limiter) {
  if (settings.backend == "scripted") {
    if (settings.script.empty()) throw std::invalid_argument("scripted backend needs a script file");
    return std::make_unique<ScriptedPolicy>(ScriptedPolicy::from_file(settings.script));
  }
  HttpPolicyConfig cfg;
  cfg.base_url = settings.base_url;
  if (const char* url = std::getenv("ICRL_BASE_URL"); url && *url) cfg.base_url = url;
  cfg.model = settings.model;
  cfg.api_key_env = settings.api_key_env;
  cfg.timeout_s = settings.timeout_s;
  cfg.max_retries = settings.max_retries;
  return std::make_unique<HttpPolicy>(cfg, std::move(limiter));
}

std::vector<std::unique_ptr<Task>> make_tasks(const RunConfig& config, Policy& judge) {
  std::vector<std::unique_ptr<Task>> tasks;
  const std::size_t limit = config.problem_limit ? static_cast<std::size_t>(*config.problem_limit)
                                                 : static_cast<std::size_t>(-1);
  switch (config.task_kind) {
    case TaskKind::Game24: {
      if (config.problems.empty()) throw std::invalid_argument("game24 runs need 'problems'");
      game24::JudgeSettings js{config.judge.temperature, config.judge.max_output_tokens};
      for (auto& p : game24::load_problems(config.problems)) {
        if (tasks.size() >= limit) break;
        tasks.push_back(std::make_unique<game24::Game24Task>(std::move(p), judge, js));
      }
      break;
    }
    case TaskKind::Writing: {
      if (config.problems.empty()) throw std::invalid_argument("writing runs need 'problems'");
      const std::string base = config.base_answer.empty() ? writing::default_base_answer()
                                                          : writing::load_base_answer(config.base_answer);
      writing::JudgeSettings js{config.judge.temperature, config.judge.max_output_tokens};
      for (auto& p : writing::load_problems(config.problems)) {
        if (tasks.size() >= limit) break;
        tasks.push_back(std::make_unique<writing::WritingTask>(std::move(p), base, judge, js));
      }
      break;
    }
    case TaskKind::Textworld: {
      if (config.worlds.empty()) throw std::invalid_argument("textworld runs need 'worlds'");
      for (const auto& path : config.worlds) {
        if (tasks.size() >= limit) break;
        textworld::WorldSpec spec = textworld::load_world(path);
        if (config.env_command.empty()) {
          tasks.push_back(std::make_unique<textworld::TextworldTask>(std::move(spec)));
        } else {
          std::string command = replace_all(config.env_command, "{world}", path);
          tasks.push_back(std::make_unique<textworld::TextworldTask>(
              std::move(spec),
              [command] { return std::make_unique<textworld::StdioEnvironment>(command); }));
        }
      }
      break;
    }
  }
  return tasks;
}

std::vector<EpisodeLog> run_experiment(const RunConfig& config, const RunOptions& options) {
  config.validate();
  OfflinePolicy offline;
  const std::size_t count = make_tasks(config, offline).size();
  auto limiter = std::make_shared<RateLimiter>(config.policy.requests_per_minute);

  std::vector<std::vector<EpisodeLog>> results(count);
  std::atomic<std::size_t> next{0};
  std::mutex error_mu;
  std::exception_ptr error;

  auto worker = [&] {
    try {
      std::unique_ptr<Policy> policy = make_backend(config.policy, limiter);
      std::unique_ptr<Policy> judge =
          needs_judge(config.task_kind) ? make_backend(judge_settings(config), limiter) : nullptr;
      auto tasks = make_tasks(config, judge ? *judge : static_cast<Policy&>(offline));

      LoopHooks hooks;
      hooks.clock = options.frozen_clock ? frozen_clock() : steady_clock_ms();
      if (!options.prompts_dir.empty()) {
        hooks.on_episode = [&](const EpisodeLog& log) {
          char name[256];
          std::snprintf(name, sizeof name, "%s_%s_%03d.txt", log.problem_id.c_str(),
                        log.method.c_str(), log.episode);
          write_text(fs::path(options.prompts_dir) / name, log.prompt);
        };
      }
      for (std::size_t i; (i = next++) < count;) {
        {
          std::lock_guard<std::mutex> lock(error_mu);
          if (error) return;
        }
        results[i] = baselines::run_method(*tasks[i], config, *policy, hooks);
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mu);
      if (!error) error = std::current_exception();
    }
  };

  if (!options.prompts_dir.empty()) fs::create_directories(options.prompts_dir);
  const std::size_t workers = std::max<std::size_t>(
      1, std::min<std::size_t>(static_cast<std::size_t>(config.parallel), count));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }
  if (error) std::rethrow_exception(error);

  std::vector<EpisodeLog> logs;
  for (auto& r : results) {
    for (auto& log : r) {
      if (!options.method_label.empty()) log.method = options.method_label;
      logs.push_back(std::move(log));
    }
  }
  return logs;
}

std::vector<std::pair<std::string, RunConfig>> ablation_variants(const RunConfig& base) {
  std::vector<std::pair<std::string, RunConfig>> out;
  RunConfig c = base;
  c.method = Method::Icrl;

  RunConfig zero = c;
  zero.zero_rewards = true;
  out.emplace_back("zero_rewards", zero);

  RunConfig short_context = c;
  short_context.buffer_capacity = 3;
  out.emplace_back("short_context", short_context);

  RunConfig exploration = c;
  exploration.schedule = Schedule::ExplorationOnly;
  exploration.zero_rewards = true;
  out.emplace_back("exploration_only", exploration);

  RunConfig exploitation = c;
  exploitation.schedule = Schedule::ExploitationOnly;
  out.emplace_back("exploitation_only", exploitation);

  RunConfig no_ee = c;
  no_ee.schedule = Schedule::NoEE;
  out.emplace_back("no_ee", no_ee);

  for (auto& [name, cfg] : out) cfg.name = base.name + "-" + name;
  return out;
}

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"In-context reinforcement learning prompting harness", "icrl"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir;
  bool dry_run = false;
  int parallel = 0;
  bool save_prompts = false;

  auto* run = app.add_subcommand("run", "Run one experiment from a config file");
  run->add_option("-c,--config", config_path, "JSON config file")->required();
  run->add_option("-s,--set", overrides, "Override a config key: key=value");
  run->add_option("-o,--out", out_dir, "Output directory (default runs/<name>)");
  run->add_flag("--dry-run", dry_run, "Print the episode-1 prompt and exit");
  run->add_option("--parallel", parallel, "Concurrent problem workers");
  run->add_flag("--save-prompts", save_prompts, "Write every episode prompt under <out>/prompts");

  auto* ablate = app.add_subcommand("ablate", "Run the five ablation variants of a base config");
  ablate->add_option("-c,--config", config_path, "JSON config file")->required();
  ablate->add_option("-s,--set", overrides, "Override a config key: key=value");
  ablate->add_option("-o,--out", out_dir, "Output directory (default runs/<name>-ablations)");
  ablate->add_option("--parallel", parallel, "Concurrent problem workers");

  std::string verify_input;
  auto* verify = app.add_subcommand("verify24", "Verify a Game of 24 solution read from stdin");
  verify->add_option("-i,--input", verify_input, "The four input numbers, e.g. \"4 9 10 13\"");

  std::vector<std::string> solve_numbers;
  auto* solve = app.add_subcommand("solve24", "Find a Game of 24 solution or report UNSOLVABLE");
  solve->add_option("numbers", solve_numbers, "Four integers")->required()->expected(4);

  std::string world_path;
  bool json_mode = false;
  auto* sim = app.add_subcommand("sim", "Step a MiniLab world from stdin");
  sim->add_option("-w,--world", world_path, "World spec file")->required();
  sim->add_flag("--json", json_mode, "Serve the JSON line protocol instead of plain text");

  std::vector<std::string> log_files;
  auto* plot = app.add_subcommand("plot", "Summaries and SVG plots from JSONL logs");
  plot->add_option("-l,--logs", log_files, "logs.jsonl files")->required();
  plot->add_option("-o,--out", out_dir, "Output directory")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    if (app.get_subcommands().empty()) err << app.help();
    return 2;
  }

  try {
    if (*run) {
      RunConfig config = parse_config(config_path, overrides);
      if (parallel > 0) config.parallel = parallel;
      if (dry_run) {
        OfflinePolicy offline;
        auto tasks = make_tasks(config, offline);
        if (tasks.empty()) throw std::invalid_argument("config names no problems");
        out << first_prompt(config, *tasks.front()) << "\n";
        return 0;
      }
      const fs::path dir = out_dir.empty() ? fs::path("runs") / config.name : fs::path(out_dir);
      RunOptions options;
      options.frozen_clock = config.policy.backend == "scripted";
      if (save_prompts) options.prompts_dir = (dir / "prompts").string();
      auto logs = run_experiment(config, options);
      write_run_outputs(config, logs, dir);
      print_final_summary(logs, out);
      out << "wrote " << dir.string() << "\n";
      return 0;
    }

    if (*ablate) {
      RunConfig base = parse_config(config_path, overrides);
      if (parallel > 0) base.parallel = parallel;
      const fs::path dir =
          out_dir.empty() ? fs::path("runs") / (base.name + "-ablations") : fs::path(out_dir);
      std::vector<EpisodeLog> all;
      for (const auto& [name, cfg] : ablation_variants(base)) {
        RunOptions options;
        options.frozen_clock = cfg.policy.backend == "scripted";
        options.method_label = name;
        auto logs = run_experiment(cfg, options);
        write_run_outputs(cfg, logs, dir / name);
        all.insert(all.end(), logs.begin(), logs.end());
      }
      metrics::export_results(all, dir.string());
      print_final_summary(all, out);
      out << "wrote " << dir.string() << "\n";
      return 0;
    }

    if (*verify) {
      std::stringstream ss;
      ss << in.rdbuf();
      const std::string text = ss.str();
      std::vector<std::string> words;
      if (verify_input.empty()) {
        static const std::regex kInput(R"(Input:\s*(\d+)\s+(\d+)\s+(\d+)\s+(\d+))");
        std::smatch m;
        if (!std::regex_search(text, m, kInput)) {
          err << "no --input given and no \"Input: a b c d\" line in the solution\n";
          return 2;
        }
        for (int i = 1; i <= 4; ++i) words.push_back(m[i].str());
      } else {
        std::istringstream ws(verify_input);
        for (std::string w; ws >> w;) words.push_back(w);
      }
      auto inputs = parse_inputs(words);
      try {
        auto solution = game24::parse_solution(text);
        out << game24::verify_solution(solution, inputs).to_string() << "\n";
      } catch (const game24::SolutionParseError& e) {
        out << "unparseable: " << e.what() << "\n";
        return 1;
      }
      return 0;
    }

    if (*solve) {
      auto inputs = parse_inputs(solve_numbers);
      auto result = game24::solvable_oracle(inputs);
      if (!result.solvable) {
        out << "UNSOLVABLE\n";
      } else {
        out << game24::solution_text_from_expression(*result.witness, inputs) << "\n";
      }
      return 0;
    }

    if (*sim) {
      textworld::WorldSpec spec = textworld::load_world(world_path);
      if (json_mode) {
        textworld::serve_stdio(spec, in, out);
        return 0;
      }
      textworld::Simulator simulator(spec);
      out << textworld::render_task_text(spec) << "\n";
      for (std::string line; std::getline(in, line);) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto outcome = simulator.step(line);
        out << outcome.observation << " (reward=" << outcome.reward << ")\n";
        if (outcome.terminated) {
          out << simulator.terminal_line() << " Total reward: " << simulator.state().total_reward
              << "\n";
          return 0;
        }
      }
      return 0;
    }

    if (*plot) {
      std::vector<EpisodeLog> logs;
      for (const auto& f : log_files) {
        std::ifstream lf(f);
        if (!lf) throw std::runtime_error("cannot open " + f);
        auto part = read_jsonl(lf);
        logs.insert(logs.end(), part.begin(), part.end());
      }
      fs::create_directories(out_dir);
      auto curves = metrics::build_curves(logs);
      if (curves.empty()) throw std::invalid_argument("no episodes in the given logs");
      std::vector<metrics::MetricSeries> means;
      std::vector<metrics::MetricSeries> running;
      for (const auto& c : curves) {
        means.push_back(c.mean);
        running.push_back(c.running_max_mean);
      }
      std::ofstream csv(fs::path(out_dir) / "summary.csv", std::ios::binary);
      metrics::write_summary_csv(csv, metrics::summarize(logs));
      metrics::emit_plot(means, (fs::path(out_dir) / "mean.svg").string(),
                         {"Mean per episode", "Episode", "Mean"});
      metrics::emit_plot(running, (fs::path(out_dir) / "running_max.svg").string(),
                         {"Mean of running max", "Episode", "Running max"});
      out << "wrote " << out_dir << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace icrl::cli
