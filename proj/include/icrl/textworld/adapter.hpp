#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <string>

#include <nlohmann/json.hpp>

#include "icrl/textworld/sim.hpp"
#include "icrl/textworld/world.hpp"

namespace icrl::textworld {

struct EnvStep {
  std::string observation;
  int reward = 0;
  bool done = false;
  int total = 0;
  std::string status;  // "success", "fail_steps", "fail_focus" when known
};

nlohmann::json to_json(const EnvStep& step);
EnvStep env_step_from_json(const nlohmann::json& j);

/// One episode of an interactive environment.
class Environment {
 public:
  virtual ~Environment() = default;
  virtual EnvStep step(const std::string& action) = 0;
  /// Terminal line for the trajectory once done.
  virtual std::string terminal_line() const = 0;
};

using EnvironmentFactory = std::function<std::unique_ptr<Environment>()>;

class MiniLabEnvironment : public Environment {
 public:
  explicit MiniLabEnvironment(const WorldSpec& spec) : sim_(spec) {}
  EnvStep step(const std::string& action) override;
  std::string terminal_line() const override { return sim_.terminal_line(); }
  const Simulator& simulator() const { return sim_; }

 private:
  Simulator sim_;
};

/// Talks to an external process over newline-delimited JSON on its
/// stdin/stdout: request {"action": ...}, response {"observation",
/// "reward", "done", "total"} (optional "status"). One process per episode.
class StdioEnvironment : public Environment {
 public:
  /// `command` runs under /bin/sh. Throws std::runtime_error if it cannot
  /// be started.
  explicit StdioEnvironment(const std::string& command);
  ~StdioEnvironment() override;
  StdioEnvironment(const StdioEnvironment&) = delete;
  StdioEnvironment& operator=(const StdioEnvironment&) = delete;

  /// Throws std::runtime_error on a closed pipe or malformed reply.
  EnvStep step(const std::string& action) override;
  std::string terminal_line() const override;

 private:
  void close_pipes();

  int pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string pending_;
  EnvStep last_;
};

/// Serves the stdio protocol for one MiniLab episode until EOF or done.
void serve_stdio(const WorldSpec& spec, std::istream& in, std::ostream& out);

}  // namespace icrl::textworld
