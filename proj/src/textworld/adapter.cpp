#include "icrl/textworld/adapter.hpp"

#include <csignal>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>

#include <fcntl.h>
#include <sys/wait.h>
#include <unistd.h>

namespace icrl::textworld {

nlohmann::json to_json(const EnvStep& step) {
  nlohmann::json j = {{"observation", step.observation},
                      {"reward", step.reward},
                      {"done", step.done},
                      {"total", step.total}};
  if (!step.status.empty()) j["status"] = step.status;
  return j;
}

EnvStep env_step_from_json(const nlohmann::json& j) {
  EnvStep s;
  s.observation = j.at("observation").get<std::string>();
  s.reward = j.at("reward").get<int>();
  s.done = j.at("done").get<bool>();
  s.total = j.at("total").get<int>();
  s.status = j.value("status", std::string{});
  return s;
}

EnvStep MiniLabEnvironment::step(const std::string& action) {
  ActionOutcome out = sim_.step(action);
  EnvStep s;
  s.observation = out.observation;
  s.reward = out.reward;
  s.done = out.terminated;
  s.total = sim_.state().total_reward;
  if (out.terminated) s.status = to_string(sim_.state().status);
  return s;
}

StdioEnvironment::StdioEnvironment(const std::string& command) {
  int in_pipe[2];
  int out_pipe[2];
  if (pipe(in_pipe) != 0) throw std::runtime_error("pipe: " + std::string(std::strerror(errno)));
  if (pipe(out_pipe) != 0) {
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    throw std::runtime_error("pipe: " + std::string(std::strerror(errno)));
  }
  pid_ = fork();
  if (pid_ < 0) throw std::runtime_error("fork: " + std::string(std::strerror(errno)));
  if (pid_ == 0) {
    dup2(in_pipe[0], STDIN_FILENO);
    dup2(out_pipe[1], STDOUT_FILENO);
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    ::close(out_pipe[0]);
    ::close(out_pipe[1]);
    execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
  fcntl(to_child_, F_SETFD, FD_CLOEXEC);
  fcntl(from_child_, F_SETFD, FD_CLOEXEC);
  std::signal(SIGPIPE, SIG_IGN);
}

void StdioEnvironment::close_pipes() {
  if (to_child_ >= 0) ::close(to_child_);
  if (from_child_ >= 0) ::close(from_child_);
  to_child_ = from_child_ = -1;
}

StdioEnvironment::~StdioEnvironment() {
  close_pipes();
  if (pid_ > 0) {
    int status = 0;
    waitpid(pid_, &status, 0);
  }
}

EnvStep StdioEnvironment::step(const std::string& action) {
  if (to_child_ < 0) throw std::runtime_error("environment process is closed");
  std::string line = nlohmann::json{{"action", action}}.dump() + "\n";
  for (std::size_t sent = 0; sent < line.size();) {
    ssize_t n = ::write(to_child_, line.data() + sent, line.size() - sent);
    if (n <= 0) throw std::runtime_error("environment process closed its input");
    sent += static_cast<std::size_t>(n);
  }

  std::size_t newline;
  while ((newline = pending_.find('\n')) == std::string::npos) {
    char buf[4096];
    ssize_t n = ::read(from_child_, buf, sizeof buf);
    if (n <= 0) throw std::runtime_error("environment process ended without replying");
    pending_.append(buf, static_cast<std::size_t>(n));
  }
  std::string reply = pending_.substr(0, newline);
  pending_.erase(0, newline + 1);
  try {
    last_ = env_step_from_json(nlohmann::json::parse(reply));
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("malformed environment reply '" + reply + "': " + e.what());
  }
  if (last_.done) close_pipes();
  return last_;
}

std::string StdioEnvironment::terminal_line() const {
  if (last_.status == "success") return textworld::terminal_line(Status::Success);
  if (last_.status == "fail_focus") return textworld::terminal_line(Status::FailFocus);
  if (last_.status == "fail_steps") return textworld::terminal_line(Status::FailSteps);
  return last_.total >= 100 ? textworld::terminal_line(Status::Success) : "Task Failed.";
}

void serve_stdio(const WorldSpec& spec, std::istream& in, std::ostream& out) {
  MiniLabEnvironment env(spec);
  for (std::string line; std::getline(in, line);) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json reply;
    try {
      reply = to_json(env.step(nlohmann::json::parse(line).at("action").get<std::string>()));
    } catch (const nlohmann::json::exception& e) {
      reply = {{"error", std::string("bad request: ") + e.what()}};
    }
    out << reply.dump() << "\n" << std::flush;
    if (reply.value("done", false)) break;
  }
}

}  // namespace icrl::textworld
