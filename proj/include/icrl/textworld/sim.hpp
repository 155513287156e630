#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "icrl/textworld/world.hpp"

namespace icrl::textworld {

enum class Status { Running, Success, FailSteps, FailFocus };

const char* to_string(Status status);

struct ObjectState {
  std::string location;
  nlohmann::json properties = nlohmann::json::object();
  bool active = false;
};

class WorldState {
 public:
  explicit WorldState(const WorldSpec& spec);

  const WorldSpec& spec() const { return *spec_; }

  std::string agent_room;
  std::map<std::string, ObjectState> objects;
  std::optional<std::string> focused;
  std::vector<bool> subgoal_fired;
  std::vector<bool> rule_fired;
  int steps_taken = 0;
  int focus_used = 0;
  int total_reward = 0;
  Status status = Status::Running;

  /// Room the object ultimately sits in, following container chains;
  /// "inventory" for carried objects.
  std::string room_of(const std::string& object_id) const;
  /// True if `object_id` is inside `place` (room, container or
  /// "inventory"), directly or through containers.
  bool is_within(const std::string& object_id, const std::string& place) const;
  bool visible(const std::string& object_id) const;
  const ObjectState& object(const std::string& id) const;
  ObjectState& object(const std::string& id);

 private:
  const WorldSpec* spec_;
};

enum class ActionVerb {
  LookAround,
  Inventory,
  Teleport,
  GoTo,
  Focus,
  PickUp,
  PutDown,
  Move,
  Pour,
  Activate,
  Deactivate,
  Examine,
  Use,
  Wait,
};

struct Action {
  ActionVerb verb = ActionVerb::Wait;
  std::vector<std::string> args;  // bound room names or object ids
};

struct ParseResult {
  enum class Kind { Matched, Unsupported, NoMatch };
  Kind kind = Kind::NoMatch;
  Action action;
};

/// Case-insensitive template match with slots bound to rooms and objects of
/// the world. Unknown verb: NoMatch. Known verb whose slots do not bind, or a
/// "use" pair without an interaction: Unsupported.
ParseResult parse_action(const std::string& text, const WorldSpec& spec);

/// The action templates offered to the agent, one per line.
std::vector<std::string> action_templates();

struct ActionOutcome {
  std::string observation;
  int reward = 0;
  bool terminated = false;
};

inline constexpr const char* kNoMatch = "No known action matches that input.";
inline constexpr const char* kNotSure = "I'm not sure how to do that.";

/// Deterministic MiniLab simulator for one episode.
class Simulator {
 public:
  explicit Simulator(const WorldSpec& spec);
  Simulator(const Simulator&) = delete;
  Simulator& operator=(const Simulator&) = delete;

  /// Throws std::logic_error once the episode has terminated.
  ActionOutcome step(const std::string& action_text);

  const WorldState& state() const { return state_; }
  /// "Task Completed." / "Task Failed. ..." once terminated, else empty.
  std::string terminal_line() const;

 private:
  std::string apply(const ParseResult& parsed, bool& focus_failed);
  void tick(std::string& observation);
  void apply_effect(const Effect& effect);
  std::string describe(const std::string& object_id) const;
  std::string look_around() const;
  std::string contents_text(const std::string& place) const;
  const std::string& name_of(const std::string& id) const;

  WorldSpec spec_;
  WorldState state_;
};

std::string terminal_line(Status status);

}  // namespace icrl::textworld
