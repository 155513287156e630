#pragma once

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace icrl::textworld {

/// Malformed world spec. The message names the offending field.
class WorldLoadError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ObjectSpec {
  std::string id;
  std::string name;  // display name, "glass cup"
  std::vector<std::string> aliases;
  std::string location;  // room, another object id, or "inventory"
  nlohmann::json properties = nlohmann::json::object();
  std::string description;  // examine text; "{key}" expands to a property
  bool portable = false;
  bool container = false;
  bool device = false;
  bool heat_source = false;
  bool liquid = false;
  bool active = false;
};

class WorldState;

/// Predicate over world state, built from JSON such as
/// {"agent_in": "bathroom"} or {"property": {"object": "water", "key": "phase", "equals": "gas"}}.
class Predicate {
 public:
  enum class Kind { AgentIn, Focused, Property, PropertyAtLeast, Located, Active, All, Any };

  static Predicate from_json(const nlohmann::json& j, const std::string& field);
  bool holds(const WorldState& state) const;

  Kind kind = Kind::AgentIn;
  std::string subject;  // room or object id
  std::string key;
  std::string target;   // Located: container or room
  nlohmann::json value;
  std::vector<Predicate> children;
};

struct Effect {
  enum class Kind { Set, Add, Move, Activate, Deactivate };
  Kind kind = Kind::Set;
  std::string object;
  std::string key;
  nlohmann::json value;
  std::string to;
};

/// Fires after every step while `when` holds (once only unless `repeat`).
struct Rule {
  std::string id;
  Predicate when;
  std::vector<Effect> effects;
  std::string message;  // appended to the step's observation when it fires
  bool repeat = false;
};

struct InteractionCase {
  std::optional<Predicate> when;
  std::string observation;
  std::vector<Effect> effects;
};

/// "use <tool> on <target>"
struct Interaction {
  std::string tool;
  std::string target;
  std::vector<InteractionCase> cases;
};

struct Subgoal {
  std::string id;
  Predicate when;
  int reward = 0;
};

struct WorldSpec {
  std::string name;
  std::string task_description;
  std::vector<std::string> rooms;
  std::map<std::string, std::vector<std::string>> adjacency;
  std::string start_room;
  std::vector<ObjectSpec> objects;
  std::vector<Rule> rules;
  std::vector<Interaction> interactions;
  std::vector<Subgoal> subgoals;
  std::vector<std::string> focus_targets;
  int focus_budget = 1;
  int max_steps = 30;

  const ObjectSpec* find_object(const std::string& id) const;
  bool has_room(const std::string& room) const;
};

/// Validates everything load_world promises; throws WorldLoadError.
WorldSpec world_from_json(const nlohmann::json& j);
WorldSpec load_world(const std::string& path);

/// Number of times the word "focus" occurs in `text` (case-insensitive).
int count_focus_mentions(const std::string& text);

}  // namespace icrl::textworld
