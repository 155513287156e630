#include "icrl/textworld/world.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <regex>
#include <set>

#include "icrl/textworld/sim.hpp"

namespace icrl::textworld {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw WorldLoadError("world spec: " + field + ": " + what);
}

const json& require(const json& j, const char* key, const std::string& field) {
  if (!j.is_object() || !j.contains(key)) fail(field + "." + key, "missing");
  return j.at(key);
}

std::string require_string(const json& j, const char* key, const std::string& field) {
  const json& v = require(j, key, field);
  if (!v.is_string() || v.get<std::string>().empty()) fail(field + "." + key, "expected a nonempty string");
  return v.get<std::string>();
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

bool compare_equal(const json& a, const json& b) {
  if (a.is_number() && b.is_number()) return a.get<double>() == b.get<double>();
  return a == b;
}

Effect effect_from_json(const json& j, const std::string& field) {
  Effect e;
  if (!j.is_object() || j.size() != 1) fail(field, "expected one of set, add, move, activate, deactivate");
  const auto& [name, body] = *j.items().begin();
  if (name == "set" || name == "add") {
    e.kind = name == "set" ? Effect::Kind::Set : Effect::Kind::Add;
    e.object = require_string(body, "object", field + "." + name);
    e.key = require_string(body, "key", field + "." + name);
    e.value = require(body, "value", field + "." + name);
    if (e.kind == Effect::Kind::Add && !e.value.is_number()) fail(field + ".add.value", "expected a number");
  } else if (name == "move") {
    e.kind = Effect::Kind::Move;
    e.object = require_string(body, "object", field + ".move");
    e.to = require_string(body, "to", field + ".move");
  } else if (name == "activate" || name == "deactivate") {
    e.kind = name == "activate" ? Effect::Kind::Activate : Effect::Kind::Deactivate;
    if (!body.is_string()) fail(field + "." + name, "expected an object id");
    e.object = body.get<std::string>();
  } else {
    fail(field, "unknown effect '" + name + "'");
  }
  return e;
}

std::vector<Effect> effects_from_json(const json& j, const std::string& field) {
  std::vector<Effect> out;
  if (j.is_null()) return out;
  if (!j.is_array()) fail(field, "expected a list");
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(effect_from_json(j[i], field + "[" + std::to_string(i) + "]"));
  }
  return out;
}

void check_object_ref(const WorldSpec& spec, const std::string& id, const std::string& field) {
  if (!spec.find_object(id)) fail(field, "unknown object '" + id + "'");
}

void check_place(const WorldSpec& spec, const std::string& place, const std::string& field) {
  if (place == "inventory" || spec.has_room(place) || spec.find_object(place)) return;
  fail(field, "unknown room or object '" + place + "'");
}

void check_predicate(const WorldSpec& spec, const Predicate& p, const std::string& field) {
  switch (p.kind) {
    case Predicate::Kind::AgentIn:
      if (!spec.has_room(p.subject)) fail(field, "unknown room '" + p.subject + "'");
      break;
    case Predicate::Kind::Located:
      check_object_ref(spec, p.subject, field);
      check_place(spec, p.target, field);
      break;
    case Predicate::Kind::Focused:
    case Predicate::Kind::Property:
    case Predicate::Kind::PropertyAtLeast:
    case Predicate::Kind::Active:
      check_object_ref(spec, p.subject, field);
      break;
    case Predicate::Kind::All:
    case Predicate::Kind::Any:
      for (const auto& c : p.children) check_predicate(spec, c, field);
      break;
  }
}

void check_effects(const WorldSpec& spec, const std::vector<Effect>& effects, const std::string& field) {
  for (const auto& e : effects) {
    check_object_ref(spec, e.object, field);
    if (e.kind == Effect::Kind::Move) check_place(spec, e.to, field);
  }
}

}  // namespace

Predicate Predicate::from_json(const json& j, const std::string& field) {
  if (!j.is_object() || j.size() != 1) fail(field, "expected a single-key predicate object");
  const auto& [name, body] = *j.items().begin();
  Predicate p;
  if (name == "agent_in" || name == "focused" || name == "active") {
    p.kind = name == "agent_in" ? Kind::AgentIn : name == "focused" ? Kind::Focused : Kind::Active;
    if (!body.is_string()) fail(field + "." + name, "expected a string");
    p.subject = body.get<std::string>();
  } else if (name == "property") {
    p.kind = Kind::Property;
    p.subject = require_string(body, "object", field + ".property");
    p.key = require_string(body, "key", field + ".property");
    p.value = require(body, "equals", field + ".property");
  } else if (name == "property_at_least") {
    p.kind = Kind::PropertyAtLeast;
    p.subject = require_string(body, "object", field + ".property_at_least");
    p.key = require_string(body, "key", field + ".property_at_least");
    p.value = require(body, "value", field + ".property_at_least");
    if (!p.value.is_number()) fail(field + ".property_at_least.value", "expected a number");
  } else if (name == "located") {
    p.kind = Kind::Located;
    p.subject = require_string(body, "object", field + ".located");
    p.target = require_string(body, "in", field + ".located");
  } else if (name == "all" || name == "any") {
    p.kind = name == "all" ? Kind::All : Kind::Any;
    if (!body.is_array() || body.empty()) fail(field + "." + name, "expected a nonempty list");
    for (std::size_t i = 0; i < body.size(); ++i) {
      p.children.push_back(from_json(body[i], field + "." + name + "[" + std::to_string(i) + "]"));
    }
  } else {
    fail(field, "unknown predicate '" + name + "'");
  }
  return p;
}

bool Predicate::holds(const WorldState& state) const {
  switch (kind) {
    case Kind::AgentIn:
      return state.agent_room == subject;
    case Kind::Focused:
      return state.focused == subject;
    case Kind::Active:
      return state.object(subject).active;
    case Kind::Property: {
      const auto& props = state.object(subject).properties;
      return props.contains(key) && compare_equal(props.at(key), value);
    }
    case Kind::PropertyAtLeast: {
      const auto& props = state.object(subject).properties;
      return props.contains(key) && props.at(key).is_number() &&
             props.at(key).get<double>() >= value.get<double>();
    }
    case Kind::Located:
      return state.is_within(subject, target);
    case Kind::All:
      return std::all_of(children.begin(), children.end(),
                         [&](const Predicate& c) { return c.holds(state); });
    case Kind::Any:
      return std::any_of(children.begin(), children.end(),
                         [&](const Predicate& c) { return c.holds(state); });
  }
  return false;
}

const ObjectSpec* WorldSpec::find_object(const std::string& id) const {
  for (const auto& o : objects) {
    if (o.id == id) return &o;
  }
  return nullptr;
}

bool WorldSpec::has_room(const std::string& room) const {
  return std::find(rooms.begin(), rooms.end(), room) != rooms.end();
}

int count_focus_mentions(const std::string& text) {
  static const std::regex kFocus(R"(\bfocus\b)", std::regex::icase);
  return static_cast<int>(
      std::distance(std::sregex_iterator(text.begin(), text.end(), kFocus), std::sregex_iterator()));
}

WorldSpec world_from_json(const json& j) {
  if (!j.is_object()) fail("<root>", "expected an object");
  WorldSpec spec;
  spec.name = require_string(j, "name", "<root>");
  spec.task_description = require_string(j, "task_description", "<root>");

  const json& rooms = require(j, "rooms", "<root>");
  if (!rooms.is_array() || rooms.empty()) fail("rooms", "expected a nonempty list");
  for (const auto& r : rooms) {
    if (!r.is_string()) fail("rooms", "expected strings");
    std::string room = r.get<std::string>();
    if (room != lower(room)) fail("rooms", "room names must be lower case: '" + room + "'");
    if (room == "inventory" || spec.has_room(room)) fail("rooms", "duplicate or reserved room '" + room + "'");
    spec.rooms.push_back(room);
  }
  if (j.contains("adjacency")) {
    const json& adj = j.at("adjacency");
    if (!adj.is_object()) fail("adjacency", "expected an object");
    for (const auto& [room, neighbours] : adj.items()) {
      if (!spec.has_room(room)) fail("adjacency", "unknown room '" + room + "'");
      if (!neighbours.is_array()) fail("adjacency." + room, "expected a list");
      for (const auto& n : neighbours) {
        if (!n.is_string() || !spec.has_room(n.get<std::string>())) {
          fail("adjacency." + room, "unknown room '" + n.dump() + "'");
        }
        spec.adjacency[room].push_back(n.get<std::string>());
      }
    }
  }
  spec.start_room = require_string(j, "start_room", "<root>");
  if (!spec.has_room(spec.start_room)) fail("start_room", "unknown room '" + spec.start_room + "'");

  const json& objects = require(j, "objects", "<root>");
  if (!objects.is_array()) fail("objects", "expected a list");
  std::set<std::string> ids;
  for (std::size_t i = 0; i < objects.size(); ++i) {
    const std::string field = "objects[" + std::to_string(i) + "]";
    const json& o = objects[i];
    ObjectSpec obj;
    obj.id = require_string(o, "id", field);
    if (!ids.insert(obj.id).second || spec.has_room(obj.id) || obj.id == "inventory") {
      fail(field + ".id", "duplicate or reserved id '" + obj.id + "'");
    }
    obj.name = o.value("name", obj.id);
    obj.aliases = o.value("aliases", std::vector<std::string>{});
    obj.location = require_string(o, "location", field);
    obj.properties = o.value("properties", json::object());
    if (!obj.properties.is_object()) fail(field + ".properties", "expected an object");
    obj.description = o.value("description", std::string{});
    for (const auto& flag : o.value("flags", std::vector<std::string>{})) {
      if (flag == "portable") obj.portable = true;
      else if (flag == "container") obj.container = true;
      else if (flag == "device") obj.device = true;
      else if (flag == "heat_source") obj.heat_source = obj.device = true;
      else if (flag == "liquid") obj.liquid = true;
      else if (flag == "active") obj.active = true;
      else fail(field + ".flags", "unknown flag '" + flag + "'");
    }
    spec.objects.push_back(std::move(obj));
  }
  for (std::size_t i = 0; i < spec.objects.size(); ++i) {
    const auto& obj = spec.objects[i];
    const std::string field = "objects[" + std::to_string(i) + "].location";
    check_place(spec, obj.location, field);
    if (const ObjectSpec* holder = spec.find_object(obj.location); holder && !holder->container) {
      fail(field, "'" + obj.location + "' is not a container");
    }
  }

  if (j.contains("rules")) {
    for (std::size_t i = 0; i < j.at("rules").size(); ++i) {
      const std::string field = "rules[" + std::to_string(i) + "]";
      const json& r = j.at("rules")[i];
      Rule rule;
      rule.id = r.value("id", field);
      rule.when = Predicate::from_json(require(r, "when", field), field + ".when");
      rule.effects = effects_from_json(r.value("effects", json()), field + ".effects");
      rule.message = r.value("message", std::string{});
      rule.repeat = r.value("repeat", false);
      check_predicate(spec, rule.when, field + ".when");
      check_effects(spec, rule.effects, field + ".effects");
      spec.rules.push_back(std::move(rule));
    }
  }

  if (j.contains("interactions")) {
    for (std::size_t i = 0; i < j.at("interactions").size(); ++i) {
      const std::string field = "interactions[" + std::to_string(i) + "]";
      const json& r = j.at("interactions")[i];
      Interaction in;
      in.tool = require_string(r, "tool", field);
      in.target = require_string(r, "target", field);
      check_object_ref(spec, in.tool, field + ".tool");
      check_object_ref(spec, in.target, field + ".target");
      const json& cases = require(r, "cases", field);
      if (!cases.is_array() || cases.empty()) fail(field + ".cases", "expected a nonempty list");
      for (std::size_t c = 0; c < cases.size(); ++c) {
        const std::string cf = field + ".cases[" + std::to_string(c) + "]";
        InteractionCase ic;
        if (cases[c].contains("when")) {
          ic.when = Predicate::from_json(cases[c].at("when"), cf + ".when");
          check_predicate(spec, *ic.when, cf + ".when");
        }
        ic.observation = require_string(cases[c], "observation", cf);
        ic.effects = effects_from_json(cases[c].value("effects", json()), cf + ".effects");
        check_effects(spec, ic.effects, cf + ".effects");
        in.cases.push_back(std::move(ic));
      }
      spec.interactions.push_back(std::move(in));
    }
  }

  const json& subgoals = require(j, "subgoals", "<root>");
  if (!subgoals.is_array() || subgoals.empty()) fail("subgoals", "expected a nonempty list");
  int sum = 0;
  for (std::size_t i = 0; i < subgoals.size(); ++i) {
    const std::string field = "subgoals[" + std::to_string(i) + "]";
    Subgoal g;
    g.id = subgoals[i].value("id", field);
    const json& reward = require(subgoals[i], "reward", field);
    if (!reward.is_number_integer() || reward.get<int>() <= 0) {
      fail(field + ".reward", "expected a positive integer");
    }
    g.reward = reward.get<int>();
    g.when = Predicate::from_json(require(subgoals[i], "when", field), field + ".when");
    check_predicate(spec, g.when, field + ".when");
    sum += g.reward;
    spec.subgoals.push_back(std::move(g));
  }
  if (sum != 100) fail("subgoals", "rewards sum to " + std::to_string(sum) + ", expected 100");

  spec.focus_targets = j.value("focus_targets", std::vector<std::string>{});
  for (const auto& t : spec.focus_targets) check_object_ref(spec, t, "focus_targets");
  spec.focus_budget = j.value("focus_budget", 1);
  if (spec.focus_budget < 1) fail("focus_budget", "expected a positive integer");
  if (count_focus_mentions(spec.task_description) != spec.focus_budget) {
    fail("focus_budget", "task_description mentions focus " +
                             std::to_string(count_focus_mentions(spec.task_description)) +
                             " times, budget is " + std::to_string(spec.focus_budget));
  }
  spec.max_steps = j.value("max_steps", 30);
  if (spec.max_steps < 1) fail("max_steps", "expected a positive integer");
  return spec;
}

WorldSpec load_world(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw WorldLoadError("cannot open world spec " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw WorldLoadError(path + ": " + e.what());
  }
  try {
    return world_from_json(j);
  } catch (const WorldLoadError& e) {
    throw WorldLoadError(path + ": " + e.what());
  } catch (const json::exception& e) {
    throw WorldLoadError(path + ": " + e.what());
  }
}

}  // namespace icrl::textworld
