#include "icrl/textworld/sim.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

namespace icrl::textworld {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string normalize_input(const std::string& text) {
  std::string out;
  bool space = false;
  for (unsigned char c : text) {
    if (std::isspace(c)) {
      space = !out.empty();
      continue;
    }
    if (space) out += ' ';
    space = false;
    out += static_cast<char>(std::tolower(c));
  }
  auto strip = [](char c) { return c == '.' || c == '!' || c == '"' || c == '\'' || c == '`'; };
  while (!out.empty() && strip(out.back())) out.pop_back();
  std::size_t start = 0;
  while (start < out.size() && strip(out[start])) ++start;
  return out.substr(start);
}

enum class Slot { None, Room, Object };

struct Piece {
  std::string literal;
  Slot slot = Slot::None;
};

struct Template {
  ActionVerb verb;
  std::string text;
  std::vector<Piece> pieces;  // alternating literal / slot
  std::string lead;           // literal before the first slot
};

Template make_template(ActionVerb verb, const std::string& text) {
  Template t{verb, text, {}, {}};
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t open = text.find('<', pos);
    if (open == std::string::npos) {
      t.pieces.push_back({text.substr(pos), Slot::None});
      break;
    }
    if (open > pos) t.pieces.push_back({text.substr(pos, open - pos), Slot::None});
    std::size_t close = text.find('>', open);
    std::string name = text.substr(open + 1, close - open - 1);
    t.pieces.push_back({"", name == "room" ? Slot::Room : Slot::Object});
    pos = close + 1;
  }
  std::size_t first_slot = text.find('<');
  t.lead = text.substr(0, first_slot);
  while (!t.lead.empty() && t.lead.back() == ' ') t.lead.pop_back();
  return t;
}

const std::vector<Template>& templates() {
  static const std::vector<Template> kTemplates = {
      make_template(ActionVerb::LookAround, "look around"),
      make_template(ActionVerb::Inventory, "inventory"),
      make_template(ActionVerb::Teleport, "teleport to <room>"),
      make_template(ActionVerb::GoTo, "go to <room>"),
      make_template(ActionVerb::Focus, "focus on <object>"),
      make_template(ActionVerb::PickUp, "pick up <object>"),
      make_template(ActionVerb::PutDown, "put down <object>"),
      make_template(ActionVerb::Move, "move <object> to <object>"),
      make_template(ActionVerb::Pour, "pour <object> into <object>"),
      make_template(ActionVerb::Activate, "activate <object>"),
      make_template(ActionVerb::Deactivate, "deactivate <object>"),
      make_template(ActionVerb::Examine, "examine <object>"),
      make_template(ActionVerb::Examine, "look at <object>"),
      make_template(ActionVerb::Use, "use <object> on <object>"),
      make_template(ActionVerb::Wait, "wait"),
  };
  return kTemplates;
}

std::optional<std::string> bind_object(std::string text, const WorldSpec& spec) {
  if (text.rfind("the ", 0) == 0) text = text.substr(4);
  if (text.empty()) return std::nullopt;
  for (const auto& o : spec.objects) {
    if (lower(o.id) == text || lower(o.name) == text) return o.id;
    for (const auto& a : o.aliases) {
      if (lower(a) == text) return o.id;
    }
  }
  return std::nullopt;
}

std::optional<std::string> bind_room(std::string text, const WorldSpec& spec) {
  if (text.rfind("the ", 0) == 0) text = text.substr(4);
  if (spec.has_room(text)) return text;
  return std::nullopt;
}

bool match_from(const Template& t, std::size_t piece, const std::string& input, std::size_t pos,
                const WorldSpec& spec, std::vector<std::string>& args) {
  if (piece == t.pieces.size()) return pos == input.size();
  const Piece& p = t.pieces[piece];
  if (p.slot == Slot::None) {
    if (input.compare(pos, p.literal.size(), p.literal) != 0) return false;
    return match_from(t, piece + 1, input, pos + p.literal.size(), spec, args);
  }
  auto bind = [&](const std::string& text) {
    return p.slot == Slot::Room ? bind_room(text, spec) : bind_object(text, spec);
  };
  if (piece + 1 == t.pieces.size()) {
    auto bound = bind(input.substr(pos));
    if (!bound) return false;
    args.push_back(*bound);
    return true;
  }
  const std::string& next = t.pieces[piece + 1].literal;
  for (std::size_t at = input.find(next, pos); at != std::string::npos; at = input.find(next, at + 1)) {
    auto bound = bind(input.substr(pos, at - pos));
    if (!bound) continue;
    args.push_back(*bound);
    if (match_from(t, piece + 1, input, at, spec, args)) return true;
    args.pop_back();
  }
  return false;
}

bool has_interaction(const WorldSpec& spec, const std::string& tool, const std::string& target) {
  return std::any_of(spec.interactions.begin(), spec.interactions.end(),
                     [&](const Interaction& i) { return i.tool == tool && i.target == target; });
}

std::string value_text(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number()) {
    double d = v.get<double>();
    if (std::floor(d) == d) return std::to_string(static_cast<long long>(d));
  }
  return v.dump();
}

}  // namespace

const char* to_string(Status status) {
  switch (status) {
    case Status::Running:
      return "running";
    case Status::Success:
      return "success";
    case Status::FailSteps:
      return "fail_steps";
    case Status::FailFocus:
      return "fail_focus";
  }
  return "running";
}

std::string terminal_line(Status status) {
  switch (status) {
    case Status::Running:
      return "";
    case Status::Success:
      return "Task Completed.";
    case Status::FailSteps:
      return "Task Failed. You have exceeded the maximum number of steps.";
    case Status::FailFocus:
      return "Task Failed. Focus was used on a wrong object or too many times.";
  }
  return "";
}

WorldState::WorldState(const WorldSpec& spec) : spec_(&spec) {
  agent_room = spec.start_room;
  for (const auto& o : spec.objects) {
    objects[o.id] = ObjectState{o.location, o.properties, o.active};
  }
  subgoal_fired.assign(spec.subgoals.size(), false);
  rule_fired.assign(spec.rules.size(), false);
}

const ObjectState& WorldState::object(const std::string& id) const {
  auto it = objects.find(id);
  if (it == objects.end()) throw std::out_of_range("unknown object '" + id + "'");
  return it->second;
}

ObjectState& WorldState::object(const std::string& id) {
  auto it = objects.find(id);
  if (it == objects.end()) throw std::out_of_range("unknown object '" + id + "'");
  return it->second;
}

std::string WorldState::room_of(const std::string& object_id) const {
  std::string loc = object(object_id).location;
  for (std::size_t guard = 0; objects.count(loc) && guard <= objects.size(); ++guard) {
    loc = objects.at(loc).location;
  }
  return loc;
}

bool WorldState::is_within(const std::string& object_id, const std::string& place) const {
  std::string loc = object(object_id).location;
  for (std::size_t guard = 0; guard <= objects.size(); ++guard) {
    if (loc == place) return true;
    auto it = objects.find(loc);
    if (it == objects.end()) return false;
    loc = it->second.location;
  }
  return false;
}

bool WorldState::visible(const std::string& object_id) const {
  std::string room = room_of(object_id);
  return room == agent_room || room == "inventory";
}

ParseResult parse_action(const std::string& text, const WorldSpec& spec) {
  const std::string input = normalize_input(text);
  ParseResult result;
  for (const auto& t : templates()) {
    const bool verb_known = input == t.lead || input.rfind(t.lead + " ", 0) == 0;
    if (!verb_known) continue;
    std::vector<std::string> args;
    if (match_from(t, 0, input, 0, spec, args)) {
      if (t.verb == ActionVerb::Use && !has_interaction(spec, args[0], args[1])) {
        result.kind = ParseResult::Kind::Unsupported;
        result.action = {t.verb, args};
        continue;
      }
      return {ParseResult::Kind::Matched, {t.verb, args}};
    }
    if (result.kind == ParseResult::Kind::NoMatch) {
      result.kind = ParseResult::Kind::Unsupported;
      result.action.verb = t.verb;
    }
  }
  return result;
}

std::vector<std::string> action_templates() {
  std::vector<std::string> out;
  for (const auto& t : templates()) out.push_back(t.text);
  return out;
}

Simulator::Simulator(const WorldSpec& spec) : spec_(spec), state_(spec_) {}

const std::string& Simulator::name_of(const std::string& id) const {
  return spec_.find_object(id)->name;
}

std::string Simulator::contents_text(const std::string& place) const {
  std::string out;
  for (const auto& o : spec_.objects) {
    if (state_.object(o.id).location != place) continue;
    if (!out.empty()) out += ", ";
    out += describe(o.id);
  }
  return out.empty() ? "nothing" : out;
}

std::string Simulator::describe(const std::string& object_id) const {
  const ObjectSpec& spec = *spec_.find_object(object_id);
  const ObjectState& st = state_.object(object_id);
  std::string text = spec.description.empty() ? "a " + spec.name : spec.description;
  for (const auto& [key, value] : st.properties.items()) {
    const std::string slot = "{" + key + "}";
    for (std::size_t pos = text.find(slot); pos != std::string::npos; pos = text.find(slot, pos)) {
      std::string v = value_text(value);
      text.replace(pos, slot.size(), v);
      pos += v.size();
    }
  }
  if (spec.device) text += st.active ? ", which is on" : ", which is off";
  if (spec.container) text += " (containing " + contents_text(object_id) + ")";
  return text;
}

std::string Simulator::look_around() const {
  std::string out = "This room is called the " + state_.agent_room + ". In it, you see: " +
                    contents_text(state_.agent_room) + ".";
  auto adj = spec_.adjacency.find(state_.agent_room);
  if (adj != spec_.adjacency.end() && !adj->second.empty()) {
    out += " You also see doors to:";
    for (std::size_t i = 0; i < adj->second.size(); ++i) {
      out += (i ? ", the " : " the ") + adj->second[i];
    }
    out += ".";
  }
  return out;
}

void Simulator::apply_effect(const Effect& effect) {
  ObjectState& st = state_.object(effect.object);
  switch (effect.kind) {
    case Effect::Kind::Set:
      st.properties[effect.key] = effect.value;
      break;
    case Effect::Kind::Add: {
      double current = st.properties.contains(effect.key) && st.properties[effect.key].is_number()
                           ? st.properties[effect.key].get<double>()
                           : 0.0;
      double next = current + effect.value.get<double>();
      if (std::floor(next) == next) {
        st.properties[effect.key] = static_cast<long long>(next);
      } else {
        st.properties[effect.key] = next;
      }
      break;
    }
    case Effect::Kind::Move:
      st.location = effect.to;
      break;
    case Effect::Kind::Activate:
      st.active = true;
      break;
    case Effect::Kind::Deactivate:
      st.active = false;
      break;
  }
}

std::string Simulator::apply(const ParseResult& parsed, bool& focus_failed) {
  if (parsed.kind == ParseResult::Kind::NoMatch) return kNoMatch;
  if (parsed.kind == ParseResult::Kind::Unsupported) return kNotSure;
  const Action& a = parsed.action;
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    const bool room_slot = a.verb == ActionVerb::Teleport || a.verb == ActionVerb::GoTo;
    if (!room_slot && !state_.visible(a.args[i])) return kNotSure;
  }

  switch (a.verb) {
    case ActionVerb::LookAround:
      return look_around();
    case ActionVerb::Inventory:
      return "In your inventory, you see: " + contents_text("inventory") + ".";
    case ActionVerb::Teleport:
      state_.agent_room = a.args[0];
      return "You teleport to the " + a.args[0] + ".";
    case ActionVerb::GoTo: {
      auto adj = spec_.adjacency.find(state_.agent_room);
      const bool ok = adj != spec_.adjacency.end() &&
                      std::find(adj->second.begin(), adj->second.end(), a.args[0]) != adj->second.end();
      if (!ok) return "You can't go to the " + a.args[0] + " from here.";
      state_.agent_room = a.args[0];
      return "You move to the " + a.args[0] + ".";
    }
    case ActionVerb::Focus: {
      const std::string& id = a.args[0];
      const bool target = std::find(spec_.focus_targets.begin(), spec_.focus_targets.end(), id) !=
                          spec_.focus_targets.end();
      if (!target || state_.focus_used >= spec_.focus_budget) {
        focus_failed = true;
      } else {
        state_.focused = id;
        ++state_.focus_used;
      }
      return "You focus on the " + name_of(id) + ".";
    }
    case ActionVerb::PickUp: {
      const std::string& id = a.args[0];
      if (!spec_.find_object(id)->portable) return kNotSure;
      if (state_.object(id).location == "inventory") {
        return "The " + name_of(id) + " is already in your inventory.";
      }
      state_.object(id).location = "inventory";
      return "You move the " + name_of(id) + " to the inventory.";
    }
    case ActionVerb::PutDown: {
      const std::string& id = a.args[0];
      if (state_.object(id).location != "inventory") return kNotSure;
      state_.object(id).location = state_.agent_room;
      return "You move the " + name_of(id) + " to the " + state_.agent_room + ".";
    }
    case ActionVerb::Move: {
      const std::string& id = a.args[0];
      const std::string& dest = a.args[1];
      const ObjectSpec& obj = *spec_.find_object(id);
      if (id == dest || !spec_.find_object(dest)->container) return kNotSure;
      if (!obj.portable && !obj.liquid) return kNotSure;
      if (state_.is_within(dest, id)) return kNotSure;
      state_.object(id).location = dest;
      return "You move the " + obj.name + " to the " + name_of(dest) + ".";
    }
    case ActionVerb::Pour: {
      const std::string& src = a.args[0];
      const std::string& dest = a.args[1];
      if (src == dest || !spec_.find_object(dest)->container) return kNotSure;
      if (state_.is_within(dest, src)) return kNotSure;
      std::vector<std::string> poured;
      if (spec_.find_object(src)->liquid) {
        poured.push_back(src);
      } else if (spec_.find_object(src)->container) {
        for (const auto& o : spec_.objects) {
          if (o.liquid && state_.object(o.id).location == src) poured.push_back(o.id);
        }
      }
      if (poured.empty()) return kNotSure;
      std::string names;
      for (const auto& id : poured) {
        state_.object(id).location = dest;
        if (!names.empty()) names += " and the ";
        names += name_of(id);
      }
      return "You pour the " + names + " into the " + name_of(dest) + ".";
    }
    case ActionVerb::Activate:
    case ActionVerb::Deactivate: {
      const std::string& id = a.args[0];
      if (!spec_.find_object(id)->device) return kNotSure;
      const bool on = a.verb == ActionVerb::Activate;
      const char* word = on ? "activated" : "deactivated";
      if (state_.object(id).active == on) return "The " + name_of(id) + " is already " + word + ".";
      state_.object(id).active = on;
      return "The " + name_of(id) + " is now " + word + ".";
    }
    case ActionVerb::Examine:
      return describe(a.args[0]);
    case ActionVerb::Use: {
      for (const auto& in : spec_.interactions) {
        if (in.tool != a.args[0] || in.target != a.args[1]) continue;
        for (const auto& c : in.cases) {
          if (c.when && !c.when->holds(state_)) continue;
          for (const auto& e : c.effects) apply_effect(e);
          return c.observation;
        }
      }
      return kNotSure;
    }
    case ActionVerb::Wait:
      return "You decide to wait for 1 iteration.";
  }
  return kNoMatch;
}

void Simulator::tick(std::string& observation) {
  for (const auto& o : spec_.objects) {
    std::string loc = state_.object(o.id).location;
    for (std::size_t guard = 0; guard <= spec_.objects.size(); ++guard) {
      const ObjectSpec* holder = spec_.find_object(loc);
      if (!holder) break;
      if (holder->heat_source && state_.object(holder->id).active) {
        apply_effect({Effect::Kind::Add, o.id, "heat", 1, ""});
        break;
      }
      loc = state_.object(loc).location;
    }
  }
  for (std::size_t i = 0; i < spec_.rules.size(); ++i) {
    const Rule& rule = spec_.rules[i];
    if (state_.rule_fired[i] && !rule.repeat) continue;
    if (!rule.when.holds(state_)) continue;
    state_.rule_fired[i] = true;
    for (const auto& e : rule.effects) apply_effect(e);
    if (!rule.message.empty()) observation += " " + rule.message;
  }
}

ActionOutcome Simulator::step(const std::string& action_text) {
  if (state_.status != Status::Running) {
    throw std::logic_error("step on a terminated episode");
  }
  ++state_.steps_taken;
  bool focus_failed = false;
  ActionOutcome out;
  out.observation = apply(parse_action(action_text, spec_), focus_failed);

  if (focus_failed) {
    state_.status = Status::FailFocus;
    out.terminated = true;
    return out;
  }

  tick(out.observation);
  for (std::size_t i = 0; i < spec_.subgoals.size(); ++i) {
    if (state_.subgoal_fired[i] || !spec_.subgoals[i].when.holds(state_)) continue;
    state_.subgoal_fired[i] = true;
    out.reward += spec_.subgoals[i].reward;
  }
  state_.total_reward += out.reward;

  if (std::all_of(state_.subgoal_fired.begin(), state_.subgoal_fired.end(), [](bool b) { return b; })) {
    state_.status = Status::Success;
  } else if (state_.steps_taken >= spec_.max_steps) {
    state_.status = Status::FailSteps;
  }
  out.terminated = state_.status != Status::Running;
  return out;
}

std::string Simulator::terminal_line() const { return textworld::terminal_line(state_.status); }

}  // namespace icrl::textworld
