#include "pws/model.hpp"

#include <algorithm>
#include <sstream>

namespace pws {

bool is_identifier(const std::string& s) {
  if (s.empty()) return false;
  auto head = [](char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_'; };
  auto tail = [&](char c) { return head(c) || (c >= '0' && c <= '9'); };
  if (!head(s[0])) return false;
  return std::all_of(s.begin() + 1, s.end(), tail);
}

bool StateInterface::has_state(const std::string& q) const {
  return std::find(states.begin(), states.end(), q) != states.end();
}

const InterfaceTransition* StateInterface::command_from(const std::string& q,
                                                        const EventName& e) const {
  for (const auto& t : transitions)
    if (t.kind == TriggerKind::Command && t.source == q && t.event == e) return &t;
  return nullptr;
}

const InterfaceTransition* StateInterface::internal_from(const std::string& q,
                                                         const EventName& e) const {
  for (const auto& t : transitions)
    if (t.kind == TriggerKind::Internal && t.source == q && t.event == e) return &t;
  return nullptr;
}

std::vector<const InterfaceTransition*> StateInterface::emitters_from(const std::string& q,
                                                                      const EventName& n) const {
  std::vector<const InterfaceTransition*> out;
  for (const auto& t : transitions) {
    if (t.source != q) continue;
    if (std::find(t.notifies.begin(), t.notifies.end(), n) != t.notifies.end()) out.push_back(&t);
  }
  return out;
}

bool StateInterface::emits_anywhere(const EventName& n) const {
  for (const auto& t : transitions)
    if (std::find(t.notifies.begin(), t.notifies.end(), n) != t.notifies.end()) return true;
  return false;
}

bool StateInterface::has_internal_trigger(const EventName& e) const {
  for (const auto& t : transitions)
    if (t.kind == TriggerKind::Internal && t.event == e) return true;
  return false;
}

bool StateInterface::has_command_trigger(const EventName& e) const {
  for (const auto& t : transitions)
    if (t.kind == TriggerKind::Command && t.event == e) return true;
  return false;
}

bool PwsSystem::has_whole_state(const std::string& s) const {
  return std::find(whole_states.begin(), whole_states.end(), s) != whole_states.end();
}

const PartSlot* PwsSystem::find_slot(const std::string& id) const {
  for (const auto& s : assembly)
    if (s.id == id) return &s;
  return nullptr;
}

int PwsSystem::slot_index(const std::string& id) const {
  for (std::size_t i = 0; i < assembly.size(); ++i)
    if (assembly[i].id == id) return static_cast<int>(i);
  return -1;
}

std::vector<const WholeTransition*> PwsSystem::outgoing(const std::string& s) const {
  std::vector<const WholeTransition*> out;
  for (const auto& t : whole_transitions)
    if (t.source == s) out.push_back(&t);
  return out;
}

std::vector<const WholeTransition*> PwsSystem::incoming(const std::string& s) const {
  std::vector<const WholeTransition*> out;
  for (const auto& t : whole_transitions)
    if (t.target == s) out.push_back(&t);
  return out;
}

const StateInterface* Model::find_interface(const std::string& name) const {
  for (const auto& i : interfaces)
    if (i.name == name) return &i;
  return nullptr;
}

const PwsSystem* Model::find_system(const std::string& name) const {
  for (const auto& s : systems)
    if (s.name == name) return &s;
  return nullptr;
}

const ConfigurationSet& SemanticsMap::at(const std::string& s) const {
  static const ConfigurationSet empty;
  auto it = entries.find(s);
  return it == entries.end() ? empty : it->second;
}

std::string format_configuration(const Configuration& c) {
  std::string out = "(";
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) out += ",";
    out += c[i];
  }
  out += ")";
  return out;
}

std::string format_configuration_set(const ConfigurationSet& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& c : s) {
    if (!first) out += ", ";
    first = false;
    out += format_configuration(c);
  }
  out += "}";
  return out;
}

std::string format_pattern(const GuardPattern& p) {
  std::string out;
  for (std::size_t ci = 0; ci < p.clauses.size(); ++ci) {
    if (ci) out += " | ";
    const auto& atoms = p.clauses[ci].atoms;
    for (std::size_t ai = 0; ai < atoms.size(); ++ai) {
      if (ai) out += ", ";
      out += atoms[ai].slot + "=" + atoms[ai].state;
    }
  }
  return out;
}

bool pattern_matches(const GuardPattern& p, const Configuration& c,
                     const std::map<std::string, int>& slot_of) {
  for (const auto& clause : p.clauses) {
    bool sat = true;
    for (const auto& atom : clause.atoms) {
      if (atom.state == "*") continue;
      auto it = slot_of.find(atom.slot);
      if (it == slot_of.end() || it->second < 0 ||
          static_cast<std::size_t>(it->second) >= c.size() || c[it->second] != atom.state) {
        sat = false;
        break;
      }
    }
    if (sat) return true;
  }
  return false;
}

std::string Property::text() const {
  switch (kind) {
    case PropertyKind::Init:
      return "INIT (" + format_pattern(pattern) + ")";
    case PropertyKind::Never:
      return "NEVER (" + format_pattern(pattern) + ")";
    case PropertyKind::Leaves:
      return "LEAVES " + slot + "." + state;
  }
  return {};
}

namespace {

class Checker {
 public:
  explicit Checker(const Model& m) : model_(m) {}

  ValidationReport run() {
    check_interfaces();
    check_systems();
    return std::move(report_);
  }

 private:
  void add(std::string code, std::string message, std::string where, SourceSpan span) {
    report_.violations.push_back({std::move(code), std::move(message), std::move(where), span});
  }

  void check_name(const std::string& name, const std::string& where, SourceSpan span) {
    if (!is_identifier(name))
      add("bad-identifier", "'" + name + "' is not a valid identifier", where, span);
  }

  void check_interfaces() {
    std::set<std::string> seen;
    for (const auto& itf : model_.interfaces) {
      const std::string where = "interface " + itf.name;
      check_name(itf.name, where, itf.span);
      if (!seen.insert(itf.name).second)
        add("duplicate-name", "interface '" + itf.name + "' declared twice", where, itf.span);

      std::set<std::string> states;
      for (const auto& q : itf.states) {
        check_name(q, where, itf.span);
        if (!states.insert(q).second)
          add("duplicate-state", "state '" + q + "' declared twice", where, itf.span);
      }
      if (!itf.has_state(itf.initial))
        add("initial-not-declared", "initial state '" + itf.initial + "' is not a declared state",
            where, itf.span);

      std::set<std::string> ids;
      std::set<std::pair<std::string, std::string>> command_keys, internal_keys;
      for (const auto& t : itf.transitions) {
        const std::string twhere = where + " / transition " + t.id;
        check_name(t.id, twhere, t.span);
        if (!ids.insert(t.id).second)
          add("duplicate-transition-id", "transition id '" + t.id + "' reused", twhere, t.span);
        if (!itf.has_state(t.source))
          add("unknown-state", "source state '" + t.source + "' not declared", twhere, t.span);
        if (!itf.has_state(t.target))
          add("unknown-state", "target state '" + t.target + "' not declared", twhere, t.span);
        check_name(t.event, twhere, t.span);
        for (const auto& n : t.notifies) check_name(n, twhere, t.span);
        auto key = std::make_pair(t.source, t.event);
        if (t.kind == TriggerKind::Command) {
          if (!command_keys.insert(key).second)
            add("nondeterministic-command",
                "two command transitions from '" + t.source + "' on '" + t.event + "'", twhere,
                t.span);
        } else {
          if (!internal_keys.insert(key).second)
            add("nondeterministic-internal",
                "two internal transitions from '" + t.source + "' on '" + t.event + "'", twhere,
                t.span);
        }
      }
    }
  }

  void check_systems() {
    std::set<std::string> seen;
    for (const auto& sys : model_.systems) {
      const std::string where = "system " + sys.name;
      check_name(sys.name, where, sys.span);
      if (!seen.insert(sys.name).second)
        add("duplicate-name", "system '" + sys.name + "' declared twice", where, sys.span);

      std::set<std::string> states;
      for (const auto& q : sys.whole_states) {
        check_name(q, where, sys.span);
        if (!states.insert(q).second)
          add("duplicate-state", "whole state '" + q + "' declared twice", where, sys.span);
      }
      if (!sys.has_whole_state(sys.initial_whole))
        add("initial-not-declared",
            "initial whole state '" + sys.initial_whole + "' is not a declared state", where,
            sys.span);

      std::set<std::string> slot_ids;
      for (const auto& slot : sys.assembly) {
        const std::string swhere = where + " / slot " + slot.id;
        check_name(slot.id, swhere, slot.span);
        if (!slot_ids.insert(slot.id).second)
          add("duplicate-slot", "slot '" + slot.id + "' declared twice", swhere, slot.span);
        const StateInterface* itf = model_.find_interface(slot.interface_name);
        if (!itf) {
          add("unknown-interface", "interface '" + slot.interface_name + "' is not defined",
              swhere, slot.span);
          continue;
        }
        if (slot.initial_override && !itf->has_state(*slot.initial_override))
          add("unknown-state",
              "initial state '" + *slot.initial_override + "' is not a state of interface '" +
                  itf->name + "'",
              swhere, slot.span);
      }

      std::set<std::string> ids;
      for (const auto& t : sys.whole_transitions) check_whole_transition(sys, t, where, ids);
    }
  }

  void check_whole_transition(const PwsSystem& sys, const WholeTransition& t,
                              const std::string& where, std::set<std::string>& ids) {
    const std::string twhere = where + " / transition " + t.id;
    check_name(t.id, twhere, t.span);
    if (!ids.insert(t.id).second)
      add("duplicate-transition-id", "transition id '" + t.id + "' reused", twhere, t.span);
    if (!sys.has_whole_state(t.source))
      add("unknown-state", "source state '" + t.source + "' not declared", twhere, t.span);
    if (!sys.has_whole_state(t.target))
      add("unknown-state", "target state '" + t.target + "' not declared", twhere, t.span);

    check_name(t.trigger.event, twhere, t.span);
    if (t.trigger.kind == WholeTriggerKind::PartNotification &&
        sys.slot_index(t.trigger.part) < 0)
      add("unknown-slot", "trigger references undeclared slot '" + t.trigger.part + "'", twhere,
          t.span);

    if (t.guard) {
      for (const auto& clause : t.guard->clauses) {
        for (const auto& atom : clause.atoms) {
          const PartSlot* slot = sys.find_slot(atom.slot);
          if (!slot) {
            add("unknown-slot", "guard references undeclared slot '" + atom.slot + "'", twhere,
                t.span);
            continue;
          }
          if (atom.state == "*") continue;
          const StateInterface* itf = model_.find_interface(slot->interface_name);
          if (itf && !itf->has_state(atom.state))
            add("unknown-state",
                "guard state '" + atom.state + "' is not a state of interface '" + itf->name + "'",
                twhere, t.span);
        }
      }
    }

    std::set<std::string> commanded;
    for (const auto& cmd : t.commands) {
      check_name(cmd.event, twhere, t.span);
      const PartSlot* slot = sys.find_slot(cmd.part);
      if (!slot) {
        add("unknown-slot", "command references undeclared slot '" + cmd.part + "'", twhere,
            t.span);
        continue;
      }
      if (!commanded.insert(cmd.part).second)
        add("duplicate-command-slot", "two commands for slot '" + cmd.part + "' in one transition",
            twhere, t.span);
      const StateInterface* itf = model_.find_interface(slot->interface_name);
      if (itf && !itf->has_command_trigger(cmd.event))
        add("command-not-a-trigger",
            "'" + cmd.event + "' is not a command trigger of interface '" + itf->name + "'",
            twhere, t.span);
    }
    for (const auto& n : t.notifies) check_name(n, twhere, t.span);
  }

  const Model& model_;
  ValidationReport report_;
};

}  // namespace

ValidationReport validate_model(const Model& model) { return Checker(model).run(); }

}  // namespace pws
