#include <sstream>

#include "pws/dsl.hpp"

namespace pws {

namespace {

void append_events(std::ostringstream& out, const std::vector<EventName>& events) {
  for (const auto& e : events) out << " " << e;
}

void write_interface(std::ostringstream& out, const StateInterface& itf) {
  out << "interface " << itf.name << " {\n";
  out << "  initial " << itf.initial << "\n";
  out << "  states";
  append_events(out, itf.states);
  out << "\n";
  for (const auto& t : itf.transitions) {
    out << "  " << t.id << ": " << t.source << " -> " << t.target;
    out << (t.kind == TriggerKind::Command ? " on " : " internal ") << t.event;
    if (!t.notifies.empty()) {
      out << " notify";
      append_events(out, t.notifies);
    }
    out << "\n";
  }
  out << "}\n";
}

void write_system(std::ostringstream& out, const PwsSystem& sys) {
  out << "system " << sys.name << " {\n";
  out << "  parts {\n";
  for (const auto& slot : sys.assembly) {
    out << "    " << slot.id << ": " << slot.interface_name;
    if (slot.initial_override) out << " init " << *slot.initial_override;
    out << "\n";
  }
  out << "  }\n";
  out << "  whole {\n";
  out << "    initial " << sys.initial_whole << "\n";
  out << "    states";
  append_events(out, sys.whole_states);
  out << "\n";
  for (const auto& t : sys.whole_transitions) {
    out << "    " << t.id << ": " << t.source << " -> " << t.target;
    switch (t.trigger.kind) {
      case WholeTriggerKind::ExternalCommand:
        out << " on " << t.trigger.event;
        break;
      case WholeTriggerKind::PartNotification:
        out << " on " << t.trigger.part << "." << t.trigger.event;
        break;
      case WholeTriggerKind::Internal:
        out << " internal " << t.trigger.event;
        break;
    }
    if (t.guard) out << " [" << format_pattern(*t.guard) << "]";
    if (!t.commands.empty()) {
      out << " do";
      for (const auto& c : t.commands) out << " " << c.part << "." << c.event;
    }
    if (!t.notifies.empty()) {
      out << " notify";
      append_events(out, t.notifies);
    }
    out << "\n";
  }
  out << "  }\n";
  out << "}\n";
}

void write_bindings(std::ostringstream& out, const std::vector<BindingDecl>& bindings,
                    int depth) {
  std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
  for (const auto& b : bindings) {
    out << pad << b.slot << ": " << b.target;
    if (!b.children.empty()) {
      out << " {\n";
      write_bindings(out, b.children, depth + 1);
      out << pad << "}";
    }
    out << "\n";
  }
}

void write_holarchy(std::ostringstream& out, const HolarchyDecl& h) {
  out << "holarchy " << h.name << " {\n";
  out << "  root " << h.root_system;
  if (!h.bindings.empty()) {
    out << " {\n";
    write_bindings(out, h.bindings, 2);
    out << "  }";
  }
  out << "\n}\n";
}

}  // namespace

std::string serialize_interface(const StateInterface& itf) {
  std::ostringstream out;
  write_interface(out, itf);
  return out.str();
}

std::string serialize_system(const PwsSystem& sys) {
  std::ostringstream out;
  write_system(out, sys);
  return out.str();
}

std::string serialize_holarchy(const HolarchyDecl& h) {
  std::ostringstream out;
  write_holarchy(out, h);
  return out.str();
}

std::string serialize_model(const SourceModel& m) {
  std::ostringstream out;
  bool first = true;
  auto gap = [&] {
    if (!first) out << "\n";
    first = false;
  };
  for (const auto& itf : m.model.interfaces) {
    gap();
    write_interface(out, itf);
  }
  for (const auto& sys : m.model.systems) {
    gap();
    write_system(out, sys);
  }
  for (const auto& h : m.holarchies) {
    gap();
    write_holarchy(out, h);
  }
  if (!m.properties.empty()) gap();
  for (const auto& p : m.properties) out << p.property.text() << "\n";
  return out.str();
}

namespace {

bool eq(const GuardPattern& a, const GuardPattern& b) {
  if (a.clauses.size() != b.clauses.size()) return false;
  for (std::size_t i = 0; i < a.clauses.size(); ++i) {
    const auto& ca = a.clauses[i].atoms;
    const auto& cb = b.clauses[i].atoms;
    if (ca.size() != cb.size()) return false;
    for (std::size_t j = 0; j < ca.size(); ++j)
      if (ca[j].slot != cb[j].slot || ca[j].state != cb[j].state) return false;
  }
  return true;
}

bool eq(const StateInterface& a, const StateInterface& b) {
  if (a.name != b.name || a.states != b.states || a.initial != b.initial) return false;
  if (a.transitions.size() != b.transitions.size()) return false;
  for (std::size_t i = 0; i < a.transitions.size(); ++i) {
    const auto& ta = a.transitions[i];
    const auto& tb = b.transitions[i];
    if (ta.id != tb.id || ta.source != tb.source || ta.target != tb.target ||
        ta.kind != tb.kind || ta.event != tb.event || ta.notifies != tb.notifies)
      return false;
  }
  return true;
}

bool eq(const PwsSystem& a, const PwsSystem& b) {
  if (a.name != b.name || a.whole_states != b.whole_states ||
      a.initial_whole != b.initial_whole)
    return false;
  if (a.assembly.size() != b.assembly.size()) return false;
  for (std::size_t i = 0; i < a.assembly.size(); ++i) {
    const auto& sa = a.assembly[i];
    const auto& sb = b.assembly[i];
    if (sa.id != sb.id || sa.interface_name != sb.interface_name ||
        sa.initial_override != sb.initial_override)
      return false;
  }
  if (a.whole_transitions.size() != b.whole_transitions.size()) return false;
  for (std::size_t i = 0; i < a.whole_transitions.size(); ++i) {
    const auto& ta = a.whole_transitions[i];
    const auto& tb = b.whole_transitions[i];
    if (ta.id != tb.id || ta.source != tb.source || ta.target != tb.target ||
        ta.trigger.kind != tb.trigger.kind || ta.trigger.part != tb.trigger.part ||
        ta.trigger.event != tb.trigger.event || ta.notifies != tb.notifies)
      return false;
    if (ta.guard.has_value() != tb.guard.has_value()) return false;
    if (ta.guard && !eq(*ta.guard, *tb.guard)) return false;
    if (ta.commands.size() != tb.commands.size()) return false;
    for (std::size_t j = 0; j < ta.commands.size(); ++j)
      if (ta.commands[j].part != tb.commands[j].part ||
          ta.commands[j].event != tb.commands[j].event)
        return false;
  }
  return true;
}

bool eq(const std::vector<BindingDecl>& a, const std::vector<BindingDecl>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].slot != b[i].slot || a[i].target != b[i].target ||
        !eq(a[i].children, b[i].children))
      return false;
  return true;
}

bool eq(const Property& a, const Property& b) {
  return a.kind == b.kind && eq(a.pattern, b.pattern) && a.slot == b.slot && a.state == b.state;
}

}  // namespace

bool same_structure(const SourceModel& a, const SourceModel& b) {
  if (a.model.interfaces.size() != b.model.interfaces.size()) return false;
  for (std::size_t i = 0; i < a.model.interfaces.size(); ++i)
    if (!eq(a.model.interfaces[i], b.model.interfaces[i])) return false;
  if (a.model.systems.size() != b.model.systems.size()) return false;
  for (std::size_t i = 0; i < a.model.systems.size(); ++i)
    if (!eq(a.model.systems[i], b.model.systems[i])) return false;
  if (a.holarchies.size() != b.holarchies.size()) return false;
  for (std::size_t i = 0; i < a.holarchies.size(); ++i)
    if (a.holarchies[i].name != b.holarchies[i].name ||
        a.holarchies[i].root_system != b.holarchies[i].root_system ||
        !eq(a.holarchies[i].bindings, b.holarchies[i].bindings))
      return false;
  if (a.properties.size() != b.properties.size()) return false;
  for (std::size_t i = 0; i < a.properties.size(); ++i)
    if (!eq(a.properties[i].property, b.properties[i].property)) return false;
  return true;
}

}  // namespace pws
