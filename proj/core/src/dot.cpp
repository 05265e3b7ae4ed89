#include "pws/dot.hpp"

#include <sstream>

namespace pws {

namespace {

std::string join(const std::vector<EventName>& events) {
  std::string out;
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (i) out += " ";
    out += events[i];
  }
  return out;
}

}  // namespace

std::string dot_interface(const StateInterface& itf) {
  std::ostringstream out;
  out << "digraph " << itf.name << " {\n";
  out << "  rankdir=LR;\n";
  for (const auto& q : itf.states)
    out << "  \"" << q << "\"" << (q == itf.initial ? " [peripheries=2]" : "") << ";\n";
  for (const auto& t : itf.transitions) {
    std::string label = (t.kind == TriggerKind::Command ? "on " : "internal ") + t.event;
    if (!t.notifies.empty()) label += " notify " + join(t.notifies);
    out << "  \"" << t.source << "\" -> \"" << t.target << "\" [label=\"" << label << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

std::string dot_system(const PwsSystem& sys, const SemanticsMap* sem) {
  std::ostringstream out;
  out << "digraph " << sys.name << " {\n";
  out << "  rankdir=LR;\n";
  for (const auto& q : sys.whole_states) {
    out << "  \"" << q << "\"";
    std::string attrs = q == sys.initial_whole ? "peripheries=2" : "";
    if (sem) {
      if (!attrs.empty()) attrs += " ";
      attrs += "label=\"" + q + "\\n" + format_configuration_set(sem->at(q)) + "\"";
    }
    if (!attrs.empty()) out << " [" << attrs << "]";
    out << ";\n";
  }
  for (const auto& t : sys.whole_transitions) {
    std::string label;
    switch (t.trigger.kind) {
      case WholeTriggerKind::ExternalCommand:
        label = "on " + t.trigger.event;
        break;
      case WholeTriggerKind::PartNotification:
        label = "on " + t.trigger.part + "." + t.trigger.event;
        break;
      case WholeTriggerKind::Internal:
        label = "internal " + t.trigger.event;
        break;
    }
    if (t.guard) label += " [" + format_pattern(*t.guard) + "]";
    if (!t.commands.empty()) {
      label += " do";
      for (const auto& c : t.commands) label += " " + c.part + "." + c.event;
    }
    if (!t.notifies.empty()) label += " notify " + join(t.notifies);
    out << "  \"" << t.source << "\" -> \"" << t.target << "\" [label=\"" << label << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace pws
