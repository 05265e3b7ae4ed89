#include "pws/verify.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "json.hpp"

namespace pws {

namespace {

using Json = nlohmann::ordered_json;

std::uint64_t fnv1a(const std::string& s, std::uint64_t h = 1469598103934665603ULL) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

Status validate_property(const AssemblyView& view, const Property& p) {
  if (p.kind == PropertyKind::Leaves) {
    auto it = view.slot_of.find(p.slot);
    if (it == view.slot_of.end())
      return Status::fail("unknown-slot", "unknown slot '" + p.slot + "'");
    if (!view.parts[it->second]->has_state(p.state))
      return Status::fail("unknown-state", "interface '" + view.parts[it->second]->name +
                                               "' has no state '" + p.state + "'");
    return Status::success();
  }
  for (const auto& clause : p.pattern.clauses) {
    for (const auto& atom : clause.atoms) {
      auto it = view.slot_of.find(atom.slot);
      if (it == view.slot_of.end())
        return Status::fail("unknown-slot", "unknown slot '" + atom.slot + "'");
      if (atom.state != "*" && !view.parts[it->second]->has_state(atom.state))
        return Status::fail("unknown-state", "interface '" + view.parts[it->second]->name +
                                                 "' has no state '" + atom.state + "'");
    }
  }
  return Status::success();
}

}  // namespace

std::string PropertyVerdict::describe() const {
  if (holds) return property.text() + ": holds";
  std::string out = property.text() + ": fails";
  if (witness)
    out += " (witness: " + witness->first + " " + format_configuration(witness->second) + ")";
  if (!cycle.empty()) {
    out += " (cycle:";
    for (const auto& s : cycle) out += " " + s;
    out += ")";
  }
  if (trapped) out += " (trapped: " + *trapped + ")";
  return out;
}

bool VerificationReport::all_hold() const {
  return std::all_of(properties.begin(), properties.end(),
                     [](const PropertyVerdict& v) { return v.holds; });
}

bool VerificationReport::clean() const {
  return std::none_of(wellformed.begin(), wellformed.end(), [](const SemDiagnostic& d) {
    return d.severity == SemDiagnostic::Severity::Error;
  });
}

PropertyVerdict check_init(const AssemblyView& view, const SemanticsMap& sem,
                           const Property& property) {
  PropertyVerdict v;
  v.property = property;
  const std::string& initial = view.system->initial_whole;
  const ConfigurationSet& s = sem.at(initial);
  if (s.empty()) return v;  // fails: no initial semantics at all
  for (const Configuration& c : s) {
    if (!pattern_matches(property.pattern, c, view.slot_of)) {
      v.witness = {initial, c};
      return v;
    }
  }
  v.holds = true;
  return v;
}

PropertyVerdict check_never(const AssemblyView& view, const SemanticsMap& sem,
                            const Property& property) {
  PropertyVerdict v;
  v.property = property;
  for (const auto& state : sem.order) {
    for (const Configuration& c : sem.at(state)) {
      if (pattern_matches(property.pattern, c, view.slot_of)) {
        v.witness = {state, c};
        return v;
      }
    }
  }
  v.holds = true;
  return v;
}

PropertyVerdict check_leaves(const AssemblyView& view, const SemanticsMap& sem,
                             const Property& property) {
  PropertyVerdict v;
  v.property = property;
  const PwsSystem& sys = *view.system;
  int idx = view.slot_of.count(property.slot) ? view.slot_of.at(property.slot) : -1;

  std::set<std::string> region;
  for (const auto& state : sem.order)
    for (const Configuration& c : sem.at(state))
      if (idx >= 0 && c[idx] == property.state) {
        region.insert(state);
        break;
      }

  // A state of the region with no way out at all traps the slot forever.
  for (const auto& state : sem.order) {
    if (region.count(state) && sys.outgoing(state).empty()) {
      v.trapped = state;
      return v;
    }
  }

  // Cycle detection restricted to region-internal edges.
  std::map<std::string, int> color;  // 0 white, 1 gray, 2 black
  std::vector<std::string> stack;
  std::function<bool(const std::string&)> dfs = [&](const std::string& s) {
    color[s] = 1;
    stack.push_back(s);
    for (const WholeTransition* t : sys.outgoing(s)) {
      if (!region.count(t->target)) continue;
      if (color[t->target] == 1) {
        auto it = std::find(stack.begin(), stack.end(), t->target);
        v.cycle.assign(it, stack.end());
        v.cycle.push_back(t->target);
        return true;
      }
      if (color[t->target] == 0 && dfs(t->target)) return true;
    }
    stack.pop_back();
    color[s] = 2;
    return false;
  };
  for (const auto& state : sem.order)
    if (region.count(state) && color[state] == 0 && dfs(state)) return v;

  v.holds = true;
  return v;
}

std::vector<SemDiagnostic> check_wellformed(const AssemblyView& view,
                                            const SemanticsResult& semantics) {
  std::vector<SemDiagnostic> out = semantics.diagnostics;
  const PwsSystem& sys = *view.system;
  for (const auto& state : sys.whole_states) {
    const ConfigurationSet& sem = semantics.map.at(state);
    if (sem.empty()) continue;
    auto outgoing = sys.outgoing(state);
    if (outgoing.empty()) continue;
    bool feasible = false;
    for (const WholeTransition* t : outgoing) {
      ConfigurationSet pre = guard_filter(view, sem, t->guard);
      if (!trigger_feasible(view, pre, t->trigger).kept.empty()) {
        feasible = true;
        break;
      }
    }
    if (!feasible)
      out.push_back({SemDiagnostic::Severity::Warning, "dead-whole-state", {},
                     "no transition out of " + state + " is feasible from its semantics"});
  }
  return out;
}

VerificationReport verify(const AssemblyView& view, const std::vector<Property>& properties) {
  VerificationReport report;
  report.system = view.system->name;
  SemanticsResult sem = compute_semantics(view);
  report.stats = sem.stats;
  report.wellformed = check_wellformed(view, sem);

  for (const Property& p : properties) {
    Status valid = validate_property(view, p);
    if (!valid.ok()) {
      PropertyVerdict v;
      v.property = p;
      v.trapped.reset();
      v.holds = false;
      v.witness.reset();
      report.properties.push_back(std::move(v));
      report.wellformed.push_back({SemDiagnostic::Severity::Error, valid.err->code, {},
                                   p.text() + ": " + valid.err->message});
      continue;
    }
    switch (p.kind) {
      case PropertyKind::Init:
        report.properties.push_back(check_init(view, sem.map, p));
        break;
      case PropertyKind::Never:
        report.properties.push_back(check_never(view, sem.map, p));
        break;
      case PropertyKind::Leaves:
        report.properties.push_back(check_leaves(view, sem.map, p));
        break;
    }
  }
  return report;
}

std::uint64_t interface_shape_hash(const StateInterface& itf) {
  std::vector<std::string> parts;
  std::vector<std::string> states = itf.states;
  std::sort(states.begin(), states.end());
  for (const auto& s : states) parts.push_back("q:" + s);
  parts.push_back("i:" + itf.initial);
  std::vector<std::string> edges;
  for (const auto& t : itf.transitions) {
    std::string e = "e:" + t.source + ">" + t.target;
    e += t.kind == TriggerKind::Command ? "!c:" + t.event : "!i";
    for (const auto& n : t.notifies) e += "^" + n;
    edges.push_back(std::move(e));
  }
  std::sort(edges.begin(), edges.end());
  parts.insert(parts.end(), edges.begin(), edges.end());
  std::uint64_t h = fnv1a("interface-shape");
  for (const auto& p : parts) h = fnv1a(p + ";", h);
  return h;
}

namespace {

// Canonical encoding of a holon definition for cache keying. Unlike the
// shape hash this covers the full definition, ids and guards included, since
// witnesses in a cached report reference them.
std::string canonical_system(const PwsSystem& sys) {
  std::ostringstream out;
  out << "system " << sys.name << "\n";
  for (const auto& s : sys.whole_states) out << "q " << s << "\n";
  out << "init " << sys.initial_whole << "\n";
  for (const auto& slot : sys.assembly) {
    out << "slot " << slot.id << " " << slot.interface_name;
    if (slot.initial_override) out << " init " << *slot.initial_override;
    out << "\n";
  }
  for (const auto& t : sys.whole_transitions) {
    out << "t " << t.id << " " << t.source << " " << t.target << " ";
    switch (t.trigger.kind) {
      case WholeTriggerKind::ExternalCommand:
        out << "on " << t.trigger.event;
        break;
      case WholeTriggerKind::PartNotification:
        out << "on " << t.trigger.part << "." << t.trigger.event;
        break;
      case WholeTriggerKind::Internal:
        out << "internal " << t.trigger.event;
        break;
    }
    if (t.guard) out << " [" << format_pattern(*t.guard) << "]";
    for (const auto& c : t.commands) out << " do " << c.part << "." << c.event;
    for (const auto& n : t.notifies) out << " notify " << n;
    out << "\n";
  }
  return out.str();
}

}  // namespace

std::map<std::string, VerificationReport> verify_holarchy(
    const Holarchy& holarchy, const std::map<std::string, std::vector<Property>>& properties,
    VerifyCache* cache) {
  std::map<std::string, VerificationReport> reports;
  auto nodes = holarchy.system_nodes();
  // Children before parents.
  std::reverse(nodes.begin(), nodes.end());

  for (const auto& [path, node] : nodes) {
    static const std::vector<Property> no_props;
    auto pit = properties.find(path);
    const std::vector<Property>& props = pit == properties.end() ? no_props : pit->second;

    std::uint64_t key = fnv1a(canonical_system(*node->system));
    for (const auto& child : node->children) {
      key = fnv1a("child;", key);
      std::uint64_t shape = interface_shape_hash(child->interface_seen_by_parent());
      key = fnv1a(std::to_string(shape) + ":" + child->effective_initial(), key);
    }
    for (const auto& p : props) key = fnv1a("prop:" + p.text(), key);

    if (cache) {
      auto hit = cache->entries.find(key);
      if (hit != cache->entries.end()) {
        ++cache->hits;
        reports[path] = hit->second;
        continue;
      }
      ++cache->misses;
    }
    VerificationReport report = verify(holarchy.view_of(*node), props);
    if (cache) cache->entries[key] = report;
    reports[path] = std::move(report);
  }
  return reports;
}

std::string report_text(const VerificationReport& report, bool color) {
  const char* green = color ? "\033[32m" : "";
  const char* red = color ? "\033[31m" : "";
  const char* reset = color ? "\033[0m" : "";
  std::ostringstream out;
  out << "system " << report.system << ": " << report.stats.whole_states << " whole states, "
      << report.stats.configurations << " configurations, " << report.stats.iterations
      << " iterations\n";
  for (const auto& d : report.wellformed) {
    out << (d.severity == SemDiagnostic::Severity::Error ? "error: " : "warning: ");
    if (!d.transition_id.empty()) out << "[" << d.transition_id << "] ";
    out << d.message << "\n";
  }
  for (const auto& v : report.properties) {
    std::string line = v.describe();
    auto colon = line.find(": ");
    out << line.substr(0, colon + 2) << (v.holds ? green : red) << line.substr(colon + 2) << reset
        << "\n";
  }
  return out.str();
}

std::string report_json(const VerificationReport& report) {
  Json j;
  j["system"] = report.system;
  j["stats"] = {{"whole_states", report.stats.whole_states},
                {"configurations", report.stats.configurations},
                {"iterations", report.stats.iterations},
                {"arity", report.stats.arity}};
  j["wellformed"] = Json::array();
  for (const auto& d : report.wellformed) {
    Json e;
    e["severity"] = d.severity == SemDiagnostic::Severity::Error ? "error" : "warning";
    e["code"] = d.code;
    if (!d.transition_id.empty()) e["transition"] = d.transition_id;
    e["message"] = d.message;
    j["wellformed"].push_back(std::move(e));
  }
  j["properties"] = Json::array();
  for (const auto& v : report.properties) {
    Json e;
    e["name"] = v.property.text();
    e["verdict"] = v.holds ? "holds" : "fails";
    if (v.witness) {
      e["witness"] = {{"state", v.witness->first}, {"configuration", v.witness->second}};
    }
    if (!v.cycle.empty()) e["cycle"] = v.cycle;
    if (v.trapped) e["trapped"] = *v.trapped;
    j["properties"].push_back(std::move(e));
  }
  return j.dump(2) + "\n";
}

}  // namespace pws
