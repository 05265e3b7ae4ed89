#include "pws/semantics.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <tuple>

namespace pws {

bool SemanticsResult::clean() const {
  for (const auto& d : diagnostics)
    if (d.severity == SemDiagnostic::Severity::Error) return false;
  return true;
}

Expected<AssemblyView> AssemblyView::bind_declared(const Model& model, const PwsSystem& sys) {
  AssemblyView view;
  view.system = &sys;
  for (std::size_t i = 0; i < sys.assembly.size(); ++i) {
    const PartSlot& slot = sys.assembly[i];
    const StateInterface* itf = model.find_interface(slot.interface_name);
    if (!itf)
      return Error{"unknown-interface", "slot '" + slot.id + "' of system '" + sys.name +
                                            "' references undefined interface '" +
                                            slot.interface_name + "'"};
    view.parts.push_back(itf);
    view.initials.push_back(slot.initial_override.value_or(itf->initial));
    view.slot_of[slot.id] = static_cast<int>(i);
  }
  return view;
}

Configuration initial_configuration(const AssemblyView& view) { return view.initials; }

namespace {

// Deduplicates diagnostics produced while the fixpoint revisits transitions.
class DiagSink {
 public:
  explicit DiagSink(std::vector<SemDiagnostic>* out) : out_(out) {}

  void command_not_enabled(const std::string& tid, const Configuration& c,
                           const CommandAction& cmd) {
    if (!out_) return;
    if (!seen_.insert(std::make_tuple(tid, c, cmd.part, cmd.event)).second) return;
    out_->push_back({SemDiagnostic::Severity::Error, "command-not-enabled", tid,
                     "command " + cmd.part + "." + cmd.event + " not enabled at " +
                         format_configuration(c)});
  }

  void unknown_notification(const std::string& tid, const std::string& part,
                            const EventName& event) {
    if (!out_) return;
    if (!seen_.insert(std::make_tuple(tid, Configuration{}, part, event)).second) return;
    out_->push_back({SemDiagnostic::Severity::Error, "unknown-notification", tid,
                     "part " + part + " never emits notification '" + event + "'"});
  }

 private:
  std::vector<SemDiagnostic>* out_;
  std::set<std::tuple<std::string, Configuration, std::string, std::string>> seen_;
};

}  // namespace

ConfigurationSet transf(const AssemblyView& view, const ConfigurationSet& prop,
                        const std::vector<CommandAction>& commands,
                        std::vector<SemDiagnostic>* diags, const std::string& transition_id) {
  if (commands.empty()) return prop;
  DiagSink sink(diags);
  ConfigurationSet out;
  for (const Configuration& c : prop) {
    Configuration next = c;
    bool enabled = true;
    // At most one command per slot, so applying in list order equals the
    // simultaneous substitution.
    for (const auto& cmd : commands) {
      auto it = view.slot_of.find(cmd.part);
      if (it == view.slot_of.end()) {
        sink.command_not_enabled(transition_id, c, cmd);
        enabled = false;
        break;
      }
      int idx = it->second;
      const InterfaceTransition* tr = view.parts[idx]->command_from(next[idx], cmd.event);
      if (!tr) {
        sink.command_not_enabled(transition_id, c, cmd);
        enabled = false;
        break;
      }
      next[idx] = tr->target;
    }
    if (enabled) out.insert(std::move(next));
  }
  return out;
}

TriggerFilter trigger_feasible(const AssemblyView& view, const ConfigurationSet& prop,
                               const WholeTrigger& trigger, std::vector<SemDiagnostic>* diags,
                               const std::string& transition_id) {
  if (trigger.kind != WholeTriggerKind::PartNotification) return {prop, prop};

  TriggerFilter out;
  auto it = view.slot_of.find(trigger.part);
  if (it == view.slot_of.end()) return out;
  int idx = it->second;
  const StateInterface& itf = *view.parts[idx];

  if (!itf.emits_anywhere(trigger.event)) {
    DiagSink sink(diags);
    sink.unknown_notification(transition_id, trigger.part, trigger.event);
    return out;
  }

  for (const Configuration& c : prop) {
    auto emitters = itf.emitters_from(c[idx], trigger.event);
    if (emitters.empty()) continue;
    out.kept.insert(c);
    for (const InterfaceTransition* tr : emitters) {
      Configuration moved = c;
      moved[idx] = tr->target;
      out.updated.insert(std::move(moved));
    }
  }
  return out;
}

ConfigurationSet guard_filter(const AssemblyView& view, const ConfigurationSet& prop,
                              const std::optional<GuardPattern>& guard) {
  if (!guard) return prop;
  ConfigurationSet out;
  for (const Configuration& c : prop)
    if (pattern_matches(*guard, c, view.slot_of)) out.insert(c);
  return out;
}

ConfigurationSet post(const AssemblyView& view, const WholeTransition& t,
                      const ConfigurationSet& sem_source, std::vector<SemDiagnostic>* diags) {
  ConfigurationSet pre = guard_filter(view, sem_source, t.guard);
  if (pre.empty()) return {};
  TriggerFilter filtered = trigger_feasible(view, pre, t.trigger, diags, t.id);
  return transf(view, filtered.updated, t.commands, diags, t.id);
}

SemanticsResult compute_semantics(const AssemblyView& view) {
  const PwsSystem& sys = *view.system;
  SemanticsResult result;
  result.map.order = sys.whole_states;
  for (const auto& s : sys.whole_states) result.map.entries[s];

  // |Q_W| * prod |Q_i| + 1, saturated on overflow.
  std::size_t product = 1;
  for (const auto* itf : view.parts) {
    std::size_t n = std::max<std::size_t>(1, itf->states.size());
    if (product > SIZE_MAX / n)
      product = SIZE_MAX;
    else
      product *= n;
  }
  std::size_t bound = sys.whole_states.size();
  if (bound != 0 && product > (SIZE_MAX - 1) / bound)
    bound = SIZE_MAX;
  else
    bound = bound * product + 1;
  result.stats.iteration_bound = bound;
  result.stats.whole_states = static_cast<int>(sys.whole_states.size());
  result.stats.arity = view.arity();

  if (!sys.has_whole_state(sys.initial_whole)) return result;

  // Base case enters the fixpoint as a virtual incoming transition carrying
  // the tuple of initial part states.
  result.map.entries[sys.initial_whole].insert(initial_configuration(view));

  std::deque<std::string> worklist{sys.initial_whole};
  std::set<std::string> queued{sys.initial_whole};

  while (!worklist.empty()) {
    std::string s = worklist.front();
    worklist.pop_front();
    queued.erase(s);
    ++result.stats.iterations;

    const ConfigurationSet& from = result.map.entries[s];
    for (const WholeTransition* t : sys.outgoing(s)) {
      ConfigurationSet image = post(view, *t, from, &result.diagnostics);
      if (image.empty()) continue;
      ConfigurationSet& dest = result.map.entries[t->target];
      bool grew = false;
      for (auto& c : image) grew |= dest.insert(c).second;
      if (grew && queued.insert(t->target).second) worklist.push_back(t->target);
    }
  }

  assert(result.stats.iterations <= result.stats.iteration_bound);

  for (const auto& s : sys.whole_states) {
    const ConfigurationSet& sem = result.map.entries[s];
    result.stats.configurations += sem.size();
    if (sem.empty())
      result.diagnostics.push_back({SemDiagnostic::Severity::Warning, "unreachable-whole-state",
                                    {},
                                    "whole state " + s + " is unreachable (empty semantics)"});
  }
  return result;
}

std::string format_semantics(const SemanticsMap& map) {
  std::string out;
  for (const auto& s : map.order) out += s + ": " + format_configuration_set(map.at(s)) + "\n";
  return out;
}

}  // namespace pws
