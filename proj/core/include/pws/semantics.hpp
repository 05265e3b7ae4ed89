#pragma once

#include "pws/model.hpp"

// State semantics of a whole automaton: for every whole state S, the exact
// set of assembly configurations the parts can be in while the whole is in S.
// Computed as the least fixpoint of
//
//   sem(initial)  >= { tuple of part initial states }
//   sem(target t) >= post(t) = transf(update(feasible(sem(source t) /\ G)), l)
//
// where feasible/update handle notification triggers (the notifying part is
// moved across its emitting transition), G is the transition guard and l its
// command list. The lattice of semantics maps is finite and the transfer
// function monotone, so a worklist iteration terminates; the pop count is
// bounded by |whole states| * prod |part states| + 1.

namespace pws {

// A whole system together with the interfaces its slots are bound to (the
// declared interfaces, or extracted child interfaces inside a holarchy).
struct AssemblyView {
  const PwsSystem* system = nullptr;
  std::vector<const StateInterface*> parts;  // aligned with system->assembly
  std::vector<std::string> initials;         // effective initial per slot
  std::map<std::string, int> slot_of;

  int arity() const { return static_cast<int>(parts.size()); }

  // Binds every slot to its declared interface.
  static Expected<AssemblyView> bind_declared(const Model& model, const PwsSystem& sys);
};

struct SemDiagnostic {
  enum class Severity { Error, Warning };
  Severity severity = Severity::Error;
  std::string code;  // command-not-enabled, unknown-notification, unreachable-whole-state
  std::string transition_id;
  std::string message;
};

struct SemStats {
  int whole_states = 0;
  std::size_t configurations = 0;   // sum of |sem(S)| over all S
  std::size_t iterations = 0;       // worklist pops
  std::size_t iteration_bound = 0;  // |Q_W| * prod |Q_i| + 1, saturated
  int arity = 0;                    // tuple width touched during computation
};

struct SemanticsResult {
  SemanticsMap map;
  std::vector<SemDiagnostic> diagnostics;
  SemStats stats;
  bool clean() const;  // no error-severity diagnostics
};

// Tuple of the initial states of each slot, in slot order.
Configuration initial_configuration(const AssemblyView& view);

// Applies a command list to every configuration of the set. A configuration
// whose commanded part has no enabled transition for the command is reported
// through diags (never silently ignored) and dropped from the result.
ConfigurationSet transf(const AssemblyView& view, const ConfigurationSet& prop,
                        const std::vector<CommandAction>& commands,
                        std::vector<SemDiagnostic>* diags = nullptr,
                        const std::string& transition_id = {});

struct TriggerFilter {
  ConfigurationSet kept;     // configurations from which the trigger can fire
  ConfigurationSet updated;  // kept, with the notifying part moved
};

// For a part-notification trigger, keeps only configurations where the part
// has an enabled transition emitting the notification and moves the part
// across it (all such transitions, if several). External-command and
// internal triggers filter nothing and move nothing.
TriggerFilter trigger_feasible(const AssemblyView& view, const ConfigurationSet& prop,
                               const WholeTrigger& trigger,
                               std::vector<SemDiagnostic>* diags = nullptr,
                               const std::string& transition_id = {});

// post(t) from the current approximation of sem(source(t)).
ConfigurationSet post(const AssemblyView& view, const WholeTransition& t,
                      const ConfigurationSet& sem_source,
                      std::vector<SemDiagnostic>* diags = nullptr);

SemanticsResult compute_semantics(const AssemblyView& view);

// Guard filter: configurations of the set matching the pattern (absent
// pattern keeps everything).
ConfigurationSet guard_filter(const AssemblyView& view, const ConfigurationSet& prop,
                              const std::optional<GuardPattern>& guard);

// Stable dump: one line per whole state in declaration order,
// "S: {(q1,...,qN), ...}" with configurations sorted lexicographically.
std::string format_semantics(const SemanticsMap& map);

}  // namespace pws
