#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

// Core domain types for part-whole systems: state interfaces (the "part"
// view), whole automata over an assembly of part slots, configurations and
// configuration sets, and the declaration forms shared by the DSL.
//
// All types here are plain values; once validated they are treated as
// immutable and may be shared freely across threads.

namespace pws {

// Position of a declaration in its source file. line == 0 means the object
// was built in memory rather than parsed.
struct SourceSpan {
  int line = 0;
  int col = 0;
  bool known() const { return line > 0; }
};

struct Error {
  std::string code;
  std::string message;
  SourceSpan span{};
};

template <typename T>
class Expected {
 public:
  Expected(T value) : v_(std::move(value)) {}
  Expected(Error err) : v_(std::move(err)) {}
  bool ok() const { return std::holds_alternative<T>(v_); }
  explicit operator bool() const { return ok(); }
  const T& value() const { return std::get<T>(v_); }
  T& value() { return std::get<T>(v_); }
  const Error& error() const { return std::get<Error>(v_); }

 private:
  std::variant<T, Error> v_;
};

// Success-or-single-error result for operations without a payload.
struct Status {
  std::optional<Error> err;
  bool ok() const { return !err.has_value(); }
  static Status success() { return {}; }
  static Status fail(Error e) { return Status{std::move(e)}; }
  static Status fail(std::string code, std::string message, SourceSpan span = {}) {
    return Status{Error{std::move(code), std::move(message), span}};
  }
};

using EventName = std::string;

// [A-Za-z_][A-Za-z0-9_]*
bool is_identifier(const std::string& s);

enum class TriggerKind { Command, Internal };

struct InterfaceTransition {
  std::string id;
  std::string source;
  std::string target;
  TriggerKind kind = TriggerKind::Command;
  EventName event;
  std::vector<EventName> notifies;
  SourceSpan span{};
};

// A flat state machine as seen from outside a system: states, transitions
// triggered by commands from the owning whole or by internal events, and the
// notifications each transition emits upward.
struct StateInterface {
  std::string name;
  std::vector<std::string> states;
  std::string initial;
  std::vector<InterfaceTransition> transitions;
  SourceSpan span{};

  bool has_state(const std::string& q) const;
  // delta(q, e): the unique command-triggered transition out of q, if any.
  const InterfaceTransition* command_from(const std::string& q, const EventName& e) const;
  const InterfaceTransition* internal_from(const std::string& q, const EventName& e) const;
  // Transitions out of q that emit notification n.
  std::vector<const InterfaceTransition*> emitters_from(const std::string& q,
                                                        const EventName& n) const;
  bool emits_anywhere(const EventName& n) const;
  bool has_internal_trigger(const EventName& e) const;
  bool has_command_trigger(const EventName& e) const;
};

enum class WholeTriggerKind { ExternalCommand, PartNotification, Internal };

struct WholeTrigger {
  WholeTriggerKind kind = WholeTriggerKind::Internal;
  std::string part;  // PartNotification only
  EventName event;
};

struct CommandAction {
  std::string part;
  EventName event;
};

// Guards and INIT/NEVER patterns: a disjunction of conjunctive clauses over
// slot=state atoms. state == "*" is a wildcard; slots not named in a clause
// are unconstrained. A pattern with no clauses matches nothing.
struct GuardAtom {
  std::string slot;
  std::string state;
};
struct GuardClause {
  std::vector<GuardAtom> atoms;
};
struct GuardPattern {
  std::vector<GuardClause> clauses;
};

struct WholeTransition {
  std::string id;
  std::string source;
  std::string target;
  WholeTrigger trigger;
  std::optional<GuardPattern> guard;  // absent = any configuration
  std::vector<CommandAction> commands;
  std::vector<EventName> notifies;
  SourceSpan span{};
};

struct PartSlot {
  std::string id;
  std::string interface_name;
  // Starting state of this slot when it differs from the interface initial.
  std::optional<std::string> initial_override;
  SourceSpan span{};
};

// A whole automaton plus its ordered assembly of part slots. The type has no
// constructor for part-to-part communication; parts are reachable only
// through whole transitions.
struct PwsSystem {
  std::string name;
  std::vector<std::string> whole_states;
  std::string initial_whole;
  std::vector<WholeTransition> whole_transitions;
  std::vector<PartSlot> assembly;
  SourceSpan span{};

  bool has_whole_state(const std::string& s) const;
  const PartSlot* find_slot(const std::string& id) const;
  int slot_index(const std::string& id) const;  // -1 when unknown
  std::vector<const WholeTransition*> outgoing(const std::string& s) const;
  std::vector<const WholeTransition*> incoming(const std::string& s) const;
};

struct Model {
  std::vector<StateInterface> interfaces;
  std::vector<PwsSystem> systems;

  const StateInterface* find_interface(const std::string& name) const;
  const PwsSystem* find_system(const std::string& name) const;
};

// A tuple of part states; position i is bound to the i-th declared slot.
using Configuration = std::vector<std::string>;
using ConfigurationSet = std::set<Configuration>;

// sem(S) for every whole state S, in whole-state declaration order.
struct SemanticsMap {
  std::vector<std::string> order;
  std::map<std::string, ConfigurationSet> entries;
  const ConfigurationSet& at(const std::string& s) const;
};

std::string format_configuration(const Configuration& c);
std::string format_configuration_set(const ConfigurationSet& s);
std::string format_pattern(const GuardPattern& p);

// true iff some clause of p is satisfied by c; slot_of maps slot names to
// tuple positions.
bool pattern_matches(const GuardPattern& p, const Configuration& c,
                     const std::map<std::string, int>& slot_of);

// Safety/liveness property over one system.
enum class PropertyKind { Init, Never, Leaves };

struct Property {
  PropertyKind kind = PropertyKind::Init;
  GuardPattern pattern;  // INIT / NEVER
  std::string slot;      // LEAVES
  std::string state;     // LEAVES
  std::string text() const;
};

// Parsed declaration forms that are not part of the validated model proper.
struct PropertyDecl {
  Property property;
  SourceSpan span{};
};

struct BindingDecl {
  std::string slot;
  std::string target;  // system name, or interface name for an explicit leaf
  std::vector<BindingDecl> children;
  SourceSpan span{};
};

struct HolarchyDecl {
  std::string name;
  std::string root_system;
  std::vector<BindingDecl> bindings;
  SourceSpan span{};
};

struct Violation {
  std::string code;
  std::string message;
  std::string where;
  SourceSpan span{};
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

// Checks every structural invariant: name shapes, declared references,
// per-state determinism of command and internal triggers, slot uniqueness,
// guard and command well-formedness. Pure; safe to call repeatedly.
ValidationReport validate_model(const Model& model);

}  // namespace pws
