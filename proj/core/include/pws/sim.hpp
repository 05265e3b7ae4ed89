#pragma once

#include <deque>

#include "pws/compose.hpp"

// Deterministic execution of a bound holarchy. Events flow asymmetrically:
// commands go exactly one level down, notifications bubble exactly one level
// up. An injected internal event is processed as one run-to-completion
// macro-step: the matching transition fires, its command list is dispatched
// synchronously depth-first, and emitted notifications are appended to a
// FIFO and consumed until the cascade dies out. The trace records the
// dispatched events, in processing order.

namespace pws {

enum class Direction { CommandDown, NotificationUp, ExternalIn, InternalFired };

std::string direction_name(Direction d);

struct TraceEvent {
  int seq = 0;
  Direction direction = Direction::InternalFired;
  std::string path;  // "/" for the root
  EventName event;
};

using Trace = std::vector<TraceEvent>;

// One line per event: "seq \t direction \t path \t event".
std::string trace_text(const Trace& trace);
std::string trace_json(const Trace& trace);

struct QueuedEvent {
  std::string path;
  EventName event;
  Direction direction = Direction::InternalFired;
};

class Runtime {
 public:
  explicit Runtime(const Holarchy& holarchy);

  // Computes per-holon semantics once; after every macro-step the concrete
  // configuration of each holon must lie in sem(its current whole state).
  void enable_semantics_assertions();

  // Enqueues an internal event at the addressed node. The event must be an
  // internal trigger of some transition there; processing is deferred.
  Status inject(const std::string& path, const EventName& internal_event);
  // Enqueues an external command for the root whole.
  Status inject_external(const EventName& command);

  // Processes the front pending event and the whole cascade it spawns.
  Status step();

  bool quiescent() const { return pending_.empty(); }
  std::size_t pending_count() const { return pending_.size(); }
  const Trace& trace() const { return trace_; }
  const std::string& state_at(const std::string& path) const;

 private:
  const HolarchyNode* resolve(const std::string& path) const;
  std::string parent_path(const std::string& path) const;
  Configuration config_of(const std::string& path, const HolarchyNode& node) const;
  Status process(std::deque<QueuedEvent>& cascade, const QueuedEvent& ev);
  Status fire_whole(std::deque<QueuedEvent>& cascade, const std::string& path,
                    const HolarchyNode& node, const WholeTransition& t);
  Status select_and_fire(std::deque<QueuedEvent>& cascade, const std::string& path,
                         const HolarchyNode& node, WholeTriggerKind kind,
                         const std::string& part, const EventName& event, bool required);
  void record(Direction d, const std::string& path, const EventName& event);
  Status check_conformance() const;

  const Holarchy* holarchy_;
  std::map<std::string, std::string> state_;  // node path -> current state
  std::deque<QueuedEvent> pending_;
  Trace trace_;
  std::map<std::string, SemanticsMap> semantics_;  // system node path -> sem
  bool assert_semantics_ = false;
};

struct Injection {
  std::string path;
  EventName event;
  bool external = false;
};

// Applies the injections in order, stepping to quiescence after each.
Expected<Trace> run(const Holarchy& holarchy, const std::vector<Injection>& script,
                    bool assert_semantics = false);

// Script lines: "<path> <event>" for internal injections ("/" addresses the
// root), "external <event>" for a root command. '#' comments.
Expected<std::vector<Injection>> parse_script(const std::string& text);

}  // namespace pws
