#include "pws/sim.hpp"

#include <sstream>

#include "json.hpp"

namespace pws {

std::string direction_name(Direction d) {
  switch (d) {
    case Direction::CommandDown: return "CommandDown";
    case Direction::NotificationUp: return "NotificationUp";
    case Direction::ExternalIn: return "ExternalIn";
    case Direction::InternalFired: return "InternalFired";
  }
  return "?";
}

std::string trace_text(const Trace& trace) {
  std::ostringstream out;
  for (const auto& e : trace)
    out << e.seq << "\t" << direction_name(e.direction) << "\t" << e.path << "\t" << e.event
        << "\n";
  return out.str();
}

std::string trace_json(const Trace& trace) {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const auto& e : trace)
    j.push_back({{"seq", e.seq},
                 {"direction", direction_name(e.direction)},
                 {"path", e.path},
                 {"event", e.event}});
  return j.dump(2) + "\n";
}

namespace {

void init_states(const HolarchyNode& node, const std::string& path,
                 std::map<std::string, std::string>& state) {
  state[path] = node.effective_initial();
  if (!node.is_system()) return;
  for (const auto& child : node.children) {
    std::string child_path = path == "/" ? child->slot : path + "/" + child->slot;
    init_states(*child, child_path, state);
  }
}

}  // namespace

Runtime::Runtime(const Holarchy& holarchy) : holarchy_(&holarchy) {
  init_states(holarchy.root_node(), "/", state_);
}

void Runtime::enable_semantics_assertions() {
  assert_semantics_ = true;
  if (semantics_.empty())
    for (const auto& [path, node] : holarchy_->system_nodes())
      semantics_[path] = compute_semantics(holarchy_->view_of(*node)).map;
}

const HolarchyNode* Runtime::resolve(const std::string& path) const {
  return holarchy_->find(path);
}

std::string Runtime::parent_path(const std::string& path) const {
  auto segs = split_path(path);
  if (segs.empty()) return {};
  segs.pop_back();
  return join_path(segs);
}

Configuration Runtime::config_of(const std::string& path, const HolarchyNode& node) const {
  Configuration c;
  for (const auto& child : node.children) {
    std::string child_path = path == "/" ? child->slot : path + "/" + child->slot;
    c.push_back(state_.at(child_path));
  }
  return c;
}

const std::string& Runtime::state_at(const std::string& path) const {
  return state_.at(path == "" ? "/" : path);
}

Status Runtime::inject(const std::string& path, const EventName& internal_event) {
  std::string key = path.empty() ? "/" : join_path(split_path(path));
  const HolarchyNode* node = resolve(key);
  if (!node) return Status::fail("unknown-path", "no node at path '" + path + "'");
  bool defined = false;
  if (node->is_system()) {
    for (const auto& t : node->system->whole_transitions)
      defined |= t.trigger.kind == WholeTriggerKind::Internal && t.trigger.event == internal_event;
  } else {
    defined = node->leaf->has_internal_trigger(internal_event);
  }
  if (!defined)
    return Status::fail("unknown-internal-event", "'" + internal_event +
                                                      "' is not an internal trigger at '" + key +
                                                      "'");
  pending_.push_back({key, internal_event, Direction::InternalFired});
  return Status::success();
}

Status Runtime::inject_external(const EventName& command) {
  const PwsSystem& root = *holarchy_->root_node().system;
  bool defined = false;
  for (const auto& t : root.whole_transitions)
    defined |= t.trigger.kind == WholeTriggerKind::ExternalCommand && t.trigger.event == command;
  if (!defined)
    return Status::fail("unknown-external-event",
                        "'" + command + "' is not an external command of the root whole");
  pending_.push_back({"/", command, Direction::ExternalIn});
  return Status::success();
}

void Runtime::record(Direction d, const std::string& path, const EventName& event) {
  trace_.push_back({static_cast<int>(trace_.size()) + 1, d, path, event});
}

// Fires at most one whole transition matching the trigger; two enabled
// candidates make the run nondeterministic and abort it.
Status Runtime::select_and_fire(std::deque<QueuedEvent>& cascade, const std::string& path,
                                const HolarchyNode& node, WholeTriggerKind kind,
                                const std::string& part, const EventName& event, bool required) {
  const std::string& current = state_.at(path);
  Configuration config = config_of(path, node);
  std::vector<const WholeTransition*> enabled;
  for (const auto& t : node.system->whole_transitions) {
    if (t.source != current || t.trigger.kind != kind || t.trigger.event != event) continue;
    if (kind == WholeTriggerKind::PartNotification && t.trigger.part != part) continue;
    if (t.guard && !pattern_matches(*t.guard, config, holarchy_->view_of(node).slot_of)) continue;
    enabled.push_back(&t);
  }
  if (enabled.size() > 1)
    return Status::fail("ambiguous-firing", "transitions " + enabled[0]->id + " and " +
                                                enabled[1]->id + " both enabled at " + path +
                                                " for '" + event + "'");
  if (enabled.empty()) {
    if (required)
      return Status::fail("command-not-enabled", "command '" + event + "' not enabled at " +
                                                     path + " (state " + current + ")");
    return Status::success();  // unmatched event is discarded
  }
  return fire_whole(cascade, path, node, *enabled[0]);
}

Status Runtime::fire_whole(std::deque<QueuedEvent>& cascade, const std::string& path,
                           const HolarchyNode& node, const WholeTransition& t) {
  state_[path] = t.target;

  for (const auto& cmd : t.commands) {
    std::string child_path = path == "/" ? cmd.part : path + "/" + cmd.part;
    const HolarchyNode* child = nullptr;
    for (const auto& c : node.children)
      if (c->slot == cmd.part) child = c.get();
    if (!child)
      return Status::fail("unknown-slot", "command targets undeclared slot '" + cmd.part + "'");

    record(Direction::CommandDown, child_path, cmd.event);
    if (child->is_system()) {
      Status s = select_and_fire(cascade, child_path, *child,
                                 WholeTriggerKind::ExternalCommand, {}, cmd.event, true);
      if (!s.ok()) return s;
    } else {
      const InterfaceTransition* tr =
          child->leaf->command_from(state_.at(child_path), cmd.event);
      if (!tr)
        return Status::fail("command-not-enabled",
                            "command '" + cmd.event + "' not enabled at " + child_path +
                                " (state " + state_.at(child_path) + ")");
      state_[child_path] = tr->target;
      for (const auto& n : tr->notifies)
        cascade.push_back({child_path, n, Direction::NotificationUp});
    }
  }

  for (const auto& n : t.notifies) {
    if (path == "/")
      record(Direction::NotificationUp, path, n);  // emitted to the environment
    else
      cascade.push_back({path, n, Direction::NotificationUp});
  }
  return Status::success();
}

Status Runtime::process(std::deque<QueuedEvent>& cascade, const QueuedEvent& ev) {
  const HolarchyNode* node = resolve(ev.path);
  if (!node) return Status::fail("unknown-path", "no node at path '" + ev.path + "'");

  switch (ev.direction) {
    case Direction::InternalFired: {
      if (node->is_system())
        return select_and_fire(cascade, ev.path, *node, WholeTriggerKind::Internal, {}, ev.event,
                               false);
      const InterfaceTransition* tr = node->leaf->internal_from(state_.at(ev.path), ev.event);
      if (!tr) return Status::success();  // not enabled in the current state
      state_[ev.path] = tr->target;
      for (const auto& n : tr->notifies)
        cascade.push_back({ev.path, n, Direction::NotificationUp});
      return Status::success();
    }
    case Direction::ExternalIn:
      record(Direction::ExternalIn, ev.path, ev.event);
      return select_and_fire(cascade, ev.path, *node, WholeTriggerKind::ExternalCommand, {},
                             ev.event, false);
    case Direction::NotificationUp: {
      record(Direction::NotificationUp, ev.path, ev.event);
      if (ev.path == "/") return Status::success();  // root notifies the environment
      std::string parent = parent_path(ev.path);
      const HolarchyNode* parent_node = resolve(parent);
      auto segs = split_path(ev.path);
      return select_and_fire(cascade, parent, *parent_node, WholeTriggerKind::PartNotification,
                             segs.back(), ev.event, false);
    }
    case Direction::CommandDown:
      break;  // commands are dispatched synchronously, never queued
  }
  return Status::fail("internal-error", "unexpected queued event direction");
}

Status Runtime::check_conformance() const {
  for (const auto& [path, node] : holarchy_->system_nodes()) {
    auto it = semantics_.find(path);
    if (it == semantics_.end()) continue;
    Configuration config = config_of(path, *node);
    const ConfigurationSet& sem = it->second.at(state_.at(path));
    if (!sem.count(config))
      return Status::fail("sem-conformance",
                          "holon " + path + " in whole state " + state_.at(path) +
                              " reached configuration " + format_configuration(config) +
                              " outside sem = " + format_configuration_set(sem));
  }
  return Status::success();
}

Status Runtime::step() {
  if (pending_.empty()) return Status::fail("empty-queue", "step on an empty event queue");
  std::deque<QueuedEvent> cascade;
  cascade.push_back(pending_.front());
  pending_.pop_front();
  while (!cascade.empty()) {
    QueuedEvent ev = cascade.front();
    cascade.pop_front();
    Status s = process(cascade, ev);
    if (!s.ok()) return s;
  }
  if (assert_semantics_) return check_conformance();
  return Status::success();
}

Expected<Trace> run(const Holarchy& holarchy, const std::vector<Injection>& script,
                    bool assert_semantics) {
  Runtime rt(holarchy);
  if (assert_semantics) rt.enable_semantics_assertions();
  for (const auto& inj : script) {
    Status s = inj.external ? rt.inject_external(inj.event) : rt.inject(inj.path, inj.event);
    if (!s.ok()) return *s.err;
    while (!rt.quiescent()) {
      Status stepped = rt.step();
      if (!stepped.ok()) return *stepped.err;
    }
  }
  return rt.trace();
}

Expected<std::vector<Injection>> parse_script(const std::string& text) {
  std::vector<Injection> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string first, second, extra;
    if (!(ls >> first)) continue;  // blank
    if (first == "external") {
      if (!(ls >> second) || (ls >> extra))
        return Error{"script-error", "expected 'external <event>'", {lineno, 1}};
      out.push_back({"/", second, true});
      continue;
    }
    if (!(ls >> second) || (ls >> extra))
      return Error{"script-error", "expected '<path> <event>'", {lineno, 1}};
    out.push_back({first, second, false});
  }
  return out;
}

}  // namespace pws
