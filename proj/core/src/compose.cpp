#include "pws/compose.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace pws {

namespace {

bool name_taken(const StateInterface& itf, const std::string& source, const std::string& name,
                const std::set<std::string>& commands) {
  if (commands.count(name)) return true;
  for (const auto& t : itf.transitions)
    if (t.kind == TriggerKind::Internal && t.source == source && t.event == name) return true;
  return false;
}

}  // namespace

Expected<StateInterface> extract_interface(const PwsSystem& sys) {
  StateInterface itf;
  itf.name = sys.name;
  itf.states = sys.whole_states;
  itf.initial = sys.initial_whole;

  std::set<std::string> commands;
  for (const auto& t : sys.whole_transitions)
    if (t.trigger.kind == WholeTriggerKind::ExternalCommand) commands.insert(t.trigger.event);

  std::set<std::pair<std::string, std::string>> command_keys;
  std::map<std::pair<std::string, std::string>, std::string> first_id;
  for (const auto& t : sys.whole_transitions) {
    InterfaceTransition out;
    out.id = t.id;
    out.source = t.source;
    out.target = t.target;
    out.notifies = t.notifies;
    if (t.trigger.kind == WholeTriggerKind::ExternalCommand) {
      out.kind = TriggerKind::Command;
      out.event = t.trigger.event;
      auto key = std::make_pair(t.source, t.trigger.event);
      if (!command_keys.insert(key).second)
        return Error{"extraction-ambiguity",
                     "transitions " + first_id[key] + " and " + t.id + " from state " + t.source +
                         " share external command '" + t.trigger.event + "'"};
      first_id[key] = t.id;
    } else {
      // Keep the triggering event's name; qualify only on collision.
      out.kind = TriggerKind::Internal;
      std::string name = t.trigger.event;
      if (name_taken(itf, t.source, name, commands) &&
          t.trigger.kind == WholeTriggerKind::PartNotification)
        name = t.trigger.part + "_" + t.trigger.event;
      int suffix = 2;
      std::string candidate = name;
      while (name_taken(itf, t.source, candidate, commands))
        candidate = name + "_" + std::to_string(suffix++);
      out.event = candidate;
    }
    itf.transitions.push_back(std::move(out));
  }
  return itf;
}

namespace {

struct EdgeShape {
  std::string source, target;
  TriggerKind kind;
  std::string command_event;  // empty for internal edges
  std::vector<EventName> notifies;

  auto key() const { return std::tie(source, target, kind, command_event, notifies); }
  bool operator<(const EdgeShape& o) const { return key() < o.key(); }
  bool operator==(const EdgeShape& o) const { return key() == o.key(); }
};

std::vector<EdgeShape> edge_shapes(const StateInterface& itf) {
  std::vector<EdgeShape> out;
  for (const auto& t : itf.transitions)
    out.push_back({t.source, t.target, t.kind,
                   t.kind == TriggerKind::Command ? t.event : std::string{}, t.notifies});
  std::sort(out.begin(), out.end());
  return out;
}

std::string describe_edge(const EdgeShape& e) {
  std::string s = e.source + " -> " + e.target;
  s += e.kind == TriggerKind::Command ? " on " + e.command_event : " internal";
  if (!e.notifies.empty()) {
    s += " notify";
    for (const auto& n : e.notifies) s += " " + n;
  }
  return s;
}

}  // namespace

Status interfaces_match(const StateInterface& expected, const std::string& expected_initial,
                        const StateInterface& actual, const std::string& actual_initial) {
  std::set<std::string> exp_states(expected.states.begin(), expected.states.end());
  std::set<std::string> act_states(actual.states.begin(), actual.states.end());
  if (exp_states != act_states) {
    std::string diff;
    for (const auto& s : exp_states)
      if (!act_states.count(s)) diff += " missing state " + s + ";";
    for (const auto& s : act_states)
      if (!exp_states.count(s)) diff += " extra state " + s + ";";
    return Status::fail("interface-mismatch", "state sets differ:" + diff);
  }
  if (expected_initial != actual_initial)
    return Status::fail("interface-mismatch", "initial state differs: expected " +
                                                  expected_initial + ", got " + actual_initial);

  auto exp_edges = edge_shapes(expected);
  auto act_edges = edge_shapes(actual);
  if (exp_edges != act_edges) {
    std::string diff;
    for (const auto& e : exp_edges)
      if (!std::binary_search(act_edges.begin(), act_edges.end(), e))
        diff += " missing transition [" + describe_edge(e) + "];";
    for (const auto& e : act_edges)
      if (!std::binary_search(exp_edges.begin(), exp_edges.end(), e))
        diff += " extra transition [" + describe_edge(e) + "];";
    if (diff.empty()) diff = " transition multiplicities differ;";
    return Status::fail("interface-mismatch", "transitions differ:" + diff);
  }
  return Status::success();
}

std::string HolarchyNode::effective_initial() const {
  if (system) return system->initial_whole;
  return initial_override.value_or(leaf->initial);
}

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : path) {
    if (c == '/') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::string join_path(const std::vector<std::string>& path) {
  if (path.empty()) return "/";
  std::string out;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) out += "/";
    out += path[i];
  }
  return out;
}

namespace {

// A fresh system node with every slot leaf-bound to its declared interface.
Expected<std::unique_ptr<HolarchyNode>> make_system_node(const Model& model,
                                                         const PwsSystem& sys,
                                                         const std::string& slot) {
  auto node = std::make_unique<HolarchyNode>();
  node->slot = slot;
  node->system = &sys;
  auto extracted = extract_interface(sys);
  if (!extracted.ok()) return extracted.error();
  node->extracted = std::move(extracted.value());
  for (const auto& part : sys.assembly) {
    const StateInterface* itf = model.find_interface(part.interface_name);
    if (!itf)
      return Error{"unknown-interface",
                   "slot '" + part.id + "' references undefined interface '" +
                       part.interface_name + "'"};
    auto child = std::make_unique<HolarchyNode>();
    child->slot = part.id;
    child->leaf = itf;
    child->initial_override = part.initial_override;
    node->children.push_back(std::move(child));
  }
  return node;
}

}  // namespace

Expected<Holarchy> Holarchy::root(const Model& model, const PwsSystem& root_system) {
  Holarchy h;
  h.model_ = &model;
  auto node = make_system_node(model, root_system, "");
  if (!node.ok()) return node.error();
  h.root_ = std::move(node.value());
  return h;
}

const HolarchyNode* Holarchy::find(const std::string& path) const {
  const HolarchyNode* node = root_.get();
  for (const auto& seg : split_path(path)) {
    if (!node->is_system()) return nullptr;
    const HolarchyNode* next = nullptr;
    for (const auto& c : node->children)
      if (c->slot == seg) next = c.get();
    if (!next) return nullptr;
    node = next;
  }
  return node;
}

namespace {

struct SlotLookup {
  HolarchyNode* parent = nullptr;
  HolarchyNode* slot_node = nullptr;
  const PartSlot* decl = nullptr;
  std::vector<const PwsSystem*> ancestors;
};

Expected<SlotLookup> locate_slot(HolarchyNode* root, const std::string& slot_path) {
  auto segments = split_path(slot_path);
  if (segments.empty())
    return Error{"unknown-slot", "binding path must name a slot, got '" + slot_path + "'"};
  SlotLookup out;
  HolarchyNode* node = root;
  out.ancestors.push_back(root->system);
  for (std::size_t i = 0; i < segments.size(); ++i) {
    if (!node->is_system())
      return Error{"unknown-slot", "'" + segments[i - 1] + "' is a leaf, cannot bind inside it"};
    HolarchyNode* next = nullptr;
    for (const auto& c : node->children)
      if (c->slot == segments[i]) next = c.get();
    if (!next)
      return Error{"unknown-slot",
                   "system '" + node->system->name + "' has no slot '" + segments[i] + "'"};
    if (i + 1 == segments.size()) {
      out.parent = node;
      out.slot_node = next;
      out.decl = node->system->find_slot(segments[i]);
      return out;
    }
    if (next->is_system()) out.ancestors.push_back(next->system);
    node = next;
  }
  return Error{"unknown-slot", "unresolved binding path '" + slot_path + "'"};
}

}  // namespace

Status Holarchy::bind(const std::string& slot_path, const PwsSystem& child) {
  auto found = locate_slot(root_.get(), slot_path);
  if (!found.ok()) return Status::fail(found.error());
  SlotLookup& at = found.value();

  for (const PwsSystem* anc : at.ancestors)
    if (anc == &child || anc->name == child.name)
      return Status::fail("cyclic-holarchy",
                          "system '" + child.name + "' is an ancestor of slot '" + slot_path + "'");

  const StateInterface* declared = model_->find_interface(at.decl->interface_name);
  if (!declared)
    return Status::fail("unknown-interface",
                        "slot declares undefined interface '" + at.decl->interface_name + "'");
  std::string expected_initial = at.decl->initial_override.value_or(declared->initial);

  auto node = make_system_node(*model_, child, at.slot_node->slot);
  if (!node.ok()) return Status::fail(node.error());
  Status match = interfaces_match(*declared, expected_initial, node.value()->extracted,
                                  node.value()->extracted.initial);
  if (!match.ok()) {
    Error e = *match.err;
    e.message = "slot '" + slot_path + "': " + e.message;
    return Status::fail(std::move(e));
  }
  *at.slot_node = std::move(*node.value());
  return Status::success();
}

Status Holarchy::bind(const std::string& slot_path, const StateInterface& leaf) {
  auto found = locate_slot(root_.get(), slot_path);
  if (!found.ok()) return Status::fail(found.error());
  SlotLookup& at = found.value();

  const StateInterface* declared = model_->find_interface(at.decl->interface_name);
  if (!declared)
    return Status::fail("unknown-interface",
                        "slot declares undefined interface '" + at.decl->interface_name + "'");
  std::string expected_initial = at.decl->initial_override.value_or(declared->initial);

  Status match = interfaces_match(*declared, expected_initial, leaf,
                                  at.decl->initial_override.value_or(leaf.initial));
  if (!match.ok()) {
    Error e = *match.err;
    e.message = "slot '" + slot_path + "': " + e.message;
    return Status::fail(std::move(e));
  }
  auto node = std::make_unique<HolarchyNode>();
  node->slot = at.slot_node->slot;
  node->leaf = &leaf;
  node->initial_override = at.decl->initial_override;
  *at.slot_node = std::move(*node);
  return Status::success();
}

AssemblyView Holarchy::view_of(const HolarchyNode& node) const {
  AssemblyView view;
  view.system = node.system;
  for (std::size_t i = 0; i < node.children.size(); ++i) {
    const HolarchyNode& child = *node.children[i];
    view.parts.push_back(&child.interface_seen_by_parent());
    view.initials.push_back(child.effective_initial());
    view.slot_of[child.slot] = static_cast<int>(i);
  }
  return view;
}

std::vector<std::pair<std::string, const HolarchyNode*>> Holarchy::system_nodes() const {
  std::vector<std::pair<std::string, const HolarchyNode*>> out;
  std::vector<std::pair<std::vector<std::string>, const HolarchyNode*>> stack{{{}, root_.get()}};
  while (!stack.empty()) {
    auto [path, node] = stack.back();
    stack.pop_back();
    out.emplace_back(join_path(path), node);
    for (auto it = node->children.rbegin(); it != node->children.rend(); ++it) {
      if ((*it)->is_system()) {
        auto child_path = path;
        child_path.push_back((*it)->slot);
        stack.emplace_back(std::move(child_path), it->get());
      }
    }
  }
  return out;
}

namespace {

Status apply_bindings(Holarchy& h, const Model& model, const std::vector<BindingDecl>& bindings,
                      const std::string& prefix) {
  for (const auto& b : bindings) {
    std::string path = prefix.empty() ? b.slot : prefix + "/" + b.slot;
    const PwsSystem* sys = model.find_system(b.target);
    if (sys) {
      Status s = h.bind(path, *sys);
      if (!s.ok()) return s;
      Status rec = apply_bindings(h, model, b.children, path);
      if (!rec.ok()) return rec;
      continue;
    }
    const StateInterface* itf = model.find_interface(b.target);
    if (itf) {
      if (!b.children.empty())
        return Status::fail("interface-mismatch",
                            "leaf binding '" + path + "' cannot have nested bindings", b.span);
      Status s = h.bind(path, *itf);
      if (!s.ok()) return s;
      continue;
    }
    return Status::fail("unknown-reference",
                        "binding target '" + b.target + "' is neither a system nor an interface",
                        b.span);
  }
  return Status::success();
}

}  // namespace

Expected<Holarchy> build_holarchy(const Model& model, const HolarchyDecl& decl) {
  const PwsSystem* root = model.find_system(decl.root_system);
  if (!root)
    return Error{"unknown-reference", "holarchy root system '" + decl.root_system + "' not found",
                 decl.span};
  auto h = Holarchy::root(model, *root);
  if (!h.ok()) return h;
  Status s = apply_bindings(h.value(), model, decl.bindings, "");
  if (!s.ok()) return *s.err;
  return h;
}

Expected<FlattenResult> flatten(const AssemblyView& view, std::size_t max_product_states) {
  const PwsSystem& sys = *view.system;
  FlattenResult result;
  for (const auto& s : sys.whole_states) result.by_state[s];
  if (!sys.has_whole_state(sys.initial_whole)) return result;

  using Pair = std::pair<std::string, Configuration>;
  std::set<Pair> visited;
  std::deque<Pair> frontier;
  Pair init{sys.initial_whole, initial_configuration(view)};
  visited.insert(init);
  frontier.push_back(init);

  while (!frontier.empty()) {
    auto [state, config] = frontier.front();
    frontier.pop_front();
    result.by_state[state].insert(config);

    for (const WholeTransition* t : sys.outgoing(state)) {
      // Guard applies to the configuration before the notifying part moves.
      if (t->guard && !pattern_matches(*t->guard, config, view.slot_of)) continue;

      std::vector<Configuration> after_trigger;
      if (t->trigger.kind == WholeTriggerKind::PartNotification) {
        auto it = view.slot_of.find(t->trigger.part);
        if (it == view.slot_of.end()) continue;
        int idx = it->second;
        for (const InterfaceTransition* tr :
             view.parts[idx]->emitters_from(config[idx], t->trigger.event)) {
          Configuration moved = config;
          moved[idx] = tr->target;
          after_trigger.push_back(std::move(moved));
        }
      } else {
        after_trigger.push_back(config);
      }

      for (const Configuration& mid : after_trigger) {
        Configuration next = mid;
        bool enabled = true;
        for (const auto& cmd : t->commands) {
          int idx = view.slot_of.at(cmd.part);
          const InterfaceTransition* tr = view.parts[idx]->command_from(next[idx], cmd.event);
          if (!tr) {
            enabled = false;
            break;
          }
          next[idx] = tr->target;
        }
        if (!enabled) continue;
        Pair succ{t->target, std::move(next)};
        if (visited.insert(succ).second) {
          if (visited.size() > max_product_states)
            return Error{"cap-exceeded", "product exploration exceeded " +
                                             std::to_string(max_product_states) + " states"};
          frontier.push_back(std::move(succ));
        }
      }
    }
  }
  result.explored = visited.size();
  return result;
}

}  // namespace pws
