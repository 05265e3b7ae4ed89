#pragma once

#include <memory>

#include "pws/semantics.hpp"

namespace pws {

// The whole automaton of a system, stripped to the interface its parents see:
// whole states become interface states, external-command triggers become
// command triggers, notification and internal triggers become internal
// transitions named after the triggering event. Guards and command lists are
// dropped; upward notifications are preserved verbatim.
//
// Fails with "extraction-ambiguity" when two whole transitions from one state
// share an external-command trigger (the interface would not be
// deterministic).
Expected<StateInterface> extract_interface(const PwsSystem& sys);

// Structural interface match used when binding a child into a slot: same
// state set, same initial, and a one-to-one correspondence of transitions on
// (source, target, trigger kind, command event, notifications). Internal
// trigger names and transition ids do not take part in the comparison.
Status interfaces_match(const StateInterface& expected, const std::string& expected_initial,
                        const StateInterface& actual, const std::string& actual_initial);

// A tree of linked systems. Every slot of a system node carries a child node:
// by default the slot's declared interface as a leaf, or a bound child system
// whose extracted interface matches the declared one.
struct HolarchyNode {
  std::string slot;  // empty at the root
  const StateInterface* leaf = nullptr;
  const PwsSystem* system = nullptr;
  std::optional<std::string> initial_override;  // from the parent's slot declaration
  StateInterface extracted;                     // system nodes only
  std::vector<std::unique_ptr<HolarchyNode>> children;  // aligned with assembly slots

  bool is_system() const { return system != nullptr; }
  const StateInterface& interface_seen_by_parent() const { return system ? extracted : *leaf; }
  std::string effective_initial() const;
};

class Holarchy {
 public:
  static Expected<Holarchy> root(const Model& model, const PwsSystem& root_system);

  // slot_path is "a" or "a/b/c" from the root. Binding replaces the default
  // leaf at that slot after checking interface shape and acyclicity.
  Status bind(const std::string& slot_path, const PwsSystem& child);
  Status bind(const std::string& slot_path, const StateInterface& leaf);

  const Model& model() const { return *model_; }
  const HolarchyNode& root_node() const { return *root_; }
  // "/" or "" addresses the root.
  const HolarchyNode* find(const std::string& path) const;

  // Assembly view of a system node: leaf interfaces and extracted child
  // interfaces, with slot initial overrides applied.
  AssemblyView view_of(const HolarchyNode& node) const;

  // (path, node) for every system node, depth-first from the root.
  std::vector<std::pair<std::string, const HolarchyNode*>> system_nodes() const;

 private:
  Holarchy() = default;
  const Model* model_ = nullptr;
  std::unique_ptr<HolarchyNode> root_;
};

// Builds the tree declared by a holarchy block: named bindings elaborated
// recursively, every other slot left as a leaf of its declared interface.
Expected<Holarchy> build_holarchy(const Model& model, const HolarchyDecl& decl);

std::vector<std::string> split_path(const std::string& path);
std::string join_path(const std::vector<std::string>& path);

// Exhaustive product-automaton exploration: BFS over (whole state,
// configuration) pairs applying trigger feasibility, guard and command rules
// operationally. Used as the independent oracle for compute_semantics.
struct FlattenResult {
  std::map<std::string, ConfigurationSet> by_state;  // keyed over all whole states
  std::size_t explored = 0;
};

Expected<FlattenResult> flatten(const AssemblyView& view,
                                std::size_t max_product_states = 1000000);

}  // namespace pws
