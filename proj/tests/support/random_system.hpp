#pragma once

#include <random>
#include <string>
#include <vector>

#include "pws/model.hpp"

// Generates well-formed two-to-three-part systems for property tests:
// every interface deterministic per (state, trigger), every notification
// trigger backed by an actually emitted notification, every command backed
// by some command transition in the target interface. Sizes stay within
// 3 parts x 5 states x 8 whole states so exhaustive flattening is cheap.

namespace testutil {

class SystemGenerator {
 public:
  explicit SystemGenerator(std::mt19937_64& rng) : rng_(rng) {}

  pws::Model generate() {
    pws::Model model;
    int parts = pick(1, 3);
    for (int p = 0; p < parts; ++p) model.interfaces.push_back(make_interface(p));

    pws::PwsSystem sys;
    sys.name = "Sys";
    int whole_states = pick(1, 8);
    for (int i = 0; i < whole_states; ++i) sys.whole_states.push_back("W" + std::to_string(i));
    sys.initial_whole = sys.whole_states[0];
    for (int p = 0; p < parts; ++p) {
      pws::PartSlot slot;
      slot.id = "p" + std::to_string(p);
      slot.interface_name = model.interfaces[p].name;
      if (chance(4)) slot.initial_override = random_state(model.interfaces[p]);
      sys.assembly.push_back(std::move(slot));
    }
    int transitions = pick(0, 10);
    for (int t = 0; t < transitions; ++t)
      sys.whole_transitions.push_back(make_whole_transition(model, sys, t));
    model.systems.push_back(std::move(sys));
    return model;
  }

  pws::WholeTransition make_whole_transition(const pws::Model& model, const pws::PwsSystem& sys,
                                             int index) {
    pws::WholeTransition t;
    t.id = "t" + std::to_string(index);
    t.source = sys.whole_states[pick(0, static_cast<int>(sys.whole_states.size()) - 1)];
    t.target = sys.whole_states[pick(0, static_cast<int>(sys.whole_states.size()) - 1)];

    for (int attempt = 0; attempt < 4; ++attempt) {
      int kind = pick(0, 2);
      if (kind == 0) {
        t.trigger = {pws::WholeTriggerKind::ExternalCommand, "", "x" + std::to_string(pick(0, 2))};
        break;
      }
      if (kind == 1) {
        t.trigger = {pws::WholeTriggerKind::Internal, "", "v" + std::to_string(pick(0, 2))};
        break;
      }
      int slot = pick(0, static_cast<int>(sys.assembly.size()) - 1);
      const pws::StateInterface& itf =
          *model.find_interface(sys.assembly[slot].interface_name);
      std::vector<std::string> emitted;
      for (const auto& tr : itf.transitions)
        for (const auto& n : tr.notifies) emitted.push_back(n);
      if (emitted.empty()) continue;  // retry with another trigger kind
      t.trigger = {pws::WholeTriggerKind::PartNotification, sys.assembly[slot].id,
                   emitted[pick(0, static_cast<int>(emitted.size()) - 1)]};
      break;
    }
    if (t.trigger.event.empty())
      t.trigger = {pws::WholeTriggerKind::Internal, "", "v0"};

    if (chance(3)) t.guard = make_guard(model, sys);

    // At most one command per slot, commands drawn from the interface's
    // actual command alphabet.
    std::vector<int> slots(sys.assembly.size());
    for (std::size_t i = 0; i < slots.size(); ++i) slots[i] = static_cast<int>(i);
    std::shuffle(slots.begin(), slots.end(), rng_);
    int commands = pick(0, static_cast<int>(sys.assembly.size()));
    for (int c = 0; c < commands; ++c) {
      const pws::PartSlot& slot = sys.assembly[slots[c]];
      const pws::StateInterface& itf = *model.find_interface(slot.interface_name);
      std::vector<std::string> alphabet;
      for (const auto& tr : itf.transitions)
        if (tr.kind == pws::TriggerKind::Command) alphabet.push_back(tr.event);
      if (alphabet.empty()) continue;
      t.commands.push_back({slot.id, alphabet[pick(0, static_cast<int>(alphabet.size()) - 1)]});
    }

    if (chance(4)) t.notifies.push_back("u" + std::to_string(pick(0, 1)));
    return t;
  }

 private:
  pws::StateInterface make_interface(int index) {
    pws::StateInterface itf;
    itf.name = "I" + std::to_string(index);
    int states = pick(2, 5);
    for (int i = 0; i < states; ++i) itf.states.push_back("S" + std::to_string(i));
    itf.initial = itf.states[pick(0, states - 1)];

    int id = 0;
    for (const auto& q : itf.states) {
      // Distinct event names per source state keep triggers deterministic.
      std::vector<std::string> commands = {"e0", "e1", "e2", "e3"};
      std::vector<std::string> internals = {"i0", "i1", "i2"};
      std::shuffle(commands.begin(), commands.end(), rng_);
      std::shuffle(internals.begin(), internals.end(), rng_);
      int n_cmd = pick(0, 2);
      int n_int = pick(0, 2);
      for (int c = 0; c < n_cmd; ++c)
        itf.transitions.push_back(make_transition(itf, q, id++, pws::TriggerKind::Command,
                                                  commands[c]));
      for (int c = 0; c < n_int; ++c)
        itf.transitions.push_back(make_transition(itf, q, id++, pws::TriggerKind::Internal,
                                                  internals[c]));
    }
    return itf;
  }

  pws::InterfaceTransition make_transition(const pws::StateInterface& itf, const std::string& q,
                                           int id, pws::TriggerKind kind,
                                           const std::string& event) {
    pws::InterfaceTransition t;
    t.id = "a" + std::to_string(id);
    t.source = q;
    t.target = itf.states[pick(0, static_cast<int>(itf.states.size()) - 1)];
    t.kind = kind;
    t.event = event;
    int notifies = pick(0, 2);
    std::vector<std::string> pool = {"n0", "n1", "n2", "n3"};
    std::shuffle(pool.begin(), pool.end(), rng_);
    for (int i = 0; i < notifies; ++i) t.notifies.push_back(pool[i]);
    return t;
  }

  pws::GuardPattern make_guard(const pws::Model& model, const pws::PwsSystem& sys) {
    pws::GuardPattern g;
    int clauses = pick(1, 2);
    for (int c = 0; c < clauses; ++c) {
      pws::GuardClause clause;
      int atoms = pick(1, 2);
      for (int a = 0; a < atoms; ++a) {
        const pws::PartSlot& slot =
            sys.assembly[pick(0, static_cast<int>(sys.assembly.size()) - 1)];
        std::string state =
            chance(5) ? "*" : random_state(*model.find_interface(slot.interface_name));
        clause.atoms.push_back({slot.id, state});
      }
      g.clauses.push_back(std::move(clause));
    }
    return g;
  }

  std::string random_state(const pws::StateInterface& itf) {
    return itf.states[pick(0, static_cast<int>(itf.states.size()) - 1)];
  }

  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool chance(int one_in) { return pick(1, one_in) == 1; }

  std::mt19937_64& rng_;
};

}  // namespace testutil
