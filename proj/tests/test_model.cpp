#include "doctest.h"
#include "pws/model.hpp"
#include "support/fixtures.hpp"

using namespace pws;
using namespace testutil;

namespace {

bool has_violation(const ValidationReport& r, const std::string& code) {
  for (const auto& v : r.violations)
    if (v.code == code) return true;
  return false;
}

StateInterface traffic_light() {
  StateInterface itf;
  itf.name = "TrafficLight";
  itf.states = {"R", "G", "Y"};
  itf.initial = "R";
  itf.transitions = {
      {"t_go", "R", "G", TriggerKind::Command, "go", {}, {}},
      {"t_stop", "G", "Y", TriggerKind::Command, "stop", {}, {}},
      {"t_red", "Y", "R", TriggerKind::Internal, "tout", {"stopped"}, {}},
      {"t_car", "R", "R", TriggerKind::Internal, "car", {"car"}, {}},
  };
  return itf;
}

}  // namespace

TEST_CASE("crossroad fixture validates cleanly") {
  SourceModel m = crossroad();
  ValidationReport report = validate_model(m.model);
  CHECK(report.ok());
  CHECK(report.violations.empty());
}

TEST_CASE("initial state outside the state set is a violation") {
  Model m;
  StateInterface itf = traffic_light();
  itf.initial = "Missing";
  m.interfaces.push_back(itf);
  ValidationReport report = validate_model(m);
  CHECK_FALSE(report.ok());
  CHECK(has_violation(report, "initial-not-declared"));
}

TEST_CASE("two command transitions on one (state, event) pair are nondeterministic") {
  Model m;
  StateInterface itf = traffic_light();
  itf.transitions.push_back({"t_dup", "G", "R", TriggerKind::Command, "stop", {}, {}});
  m.interfaces.push_back(itf);
  ValidationReport report = validate_model(m);
  CHECK(has_violation(report, "nondeterministic-command"));
}

TEST_CASE("two internal transitions from one state must carry distinct events") {
  Model m;
  StateInterface itf = traffic_light();
  itf.transitions.push_back({"t_dup", "Y", "G", TriggerKind::Internal, "tout", {}, {}});
  m.interfaces.push_back(itf);
  CHECK(has_violation(validate_model(m), "nondeterministic-internal"));
}

TEST_CASE("dangling references are located") {
  SourceModel m = crossroad();
  PwsSystem& sys = m.model.systems[0];

  SUBCASE("unknown interface") {
    sys.assembly[0].interface_name = "Nope";
    CHECK(has_violation(validate_model(m.model), "unknown-interface"));
  }
  SUBCASE("unknown slot in command") {
    sys.whole_transitions[0].commands[0].part = "ghost";
    CHECK(has_violation(validate_model(m.model), "unknown-slot"));
  }
  SUBCASE("unknown slot in trigger") {
    sys.whole_transitions[0].trigger.part = "ghost";
    CHECK(has_violation(validate_model(m.model), "unknown-slot"));
  }
  SUBCASE("unknown whole state") {
    sys.whole_transitions[0].target = "Nowhere";
    CHECK(has_violation(validate_model(m.model), "unknown-state"));
  }
  SUBCASE("guard state not in the slot's interface") {
    GuardPattern g;
    g.clauses.push_back({{GuardAtom{"main", "Purple"}}});
    sys.whole_transitions[0].guard = g;
    CHECK(has_violation(validate_model(m.model), "unknown-state"));
  }
}

TEST_CASE("duplicate names and slots are violations") {
  SourceModel m = crossroad();
  SUBCASE("duplicate interface") {
    m.model.interfaces.push_back(m.model.interfaces[0]);
    CHECK(has_violation(validate_model(m.model), "duplicate-name"));
  }
  SUBCASE("duplicate slot id") {
    m.model.systems[0].assembly.push_back(m.model.systems[0].assembly[0]);
    CHECK(has_violation(validate_model(m.model), "duplicate-slot"));
  }
  SUBCASE("two commands for one slot in one transition") {
    auto& t = m.model.systems[0].whole_transitions[0];
    t.commands.push_back({t.commands[0].part, "go"});
    CHECK(has_violation(validate_model(m.model), "duplicate-command-slot"));
  }
}

TEST_CASE("a command must be a command trigger of the part's interface") {
  SourceModel m = crossroad();
  m.model.systems[0].whole_transitions[0].commands[0].event = "tout";  // internal, not command
  CHECK(has_violation(validate_model(m.model), "command-not-a-trigger"));
}

TEST_CASE("validate_model is idempotent and side-effect free") {
  SourceModel m = crossroad();
  m.model.interfaces[0].initial = "Gone";
  ValidationReport first = validate_model(m.model);
  ValidationReport second = validate_model(m.model);
  REQUIRE(first.violations.size() == second.violations.size());
  for (std::size_t i = 0; i < first.violations.size(); ++i) {
    CHECK(first.violations[i].code == second.violations[i].code);
    CHECK(first.violations[i].message == second.violations[i].message);
  }
}

TEST_CASE("pattern matching over slot positions") {
  std::map<std::string, int> slots{{"main", 0}, {"farm", 1}};
  GuardPattern p = pattern({{"main", "G"}, {"farm", "*"}});
  CHECK(pattern_matches(p, cfg({"G", "R"}), slots));
  CHECK(pattern_matches(p, cfg({"G", "G"}), slots));
  CHECK_FALSE(pattern_matches(p, cfg({"R", "G"}), slots));

  GuardPattern disj = pattern({{"main", "G"}});
  disj.clauses.push_back({{GuardAtom{"farm", "Y"}}});
  CHECK(pattern_matches(disj, cfg({"R", "Y"}), slots));
  CHECK_FALSE(pattern_matches(disj, cfg({"R", "G"}), slots));

  GuardPattern empty;
  CHECK_FALSE(pattern_matches(empty, cfg({"G", "R"}), slots));
}

TEST_CASE("configuration formatting is stable and sorted") {
  CHECK(format_configuration(cfg({"G", "R"})) == "(G,R)");
  CHECK(format_configuration(cfg({})) == "()");
  CHECK(format_configuration_set(cfgs({cfg({"R", "G"}), cfg({"G", "R"})})) == "{(G,R), (R,G)}");
  CHECK(format_configuration_set({}) == "{}");
}

TEST_CASE("slot order is declaration order") {
  SourceModel m = crossroad();
  const PwsSystem& sys = m.model.systems[0];
  REQUIRE(sys.assembly.size() == 2);
  CHECK(sys.assembly[0].id == "main");
  CHECK(sys.assembly[1].id == "farm");
  CHECK(sys.slot_index("main") == 0);
  CHECK(sys.slot_index("farm") == 1);
  CHECK(sys.slot_index("ghost") == -1);
}
