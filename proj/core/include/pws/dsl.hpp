#pragma once

#include "pws/model.hpp"

// Textual model language. One grammar covers part interfaces, systems,
// holarchy bindings and property lines, so an extracted whole interface
// parses back as an ordinary part interface:
//
//   interface TrafficLight {
//     initial R
//     states R G Y
//     t_go: R -> G on go
//     t_red: Y -> R internal tout notify stopped
//   }
//
//   system Crossroad {
//     parts {
//       main: TrafficLight init G
//       farm: TrafficLight
//     }
//     whole {
//       initial Main
//       states Main W1 Farm W2
//       t1: Main -> W1 on farm.car [main=G, farm=*] do main.stop
//     }
//   }
//
//   holarchy Scenario {
//     root Crossroad
//   }
//
//   INIT (main=G, farm=R)
//   NEVER (main=G, farm=G)
//   LEAVES farm.G
//
// Statements end at a newline; ';' is accepted as an equivalent separator.
// '#' comments to end of line. Files are UTF-8.

namespace pws {

struct SourceModel {
  Model model;
  std::vector<HolarchyDecl> holarchies;
  std::vector<PropertyDecl> properties;
};

struct ParseResult {
  std::optional<SourceModel> model;
  std::vector<Error> errors;
  bool ok() const { return errors.empty() && model.has_value(); }
};

// Parses and validates. Succeeds only when the result passes validate_model
// and every holarchy reference resolves; lexical, syntax and reference
// errors carry source spans. Never throws, whatever the input bytes.
ParseResult parse_model(const std::string& text);

struct PropertiesResult {
  std::vector<Property> properties;
  std::vector<Error> errors;
  bool ok() const { return errors.empty(); }
};

// Parses property lines and resolves slot and state names against a system.
PropertiesResult parse_properties(const std::string& text, const Model& model,
                                  const PwsSystem& context);

// Canonical text; parse_model(serialize_model(m)) is structurally equal to m.
std::string serialize_model(const SourceModel& m);
std::string serialize_interface(const StateInterface& itf);
std::string serialize_system(const PwsSystem& sys);
std::string serialize_holarchy(const HolarchyDecl& h);

// Structural equality, spans ignored.
bool same_structure(const SourceModel& a, const SourceModel& b);

}  // namespace pws
