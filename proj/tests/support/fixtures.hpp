#pragma once

#include <stdexcept>

#include "pws/dsl.hpp"
#include "pws/semantics.hpp"
#include "subprocess.hpp"

namespace testutil {

inline pws::SourceModel parse_or_throw(const std::string& text) {
  pws::ParseResult r = pws::parse_model(text);
  if (!r.ok()) {
    std::string msg = "parse failed:";
    for (const auto& e : r.errors) msg += " " + e.code + ": " + e.message + ";";
    throw std::runtime_error(msg);
  }
  return std::move(*r.model);
}

inline pws::SourceModel load_fixture(const std::string& name) {
  return parse_or_throw(slurp(model_path(name)));
}

inline pws::SourceModel crossroad() { return load_fixture("crossroad.pws"); }
inline pws::SourceModel atc() { return load_fixture("atc.pws"); }

inline pws::AssemblyView view_of(const pws::SourceModel& m, const std::string& system) {
  auto v = pws::AssemblyView::bind_declared(m.model, *m.model.find_system(system));
  if (!v.ok()) throw std::runtime_error(v.error().message);
  return v.value();
}

inline pws::Configuration cfg(std::initializer_list<const char*> states) {
  pws::Configuration c;
  for (const char* s : states) c.emplace_back(s);
  return c;
}

inline pws::ConfigurationSet cfgs(std::initializer_list<pws::Configuration> configs) {
  return pws::ConfigurationSet(configs);
}

// Pattern with a single conjunctive clause.
inline pws::GuardPattern pattern(std::initializer_list<std::pair<const char*, const char*>> atoms) {
  pws::GuardPattern p;
  pws::GuardClause clause;
  for (const auto& [slot, state] : atoms) clause.atoms.push_back({slot, state});
  p.clauses.push_back(std::move(clause));
  return p;
}

}  // namespace testutil
