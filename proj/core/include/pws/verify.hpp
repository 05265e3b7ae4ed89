#pragma once

#include "pws/compose.hpp"
#include "pws/semantics.hpp"

// Property checking over a computed semantics map. INIT and NEVER are pure
// set predicates on the map; LEAVES is decided on the whole-state transition
// graph: the region D of whole states whose semantics can place the watched
// slot in the watched state must contain no cycle and no dead end, so every
// path entering D leaves it after finitely many whole transitions.

namespace pws {

struct PropertyVerdict {
  Property property;
  bool holds = false;
  // INIT/NEVER witness: offending whole state and configuration.
  std::optional<std::pair<std::string, Configuration>> witness;
  // LEAVES witnesses.
  std::vector<std::string> cycle;
  std::optional<std::string> trapped;

  std::string describe() const;
};

struct VerificationReport {
  std::string system;
  SemStats stats;
  std::vector<SemDiagnostic> wellformed;
  std::vector<PropertyVerdict> properties;

  bool all_hold() const;
  bool clean() const;  // no error-severity diagnostics
};

PropertyVerdict check_init(const AssemblyView& view, const SemanticsMap& sem,
                           const Property& property);
PropertyVerdict check_never(const AssemblyView& view, const SemanticsMap& sem,
                            const Property& property);
PropertyVerdict check_leaves(const AssemblyView& view, const SemanticsMap& sem,
                             const Property& property);

// Semantics diagnostics plus dead-whole-state detection: a reachable whole
// state with outgoing transitions none of which is feasible from its
// semantics is reported as a warning.
std::vector<SemDiagnostic> check_wellformed(const AssemblyView& view,
                                            const SemanticsResult& semantics);

VerificationReport verify(const AssemblyView& view, const std::vector<Property>& properties);

// Hash of the verification-relevant shape of an interface: states, initial,
// command edges, and notification lists per edge. Internal trigger names and
// transition ids do not affect it.
std::uint64_t interface_shape_hash(const StateInterface& itf);

struct VerifyCache {
  std::map<std::uint64_t, VerificationReport> entries;
  std::size_t hits = 0;
  std::size_t misses = 0;
};

// Bottom-up, compositional verification: each holon is checked against its
// direct parts' interfaces only, so the configuration space touched for a
// parent is the product of its own slot interfaces, never the product over
// the full tree. Reports are keyed by holon path ("/" for the root) and may
// be reused across runs through the cache, keyed by holon content and child
// interface shape hashes.
std::map<std::string, VerificationReport> verify_holarchy(
    const Holarchy& holarchy, const std::map<std::string, std::vector<Property>>& properties,
    VerifyCache* cache = nullptr);

std::string report_text(const VerificationReport& report, bool color = false);
std::string report_json(const VerificationReport& report);

}  // namespace pws
