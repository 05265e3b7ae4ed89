#pragma once

#include "pws/model.hpp"

namespace pws {

// Graphviz renderings of state machines. Whole states can be annotated with
// their computed semantics.
std::string dot_interface(const StateInterface& itf);
std::string dot_system(const PwsSystem& sys, const SemanticsMap* sem = nullptr);

}  // namespace pws
