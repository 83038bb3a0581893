#pragma once

// Independent checker for proof traces. It re-verifies every arithmetic
// identity with the general rational-function code and recomputes every set
// with the normlattice operations; it never searches.

#include <string>

#include "json.hpp"
#include "normcomb/normlattice.hpp"

namespace normcomb {

struct TraceCheck {
  bool ok = false;
  std::string message;
  std::size_t steps_checked = 0;
};

TraceCheck check_trace(const nlohmann::json &trace);

/// Rebuild a lattice from its JSON form. Throws Parse.
NormLattice lattice_from_json(const nlohmann::json &j);

} // namespace normcomb
