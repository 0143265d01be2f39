#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rrsem/scenario.hpp"
#include "rrsem/system.hpp"

namespace rrsem {

struct Diagnostic {
  std::optional<WellDefinednessError::Requirement> requirement;  // empty for structural problems
  std::string script;
  std::size_t action = 0;
  std::optional<Pid> pid;  // set by dynamic checks
  std::string message;
};

std::string to_string(const Diagnostic& d);

// Best-effort static check of the scripts: follows every control path of
// each script and tracks, per variable, whether it holds a checkpoint
// created by this process, one that was already resolved, or a value that
// came from elsewhere. Under restore mode a path ends at a rollback.
std::vector<Diagnostic> validate_static(const Scenario& scn);

Diagnostic diagnostic_of(const WellDefinednessError& e);

}  // namespace rrsem
