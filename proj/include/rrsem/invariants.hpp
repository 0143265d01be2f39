#pragma once

#include <string>
#include <vector>

#include "rrsem/system.hpp"

namespace rrsem {

struct InvariantViolation {
  std::string invariant;
  std::string detail;
};

std::vector<InvariantViolation> check_freshness(const System& s);
std::vector<InvariantViolation> check_tag_exclusivity(const System& s);
std::vector<InvariantViolation> check_fifo(const System& s);
std::vector<InvariantViolation> check_history_shape(const System& s);
// Only meaningful at rollback quiescence in runs without commits.
std::vector<InvariantViolation> check_post_rollback(const System& s);

// All of the above; post-rollback consistency is evaluated only when the
// scenario has no commit actions and s is rollback quiescent.
std::vector<InvariantViolation> check_invariants(const System& s, bool commit_free);

bool has_action(const Scenario& scn, Action::Op op);

}  // namespace rrsem
