#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "rrsem/equivalence.hpp"
#include "rrsem/rollback.hpp"

namespace rrsem {

struct ExploreOptions {
  std::size_t max_depth = 1000000;
  std::size_t max_states = 1000000;
  bool invariants = true;
  bool deadlock = true;
  bool check_rollbacks = false;
  bool parallel = false;  // level-synchronous OpenMP expansion
};

struct ExploreViolation {
  std::string kind;  // invariant name, "stuck", "well-definedness", "rollback", "semantics"
  std::string detail;
  std::vector<Transition> path;  // from the initial system
};

struct ExploreReport {
  std::size_t states = 0;
  std::size_t transitions = 0;
  std::size_t depth = 0;  // deepest level expanded
  std::size_t terminal = 0;
  std::size_t quiescent_terminal = 0;
  std::size_t rollback_roots = 0;      // states from which a user rollback was checked
  std::size_t rollback_completions = 0;  // completion states compared
  std::map<Rule, std::size_t> rules;  // transitions taken, by rule
  bool depth_exhausted = false;
  bool state_bound_hit = false;
  std::vector<ExploreViolation> violations;

  bool ok() const { return violations.empty(); }
  bool complete() const { return !depth_exhausted && !state_bound_hit; }
};

// Breadth-first exploration of every interleaving of the rollback semantics
// from the scenario's initial system. The serial and the parallel variant
// produce identical reports.
ExploreReport explore(const Scenario& scn, const ExploreOptions& opt);
ExploreReport explore_serial(const Scenario& scn, const ExploreOptions& opt);
ExploreReport explore_parallel(const Scenario& scn, const ExploreOptions& opt);

struct RollbackCheckResult {
  std::size_t completions = 0;
  std::size_t states = 0;
  std::vector<std::string> failures;
};

// From s0 (no ongoing rollback) applies the user rollback t, explores every
// interleaving of the rollback protocol and compares each completion state
// with the controlled rollback of the reversible counterpart of s0.
RollbackCheckResult check_rollback_at(const Scenario& scn, const System& s0, const Transition& rollback,
                                      std::size_t max_states = 200000);

// Along a recorded rollback-semantics run: every user rollback taken
// from a system without ongoing rollbacks is checked with check_rollback_at;
// when the run itself drains that rollback using protocol steps only, its
// own completion state is compared as well.
struct TraceRollbackResult {
  std::size_t rollbacks = 0;
  std::size_t checked = 0;
  std::size_t direct = 0;  // completions taken from the run itself
  std::vector<std::string> failures;
};
TraceRollbackResult check_trace_rollbacks(const Scenario& scn, const std::vector<Transition>& trace);

// Forward-only scenario: the standard projections of the
// reachable rollback-semantics states coincide with the reachable standard
// states (depth bounded).
struct ReachabilityResult {
  std::size_t rr_states = 0;
  std::size_t std_states = 0;
  bool equal = false;
  std::string detail;
};
ReachabilityResult check_forward_reachability(const Scenario& scn, std::size_t max_depth, std::size_t max_states);

}  // namespace rrsem
