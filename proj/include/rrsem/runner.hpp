#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "rrsem/invariants.hpp"
#include "rrsem/reversible.hpp"
#include "rrsem/standard.hpp"
#include "rrsem/system.hpp"
#include "rrsem/transition.hpp"
#include "rrsem/validate.hpp"

namespace rrsem {

enum class SemanticsKind : std::uint8_t { Standard, Rollback, Reversible };
const char* to_string(SemanticsKind k);
std::optional<SemanticsKind> semantics_from_name(const std::string& name);

struct RunConfig {
  std::uint64_t seed = 0;
  std::size_t max_steps = 10000;
  SemanticsKind semantics = SemanticsKind::Rollback;
  bool check_invariants = false;  // rollback semantics only
};

// Seeded choice among enabled transitions. A logical choice (fair_key) that
// stays enabled for more than k consecutive picks without being taken is
// forced on the next pick.
class FairScheduler {
 public:
  explicit FairScheduler(std::uint64_t seed, std::size_t k = 64) : rng_(seed), k_(k) {}
  std::size_t pick(const std::vector<Transition>& enabled);
  std::size_t forced() const { return forced_; }
  std::size_t longest_wait() const { return longest_; }

 private:
  std::mt19937_64 rng_;
  std::size_t k_;
  std::map<FairKey, std::size_t> waiting_;
  std::size_t forced_ = 0;
  std::size_t longest_ = 0;
};

struct TraceMeta {
  std::uint64_t seed = 0;
  SemanticsKind semantics = SemanticsKind::Rollback;
  Oplus oplus = Oplus::Restore;
  Roll3Reply roll3 = Roll3Reply::Sync;
  std::size_t max_steps = 0;
  friend bool operator==(const TraceMeta&, const TraceMeta&) = default;
};

struct TraceStep {
  Transition t;
  std::string hash;  // of the system after the step
  friend bool operator==(const TraceStep&, const TraceStep&) = default;
};

struct Trace {
  TraceMeta meta;
  std::vector<TraceStep> steps;

  std::vector<Transition> transitions() const;
  friend bool operator==(const Trace&, const Trace&) = default;
};

enum class RunStatus : std::uint8_t { Quiescent, Stuck, MaxSteps, Aborted };
const char* to_string(RunStatus s);

struct RunResult {
  Trace trace;
  RunStatus status = RunStatus::Quiescent;
  std::optional<System> rr;
  std::optional<StdSystem> standard;
  std::optional<RevSystem> rev;  // forward steps only
  std::optional<Diagnostic> aborted;
  std::vector<InvariantViolation> violations;
  std::size_t forced = 0;
};

// Runs until no transition is enabled or max_steps is reached. Identical
// (scenario, config) give identical traces.
RunResult run(const Scenario& scn, const RunConfig& cfg);

std::string system_hash(const System& s);
std::string system_hash(const StdSystem& s);
std::string system_hash(const RevSystem& s);

struct ReplayVerdict {
  bool ok = true;
  std::size_t step = 0;  // first diverging step
  std::string detail;
};

// Reapplies the trace under its own semantics and compares every hash.
ReplayVerdict replay(const Scenario& scn, const Trace& trace);

// Replays a rollback-semantics trace under the standard semantics through
// sta, comparing sta(S_i) with the standard system after every step. Traces
// with rollback or commit steps are rejected.
ReplayVerdict replay_as_standard(const Scenario& scn, const Trace& trace);

// Projection of one forward rollback-semantics step onto the standard
// semantics.
Transition std_step_of(const Transition& t);

}  // namespace rrsem
