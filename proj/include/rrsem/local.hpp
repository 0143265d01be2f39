#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "rrsem/scenario.hpp"

namespace rrsem {

// Local state of a process: script, program counter and environment, or the
// null state used for processes whose creation is being undone.
struct LocalState {
  bool bottom = false;
  std::uint32_t script = 0;
  std::uint32_t pc = 0;
  Bindings env;

  static LocalState bot() {
    LocalState s;
    s.bottom = true;
    return s;
  }

  friend bool operator==(const LocalState&, const LocalState&) = default;
  friend auto operator<=>(const LocalState& a, const LocalState& b) {
    if (auto c = a.bottom <=> b.bottom; c != 0) return c;
    if (auto c = a.script <=> b.script; c != 0) return c;
    if (auto c = a.pc <=> b.pc; c != 0) return c;
    return std::lexicographical_compare_three_way(a.env.begin(), a.env.end(), b.env.begin(), b.env.end());
  }
};

std::string to_string(const LocalState& s, const Scenario* scn = nullptr);

// Oracle read positions; kept at system level so rollbacks never rewind them.
using OracleCursors = std::map<std::string, std::size_t>;

// Raised when a script does something the action language cannot express at
// run time (unbound variable, sending to a non-pid, unknown label...).
struct ScriptError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The next action of s, or nullptr when the process has finished or is the
// null state.
const Action* current_action(const Scenario& scn, const LocalState& s);

LocalState initial_state(const Scenario& scn, const std::string& script, Bindings env);

// Seq, Label, Goto and BranchOracle steps.
bool is_local_action(Action::Op op);
LocalState local_step(const Scenario& scn, const LocalState& s, OracleCursors& cursors);

struct SendEffect {
  Pid to;
  Value value;
  LocalState next;
};
SendEffect send_effect(const Scenario& scn, const LocalState& s);

struct SpawnEffect {
  LocalState parent;
  LocalState child;
};
// The child starts with the evaluated spawn arguments plus Self bound to its pid.
SpawnEffect spawn_effect(const Scenario& scn, const LocalState& s, Pid child);

// Receive: the continuation when the value matches the current Recv pattern.
std::optional<LocalState> receive_effect(const Scenario& scn, const LocalState& s, const Value& v);

LocalState check_effect(const Scenario& scn, const LocalState& s, CheckId tau);

// Commit/Rollback: the checkpoint operand and the continuation.
struct CheckOpEffect {
  CheckId tau;
  LocalState next;
};
CheckOpEffect check_op_effect(const Scenario& scn, const LocalState& s);

}  // namespace rrsem
