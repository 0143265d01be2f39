#pragma once

#include <vector>

#include "rrsem/history.hpp"
#include "rrsem/system.hpp"
#include "rrsem/transition.hpp"

namespace rrsem {

// All enabled steps in (pid, rule, payload) order. Throws
// WellDefinednessError when a process sits at a commit/rollback that breaks
// the well-definedness requirements.
std::vector<Transition> enabled_rr(const Scenario& scn, const System& s);

// Only the steps of the rollback protocol (Roll*, Undo-*, Resume*); forward
// and commit steps are left out.
std::vector<Transition> enabled_protocol(const Scenario& scn, const System& s);

// Applies t. With verify set, t must belong to enabled_rr(s); otherwise the
// caller guarantees it.
System apply_rr(const Scenario& scn, const System& s, const Transition& t, bool verify = true);

// No blocked or await-resume process and no roll/done/resume notification.
bool rollback_quiescent(const System& s);

// Rollback of tau has drained: the initiator is Normal, no process is
// blocked on or awaiting tau, and no roll/done/resume for tau is in flight.
bool rollback_completed(const System& s, Pid initiator, CheckId tau);

// Recovered state after a user rollback.
LocalState combine(Oplus mode, const LocalState& current, const LocalState& saved);

}  // namespace rrsem
