#pragma once

#include <optional>
#include <set>
#include <vector>

#include "rrsem/system.hpp"

namespace rrsem {

struct UnknownCheckpoint : SemanticsError {
  explicit UnknownCheckpoint(CheckId tau)
      : SemanticsError("unknown checkpoint t" + std::to_string(tau.value)) {}
};

// Active checkpoints: the tau of every Check item.
CheckSet chks(const History& h);

// Prepends item when some checkpoint is active.
History add(const HistoryItem& item, const History& h);

struct ChkResult {
  History rest;
  LocalState saved;
  std::set<Tag> L;
  std::set<Pid> P;
  std::vector<ExtendedMessage> Ms;  // newest first, as found in the history
};

// Scans down to the Check or DelayedCheck item of tau. Throws
// UnknownCheckpoint when there is none.
ChkResult chk(CheckId tau, const History& h);

// True iff the first checkpoint item (Check or DelayedCheck) carries tau.
bool last_active(CheckId tau, const History& h);

std::set<Pid> dp(CheckId tau, const History& h);
History del(CheckId tau, const History& h);
History delay(CheckId tau, const History& h);

// The newest DelayedCheck, if any.
CheckSet delayed(const History& h);

// tau occurs as a Check item (the "tau in Delta" side condition).
bool has_check(CheckId tau, const History& h);
bool has_checkpoint(CheckId tau, const History& h);

}  // namespace rrsem
