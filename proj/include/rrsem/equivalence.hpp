#pragma once

#include <map>
#include <string>
#include <vector>

#include "rrsem/reversible.hpp"
#include "rrsem/standard.hpp"
#include "rrsem/system.hpp"

namespace rrsem {

// Common image of floor and ceil: plain histories without stored states
// (except for checkpoints), no notifications, no annotations.
struct AbsItem {
  enum class Kind : std::uint8_t { Send, Rec, Spawn, Check };
  Kind kind = Kind::Check;
  Pid peer;
  Pid receiver;
  Tag tag;
  Value value;
  CheckId tau;
  LocalState state;

  friend bool operator==(const AbsItem&, const AbsItem&) = default;
};

struct AbsConfig {
  std::vector<AbsItem> hist;
  LocalState state;
  friend bool operator==(const AbsConfig&, const AbsConfig&) = default;
};

struct AbsMessage {
  Pid from;
  Pid to;
  Tag tag;
  Value value;
  friend bool operator==(const AbsMessage&, const AbsMessage&) = default;
  friend auto operator<=>(const AbsMessage& a, const AbsMessage& b) {
    if (auto c = std::tie(a.from, a.to, a.tag) <=> std::tie(b.from, b.to, b.tag); c != 0) return c;
    return a.value <=> b.value;
  }
};

struct AbstractSystem {
  std::map<Pid, AbsConfig> procs;
  std::vector<AbsMessage> messages;  // sorted
  friend bool operator==(const AbstractSystem&, const AbstractSystem&) = default;
};

std::string to_string(const AbstractSystem& a);

// Standard projection; undefined (throws) on blocked or await-resume configs.
StdSystem sta(const System& s);

// Erases notifications, C-sets, annotations, delayed checkpoints and forced
// checkpoints.
AbstractSystem floor_of(const System& s);

// Erases seq items and the states stored in send/rec/spawn items. Throws when
// some request set is not empty.
AbstractSystem ceil_of(const RevSystem& s);

bool equiv(const System& rr, const RevSystem& rev);

// Reversible counterpart of a rollback-semantics system without ongoing
// rollbacks: each logged send/rec/spawn/check item becomes the matching
// reversible item, using the pre-step states recorded in the log.
RevSystem mirror_of(const System& s);

// Replays a forward-only trace under both the rollback and the reversible
// semantics and returns the reversible system restricted to the items that
// the rollback semantics logged. Throws SemanticsError on divergence.
RevSystem mirror_replay(const Scenario& scn, const std::vector<Transition>& trace);

// Same replay, returning the full reversible system.
RevSystem replay_rev(const Scenario& scn, const std::vector<Transition>& trace);

}  // namespace rrsem
