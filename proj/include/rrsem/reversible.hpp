#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rrsem/system.hpp"
#include "rrsem/transition.hpp"

namespace rrsem {

// History entry of the reversible semantics; every entry keeps the full
// state the process had before the step.
struct RevItem {
  enum class Kind : std::uint8_t { Seq, Send, Rec, Spawn, Check };
  Kind kind = Kind::Seq;
  LocalState state;
  Pid peer;      // Send: receiver, Rec: sender, Spawn: child
  Pid receiver;  // Rec
  Tag tag;
  Value value;   // Rec
  std::uint64_t seq = 0;  // Rec
  CheckId tau;   // Check

  friend bool operator==(const RevItem&, const RevItem&) = default;
};

std::string to_string(const RevItem& it);

// Rollback request carried by a configuration. Requests for a message or
// for a spawned process remember the checkpoint whose rollback they serve.
struct Request {
  enum class Kind : std::uint8_t { Check, Msg, Sp };
  Kind kind = Kind::Check;
  CheckId serving;
  Tag tag;  // Msg

  friend bool operator==(const Request&, const Request&) = default;
  friend auto operator<=>(const Request&, const Request&) = default;
};

struct RevConfig {
  Pid pid;
  std::vector<RevItem> hist;  // newest first
  LocalState state;
  std::set<Request> phi;

  friend bool operator==(const RevConfig&, const RevConfig&) = default;
};

struct RevMessage {
  Pid from;
  Pid to;
  Tag tag;
  Value value;
  std::uint64_t seq = 0;

  friend bool operator==(const RevMessage&, const RevMessage&) = default;
};

struct RevSystem {
  std::map<Pid, RevConfig> procs;
  std::vector<RevMessage> messages;  // sorted by (from, to, seq)
  std::uint64_t next_pid = 1;
  std::uint64_t next_tag = 1;
  std::uint64_t next_check = 1;
  std::map<std::pair<Pid, Pid>, std::uint64_t> next_seq;
  OracleCursors cursors;

  friend bool operator==(const RevSystem&, const RevSystem&) = default;

  void add_message(RevMessage m);
  const RevMessage* message_by_tag(Tag t) const;
  bool remove_message(Tag t);
};

RevSystem initial_rev(const Scenario& scn);

// Forward steps (rules Seq, Send, Receive, Spawn, Check); payloads match
// the rollback semantics so traces can be replayed here. A commit action is
// a plain sequential step; rollback actions are never enabled.
std::vector<Transition> enabled_rev_forward(const Scenario& scn, const RevSystem& s);
// Uncontrolled backward steps (*Back rules).
std::vector<Transition> enabled_rev_backward(const Scenario& scn, const RevSystem& s);
std::vector<Transition> enabled_rev(const Scenario& scn, const RevSystem& s);
RevSystem apply_rev(const Scenario& scn, const RevSystem& s, const Transition& t);

// The backward step undoing the head item of pid.
Transition backward_of(const RevSystem& s, Pid pid);

// Equality up to identifier counters and oracle cursors.
bool same_up_to_counters(const RevSystem& a, const RevSystem& b);

enum class CtrlRule : std::uint8_t { Seq, Check, SP, Receive, Spawn1, Spawn2, Send1, Send2 };
const char* to_string(CtrlRule r);

struct CtrlStep {
  CtrlRule rule;
  Pid pid;
  RevSystem next;
};

struct CtrlStuck : SemanticsError {
  using SemanticsError::SemanticsError;
};

bool has_requests(const RevSystem& s);

// One controlled backward step: the first applicable rule in listing order,
// lowest pid first. nullopt when every request set is empty; throws CtrlStuck
// when requests remain but no rule applies.
std::optional<CtrlStep> ctrl_step(const Scenario& scn, const RevSystem& s);

// Seeds {tau} at p and runs ctrl_step until no request remains. Steps are
// appended to log when given.
RevSystem ctrl_rollback(const Scenario& scn, const RevSystem& s, Pid p, CheckId tau,
                        std::vector<CtrlStep>* log = nullptr, std::size_t max_steps = 1000000);

// Drops every pending request.
RevSystem rolldel(const RevSystem& s);

std::string canonical(const RevSystem& s);
std::string to_string(const RevSystem& s, const Scenario* scn = nullptr);

}  // namespace rrsem
