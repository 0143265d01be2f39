#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "rrsem/local.hpp"

namespace rrsem {

using CheckSet = std::set<CheckId>;

// History entry of the rollback-recovery semantics. Histories are stored
// newest first (index 0 is the head of the list).
struct HistoryItem {
  enum class Kind : std::uint8_t { Check, DelayedCheck, Send, Rec, Spawn };
  // Checkpoints created by check() are user checkpoints; the others are
  // injected by a receive or at spawn time.
  enum class Origin : std::uint8_t { User, Receive, Spawn };

  Kind kind = Kind::Check;
  Origin origin = Origin::User;
  CheckId tau;
  LocalState state;   // Check / DelayedCheck
  Pid peer;           // Send: receiver, Spawn: child, Rec: sender
  Pid receiver;       // Rec
  Tag tag;            // Send / Rec
  Value value;        // Rec
  CheckSet cset;      // Rec
  std::uint64_t seq = 0;  // Rec: channel sequence number of the message

  // State of the process just before the step that produced a Send, Rec or
  // Spawn item. Not part of the item's identity; only used to build the
  // reversible counterpart of a system.
  std::shared_ptr<const LocalState> pre;

  static HistoryItem check(CheckId tau, LocalState s, Origin origin = Origin::User);
  static HistoryItem delayed_check(CheckId tau, LocalState s, Origin origin = Origin::User);
  static HistoryItem send(Pid to, Tag tag);
  static HistoryItem rec(CheckSet c, Pid from, Pid to, Tag tag, Value v, std::uint64_t seq = 0);
  static HistoryItem spawn(Pid child);

  bool is_checkpoint() const { return kind == Kind::Check || kind == Kind::DelayedCheck; }
  bool forced() const { return is_checkpoint() && origin != Origin::User; }

  friend bool operator==(const HistoryItem& a, const HistoryItem& b);
};

using History = std::vector<HistoryItem>;

std::string to_string(const HistoryItem& item);
std::string to_string(const History& h);

// Floating message with the sender's active checkpoints.
struct ExtendedMessage {
  CheckSet cset;
  Pid from;
  Pid to;
  Tag tag;
  Value value;
  std::uint64_t seq = 0;  // per-channel send order

  friend bool operator==(const ExtendedMessage&, const ExtendedMessage&) = default;
};

struct Notification {
  enum class Kind : std::uint8_t { Roll, DoneAsync, DoneSync, Resume, Commit };
  Pid from;
  Pid to;
  Kind kind = Kind::Roll;
  CheckId tau;
  Pid initiator;  // Roll only

  friend bool operator==(const Notification&, const Notification&) = default;
  friend auto operator<=>(const Notification&, const Notification&) = default;
};

const char* to_string(Notification::Kind k);
std::string to_string(const Notification& n);

enum class Mode : std::uint8_t { Normal, Blocked, AwaitResume };

struct BlockInfo {
  CheckId tau;
  Pid initiator;   // p_tau
  Pid requester;   // p_r
  std::set<Tag> L;
  std::set<Pid> P;
  // Checkpoints for which this process answered done-sync while blocked and
  // still waits for the resume reply.
  CheckSet W;

  friend bool operator==(const BlockInfo&, const BlockInfo&) = default;
};

struct ProcessConfig {
  Pid pid;
  Mode mode = Mode::Normal;
  BlockInfo block;     // Blocked
  CheckId await_tau;   // AwaitResume
  History hist;
  LocalState state;

  friend bool operator==(const ProcessConfig&, const ProcessConfig&) = default;
};

// Rollback-recovery system. Processes are keyed by pid; messages and
// notifications are kept in canonical order so that == is multiset equality.
struct System {
  std::map<Pid, ProcessConfig> procs;
  std::vector<ExtendedMessage> messages;
  std::vector<Notification> notes;

  std::uint64_t next_pid = 1;
  std::uint64_t next_tag = 1;
  std::uint64_t next_check = 1;
  std::map<std::pair<Pid, Pid>, std::uint64_t> next_seq;
  OracleCursors cursors;

  // Dynamic well-definedness bookkeeping: who created each checkpoint and
  // which ones were already committed or rolled back by their creator.
  std::map<CheckId, Pid> creator;
  CheckSet resolved;

  friend bool operator==(const System&, const System&) = default;

  ProcessConfig* find(Pid p);
  const ProcessConfig* find(Pid p) const;
  ProcessConfig& at(Pid p);
  const ProcessConfig& at(Pid p) const;

  void add_message(ExtendedMessage m);
  void add_note(Notification n);
  bool remove_message(Tag tag);
  bool remove_note(const Notification& n);
  const ExtendedMessage* message_by_tag(Tag tag) const;
};

struct SemanticsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when a run breaks one of the well-definedness requirements on the
// use of check/commit/rollback.
struct WellDefinednessError : std::runtime_error {
  enum class Requirement : std::uint8_t { InitialSystem, SameProcess, PrecededByCheck, NotBoth };
  Requirement requirement;
  Pid pid;
  std::uint32_t action = 0;
  WellDefinednessError(Requirement r, Pid p, std::uint32_t act, const std::string& what)
      : std::runtime_error(what), requirement(r), pid(p), action(act) {}
};

const char* to_string(WellDefinednessError::Requirement r);

enum class IdKind : std::uint8_t { Pid, Tag, Check };

// Issues the next identifier of the given kind and advances the counter.
std::uint64_t fresh(IdKind kind, std::uint64_t& counter);
Pid fresh_pid(System& s);
Tag fresh_tag(System& s);
CheckId fresh_check(System& s);
std::uint64_t next_channel_seq(std::map<std::pair<Pid, Pid>, std::uint64_t>& seqs, Pid from, Pid to);

// Channel heads addressed to p, ordered by sender.
std::vector<const ExtendedMessage*> eligible_messages(const System& s, Pid p);

// Single root process running the entry script.
System initial_system(const Scenario& scn);

std::string canonical(const System& s);
std::string to_string(const System& s, const Scenario* scn = nullptr);
std::uint64_t fnv1a(const std::string& bytes);
std::string hex64(std::uint64_t h);
std::uint64_t state_hash(const System& s);

}  // namespace rrsem
