#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <tuple>

#include "rrsem/ids.hpp"

namespace rrsem {

enum class Rule : std::uint8_t {
  // forward
  Seq,
  Send,
  Receive,
  Spawn,
  Check,
  // rollback
  Rollback,
  Roll1,
  Roll2,
  Roll3,
  RollGone,
  UndoSend,
  UndoDep1,
  UndoDep2,
  Resume1,
  Resume2,
  Resume3,
  Resume4,
  Resume5,
  // commit
  Commit,
  Delay,
  Commit2,
  Delay2,
  Commit3,
  CommitGone,
  // reversible, backward
  SeqBack,
  SendBack,
  ReceiveBack,
  SpawnBack,
  CheckBack,
};

const char* rule_name(Rule r);
std::optional<Rule> rule_from_name(const std::string& name);
bool is_forward(Rule r);
// Rules that make up the asynchronous rollback protocol (everything a user
// rollback sets in motion).
bool is_protocol(Rule r);
bool is_commit_rule(Rule r);

// One reified step. Payload fields depend on the rule:
//   Send      a = receiver, b = tag issued (0 in the standard semantics), c = channel seq
//   Receive   a = sender, b = channel seq, c = tag
//   Spawn     a = child pid
//   Check, Rollback, Commit, Delay, Commit3, Resume1-3   a = checkpoint
//   Roll*     a = notification sender, b = checkpoint, c = initiator
//   UndoSend  a = tag
//   UndoDep*, Resume4/5, Commit2, Delay2, CommitGone     a = notification sender, b = checkpoint
//   *Back     a, b, c mirror the forward payload of the undone item
struct Transition {
  Rule rule = Rule::Seq;
  Pid pid;
  std::uint64_t a = 0;
  std::uint64_t b = 0;
  std::uint64_t c = 0;

  friend bool operator==(const Transition&, const Transition&) = default;
  friend auto operator<=>(const Transition& x, const Transition& y) {
    return std::tie(x.pid, x.rule, x.a, x.b, x.c) <=> std::tie(y.pid, y.rule, y.a, y.b, y.c);
  }
};

std::string to_string(const Transition& t);

// Identity used by the fairness counter: the same logical choice across
// steps even when issued identifiers differ.
struct FairKey {
  std::uint64_t pid;
  Rule rule;
  std::uint64_t a;
  std::uint64_t b;
  friend auto operator<=>(const FairKey&, const FairKey&) = default;
};
FairKey fair_key(const Transition& t);

}  // namespace rrsem
