#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rrsem/value.hpp"

namespace rrsem {

// One entry of a process script. Processes are action streams with a
// program counter; the sequential layer is reduced to Seq/Label/Goto and
// oracle-driven branches.
struct Action {
  enum class Op : std::uint8_t {
    Spawn,
    Send,
    Recv,
    Check,
    Commit,
    Rollback,
    Seq,
    Label,
    Goto,
    BranchOracle,
    Stop,
  };

  Op op = Op::Stop;
  std::string var;     // Spawn/Check bind target, Commit/Rollback operand
  std::string name;    // Spawn script, Label name, Goto target, oracle name
  std::string then_label;
  std::string else_label;
  Expr target;         // Send
  Expr value;          // Send
  Pattern pattern;     // Recv
  std::map<std::string, Expr> args;  // Spawn initial bindings

  static Action spawn(std::string var, std::string script, std::map<std::string, Expr> args = {});
  static Action send(Expr target, Expr value);
  static Action recv(Pattern p);
  static Action check(std::string var);
  static Action commit(std::string var);
  static Action rollback(std::string var);
  static Action seq();
  static Action label(std::string name);
  static Action go(std::string label);
  static Action branch(std::string oracle, std::string then_label, std::string else_label);
  static Action stop();

  friend bool operator==(const Action&, const Action&) = default;
};

const char* op_name(Action::Op op);

struct Script {
  std::string name;
  std::vector<Action> actions;

  // Index of a Label action, if present.
  std::optional<std::size_t> label_index(const std::string& label) const;
};

// How the state recovered by a user rollback is combined with the current
// one: Restore yields the saved state, Continue keeps the current program
// counter with the saved bindings.
enum class Oplus : std::uint8_t { Restore, Continue };

// Reply sent by a process that is already rolling back to an older
// checkpoint when it receives a rollback request. Async is the done-async
// reply; Sync replies done-sync and keeps the process blocked until the
// requester answers with resume.
enum class Roll3Reply : std::uint8_t { Async, Sync };

struct SemanticsOptions {
  Oplus oplus = Oplus::Restore;
  Roll3Reply roll3 = Roll3Reply::Sync;
  // A process receiving a message that names one of its own, no longer
  // active, checkpoints does not re-create it as a forced checkpoint.
  bool skip_own_forced = true;
  // Rollback requests addressed to a deleted process are answered on its
  // behalf and commit notifications to it are dropped.
  bool answer_for_deleted = true;

  friend bool operator==(const SemanticsOptions&, const SemanticsOptions&) = default;
};

struct Scenario {
  std::string entry;
  Bindings init;
  std::map<std::string, std::vector<bool>> oracles;
  std::vector<Script> scripts;
  SemanticsOptions options;

  const Script* find(const std::string& name) const;
  std::size_t index_of(const std::string& name) const;  // throws std::out_of_range
  const Script& script(std::uint32_t index) const { return scripts.at(index); }
};

const char* to_string(Oplus m);
const char* to_string(Roll3Reply r);

}  // namespace rrsem
