#include "rrsem/transition.hpp"

#include <array>

namespace rrsem {

namespace {

constexpr std::array<const char*, 29> kNames = {
    "Seq",     "Send",    "Receive", "Spawn",   "Check",    "Rollback", "Roll1",   "Roll2",
    "Roll3",   "RollGone", "UndoSend", "UndoDep1", "UndoDep2", "Resume1", "Resume2", "Resume3",
    "Resume4", "Resume5", "Commit",  "Delay",   "Commit2",  "Delay2",   "Commit3", "CommitGone",
    "SeqBack", "SendBack", "ReceiveBack", "SpawnBack", "CheckBack",
};

}  // namespace

const char* rule_name(Rule r) { return kNames.at(static_cast<std::size_t>(r)); }

std::optional<Rule> rule_from_name(const std::string& name) {
  for (std::size_t i = 0; i < kNames.size(); ++i)
    if (name == kNames[i]) return static_cast<Rule>(i);
  return std::nullopt;
}

bool is_forward(Rule r) { return r <= Rule::Check; }

bool is_protocol(Rule r) { return r >= Rule::Roll1 && r <= Rule::Resume5; }

bool is_commit_rule(Rule r) { return r >= Rule::Commit && r <= Rule::CommitGone; }

std::string to_string(const Transition& t) {
  std::string out = std::string(rule_name(t.rule)) + "(p" + std::to_string(t.pid.value);
  if (t.a || t.b || t.c) out += ";" + std::to_string(t.a) + "," + std::to_string(t.b) + "," + std::to_string(t.c);
  return out + ")";
}

FairKey fair_key(const Transition& t) {
  switch (t.rule) {
    case Rule::Send:
    case Rule::Receive:
    case Rule::Spawn:
    case Rule::Check:
      return {t.pid.value, t.rule, t.rule == Rule::Receive ? t.a : 0, 0};
    default:
      return {t.pid.value, t.rule, t.a, t.b};
  }
}

}  // namespace rrsem
