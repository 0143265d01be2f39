#pragma once

#include <map>
#include <string>
#include <vector>

#include "rrsem/system.hpp"
#include "rrsem/transition.hpp"

namespace rrsem {

struct StdMessage {
  Pid from;
  Pid to;
  Value value;
  std::uint64_t seq = 0;

  friend bool operator==(const StdMessage&, const StdMessage&) = default;
};

struct StdSystem {
  std::map<Pid, LocalState> procs;
  std::vector<StdMessage> messages;  // sorted by (from, to, seq)
  std::uint64_t next_pid = 1;
  std::uint64_t next_check = 1;
  std::map<std::pair<Pid, Pid>, std::uint64_t> next_seq;
  OracleCursors cursors;

  friend bool operator==(const StdSystem&, const StdSystem&) = default;

  void add_message(StdMessage m);
};

StdSystem initial_std(const Scenario& scn);

// Checkpoint operators other than check() have no meaning here.
struct IllFormed : SemanticsError {
  using SemanticsError::SemanticsError;
};

std::vector<Transition> enabled_std(const Scenario& scn, const StdSystem& s);
StdSystem apply_std(const Scenario& scn, const StdSystem& s, const Transition& t);

std::string canonical(const StdSystem& s);
std::string to_string(const StdSystem& s, const Scenario* scn = nullptr);

}  // namespace rrsem
