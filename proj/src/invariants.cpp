#include "rrsem/invariants.hpp"

#include <map>
#include <set>

#include "rrsem/rollback.hpp"

namespace rrsem {

namespace {

std::string pid_str(Pid p) { return "p" + std::to_string(p.value); }

}  // namespace

std::vector<InvariantViolation> check_freshness(const System& s) {
  std::vector<InvariantViolation> out;
  auto bad = [&](const std::string& d) { out.push_back({"freshness", d}); };
  for (const auto& [pid, pc] : s.procs) {
    if (!pid.valid() || pid.value >= s.next_pid) bad(pid_str(pid) + " not below the pid counter");
    for (const auto& it : pc.hist) {
      if (it.is_checkpoint() && it.tau.value >= s.next_check) bad("checkpoint t" + std::to_string(it.tau.value));
      if ((it.kind == HistoryItem::Kind::Send || it.kind == HistoryItem::Kind::Rec) && it.tag.value >= s.next_tag)
        bad("tag l" + std::to_string(it.tag.value));
      if (it.kind == HistoryItem::Kind::Spawn && it.peer.value >= s.next_pid) bad("spawned " + pid_str(it.peer));
    }
  }
  for (const auto& m : s.messages)
    if (!m.tag.valid() || m.tag.value >= s.next_tag) bad("message tag l" + std::to_string(m.tag.value));
  for (const auto& [tau, p] : s.creator)
    if (tau.value >= s.next_check) bad("registered checkpoint t" + std::to_string(tau.value));
  // Two processes never record the spawn of the same child.
  std::set<Pid> spawned;
  for (const auto& [pid, pc] : s.procs)
    for (const auto& it : pc.hist)
      if (it.kind == HistoryItem::Kind::Spawn && !spawned.insert(it.peer).second)
        bad(pid_str(it.peer) + " spawned twice");
  return out;
}

std::vector<InvariantViolation> check_tag_exclusivity(const System& s) {
  std::vector<InvariantViolation> out;
  std::map<Tag, int> seen;
  for (const auto& m : s.messages) ++seen[m.tag];
  for (const auto& [pid, pc] : s.procs)
    for (const auto& it : pc.hist)
      if (it.kind == HistoryItem::Kind::Rec) ++seen[it.tag];
  for (const auto& [tag, n] : seen)
    if (n > 1) out.push_back({"tag-exclusivity", "l" + std::to_string(tag.value) + " occurs " + std::to_string(n) + " times"});
  return out;
}

std::vector<InvariantViolation> check_fifo(const System& s) {
  std::vector<InvariantViolation> out;
  std::map<std::pair<Pid, Pid>, std::uint64_t> min_floating;
  for (const auto& m : s.messages) {
    auto key = std::make_pair(m.from, m.to);
    auto it = min_floating.find(key);
    if (it == min_floating.end() || m.seq < it->second) min_floating[key] = m.seq;
  }
  for (const auto& [pid, pc] : s.procs) {
    std::map<Pid, std::uint64_t> newer;  // last seq seen per sender while scanning newest first
    for (const auto& it : pc.hist) {
      if (it.kind != HistoryItem::Kind::Rec) continue;
      auto prev = newer.find(it.peer);
      if (prev != newer.end() && !(it.seq < prev->second))
        out.push_back({"fifo", "receives from " + pid_str(it.peer) + " at " + pid_str(pid) + " out of send order"});
      newer[it.peer] = it.seq;
      auto fl = min_floating.find({it.peer, pid});
      if (fl != min_floating.end() && !(it.seq < fl->second))
        out.push_back({"fifo", pid_str(pid) + " recorded seq " + std::to_string(it.seq) + " from " + pid_str(it.peer) +
                                   " while an older message still floats"});
    }
  }
  return out;
}

std::vector<InvariantViolation> check_history_shape(const System& s) {
  std::vector<InvariantViolation> out;
  using O = HistoryItem::Origin;
  for (const auto& [pid, pc] : s.procs) {
    std::set<CheckId> seen;
    const HistoryItem* prev = nullptr;
    for (const auto& it : pc.hist) {
      if (it.is_checkpoint()) {
        if (!seen.insert(it.tau).second)
          out.push_back({"history-shape", "t" + std::to_string(it.tau.value) + " twice in " + pid_str(pid)});
        if ((it.origin == O::Spawn) != it.state.bottom)
          out.push_back({"history-shape", "null state on a non-spawn checkpoint in " + pid_str(pid)});
        if (prev && prev->is_checkpoint() && prev->origin == it.origin && it.origin != O::User &&
            !(it.tau < prev->tau))
          out.push_back({"history-shape", "forced checkpoints out of order in " + pid_str(pid)});
      }
      prev = &it;
    }
  }
  return out;
}

std::vector<InvariantViolation> check_post_rollback(const System& s) {
  std::vector<InvariantViolation> out;
  for (const auto& [pid, pc] : s.procs) {
    bool spawned_under_checkpoint = false;
    for (const auto& it : pc.hist) {
      if (it.kind == HistoryItem::Kind::Check && it.origin == HistoryItem::Origin::Spawn) spawned_under_checkpoint = true;
      if (it.kind != HistoryItem::Kind::Rec || it.cset.empty()) continue;
      const ProcessConfig* sender = s.find(it.peer);
      bool found = false;
      if (sender)
        for (const auto& x : sender->hist)
          if (x.kind == HistoryItem::Kind::Send && x.tag == it.tag && x.peer == pid) found = true;
      if (!found)
        out.push_back({"post-rollback", pid_str(pid) + " received l" + std::to_string(it.tag.value) +
                                            " that its sender no longer sent"});
    }
    if (!spawned_under_checkpoint) continue;
    bool parent = false;
    for (const auto& [q, qc] : s.procs)
      for (const auto& x : qc.hist)
        if (x.kind == HistoryItem::Kind::Spawn && x.peer == pid) parent = true;
    if (!parent) out.push_back({"post-rollback", pid_str(pid) + " is orphaned"});
  }
  return out;
}

std::vector<InvariantViolation> check_invariants(const System& s, bool commit_free) {
  std::vector<InvariantViolation> out;
  for (auto* f : {&check_freshness, &check_tag_exclusivity, &check_fifo, &check_history_shape}) {
    auto v = f(s);
    out.insert(out.end(), v.begin(), v.end());
  }
  if (commit_free && rollback_quiescent(s)) {
    auto v = check_post_rollback(s);
    out.insert(out.end(), v.begin(), v.end());
  }
  return out;
}

bool has_action(const Scenario& scn, Action::Op op) {
  for (const auto& sc : scn.scripts)
    for (const auto& a : sc.actions)
      if (a.op == op) return true;
  return false;
}

}  // namespace rrsem
