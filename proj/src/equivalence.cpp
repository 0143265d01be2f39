#include "rrsem/equivalence.hpp"

#include <algorithm>
#include <sstream>

#include "rrsem/rollback.hpp"

namespace rrsem {

std::string to_string(const AbstractSystem& a) {
  std::ostringstream o;
  for (const auto& [pid, c] : a.procs) {
    o << "  p" << pid.value << " " << to_string(c.state) << " [";
    for (std::size_t i = 0; i < c.hist.size(); ++i) {
      const auto& it = c.hist[i];
      if (i) o << ", ";
      switch (it.kind) {
        case AbsItem::Kind::Send: o << "send(p" << it.peer.value << ",l" << it.tag.value << ")"; break;
        case AbsItem::Kind::Rec:
          o << "rec(p" << it.peer.value << ",p" << it.receiver.value << ",l" << it.tag.value << ")";
          break;
        case AbsItem::Kind::Spawn: o << "spawn(p" << it.peer.value << ")"; break;
        case AbsItem::Kind::Check: o << "check(t" << it.tau.value << "," << to_string(it.state) << ")"; break;
      }
    }
    o << "]\n";
  }
  for (const auto& m : a.messages)
    o << "  msg p" << m.from.value << "->p" << m.to.value << " (l" << m.tag.value << "," << to_string(m.value)
      << ")\n";
  return o.str();
}

StdSystem sta(const System& s) {
  StdSystem out;
  for (const auto& [pid, pc] : s.procs) {
    if (pc.mode != Mode::Normal)
      throw SemanticsError("sta undefined on blocked configs (p" + std::to_string(pid.value) + ")");
    out.procs.emplace(pid, pc.state);
  }
  for (const auto& m : s.messages) out.add_message({m.from, m.to, m.value, m.seq});
  out.next_pid = s.next_pid;
  out.next_check = s.next_check;
  out.next_seq = s.next_seq;
  out.cursors = s.cursors;
  return out;
}

AbstractSystem floor_of(const System& s) {
  AbstractSystem out;
  for (const auto& [pid, pc] : s.procs) {
    AbsConfig c;
    c.state = pc.state;
    for (const auto& it : pc.hist) {
      AbsItem a;
      switch (it.kind) {
        case HistoryItem::Kind::DelayedCheck:
          continue;
        case HistoryItem::Kind::Check:
          if (it.forced()) continue;
          a.kind = AbsItem::Kind::Check;
          a.tau = it.tau;
          a.state = it.state;
          break;
        case HistoryItem::Kind::Send:
          a.kind = AbsItem::Kind::Send;
          a.peer = it.peer;
          a.tag = it.tag;
          break;
        case HistoryItem::Kind::Rec:
          a.kind = AbsItem::Kind::Rec;
          a.peer = it.peer;
          a.receiver = it.receiver;
          a.tag = it.tag;
          a.value = it.value;
          break;
        case HistoryItem::Kind::Spawn:
          a.kind = AbsItem::Kind::Spawn;
          a.peer = it.peer;
          break;
      }
      c.hist.push_back(std::move(a));
    }
    out.procs.emplace(pid, std::move(c));
  }
  for (const auto& m : s.messages) out.messages.push_back({m.from, m.to, m.tag, m.value});
  std::sort(out.messages.begin(), out.messages.end());
  return out;
}

AbstractSystem ceil_of(const RevSystem& s) {
  AbstractSystem out;
  for (const auto& [pid, rc] : s.procs) {
    if (!rc.phi.empty())
      throw SemanticsError("ceil undefined with pending rollback requests (p" + std::to_string(pid.value) + ")");
    AbsConfig c;
    c.state = rc.state;
    for (const auto& it : rc.hist) {
      AbsItem a;
      switch (it.kind) {
        case RevItem::Kind::Seq:
          continue;
        case RevItem::Kind::Check:
          a.kind = AbsItem::Kind::Check;
          a.tau = it.tau;
          a.state = it.state;
          break;
        case RevItem::Kind::Send:
          a.kind = AbsItem::Kind::Send;
          a.peer = it.peer;
          a.tag = it.tag;
          break;
        case RevItem::Kind::Rec:
          a.kind = AbsItem::Kind::Rec;
          a.peer = it.peer;
          a.receiver = it.receiver;
          a.tag = it.tag;
          a.value = it.value;
          break;
        case RevItem::Kind::Spawn:
          a.kind = AbsItem::Kind::Spawn;
          a.peer = it.peer;
          break;
      }
      c.hist.push_back(std::move(a));
    }
    out.procs.emplace(pid, std::move(c));
  }
  for (const auto& m : s.messages) out.messages.push_back({m.from, m.to, m.tag, m.value});
  std::sort(out.messages.begin(), out.messages.end());
  return out;
}

bool equiv(const System& rr, const RevSystem& rev) { return floor_of(rr) == ceil_of(rev); }

namespace {

RevItem rev_item_of(const HistoryItem& it, Pid pid) {
  RevItem r;
  auto pre = [&] {
    if (!it.pre) throw SemanticsError("history item of p" + std::to_string(pid.value) + " has no recorded state");
    return *it.pre;
  };
  switch (it.kind) {
    case HistoryItem::Kind::Check:
      r.kind = RevItem::Kind::Check;
      r.tau = it.tau;
      r.state = it.state;
      break;
    case HistoryItem::Kind::Send:
      r.kind = RevItem::Kind::Send;
      r.state = pre();
      r.peer = it.peer;
      r.tag = it.tag;
      break;
    case HistoryItem::Kind::Rec:
      r.kind = RevItem::Kind::Rec;
      r.state = pre();
      r.peer = it.peer;
      r.receiver = it.receiver;
      r.tag = it.tag;
      r.value = it.value;
      r.seq = it.seq;
      break;
    case HistoryItem::Kind::Spawn:
      r.kind = RevItem::Kind::Spawn;
      r.state = pre();
      r.peer = it.peer;
      break;
    default:
      throw SemanticsError("no reversible counterpart for a delayed checkpoint");
  }
  return r;
}

bool kept(const HistoryItem& it) {
  return !(it.kind == HistoryItem::Kind::DelayedCheck || (it.kind == HistoryItem::Kind::Check && it.forced()));
}

}  // namespace

RevSystem mirror_of(const System& s) {
  RevSystem out;
  for (const auto& [pid, pc] : s.procs) {
    if (pc.mode != Mode::Normal)
      throw SemanticsError("mirror_of requires a system without ongoing rollbacks (p" + std::to_string(pid.value) + ")");
    RevConfig rc;
    rc.pid = pid;
    rc.state = pc.state;
    for (const auto& it : pc.hist)
      if (kept(it)) rc.hist.push_back(rev_item_of(it, pid));
    out.procs.emplace(pid, std::move(rc));
  }
  for (const auto& m : s.messages) out.add_message({m.from, m.to, m.tag, m.value, m.seq});
  out.next_pid = s.next_pid;
  out.next_tag = s.next_tag;
  out.next_check = s.next_check;
  out.next_seq = s.next_seq;
  out.cursors = s.cursors;
  return out;
}

namespace {

void compare_projections(const System& rr, const RevSystem& rev, std::size_t step) {
  auto fail = [&](const std::string& what) {
    throw SemanticsError("rollback and reversible replays diverge at step " + std::to_string(step) + ": " + what);
  };
  if (rr.procs.size() != rev.procs.size()) fail("process sets differ");
  for (const auto& [pid, pc] : rr.procs) {
    auto it = rev.procs.find(pid);
    if (it == rev.procs.end()) fail("missing p" + std::to_string(pid.value));
    if (!(it->second.state == pc.state)) fail("state of p" + std::to_string(pid.value));
  }
  if (rr.messages.size() != rev.messages.size()) fail("message counts differ");
  for (std::size_t i = 0; i < rr.messages.size(); ++i) {
    const auto& a = rr.messages[i];
    const auto& b = rev.messages[i];
    if (a.from != b.from || a.to != b.to || a.tag != b.tag || !(a.value == b.value) || a.seq != b.seq)
      fail("message l" + std::to_string(a.tag.value));
  }
}

std::pair<System, RevSystem> replay_both(const Scenario& scn, const std::vector<Transition>& trace) {
  System rr = initial_system(scn);
  RevSystem rev = initial_rev(scn);
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const Transition& t = trace[i];
    if (!is_forward(t.rule))
      throw SemanticsError("step " + std::to_string(i) + " (" + to_string(t) + ") is not a forward step");
    rr = apply_rr(scn, rr, t);
    auto en = enabled_rev_forward(scn, rev);
    if (!std::binary_search(en.begin(), en.end(), t))
      throw SemanticsError("step " + std::to_string(i) + " (" + to_string(t) + ") is not enabled in the reversible semantics");
    rev = apply_rev(scn, rev, t);
    compare_projections(rr, rev, i);
  }
  return {std::move(rr), std::move(rev)};
}

}  // namespace

RevSystem replay_rev(const Scenario& scn, const std::vector<Transition>& trace) {
  return replay_both(scn, trace).second;
}

RevSystem mirror_replay(const Scenario& scn, const std::vector<Transition>& trace) {
  auto [rr, rev] = replay_both(scn, trace);
  for (auto& [pid, rc] : rev.procs) {
    const ProcessConfig& pc = rr.at(pid);
    std::vector<RevItem> selected;
    for (const auto& it : pc.hist) {
      if (!kept(it)) continue;
      auto match = std::find_if(rc.hist.begin(), rc.hist.end(), [&](const RevItem& r) {
        switch (it.kind) {
          case HistoryItem::Kind::Check: return r.kind == RevItem::Kind::Check && r.tau == it.tau;
          case HistoryItem::Kind::Send: return r.kind == RevItem::Kind::Send && r.tag == it.tag;
          case HistoryItem::Kind::Rec: return r.kind == RevItem::Kind::Rec && r.tag == it.tag;
          case HistoryItem::Kind::Spawn: return r.kind == RevItem::Kind::Spawn && r.peer == it.peer;
          default: return false;
        }
      });
      if (match == rc.hist.end())
        throw SemanticsError("no reversible item for " + to_string(it) + " at p" + std::to_string(pid.value));
      selected.push_back(*match);
    }
    rc.hist = std::move(selected);
  }
  return rev;
}

}  // namespace rrsem
