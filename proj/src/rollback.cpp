#include "rrsem/rollback.hpp"

#include <algorithm>

namespace rrsem {

using NK = Notification::Kind;
using WD = WellDefinednessError::Requirement;

LocalState combine(Oplus mode, const LocalState& current, const LocalState& saved) {
  if (mode == Oplus::Restore || saved.bottom || current.bottom) return saved;
  LocalState out = current;
  out.env = saved.env;
  return out;
}

bool rollback_quiescent(const System& s) {
  for (const auto& [pid, pc] : s.procs)
    if (pc.mode != Mode::Normal) return false;
  for (const auto& n : s.notes)
    if (n.kind != NK::Commit) return false;
  return true;
}

bool rollback_completed(const System& s, Pid initiator, CheckId tau) {
  const ProcessConfig* init = s.find(initiator);
  if (!init || init->mode != Mode::Normal) return false;
  for (const auto& [pid, pc] : s.procs) {
    if (pc.mode == Mode::Blocked && (pc.block.tau == tau || pc.block.W.count(tau))) return false;
    if (pc.mode == Mode::AwaitResume && pc.await_tau == tau) return false;
  }
  for (const auto& n : s.notes)
    if (n.kind != NK::Commit && n.tau == tau) return false;
  return true;
}

namespace {

std::uint32_t action_index(const ProcessConfig& pc) { return pc.state.bottom ? 0 : pc.state.pc; }

// Checks the requirements on commit(tau)/rollback(tau) issued by pc.
void require_well_defined(const System& s, const ProcessConfig& pc, CheckId tau, const char* op) {
  auto where = [&] {
    return std::string(op) + "(t" + std::to_string(tau.value) + ") by p" + std::to_string(pc.pid.value) +
           " at action " + std::to_string(action_index(pc));
  };
  auto cr = s.creator.find(tau);
  if (cr == s.creator.end())
    throw WellDefinednessError(WD::PrecededByCheck, pc.pid, action_index(pc), where() + ": no such checkpoint");
  if (cr->second != pc.pid)
    throw WellDefinednessError(WD::SameProcess, pc.pid, action_index(pc),
                               where() + ": checkpoint created by p" + std::to_string(cr->second.value));
  if (s.resolved.count(tau))
    throw WellDefinednessError(WD::NotBoth, pc.pid, action_index(pc), where() + ": checkpoint already resolved");
  if (!has_check(tau, pc.hist))
    throw WellDefinednessError(WD::PrecededByCheck, pc.pid, action_index(pc),
                               where() + ": checkpoint is not active in the history");
}

void forward_transitions(const Scenario& scn, const System& s, const ProcessConfig& pc, std::vector<Transition>& out) {
  const Action* a = current_action(scn, pc.state);
  if (!a) return;
  Pid p = pc.pid;
  switch (a->op) {
    case Action::Op::Send: {
      SendEffect eff = send_effect(scn, pc.state);
      auto it = s.next_seq.find({p, eff.to});
      std::uint64_t seq = (it == s.next_seq.end() ? 0 : it->second) + 1;
      out.push_back({Rule::Send, p, eff.to.value, s.next_tag, seq});
      break;
    }
    case Action::Op::Recv:
      for (const ExtendedMessage* m : eligible_messages(s, p))
        if (receive_effect(scn, pc.state, m->value)) out.push_back({Rule::Receive, p, m->from.value, m->seq, m->tag.value});
      break;
    case Action::Op::Spawn:
      out.push_back({Rule::Spawn, p, s.next_pid, 0, 0});
      break;
    case Action::Op::Check:
      out.push_back({Rule::Check, p, s.next_check, 0, 0});
      break;
    case Action::Op::Commit: {
      CheckId tau = check_op_effect(scn, pc.state).tau;
      require_well_defined(s, pc, tau, "commit");
      out.push_back({last_active(tau, pc.hist) ? Rule::Commit : Rule::Delay, p, tau.value, 0, 0});
      break;
    }
    case Action::Op::Rollback: {
      CheckId tau = check_op_effect(scn, pc.state).tau;
      require_well_defined(s, pc, tau, "rollback");
      out.push_back({Rule::Rollback, p, tau.value, 0, 0});
      break;
    }
    default:
      out.push_back({Rule::Seq, p, 0, 0, 0});
      break;
  }
}

// tau' <=_Delta tau: the ongoing rollback (to tau') is at least as old as the
// requested one.
bool older_or_same(CheckId ongoing, CheckId requested, const History& h) {
  return ongoing == requested || !has_checkpoint(requested, h);
}

void note_transitions(const Scenario& scn, const System& s, const Notification& n, std::vector<Transition>& out) {
  const ProcessConfig* pc = s.find(n.to);
  const auto& opt = scn.options;
  switch (n.kind) {
    case NK::Roll: {
      Transition t{Rule::Roll1, n.to, n.from.value, n.tau.value, n.initiator.value};
      if (!pc) {
        if (opt.answer_for_deleted) {
          t.rule = Rule::RollGone;
          out.push_back(t);
        }
        return;
      }
      if (pc->mode == Mode::Normal) {
        t.rule = has_check(n.tau, pc->hist) ? Rule::Roll1 : Rule::Roll2;
        out.push_back(t);
      } else if (pc->mode == Mode::Blocked && older_or_same(pc->block.tau, n.tau, pc->hist)) {
        t.rule = Rule::Roll3;
        out.push_back(t);
      }
      return;
    }
    case NK::DoneAsync:
    case NK::DoneSync:
      if (pc && pc->mode == Mode::Blocked && pc->block.tau == n.tau && pc->block.L.empty())
        out.push_back({n.kind == NK::DoneAsync ? Rule::UndoDep1 : Rule::UndoDep2, n.to, n.from.value, n.tau.value, 0});
      return;
    case NK::Resume:
      if (!pc) return;
      if (pc->mode == Mode::AwaitResume && pc->await_tau == n.tau)
        out.push_back({Rule::Resume4, n.to, n.from.value, n.tau.value, 0});
      else if (pc->mode == Mode::Blocked && pc->block.W.count(n.tau))
        out.push_back({Rule::Resume5, n.to, n.from.value, n.tau.value, 0});
      return;
    case NK::Commit:
      if (!pc) {
        if (opt.answer_for_deleted) out.push_back({Rule::CommitGone, n.to, n.from.value, n.tau.value, 0});
        return;
      }
      if (pc->mode == Mode::Normal && has_check(n.tau, pc->hist))
        out.push_back({last_active(n.tau, pc->hist) ? Rule::Commit2 : Rule::Delay2, n.to, n.from.value,
                       n.tau.value, 0});
      return;
  }
}

void process_transitions(const System& s, const ProcessConfig& pc, std::vector<Transition>& out) {
  if (pc.mode == Mode::Blocked) {
    const auto& b = pc.block;
    for (Tag l : b.L)
      if (s.message_by_tag(l)) out.push_back({Rule::UndoSend, pc.pid, l.value, 0, 0});
    if (b.L.empty() && b.P.empty() && b.W.empty()) {
      Rule r = pc.pid == b.initiator ? Rule::Resume1 : pc.state.bottom ? Rule::Resume2 : Rule::Resume3;
      out.push_back({r, pc.pid, b.tau.value, 0, 0});
    }
  } else if (pc.mode == Mode::Normal) {
    for (CheckId tau : delayed(pc.hist))
      if (last_active(tau, pc.hist)) out.push_back({Rule::Commit3, pc.pid, tau.value, 0, 0});
  }
}

Notification note_of(const Transition& t) {
  Notification n;
  n.to = t.pid;
  n.from = Pid{t.a};
  n.tau = CheckId{t.b};
  switch (t.rule) {
    case Rule::Roll1:
    case Rule::Roll2:
    case Rule::Roll3:
    case Rule::RollGone:
      n.kind = NK::Roll;
      n.initiator = Pid{t.c};
      break;
    case Rule::UndoDep1: n.kind = NK::DoneAsync; break;
    case Rule::UndoDep2: n.kind = NK::DoneSync; break;
    case Rule::Resume4:
    case Rule::Resume5: n.kind = NK::Resume; break;
    default: n.kind = NK::Commit; break;
  }
  return n;
}

void send_notes(System& s, Pid from, const std::set<Pid>& to, NK kind, CheckId tau, Pid initiator = Pid{}) {
  for (Pid q : to) s.add_note(Notification{from, q, kind, tau, initiator});
}

// Shared body of Rollback and Roll1.
void start_rollback(System& s, ProcessConfig& pc, CheckId tau, Pid initiator, Pid requester, LocalState recovered,
                    ChkResult r) {
  pc.mode = Mode::Blocked;
  pc.block = BlockInfo{tau, initiator, requester, r.L, r.P, {}};
  pc.hist = std::move(r.rest);
  pc.state = std::move(recovered);
  for (auto& m : r.Ms) s.add_message(std::move(m));
  send_notes(s, pc.pid, r.P, NK::Roll, tau, initiator);
}

void commit_here(System& s, ProcessConfig& pc, CheckId tau) {
  std::set<Pid> deps = dp(tau, pc.hist);
  pc.hist = del(tau, pc.hist);
  send_notes(s, pc.pid, deps, NK::Commit, tau);
}

}  // namespace

std::vector<Transition> enabled_rr(const Scenario& scn, const System& s) {
  std::vector<Transition> out;
  for (const auto& [pid, pc] : s.procs) {
    if (pc.mode == Mode::Normal) forward_transitions(scn, s, pc, out);
    process_transitions(s, pc, out);
  }
  const Notification* prev = nullptr;
  for (const auto& n : s.notes) {
    if (prev && *prev == n) continue;  // identical copies give the same step
    prev = &n;
    note_transitions(scn, s, n, out);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Transition> enabled_protocol(const Scenario& scn, const System& s) {
  std::vector<Transition> all;
  for (const auto& [pid, pc] : s.procs) process_transitions(s, pc, all);
  const Notification* prev = nullptr;
  for (const auto& n : s.notes) {
    if (prev && *prev == n) continue;
    prev = &n;
    note_transitions(scn, s, n, all);
  }
  std::vector<Transition> out;
  for (const auto& t : all)
    if (is_protocol(t.rule)) out.push_back(t);
  std::sort(out.begin(), out.end());
  return out;
}

System apply_rr(const Scenario& scn, const System& s, const Transition& t, bool verify) {
  if (verify) {
    auto en = enabled_rr(scn, s);
    if (!std::binary_search(en.begin(), en.end(), t))
      throw SemanticsError("transition " + to_string(t) + " is not enabled");
  }
  System out = s;
  const auto& opt = scn.options;

  switch (t.rule) {
    case Rule::Seq: {
      ProcessConfig& pc = out.at(t.pid);
      pc.state = local_step(scn, pc.state, out.cursors);
      break;
    }
    case Rule::Check: {
      ProcessConfig& pc = out.at(t.pid);
      CheckId tau = fresh_check(out);
      out.creator[tau] = pc.pid;
      pc.hist.insert(pc.hist.begin(), HistoryItem::check(tau, pc.state));
      pc.state = check_effect(scn, pc.state, tau);
      break;
    }
    case Rule::Send: {
      ProcessConfig& pc = out.at(t.pid);
      SendEffect eff = send_effect(scn, pc.state);
      Tag l = fresh_tag(out);
      std::uint64_t seq = next_channel_seq(out.next_seq, pc.pid, eff.to);
      out.add_message(ExtendedMessage{chks(pc.hist), pc.pid, eff.to, l, eff.value, seq});
      HistoryItem item = HistoryItem::send(eff.to, l);
      item.pre = std::make_shared<const LocalState>(pc.state);
      pc.hist = add(item, pc.hist);
      pc.state = std::move(eff.next);
      break;
    }
    case Rule::Receive: {
      ProcessConfig& pc = out.at(t.pid);
      const ExtendedMessage* m = out.message_by_tag(Tag{t.c});
      if (!m) throw SemanticsError("no floating message l" + std::to_string(t.c));
      ExtendedMessage msg = *m;
      auto next = receive_effect(scn, pc.state, msg.value);
      if (!next) throw SemanticsError("message does not match at p" + std::to_string(t.pid.value));
      out.remove_message(msg.tag);
      CheckSet active = chks(pc.hist);
      for (CheckId tau : msg.cset) {
        if (active.count(tau)) continue;
        if (opt.skip_own_forced) {
          auto cr = out.creator.find(tau);
          if (cr != out.creator.end() && cr->second == pc.pid) continue;
          if (has_checkpoint(tau, pc.hist)) continue;
        }
        pc.hist.insert(pc.hist.begin(), HistoryItem::check(tau, pc.state, HistoryItem::Origin::Receive));
      }
      HistoryItem item = HistoryItem::rec(msg.cset, msg.from, msg.to, msg.tag, msg.value, msg.seq);
      item.pre = std::make_shared<const LocalState>(pc.state);
      pc.hist = add(item, pc.hist);
      pc.state = std::move(*next);
      break;
    }
    case Rule::Spawn: {
      ProcessConfig& parent = out.at(t.pid);
      Pid child = fresh_pid(out);
      SpawnEffect eff = spawn_effect(scn, parent.state, child);
      ProcessConfig cc;
      cc.pid = child;
      cc.state = std::move(eff.child);
      CheckSet active = chks(parent.hist);
      for (auto it = active.rbegin(); it != active.rend(); ++it)
        cc.hist.push_back(HistoryItem::check(*it, LocalState::bot(), HistoryItem::Origin::Spawn));
      HistoryItem item = HistoryItem::spawn(child);
      item.pre = std::make_shared<const LocalState>(parent.state);
      parent.hist = add(item, parent.hist);
      parent.state = std::move(eff.parent);
      out.procs.emplace(child, std::move(cc));
      break;
    }
    case Rule::Rollback: {
      ProcessConfig& pc = out.at(t.pid);
      CheckOpEffect eff = check_op_effect(scn, pc.state);
      ChkResult r = chk(eff.tau, pc.hist);
      LocalState recovered = combine(opt.oplus, eff.next, r.saved);
      out.resolved.insert(eff.tau);
      start_rollback(out, pc, eff.tau, pc.pid, pc.pid, std::move(recovered), std::move(r));
      break;
    }
    case Rule::Roll1: {
      Notification n = note_of(t);
      out.remove_note(n);
      ProcessConfig& pc = out.at(t.pid);
      ChkResult r = chk(n.tau, pc.hist);
      LocalState saved = r.saved;
      start_rollback(out, pc, n.tau, n.initiator, n.from, std::move(saved), std::move(r));
      break;
    }
    case Rule::Roll2: {
      Notification n = note_of(t);
      out.remove_note(n);
      ProcessConfig& pc = out.at(t.pid);
      pc.mode = Mode::Blocked;
      pc.block = BlockInfo{n.tau, n.initiator, n.from, {}, {}, {}};
      break;
    }
    case Rule::Roll3: {
      Notification n = note_of(t);
      out.remove_note(n);
      ProcessConfig& pc = out.at(t.pid);
      if (opt.roll3 == Roll3Reply::Async) {
        out.add_note(Notification{pc.pid, n.from, NK::DoneAsync, n.tau, {}});
      } else {
        pc.block.W.insert(n.tau);
        out.add_note(Notification{pc.pid, n.from, NK::DoneSync, n.tau, {}});
      }
      break;
    }
    case Rule::RollGone: {
      Notification n = note_of(t);
      out.remove_note(n);
      out.add_note(Notification{n.to, n.from, NK::DoneAsync, n.tau, {}});
      break;
    }
    case Rule::UndoSend: {
      ProcessConfig& pc = out.at(t.pid);
      out.remove_message(Tag{t.a});
      pc.block.L.erase(Tag{t.a});
      break;
    }
    case Rule::UndoDep1:
    case Rule::UndoDep2: {
      Notification n = note_of(t);
      out.remove_note(n);
      ProcessConfig& pc = out.at(t.pid);
      pc.block.P.erase(n.from);
      if (t.rule == Rule::UndoDep2) out.add_note(Notification{pc.pid, n.from, NK::Resume, n.tau, {}});
      break;
    }
    case Rule::Resume1: {
      ProcessConfig& pc = out.at(t.pid);
      pc.mode = Mode::Normal;
      pc.block = BlockInfo{};
      break;
    }
    case Rule::Resume2: {
      ProcessConfig pc = out.at(t.pid);
      out.procs.erase(t.pid);
      out.add_note(Notification{pc.pid, pc.block.requester, NK::DoneAsync, pc.block.tau, {}});
      break;
    }
    case Rule::Resume3: {
      ProcessConfig& pc = out.at(t.pid);
      Notification reply{pc.pid, pc.block.requester, NK::DoneSync, pc.block.tau, {}};
      pc.mode = Mode::AwaitResume;
      pc.await_tau = pc.block.tau;
      pc.block = BlockInfo{};
      out.add_note(reply);
      break;
    }
    case Rule::Resume4: {
      out.remove_note(note_of(t));
      ProcessConfig& pc = out.at(t.pid);
      pc.mode = Mode::Normal;
      pc.await_tau = CheckId{};
      break;
    }
    case Rule::Resume5: {
      Notification n = note_of(t);
      out.remove_note(n);
      out.at(t.pid).block.W.erase(n.tau);
      break;
    }
    case Rule::Commit:
    case Rule::Delay: {
      ProcessConfig& pc = out.at(t.pid);
      CheckOpEffect eff = check_op_effect(scn, pc.state);
      out.resolved.insert(eff.tau);
      if (t.rule == Rule::Commit) commit_here(out, pc, eff.tau);
      else pc.hist = delay(eff.tau, pc.hist);
      pc.state = std::move(eff.next);
      break;
    }
    case Rule::Commit2:
    case Rule::Delay2: {
      Notification n = note_of(t);
      out.remove_note(n);
      ProcessConfig& pc = out.at(t.pid);
      if (t.rule == Rule::Commit2) commit_here(out, pc, n.tau);
      else pc.hist = delay(n.tau, pc.hist);
      break;
    }
    case Rule::Commit3:
      commit_here(out, out.at(t.pid), CheckId{t.a});
      break;
    case Rule::CommitGone:
      out.remove_note(note_of(t));
      break;
    default:
      throw SemanticsError(std::string("rule ") + rule_name(t.rule) + " is not part of the rollback semantics");
  }
  return out;
}

}  // namespace rrsem
