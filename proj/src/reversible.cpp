#include "rrsem/reversible.hpp"

#include <algorithm>
#include <sstream>

namespace rrsem {

std::string to_string(const RevItem& it) {
  switch (it.kind) {
    case RevItem::Kind::Seq: return "seq(" + to_string(it.state) + ")";
    case RevItem::Kind::Send:
      return "send(" + to_string(it.state) + ",p" + std::to_string(it.peer.value) + ",l" +
             std::to_string(it.tag.value) + ")";
    case RevItem::Kind::Rec:
      return "rec(" + to_string(it.state) + ",p" + std::to_string(it.peer.value) + ",p" +
             std::to_string(it.receiver.value) + ",(l" + std::to_string(it.tag.value) + "," + to_string(it.value) +
             "))";
    case RevItem::Kind::Spawn: return "spawn(" + to_string(it.state) + ",p" + std::to_string(it.peer.value) + ")";
    case RevItem::Kind::Check: return "check(t" + std::to_string(it.tau.value) + "," + to_string(it.state) + ")";
  }
  return "?";
}

void RevSystem::add_message(RevMessage m) {
  auto less = [](const RevMessage& a, const RevMessage& b) {
    return std::tie(a.from, a.to, a.seq, a.tag) < std::tie(b.from, b.to, b.seq, b.tag);
  };
  messages.insert(std::upper_bound(messages.begin(), messages.end(), m, less), std::move(m));
}

const RevMessage* RevSystem::message_by_tag(Tag t) const {
  for (const auto& m : messages)
    if (m.tag == t) return &m;
  return nullptr;
}

bool RevSystem::remove_message(Tag t) {
  auto it = std::find_if(messages.begin(), messages.end(), [&](const RevMessage& m) { return m.tag == t; });
  if (it == messages.end()) return false;
  messages.erase(it);
  return true;
}

RevSystem initial_rev(const Scenario& scn) {
  RevSystem s;
  Pid root{s.next_pid++};
  Bindings env = scn.init;
  env["Self"] = Value::pid(root);
  RevConfig c;
  c.pid = root;
  c.state = initial_state(scn, scn.entry, std::move(env));
  s.procs.emplace(root, std::move(c));
  return s;
}

namespace {

std::vector<const RevMessage*> heads(const RevSystem& s, Pid p) {
  std::vector<const RevMessage*> out;
  for (const auto& m : s.messages) {
    if (m.to != p) continue;
    if (!out.empty() && out.back()->from == m.from) continue;
    out.push_back(&m);
  }
  return out;
}

bool pristine_child(const Scenario& scn, const RevSystem& s, const RevItem& spawn_item) {
  const auto it = s.procs.find(spawn_item.peer);
  if (it == s.procs.end() || !it->second.hist.empty()) return false;
  return it->second.state == spawn_effect(scn, spawn_item.state, spawn_item.peer).child;
}

}  // namespace

std::vector<Transition> enabled_rev_forward(const Scenario& scn, const RevSystem& s) {
  std::vector<Transition> out;
  for (const auto& [pid, c] : s.procs) {
    if (!c.phi.empty()) continue;
    const Action* a = current_action(scn, c.state);
    if (!a) continue;
    switch (a->op) {
      case Action::Op::Send: {
        SendEffect eff = send_effect(scn, c.state);
        auto it = s.next_seq.find({pid, eff.to});
        std::uint64_t seq = (it == s.next_seq.end() ? 0 : it->second) + 1;
        out.push_back({Rule::Send, pid, eff.to.value, s.next_tag, seq});
        break;
      }
      case Action::Op::Recv:
        for (const RevMessage* m : heads(s, pid))
          if (receive_effect(scn, c.state, m->value)) out.push_back({Rule::Receive, pid, m->from.value, m->seq, m->tag.value});
        break;
      case Action::Op::Spawn:
        out.push_back({Rule::Spawn, pid, s.next_pid, 0, 0});
        break;
      case Action::Op::Check:
        out.push_back({Rule::Check, pid, s.next_check, 0, 0});
        break;
      case Action::Op::Rollback:
        break;
      default:
        out.push_back({Rule::Seq, pid, 0, 0, 0});
        break;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

Transition backward_of(const RevSystem& s, Pid pid) {
  const RevConfig& c = s.procs.at(pid);
  if (c.hist.empty()) throw SemanticsError("empty history at p" + std::to_string(pid.value));
  const RevItem& it = c.hist.front();
  switch (it.kind) {
    case RevItem::Kind::Seq: return {Rule::SeqBack, pid, 0, 0, 0};
    case RevItem::Kind::Send: return {Rule::SendBack, pid, it.peer.value, it.tag.value, 0};
    case RevItem::Kind::Rec: return {Rule::ReceiveBack, pid, it.peer.value, it.seq, it.tag.value};
    case RevItem::Kind::Spawn: return {Rule::SpawnBack, pid, it.peer.value, 0, 0};
    case RevItem::Kind::Check: return {Rule::CheckBack, pid, it.tau.value, 0, 0};
  }
  throw SemanticsError("bad history item");
}

std::vector<Transition> enabled_rev_backward(const Scenario& scn, const RevSystem& s) {
  std::vector<Transition> out;
  for (const auto& [pid, c] : s.procs) {
    if (c.hist.empty()) continue;
    const RevItem& it = c.hist.front();
    if (it.kind == RevItem::Kind::Send && !s.message_by_tag(it.tag)) continue;
    if (it.kind == RevItem::Kind::Spawn && !pristine_child(scn, s, it)) continue;
    out.push_back(backward_of(s, pid));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Transition> enabled_rev(const Scenario& scn, const RevSystem& s) {
  auto out = enabled_rev_forward(scn, s);
  auto back = enabled_rev_backward(scn, s);
  out.insert(out.end(), back.begin(), back.end());
  std::sort(out.begin(), out.end());
  return out;
}

RevSystem apply_rev(const Scenario& scn, const RevSystem& s, const Transition& t) {
  RevSystem out = s;
  auto it = out.procs.find(t.pid);
  if (it == out.procs.end()) throw SemanticsError("no process p" + std::to_string(t.pid.value));
  RevConfig& c = it->second;
  auto push = [&](RevItem item) { c.hist.insert(c.hist.begin(), std::move(item)); };
  auto pop_head = [&](RevItem::Kind kind) {
    if (c.hist.empty() || c.hist.front().kind != kind)
      throw SemanticsError("history head does not match " + std::string(rule_name(t.rule)));
    RevItem head = c.hist.front();
    c.hist.erase(c.hist.begin());
    c.state = head.state;
    return head;
  };

  switch (t.rule) {
    case Rule::Seq: {
      RevItem item;
      item.state = c.state;
      const Action* a = current_action(scn, c.state);
      if (a && a->op == Action::Op::Commit) {
        c.state = check_op_effect(scn, c.state).next;
      } else {
        c.state = local_step(scn, c.state, out.cursors);
      }
      push(std::move(item));
      break;
    }
    case Rule::Check: {
      CheckId tau{out.next_check++};
      RevItem item;
      item.kind = RevItem::Kind::Check;
      item.state = c.state;
      item.tau = tau;
      c.state = check_effect(scn, c.state, tau);
      push(std::move(item));
      break;
    }
    case Rule::Send: {
      SendEffect eff = send_effect(scn, c.state);
      Tag l{out.next_tag++};
      std::uint64_t seq = next_channel_seq(out.next_seq, c.pid, eff.to);
      out.add_message({c.pid, eff.to, l, eff.value, seq});
      RevItem item;
      item.kind = RevItem::Kind::Send;
      item.state = c.state;
      item.peer = eff.to;
      item.tag = l;
      c.state = std::move(eff.next);
      push(std::move(item));
      break;
    }
    case Rule::Receive: {
      const RevMessage* m = out.message_by_tag(Tag{t.c});
      if (!m) throw SemanticsError("no floating message l" + std::to_string(t.c));
      RevMessage msg = *m;
      auto next = receive_effect(scn, c.state, msg.value);
      if (!next) throw SemanticsError("message does not match");
      out.remove_message(msg.tag);
      RevItem item;
      item.kind = RevItem::Kind::Rec;
      item.state = c.state;
      item.peer = msg.from;
      item.receiver = msg.to;
      item.tag = msg.tag;
      item.value = msg.value;
      item.seq = msg.seq;
      c.state = std::move(*next);
      push(std::move(item));
      break;
    }
    case Rule::Spawn: {
      Pid child{out.next_pid++};
      SpawnEffect eff = spawn_effect(scn, c.state, child);
      RevItem item;
      item.kind = RevItem::Kind::Spawn;
      item.state = c.state;
      item.peer = child;
      c.state = std::move(eff.parent);
      push(std::move(item));
      RevConfig cc;
      cc.pid = child;
      cc.state = std::move(eff.child);
      out.procs.emplace(child, std::move(cc));
      break;
    }
    case Rule::SeqBack:
      pop_head(RevItem::Kind::Seq);
      break;
    case Rule::CheckBack:
      pop_head(RevItem::Kind::Check);
      break;
    case Rule::SendBack: {
      if (c.hist.empty() || !out.message_by_tag(c.hist.front().tag))
        throw SemanticsError("sent message is not floating");
      RevItem head = pop_head(RevItem::Kind::Send);
      out.remove_message(head.tag);
      break;
    }
    case Rule::ReceiveBack: {
      RevItem head = pop_head(RevItem::Kind::Rec);
      out.add_message({head.peer, head.receiver, head.tag, head.value, head.seq});
      break;
    }
    case Rule::SpawnBack: {
      if (c.hist.empty() || c.hist.front().kind != RevItem::Kind::Spawn || !pristine_child(scn, out, c.hist.front()))
        throw SemanticsError("spawned process is not in its initial state");
      RevItem head = pop_head(RevItem::Kind::Spawn);
      out.procs.erase(head.peer);
      break;
    }
    default:
      throw SemanticsError(std::string("rule ") + rule_name(t.rule) + " is not part of the reversible semantics");
  }
  return out;
}

bool same_up_to_counters(const RevSystem& a, const RevSystem& b) {
  return a.procs == b.procs && a.messages == b.messages;
}

// ---------------------------------------------------------------------------
// Controlled backward semantics

const char* to_string(CtrlRule r) {
  switch (r) {
    case CtrlRule::Seq: return "Seq";
    case CtrlRule::Check: return "Check";
    case CtrlRule::SP: return "SP";
    case CtrlRule::Receive: return "Receive";
    case CtrlRule::Spawn1: return "Spawn1";
    case CtrlRule::Spawn2: return "Spawn2";
    case CtrlRule::Send1: return "Send1";
    case CtrlRule::Send2: return "Send2";
  }
  return "?";
}

bool has_requests(const RevSystem& s) {
  for (const auto& [pid, c] : s.procs)
    if (!c.phi.empty()) return true;
  return false;
}

namespace {

// Checkpoint served by a configuration's requests; propagated requests
// inherit it.
CheckId served(const RevConfig& c) {
  CheckId best;
  for (const auto& r : c.phi)
    if (!best.valid() || r.serving < best) best = r.serving;
  return best;
}

void retire(std::set<Request>& phi, Request::Kind kind, CheckId tau, Tag tag) {
  for (auto it = phi.begin(); it != phi.end();) {
    bool hit = it->kind == kind && (kind == Request::Kind::Check   ? it->serving == tau
                                    : kind == Request::Kind::Msg   ? it->tag == tag
                                                                   : true);
    it = hit ? phi.erase(it) : std::next(it);
  }
}

// Tries rule r on configuration c; returns the successor when it applies.
std::optional<RevSystem> try_rule(const Scenario&, const RevSystem& s, const RevConfig& c, CtrlRule r) {
  if (c.phi.empty()) return std::nullopt;
  const RevItem* head = c.hist.empty() ? nullptr : &c.hist.front();
  auto kind_is = [&](RevItem::Kind k) { return head && head->kind == k; };
  switch (r) {
    case CtrlRule::Seq: {
      if (!kind_is(RevItem::Kind::Seq)) return std::nullopt;
      RevSystem out = s;
      RevConfig& cc = out.procs.at(c.pid);
      cc.state = head->state;
      cc.hist.erase(cc.hist.begin());
      return out;
    }
    case CtrlRule::Check: {
      if (!kind_is(RevItem::Kind::Check)) return std::nullopt;
      RevSystem out = s;
      RevConfig& cc = out.procs.at(c.pid);
      cc.state = head->state;
      retire(cc.phi, Request::Kind::Check, head->tau, Tag{});
      cc.hist.erase(cc.hist.begin());
      return out;
    }
    case CtrlRule::SP: {
      if (head) return std::nullopt;
      bool has_sp = std::any_of(c.phi.begin(), c.phi.end(), [](const Request& q) { return q.kind == Request::Kind::Sp; });
      if (!has_sp) return std::nullopt;
      RevSystem out = s;
      retire(out.procs.at(c.pid).phi, Request::Kind::Sp, CheckId{}, Tag{});
      return out;
    }
    case CtrlRule::Receive: {
      if (!kind_is(RevItem::Kind::Rec)) return std::nullopt;
      RevSystem out = s;
      RevConfig& cc = out.procs.at(c.pid);
      RevItem item = *head;
      cc.state = item.state;
      retire(cc.phi, Request::Kind::Msg, CheckId{}, item.tag);
      cc.hist.erase(cc.hist.begin());
      out.add_message({item.peer, item.receiver, item.tag, item.value, item.seq});
      return out;
    }
    case CtrlRule::Spawn1: {
      if (!kind_is(RevItem::Kind::Spawn)) return std::nullopt;
      auto child = s.procs.find(head->peer);
      if (child == s.procs.end() || !child->second.hist.empty() || !child->second.phi.empty()) return std::nullopt;
      RevSystem out = s;
      RevConfig& cc = out.procs.at(c.pid);
      Pid gone = head->peer;
      cc.state = head->state;
      cc.hist.erase(cc.hist.begin());
      out.procs.erase(gone);
      return out;
    }
    case CtrlRule::Spawn2: {
      if (!kind_is(RevItem::Kind::Spawn)) return std::nullopt;
      auto child = s.procs.find(head->peer);
      if (child == s.procs.end()) return std::nullopt;
      if (child->second.hist.empty() && child->second.phi.empty()) return std::nullopt;
      Request req{Request::Kind::Sp, served(c), Tag{}};
      bool already = std::any_of(child->second.phi.begin(), child->second.phi.end(),
                                 [](const Request& q) { return q.kind == Request::Kind::Sp; });
      if (already) return std::nullopt;
      RevSystem out = s;
      out.procs.at(head->peer).phi.insert(req);
      return out;
    }
    case CtrlRule::Send1: {
      if (!kind_is(RevItem::Kind::Send) || !s.message_by_tag(head->tag)) return std::nullopt;
      RevSystem out = s;
      RevConfig& cc = out.procs.at(c.pid);
      Tag l = head->tag;
      cc.state = head->state;
      cc.hist.erase(cc.hist.begin());
      out.remove_message(l);
      return out;
    }
    case CtrlRule::Send2: {
      if (!kind_is(RevItem::Kind::Send) || s.message_by_tag(head->tag)) return std::nullopt;
      auto recv = s.procs.find(head->peer);
      if (recv == s.procs.end()) return std::nullopt;
      Tag l = head->tag;
      bool already = std::any_of(recv->second.phi.begin(), recv->second.phi.end(),
                                 [&](const Request& q) { return q.kind == Request::Kind::Msg && q.tag == l; });
      if (already) return std::nullopt;
      RevSystem out = s;
      out.procs.at(head->peer).phi.insert(Request{Request::Kind::Msg, served(c), l});
      return out;
    }
  }
  return std::nullopt;
}

constexpr CtrlRule kOrder[] = {CtrlRule::Seq,    CtrlRule::Check,  CtrlRule::SP,    CtrlRule::Receive,
                               CtrlRule::Spawn1, CtrlRule::Spawn2, CtrlRule::Send1, CtrlRule::Send2};

}  // namespace

std::optional<CtrlStep> ctrl_step(const Scenario& scn, const RevSystem& s) {
  if (!has_requests(s)) return std::nullopt;
  for (CtrlRule r : kOrder)
    for (const auto& [pid, c] : s.procs)
      if (auto next = try_rule(scn, s, c, r)) return CtrlStep{r, pid, std::move(*next)};
  std::string who;
  for (const auto& [pid, c] : s.procs)
    if (!c.phi.empty()) who += " p" + std::to_string(pid.value);
  throw CtrlStuck("controlled rollback is stuck with pending requests at" + who);
}

RevSystem ctrl_rollback(const Scenario& scn, const RevSystem& s, Pid p, CheckId tau, std::vector<CtrlStep>* log,
                        std::size_t max_steps) {
  if (has_requests(s)) throw SemanticsError("another controlled rollback is in progress");
  const RevConfig& c = s.procs.at(p);
  bool found = std::any_of(c.hist.begin(), c.hist.end(),
                           [&](const RevItem& it) { return it.kind == RevItem::Kind::Check && it.tau == tau; });
  if (!found) throw SemanticsError("no check(t" + std::to_string(tau.value) + ") in the history of p" + std::to_string(p.value));
  RevSystem cur = s;
  cur.procs.at(p).phi.insert(Request{Request::Kind::Check, tau, Tag{}});
  for (std::size_t i = 0; i < max_steps; ++i) {
    auto st = ctrl_step(scn, cur);
    if (!st) return cur;
    cur = st->next;
    if (log) log->push_back(std::move(*st));
  }
  throw CtrlStuck("controlled rollback did not terminate within the step bound");
}

RevSystem rolldel(const RevSystem& s) {
  RevSystem out = s;
  for (auto& [pid, c] : out.procs) c.phi.clear();
  return out;
}

std::string canonical(const RevSystem& s) {
  std::ostringstream o;
  for (const auto& [pid, c] : s.procs) {
    o << '<' << pid.value << " h";
    for (const auto& it : c.hist) o << to_string(it) << ';';
    o << " s" << to_string(c.state) << " f";
    for (const auto& r : c.phi) o << static_cast<int>(r.kind) << ':' << r.serving.value << ':' << r.tag.value << ';';
    o << '>';
  }
  o << "M";
  for (const auto& m : s.messages)
    o << '(' << m.from.value << ',' << m.to.value << ',' << m.tag.value << ',' << to_string(m.value) << ',' << m.seq
      << ')';
  return o.str();
}

std::string to_string(const RevSystem& s, const Scenario* scn) {
  std::ostringstream o;
  for (const auto& [pid, c] : s.procs) {
    o << "  p" << pid.value;
    if (!c.phi.empty()) o << " phi=" << c.phi.size();
    o << " " << to_string(c.state, scn) << "\n      [";
    for (std::size_t i = 0; i < c.hist.size(); ++i) o << (i ? ", " : "") << to_string(c.hist[i]);
    o << "]\n";
  }
  for (const auto& m : s.messages)
    o << "  msg p" << m.from.value << "->p" << m.to.value << " (l" << m.tag.value << "," << to_string(m.value)
      << ") #" << m.seq << "\n";
  return o.str();
}

}  // namespace rrsem
