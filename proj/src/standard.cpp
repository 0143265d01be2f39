#include "rrsem/standard.hpp"

#include <algorithm>
#include <sstream>

namespace rrsem {

void StdSystem::add_message(StdMessage m) {
  auto less = [](const StdMessage& a, const StdMessage& b) {
    return std::tie(a.from, a.to, a.seq) < std::tie(b.from, b.to, b.seq);
  };
  messages.insert(std::upper_bound(messages.begin(), messages.end(), m, less), std::move(m));
}

StdSystem initial_std(const Scenario& scn) {
  StdSystem s;
  Pid root{s.next_pid++};
  Bindings env = scn.init;
  env["Self"] = Value::pid(root);
  s.procs.emplace(root, initial_state(scn, scn.entry, std::move(env)));
  return s;
}

namespace {

std::vector<const StdMessage*> heads(const StdSystem& s, Pid p) {
  std::vector<const StdMessage*> out;
  for (const auto& m : s.messages) {
    if (m.to != p) continue;
    if (!out.empty() && out.back()->from == m.from) continue;
    out.push_back(&m);
  }
  return out;
}

}  // namespace

std::vector<Transition> enabled_std(const Scenario& scn, const StdSystem& s) {
  std::vector<Transition> out;
  for (const auto& [pid, st] : s.procs) {
    const Action* a = current_action(scn, st);
    if (!a) continue;
    switch (a->op) {
      case Action::Op::Send: {
        SendEffect eff = send_effect(scn, st);
        auto it = s.next_seq.find({pid, eff.to});
        std::uint64_t seq = (it == s.next_seq.end() ? 0 : it->second) + 1;
        out.push_back({Rule::Send, pid, eff.to.value, 0, seq});
        break;
      }
      case Action::Op::Recv:
        for (const StdMessage* m : heads(s, pid))
          if (receive_effect(scn, st, m->value)) out.push_back({Rule::Receive, pid, m->from.value, m->seq, 0});
        break;
      case Action::Op::Spawn:
        out.push_back({Rule::Spawn, pid, s.next_pid, 0, 0});
        break;
      case Action::Op::Check:
        out.push_back({Rule::Seq, pid, 0, 0, 0});
        break;
      case Action::Op::Commit:
      case Action::Op::Rollback:
        throw IllFormed(std::string(op_name(a->op)) + " is not part of the standard semantics (p" +
                        std::to_string(pid.value) + ")");
      default:
        out.push_back({Rule::Seq, pid, 0, 0, 0});
        break;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

StdSystem apply_std(const Scenario& scn, const StdSystem& s, const Transition& t) {
  auto stale = [&](const std::string& why) {
    return SemanticsError("stale transition " + to_string(t) + ": " + why);
  };
  auto it = s.procs.find(t.pid);
  if (it == s.procs.end()) throw stale("no such process");
  const Action* a = current_action(scn, it->second);
  if (!a) throw stale("process has finished");
  StdSystem out = s;
  LocalState& st = out.procs.at(t.pid);
  switch (t.rule) {
    case Rule::Seq:
      if (a->op == Action::Op::Check) {
        st = check_effect(scn, st, CheckId{out.next_check++});
      } else {
        if (!is_local_action(a->op)) throw stale("not at a local action");
        st = local_step(scn, st, out.cursors);
      }
      break;
    case Rule::Send: {
      if (a->op != Action::Op::Send) throw stale("not at a send");
      SendEffect eff = send_effect(scn, st);
      if (eff.to.value != t.a) throw stale("receiver differs");
      std::uint64_t seq = next_channel_seq(out.next_seq, t.pid, eff.to);
      if (t.c && seq != t.c) throw stale("channel sequence differs");
      out.add_message({t.pid, eff.to, eff.value, seq});
      st = eff.next;
      break;
    }
    case Rule::Receive: {
      if (a->op != Action::Op::Recv) throw stale("not at a receive");
      auto hs = heads(s, t.pid);
      auto m = std::find_if(hs.begin(), hs.end(), [&](const StdMessage* x) { return x->from.value == t.a; });
      if (m == hs.end() || (*m)->seq != t.b) throw stale("no such channel head");
      auto next = receive_effect(scn, st, (*m)->value);
      if (!next) throw stale("message does not match");
      StdMessage taken = **m;
      out.messages.erase(std::find(out.messages.begin(), out.messages.end(), taken));
      st = std::move(*next);
      break;
    }
    case Rule::Spawn: {
      if (a->op != Action::Op::Spawn) throw stale("not at a spawn");
      if (t.a != out.next_pid) throw stale("fresh pid differs");
      Pid child{out.next_pid++};
      SpawnEffect eff = spawn_effect(scn, st, child);
      st = eff.parent;
      out.procs.emplace(child, std::move(eff.child));
      break;
    }
    default:
      throw stale("rule not part of the standard semantics");
  }
  return out;
}

std::string canonical(const StdSystem& s) {
  std::ostringstream o;
  o << "P";
  for (const auto& [pid, st] : s.procs) o << '<' << pid.value << ' ' << to_string(st) << '>';
  o << "M";
  for (const auto& m : s.messages)
    o << '(' << m.from.value << ',' << m.to.value << ',' << to_string(m.value) << ',' << m.seq << ')';
  o << "C" << s.next_pid << ',' << s.next_check;
  for (const auto& [ch, q] : s.next_seq) o << ';' << ch.first.value << '>' << ch.second.value << '=' << q;
  o << "O";
  for (const auto& [k, v] : s.cursors) o << k << '=' << v << ';';
  return o.str();
}

std::string to_string(const StdSystem& s, const Scenario* scn) {
  std::ostringstream o;
  for (const auto& [pid, st] : s.procs) o << "  p" << pid.value << " " << to_string(st, scn) << "\n";
  for (const auto& m : s.messages)
    o << "  msg p" << m.from.value << "->p" << m.to.value << " " << to_string(m.value) << " #" << m.seq << "\n";
  return o.str();
}

}  // namespace rrsem
