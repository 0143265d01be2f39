#include "rrsem/system.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace rrsem {

HistoryItem HistoryItem::check(CheckId tau, LocalState s, Origin origin) {
  HistoryItem it;
  it.kind = Kind::Check;
  it.origin = origin;
  it.tau = tau;
  it.state = std::move(s);
  return it;
}

HistoryItem HistoryItem::delayed_check(CheckId tau, LocalState s, Origin origin) {
  HistoryItem it = check(tau, std::move(s), origin);
  it.kind = Kind::DelayedCheck;
  return it;
}

HistoryItem HistoryItem::send(Pid to, Tag tag) {
  HistoryItem it;
  it.kind = Kind::Send;
  it.peer = to;
  it.tag = tag;
  return it;
}

HistoryItem HistoryItem::rec(CheckSet c, Pid from, Pid to, Tag tag, Value v, std::uint64_t seq) {
  HistoryItem it;
  it.kind = Kind::Rec;
  it.cset = std::move(c);
  it.peer = from;
  it.receiver = to;
  it.tag = tag;
  it.value = std::move(v);
  it.seq = seq;
  return it;
}

HistoryItem HistoryItem::spawn(Pid child) {
  HistoryItem it;
  it.kind = Kind::Spawn;
  it.peer = child;
  return it;
}

bool operator==(const HistoryItem& a, const HistoryItem& b) {
  return a.kind == b.kind && a.origin == b.origin && a.tau == b.tau && a.state == b.state && a.peer == b.peer &&
         a.receiver == b.receiver && a.tag == b.tag && a.value == b.value && a.cset == b.cset && a.seq == b.seq;
}

namespace {

std::string set_str(const CheckSet& c) {
  std::string out = "{";
  bool first = true;
  for (auto t : c) {
    if (!first) out += ",";
    first = false;
    out += "t" + std::to_string(t.value);
  }
  return out + "}";
}

const char* origin_str(HistoryItem::Origin o) {
  switch (o) {
    case HistoryItem::Origin::User: return "";
    case HistoryItem::Origin::Receive: return "!r";
    case HistoryItem::Origin::Spawn: return "!s";
  }
  return "";
}

}  // namespace

std::string to_string(const HistoryItem& it) {
  switch (it.kind) {
    case HistoryItem::Kind::Check:
      return "check(t" + std::to_string(it.tau.value) + origin_str(it.origin) + "," + to_string(it.state) + ")";
    case HistoryItem::Kind::DelayedCheck:
      return "dcheck(t" + std::to_string(it.tau.value) + origin_str(it.origin) + "," + to_string(it.state) + ")";
    case HistoryItem::Kind::Send:
      return "send(p" + std::to_string(it.peer.value) + ",l" + std::to_string(it.tag.value) + ")";
    case HistoryItem::Kind::Rec:
      return "rec(" + set_str(it.cset) + ",p" + std::to_string(it.peer.value) + ",p" +
             std::to_string(it.receiver.value) + ",(l" + std::to_string(it.tag.value) + "," + to_string(it.value) +
             ")#" + std::to_string(it.seq) + ")";
    case HistoryItem::Kind::Spawn:
      return "spawn(p" + std::to_string(it.peer.value) + ")";
  }
  return "?";
}

std::string to_string(const History& h) {
  std::string out = "[";
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (i) out += ", ";
    out += to_string(h[i]);
  }
  return out + "]";
}

const char* to_string(Notification::Kind k) {
  switch (k) {
    case Notification::Kind::Roll: return "roll";
    case Notification::Kind::DoneAsync: return "done-async";
    case Notification::Kind::DoneSync: return "done-sync";
    case Notification::Kind::Resume: return "resume";
    case Notification::Kind::Commit: return "commit";
  }
  return "?";
}

std::string to_string(const Notification& n) {
  std::string out = "<<p" + std::to_string(n.from.value) + ",p" + std::to_string(n.to.value) + ",";
  if (n.kind == Notification::Kind::Roll) out += "{p" + std::to_string(n.initiator.value) + ",";
  else out += "{";
  return out + to_string(n.kind) + ",t" + std::to_string(n.tau.value) + "}>>";
}

const char* to_string(WellDefinednessError::Requirement r) {
  switch (r) {
    case WellDefinednessError::Requirement::InitialSystem: return "initial-system";
    case WellDefinednessError::Requirement::SameProcess: return "same-process";
    case WellDefinednessError::Requirement::PrecededByCheck: return "preceded-by-check";
    case WellDefinednessError::Requirement::NotBoth: return "not-both";
  }
  return "?";
}

// ---------------------------------------------------------------------------

ProcessConfig* System::find(Pid p) {
  auto it = procs.find(p);
  return it == procs.end() ? nullptr : &it->second;
}

const ProcessConfig* System::find(Pid p) const {
  auto it = procs.find(p);
  return it == procs.end() ? nullptr : &it->second;
}

ProcessConfig& System::at(Pid p) {
  if (auto* c = find(p)) return *c;
  throw SemanticsError("no process p" + std::to_string(p.value));
}

const ProcessConfig& System::at(Pid p) const {
  if (auto* c = find(p)) return *c;
  throw SemanticsError("no process p" + std::to_string(p.value));
}

namespace {

bool msg_less(const ExtendedMessage& a, const ExtendedMessage& b) {
  return std::tie(a.from, a.to, a.seq, a.tag) < std::tie(b.from, b.to, b.seq, b.tag);
}

}  // namespace

void System::add_message(ExtendedMessage m) {
  auto pos = std::upper_bound(messages.begin(), messages.end(), m, msg_less);
  messages.insert(pos, std::move(m));
}

void System::add_note(Notification n) {
  auto pos = std::upper_bound(notes.begin(), notes.end(), n);
  notes.insert(pos, n);
}

bool System::remove_message(Tag tag) {
  auto it = std::find_if(messages.begin(), messages.end(), [&](const auto& m) { return m.tag == tag; });
  if (it == messages.end()) return false;
  messages.erase(it);
  return true;
}

bool System::remove_note(const Notification& n) {
  auto it = std::find(notes.begin(), notes.end(), n);
  if (it == notes.end()) return false;
  notes.erase(it);
  return true;
}

const ExtendedMessage* System::message_by_tag(Tag tag) const {
  for (const auto& m : messages)
    if (m.tag == tag) return &m;
  return nullptr;
}

std::uint64_t fresh(IdKind kind, std::uint64_t& counter) {
  if (counter == std::numeric_limits<std::uint64_t>::max()) {
    static const char* names[] = {"pid", "tag", "checkpoint"};
    throw SemanticsError(std::string(names[static_cast<int>(kind)]) + " counter exhausted");
  }
  return counter++;
}

Pid fresh_pid(System& s) { return Pid{fresh(IdKind::Pid, s.next_pid)}; }
Tag fresh_tag(System& s) { return Tag{fresh(IdKind::Tag, s.next_tag)}; }
CheckId fresh_check(System& s) { return CheckId{fresh(IdKind::Check, s.next_check)}; }

std::uint64_t next_channel_seq(std::map<std::pair<Pid, Pid>, std::uint64_t>& seqs, Pid from, Pid to) {
  return ++seqs[{from, to}];
}

std::vector<const ExtendedMessage*> eligible_messages(const System& s, Pid p) {
  // messages are sorted by (from, to, seq), so the first hit per sender is
  // the channel head
  std::vector<const ExtendedMessage*> out;
  for (const auto& m : s.messages) {
    if (m.to != p) continue;
    if (!out.empty() && out.back()->from == m.from) continue;
    out.push_back(&m);
  }
  return out;
}

System initial_system(const Scenario& scn) {
  System s;
  Pid root = fresh_pid(s);
  ProcessConfig pc;
  pc.pid = root;
  Bindings env = scn.init;
  env["Self"] = Value::pid(root);
  pc.state = initial_state(scn, scn.entry, std::move(env));
  s.procs.emplace(root, std::move(pc));
  return s;
}

namespace {

void put_state(std::ostringstream& o, const LocalState& s) {
  if (s.bottom) {
    o << "_";
    return;
  }
  o << s.script << '@' << s.pc << '[';
  for (const auto& [k, v] : s.env) o << k << '=' << to_string(v) << ';';
  o << ']';
}

void put_item(std::ostringstream& o, const HistoryItem& it) {
  o << static_cast<int>(it.kind) << static_cast<int>(it.origin) << ':';
  switch (it.kind) {
    case HistoryItem::Kind::Check:
    case HistoryItem::Kind::DelayedCheck:
      o << it.tau.value << ',';
      put_state(o, it.state);
      break;
    case HistoryItem::Kind::Send:
    case HistoryItem::Kind::Spawn:
      o << it.peer.value << ',' << it.tag.value;
      break;
    case HistoryItem::Kind::Rec:
      for (auto t : it.cset) o << t.value << ' ';
      o << '|' << it.peer.value << ',' << it.receiver.value << ',' << it.tag.value << ',' << to_string(it.value)
        << ',' << it.seq;
      break;
  }
  o << ';';
}

}  // namespace

std::string canonical(const System& s) {
  std::ostringstream o;
  o << "P";
  for (const auto& [pid, pc] : s.procs) {
    o << '<' << pid.value << ' ' << static_cast<int>(pc.mode);
    if (pc.mode == Mode::Blocked) {
      const auto& b = pc.block;
      o << '^' << b.tau.value << ',' << b.initiator.value << ',' << b.requester.value << ",L";
      for (auto l : b.L) o << l.value << ' ';
      o << "P";
      for (auto p : b.P) o << p.value << ' ';
      o << "W";
      for (auto w : b.W) o << w.value << ' ';
    } else if (pc.mode == Mode::AwaitResume) {
      o << '^' << pc.await_tau.value;
    }
    o << " h";
    for (const auto& it : pc.hist) put_item(o, it);
    o << " s";
    put_state(o, pc.state);
    o << '>';
  }
  o << "M";
  for (const auto& m : s.messages) {
    o << '(';
    for (auto t : m.cset) o << t.value << ' ';
    o << '|' << m.from.value << ',' << m.to.value << ',' << m.tag.value << ',' << to_string(m.value) << ','
      << m.seq << ')';
  }
  o << "N";
  for (const auto& n : s.notes)
    o << '(' << n.from.value << ',' << n.to.value << ',' << static_cast<int>(n.kind) << ',' << n.tau.value << ','
      << n.initiator.value << ')';
  o << "C" << s.next_pid << ',' << s.next_tag << ',' << s.next_check;
  for (const auto& [ch, q] : s.next_seq) o << ';' << ch.first.value << '>' << ch.second.value << '=' << q;
  o << "O";
  for (const auto& [k, v] : s.cursors) o << k << '=' << v << ';';
  o << "R";
  for (const auto& [t, p] : s.creator) o << t.value << '>' << p.value << (s.resolved.count(t) ? "x" : "") << ';';
  return o.str();
}

std::string to_string(const System& s, const Scenario* scn) {
  std::ostringstream o;
  for (const auto& [pid, pc] : s.procs) {
    o << "  p" << pid.value;
    if (pc.mode == Mode::Blocked) {
      const auto& b = pc.block;
      o << " ^(t" << b.tau.value << ",p" << b.initiator.value << ",p" << b.requester.value << ",L=" << b.L.size()
        << ",P=" << b.P.size();
      if (!b.W.empty()) o << ",W=" << set_str(b.W);
      o << ")";
    } else if (pc.mode == Mode::AwaitResume) {
      o << " ^(t" << pc.await_tau.value << ")";
    }
    o << " " << to_string(pc.state, scn) << "\n      " << to_string(pc.hist) << "\n";
  }
  for (const auto& m : s.messages)
    o << "  msg " << set_str(m.cset) << " p" << m.from.value << "->p" << m.to.value << " (l" << m.tag.value << ","
      << to_string(m.value) << ") #" << m.seq << "\n";
  for (const auto& n : s.notes) o << "  note " << to_string(n) << "\n";
  return o.str();
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t h) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) out[i] = digits[h & 0xf];
  return out;
}

std::uint64_t state_hash(const System& s) { return fnv1a(canonical(s)); }

}  // namespace rrsem
