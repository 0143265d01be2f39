#include "rrsem/local.hpp"
#include "rrsem/scenario.hpp"

namespace rrsem {

Action Action::spawn(std::string var, std::string script, std::map<std::string, Expr> args) {
  Action a;
  a.op = Op::Spawn;
  a.var = std::move(var);
  a.name = std::move(script);
  a.args = std::move(args);
  return a;
}

Action Action::send(Expr target, Expr value) {
  Action a;
  a.op = Op::Send;
  a.target = std::move(target);
  a.value = std::move(value);
  return a;
}

Action Action::recv(Pattern p) {
  Action a;
  a.op = Op::Recv;
  a.pattern = std::move(p);
  return a;
}

Action Action::check(std::string var) {
  Action a;
  a.op = Op::Check;
  a.var = std::move(var);
  return a;
}

Action Action::commit(std::string var) {
  Action a;
  a.op = Op::Commit;
  a.var = std::move(var);
  return a;
}

Action Action::rollback(std::string var) {
  Action a;
  a.op = Op::Rollback;
  a.var = std::move(var);
  return a;
}

Action Action::seq() {
  Action a;
  a.op = Op::Seq;
  return a;
}

Action Action::label(std::string name) {
  Action a;
  a.op = Op::Label;
  a.name = std::move(name);
  return a;
}

Action Action::go(std::string label) {
  Action a;
  a.op = Op::Goto;
  a.name = std::move(label);
  return a;
}

Action Action::branch(std::string oracle, std::string then_label, std::string else_label) {
  Action a;
  a.op = Op::BranchOracle;
  a.name = std::move(oracle);
  a.then_label = std::move(then_label);
  a.else_label = std::move(else_label);
  return a;
}

Action Action::stop() { return Action{}; }

const char* op_name(Action::Op op) {
  switch (op) {
    case Action::Op::Spawn: return "spawn";
    case Action::Op::Send: return "send";
    case Action::Op::Recv: return "recv";
    case Action::Op::Check: return "check";
    case Action::Op::Commit: return "commit";
    case Action::Op::Rollback: return "rollback";
    case Action::Op::Seq: return "seq";
    case Action::Op::Label: return "label";
    case Action::Op::Goto: return "goto";
    case Action::Op::BranchOracle: return "branch_oracle";
    case Action::Op::Stop: return "stop";
  }
  return "?";
}

std::optional<std::size_t> Script::label_index(const std::string& label) const {
  for (std::size_t i = 0; i < actions.size(); ++i)
    if (actions[i].op == Action::Op::Label && actions[i].name == label) return i;
  return std::nullopt;
}

const Script* Scenario::find(const std::string& name) const {
  for (const auto& s : scripts)
    if (s.name == name) return &s;
  return nullptr;
}

std::size_t Scenario::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < scripts.size(); ++i)
    if (scripts[i].name == name) return i;
  throw std::out_of_range("unknown script " + name);
}

const char* to_string(Oplus m) { return m == Oplus::Restore ? "restore" : "continue"; }
const char* to_string(Roll3Reply r) { return r == Roll3Reply::Async ? "async" : "sync"; }

// ---------------------------------------------------------------------------
// Local interpreter

std::string to_string(const LocalState& s, const Scenario* scn) {
  if (s.bottom) return "_|_";
  std::string out = scn ? scn->script(s.script).name : "s" + std::to_string(s.script);
  out += "@" + std::to_string(s.pc) + "[";
  bool first = true;
  for (const auto& [k, v] : s.env) {
    if (!first) out += ",";
    first = false;
    out += k + "=" + to_string(v);
  }
  return out + "]";
}

const Action* current_action(const Scenario& scn, const LocalState& s) {
  if (s.bottom) return nullptr;
  const auto& acts = scn.script(s.script).actions;
  if (s.pc >= acts.size()) return nullptr;
  const Action& a = acts[s.pc];
  return a.op == Action::Op::Stop ? nullptr : &a;
}

LocalState initial_state(const Scenario& scn, const std::string& script, Bindings env) {
  LocalState s;
  s.script = static_cast<std::uint32_t>(scn.index_of(script));
  s.env = std::move(env);
  return s;
}

bool is_local_action(Action::Op op) {
  return op == Action::Op::Seq || op == Action::Op::Label || op == Action::Op::Goto ||
         op == Action::Op::BranchOracle;
}

namespace {

const Action& expect(const Scenario& scn, const LocalState& s, Action::Op op) {
  const Action* a = current_action(scn, s);
  if (!a || a->op != op) throw ScriptError(std::string("process is not at a ") + op_name(op) + " action");
  return *a;
}

LocalState jump(const Scenario& scn, LocalState s, const std::string& label) {
  auto idx = scn.script(s.script).label_index(label);
  if (!idx) throw ScriptError("unknown label " + label);
  s.pc = static_cast<std::uint32_t>(*idx);
  return s;
}

Value eval_in(const Expr& e, const Bindings& env) {
  try {
    return eval(e, env);
  } catch (const EvalError& err) {
    throw ScriptError(err.what());
  }
}

}  // namespace

LocalState local_step(const Scenario& scn, const LocalState& s, OracleCursors& cursors) {
  const Action* a = current_action(scn, s);
  if (!a || !is_local_action(a->op)) throw ScriptError("process is not at a local action");
  switch (a->op) {
    case Action::Op::Goto:
      return jump(scn, s, a->name);
    case Action::Op::BranchOracle: {
      bool outcome = false;
      auto it = scn.oracles.find(a->name);
      std::size_t& pos = cursors[a->name];
      if (it != scn.oracles.end() && pos < it->second.size()) outcome = it->second[pos];
      ++pos;
      return jump(scn, s, outcome ? a->then_label : a->else_label);
    }
    default: {
      LocalState next = s;
      ++next.pc;
      return next;
    }
  }
}

SendEffect send_effect(const Scenario& scn, const LocalState& s) {
  const Action& a = expect(scn, s, Action::Op::Send);
  Value to = eval_in(a.target, s.env);
  if (!to.is_pid()) throw ScriptError("send target " + to_string(to) + " is not a pid");
  SendEffect eff{to.as_pid(), eval_in(a.value, s.env), s};
  ++eff.next.pc;
  return eff;
}

SpawnEffect spawn_effect(const Scenario& scn, const LocalState& s, Pid child) {
  const Action& a = expect(scn, s, Action::Op::Spawn);
  Bindings env;
  for (const auto& [k, e] : a.args) env[k] = eval_in(e, s.env);
  env["Self"] = Value::pid(child);
  SpawnEffect eff{s, LocalState{}};
  eff.child = initial_state(scn, a.name, std::move(env));
  eff.parent.env[a.var] = Value::pid(child);
  ++eff.parent.pc;
  return eff;
}

std::optional<LocalState> receive_effect(const Scenario& scn, const LocalState& s, const Value& v) {
  const Action& a = expect(scn, s, Action::Op::Recv);
  auto env = match_value(a.pattern, v, s.env);
  if (!env) return std::nullopt;
  LocalState next = s;
  next.env = std::move(*env);
  ++next.pc;
  return next;
}

LocalState check_effect(const Scenario& scn, const LocalState& s, CheckId tau) {
  const Action& a = expect(scn, s, Action::Op::Check);
  LocalState next = s;
  next.env[a.var] = Value::check(tau);
  ++next.pc;
  return next;
}

CheckOpEffect check_op_effect(const Scenario& scn, const LocalState& s) {
  const Action* a = current_action(scn, s);
  if (!a || (a->op != Action::Op::Commit && a->op != Action::Op::Rollback))
    throw ScriptError("process is not at a commit/rollback action");
  auto it = s.env.find(a->var);
  if (it == s.env.end()) throw ScriptError("unbound checkpoint variable " + a->var);
  if (!it->second.is_check()) throw ScriptError(a->var + " is not a checkpoint identifier");
  CheckOpEffect eff{it->second.as_check(), s};
  ++eff.next.pc;
  return eff;
}

}  // namespace rrsem
