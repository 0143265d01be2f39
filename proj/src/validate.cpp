#include "rrsem/validate.hpp"

#include <set>
#include <tuple>

namespace rrsem {

using WD = WellDefinednessError::Requirement;

std::string to_string(const Diagnostic& d) {
  std::string out = d.script + "@" + std::to_string(d.action);
  if (d.pid) out += " (p" + std::to_string(d.pid->value) + ")";
  out += d.requirement ? std::string(" [") + to_string(*d.requirement) + "]" : std::string(" [structure]");
  return out + " " + d.message;
}

Diagnostic diagnostic_of(const WellDefinednessError& e) {
  Diagnostic d;
  d.requirement = e.requirement;
  d.pid = e.pid;
  d.action = e.action;
  d.message = e.what();
  return d;
}

namespace {

enum class St : std::uint8_t { Unbound, Own, Resolved, Foreign };
using Env = std::map<std::string, St>;

St status(const Env& env, const std::string& v) {
  auto it = env.find(v);
  return it == env.end() ? St::Unbound : it->second;
}

struct Walker {
  const Scenario& scn;
  const Script& sc;
  std::set<std::tuple<std::size_t, int, std::string>> seen_diag;
  std::vector<Diagnostic>& out;

  void report(std::size_t i, std::optional<WD> req, const std::string& msg) {
    if (!seen_diag.insert({i, req ? static_cast<int>(*req) : -1, msg}).second) return;
    out.push_back({req, sc.name, i, std::nullopt, msg});
  }

  void need_bound(std::size_t i, const Term& t, const Env& env) {
    std::vector<std::string> vars;
    collect_vars(t, vars);
    for (const auto& v : vars)
      if (status(env, v) == St::Unbound) report(i, std::nullopt, "variable " + v + " may be unbound");
  }

  void run(Env start) {
    std::set<std::pair<std::size_t, Env>> visited;
    std::vector<std::pair<std::size_t, Env>> stack{{0, std::move(start)}};
    while (!stack.empty()) {
      auto [pc, env] = std::move(stack.back());
      stack.pop_back();
      if (pc >= sc.actions.size() || !visited.insert({pc, env}).second) continue;
      const Action& a = sc.actions[pc];
      std::size_t next = pc + 1;
      switch (a.op) {
        case Action::Op::Stop: continue;
        case Action::Op::Goto: next = *sc.label_index(a.name); break;
        case Action::Op::BranchOracle:
          stack.emplace_back(*sc.label_index(a.then_label), env);
          next = *sc.label_index(a.else_label);
          break;
        case Action::Op::Check: env[a.var] = St::Own; break;
        case Action::Op::Spawn:
          for (const auto& [k, e] : a.args) need_bound(pc, e, env);
          env[a.var] = St::Foreign;
          break;
        case Action::Op::Send:
          need_bound(pc, a.target, env);
          need_bound(pc, a.value, env);
          break;
        case Action::Op::Recv: {
          for (const auto& d : duplicate_binders(a.pattern)) report(pc, std::nullopt, "binder " + d + " used twice");
          std::vector<std::string> vars;
          collect_vars(a.pattern, vars);
          for (const auto& v : vars)
            if (status(env, v) == St::Unbound) env[v] = St::Foreign;
          break;
        }
        case Action::Op::Commit:
        case Action::Op::Rollback: {
          const char* op = a.op == Action::Op::Commit ? "commit" : "rollback";
          switch (status(env, a.var)) {
            case St::Unbound:
              report(pc, WD::PrecededByCheck, std::string(op) + "(" + a.var + ") without a preceding check");
              break;
            case St::Foreign:
              report(pc, WD::SameProcess, std::string(op) + "(" + a.var + ") on a value this process did not create");
              break;
            case St::Resolved:
              report(pc, WD::NotBoth, std::string(op) + "(" + a.var + ") on an already resolved checkpoint");
              break;
            case St::Own: break;
          }
          if (a.op == Action::Op::Rollback) {
            if (scn.options.oplus == Oplus::Restore) continue;
            env[a.var] = St::Unbound;
          } else {
            env[a.var] = St::Resolved;
          }
          break;
        }
        default: break;
      }
      stack.emplace_back(next, std::move(env));
    }
  }
};

}  // namespace

std::vector<Diagnostic> validate_static(const Scenario& scn) {
  std::vector<Diagnostic> out;
  const Script* entry = scn.find(scn.entry);
  if (!entry) {
    out.push_back({WD::InitialSystem, scn.entry, 0, std::nullopt, "no entry script"});
    return out;
  }
  // Entry conditions per script: the root gets the initial bindings, spawned
  // processes get their arguments. Everything passed in is foreign.
  std::map<std::string, std::set<Env>> starts;
  Env root{{"Self", St::Foreign}};
  for (const auto& [k, v] : scn.init) root[k] = St::Foreign;
  starts[entry->name].insert(root);
  for (const auto& sc : scn.scripts)
    for (const auto& a : sc.actions)
      if (a.op == Action::Op::Spawn) {
        Env env{{"Self", St::Foreign}};
        for (const auto& [k, e] : a.args) env[k] = St::Foreign;
        starts[a.name].insert(env);
      }
  for (const auto& sc : scn.scripts) {
    Walker w{scn, sc, {}, out};
    for (const auto& env : starts[sc.name]) w.run(env);
  }
  return out;
}

}  // namespace rrsem
