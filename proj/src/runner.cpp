#include "rrsem/runner.hpp"

#include <algorithm>

#include "rrsem/equivalence.hpp"
#include "rrsem/rollback.hpp"

namespace rrsem {

const char* to_string(SemanticsKind k) {
  switch (k) {
    case SemanticsKind::Standard: return "standard";
    case SemanticsKind::Rollback: return "rollback";
    case SemanticsKind::Reversible: return "reversible";
  }
  return "?";
}

std::optional<SemanticsKind> semantics_from_name(const std::string& name) {
  for (auto k : {SemanticsKind::Standard, SemanticsKind::Rollback, SemanticsKind::Reversible})
    if (name == to_string(k)) return k;
  return std::nullopt;
}

const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Quiescent: return "quiescent";
    case RunStatus::Stuck: return "stuck";
    case RunStatus::MaxSteps: return "max-steps";
    case RunStatus::Aborted: return "aborted";
  }
  return "?";
}

std::size_t FairScheduler::pick(const std::vector<Transition>& enabled) {
  std::map<FairKey, std::size_t> now;
  for (const auto& t : enabled) {
    auto it = waiting_.find(fair_key(t));
    now.emplace(fair_key(t), it == waiting_.end() ? 0 : it->second);
  }
  std::size_t choice = enabled.size();
  std::size_t worst = 0;
  for (std::size_t i = 0; i < enabled.size(); ++i) {
    std::size_t w = now.at(fair_key(enabled[i]));
    if (w >= k_ && (choice == enabled.size() || w > worst)) {
      choice = i;
      worst = w;
    }
  }
  if (choice < enabled.size()) ++forced_;
  else choice = static_cast<std::size_t>(rng_() % enabled.size());
  FairKey taken = fair_key(enabled[choice]);
  waiting_.clear();
  for (const auto& [k, w] : now)
    if (!(k == taken)) {
      waiting_[k] = w + 1;
      longest_ = std::max(longest_, w + 1);
    }
  return choice;
}

std::vector<Transition> Trace::transitions() const {
  std::vector<Transition> out;
  out.reserve(steps.size());
  for (const auto& st : steps) out.push_back(st.t);
  return out;
}

std::string system_hash(const System& s) { return hex64(fnv1a(canonical(s))); }
std::string system_hash(const StdSystem& s) { return hex64(fnv1a(canonical(s))); }
std::string system_hash(const RevSystem& s) { return hex64(fnv1a(canonical(s))); }

Transition std_step_of(const Transition& t) {
  switch (t.rule) {
    case Rule::Send: return {Rule::Send, t.pid, t.a, 0, t.c};
    case Rule::Receive: return {Rule::Receive, t.pid, t.a, t.b, 0};
    case Rule::Check: return {Rule::Seq, t.pid, 0, 0, 0};
    default: return t;
  }
}

namespace {

Scenario with_meta(const Scenario& scn, const TraceMeta& m) {
  Scenario out = scn;
  out.options.oplus = m.oplus;
  out.options.roll3 = m.roll3;
  return out;
}

// Shared driver: Enabled(s) lists steps, Apply(s, t) returns the successor,
// Done(s) classifies a system without steps.
template <class Sys, class Enabled, class Apply, class Done, class After>
void drive(Sys& s, const RunConfig& cfg, RunResult& res, Enabled enabled, Apply apply, Done done, After after) {
  FairScheduler sch(cfg.seed);
  for (;;) {
    if (res.trace.steps.size() >= cfg.max_steps) {
      res.status = RunStatus::MaxSteps;
      break;
    }
    std::vector<Transition> en = enabled(s);
    if (en.empty()) {
      res.status = done(s);
      break;
    }
    const Transition t = en[sch.pick(en)];
    s = apply(s, t);
    res.trace.steps.push_back({t, system_hash(s)});
    after(s);
  }
  res.forced = sch.forced();
}

std::string script_of(const Scenario& scn, const LocalState& st) {
  return st.bottom ? std::string("?") : scn.script(st.script).name;
}

}  // namespace

RunResult run(const Scenario& scn, const RunConfig& cfg) {
  RunResult res;
  res.trace.meta = {cfg.seed, cfg.semantics, scn.options.oplus, scn.options.roll3, cfg.max_steps};
  switch (cfg.semantics) {
    case SemanticsKind::Rollback: {
      System s = initial_system(scn);
      bool commit_free = !has_action(scn, Action::Op::Commit);
      auto check = [&](const System& x) {
        if (!cfg.check_invariants) return;
        for (auto& v : check_invariants(x, commit_free)) {
          v.detail = "after step " + std::to_string(res.trace.steps.size()) + ": " + v.detail;
          res.violations.push_back(std::move(v));
        }
      };
      check(s);
      try {
        drive(
            s, cfg, res, [&](const System& x) { return enabled_rr(scn, x); },
            [&](const System& x, const Transition& t) { return apply_rr(scn, x, t, false); },
            [](const System& x) { return rollback_quiescent(x) ? RunStatus::Quiescent : RunStatus::Stuck; }, check);
      } catch (const WellDefinednessError& e) {
        res.status = RunStatus::Aborted;
        res.aborted = diagnostic_of(e);
        if (const ProcessConfig* pc = s.find(e.pid)) res.aborted->script = script_of(scn, pc->state);
      }
      res.rr = std::move(s);
      break;
    }
    case SemanticsKind::Standard: {
      StdSystem s = initial_std(scn);
      try {
        drive(
            s, cfg, res, [&](const StdSystem& x) { return enabled_std(scn, x); },
            [&](const StdSystem& x, const Transition& t) { return apply_std(scn, x, t); },
            [](const StdSystem&) { return RunStatus::Quiescent; }, [](const StdSystem&) {});
      } catch (const IllFormed& e) {
        res.status = RunStatus::Aborted;
        res.aborted = Diagnostic{std::nullopt, "", 0, std::nullopt, e.what()};
      }
      res.standard = std::move(s);
      break;
    }
    case SemanticsKind::Reversible: {
      RevSystem s = initial_rev(scn);
      drive(
          s, cfg, res, [&](const RevSystem& x) { return enabled_rev_forward(scn, x); },
          [&](const RevSystem& x, const Transition& t) { return apply_rev(scn, x, t); },
          [](const RevSystem&) { return RunStatus::Quiescent; }, [](const RevSystem&) {});
      res.rev = std::move(s);
      break;
    }
  }
  return res;
}

namespace {

template <class Sys, class Enabled, class Apply>
ReplayVerdict replay_steps(Sys s, const Trace& trace, Enabled enabled, Apply apply) {
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const auto& st = trace.steps[i];
    try {
      auto en = enabled(s);
      if (std::find(en.begin(), en.end(), st.t) == en.end())
        return {false, i, to_string(st.t) + " is not enabled"};
      s = apply(s, st.t);
    } catch (const std::exception& e) {
      return {false, i, to_string(st.t) + ": " + e.what()};
    }
    std::string h = system_hash(s);
    if (h != st.hash) return {false, i, "hash " + h + " differs from recorded " + st.hash};
  }
  return {};
}

}  // namespace

ReplayVerdict replay(const Scenario& base, const Trace& trace) {
  Scenario scn = with_meta(base, trace.meta);
  switch (trace.meta.semantics) {
    case SemanticsKind::Rollback:
      return replay_steps(
          initial_system(scn), trace, [&](const System& x) { return enabled_rr(scn, x); },
          [&](const System& x, const Transition& t) { return apply_rr(scn, x, t, false); });
    case SemanticsKind::Standard:
      return replay_steps(
          initial_std(scn), trace, [&](const StdSystem& x) { return enabled_std(scn, x); },
          [&](const StdSystem& x, const Transition& t) { return apply_std(scn, x, t); });
    case SemanticsKind::Reversible:
      return replay_steps(
          initial_rev(scn), trace, [&](const RevSystem& x) { return enabled_rev(scn, x); },
          [&](const RevSystem& x, const Transition& t) { return apply_rev(scn, x, t); });
  }
  return {false, 0, "unknown semantics"};
}

ReplayVerdict replay_as_standard(const Scenario& base, const Trace& trace) {
  if (trace.meta.semantics != SemanticsKind::Rollback) return {false, 0, "not a rollback-semantics trace"};
  for (std::size_t i = 0; i < trace.steps.size(); ++i)
    if (!is_forward(trace.steps[i].t.rule))
      return {false, i, std::string(rule_name(trace.steps[i].t.rule)) + " has no standard counterpart"};
  Scenario scn = with_meta(base, trace.meta);
  System s = initial_system(scn);
  StdSystem z = initial_std(scn);
  if (canonical(sta(s)) != canonical(z)) return {false, 0, "initial systems differ"};
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const Transition& t = trace.steps[i].t;
    Transition u = std_step_of(t);
    try {
      s = apply_rr(scn, s, t, true);
      auto en = enabled_std(scn, z);
      if (std::find(en.begin(), en.end(), u) == en.end())
        return {false, i, to_string(u) + " is not enabled under the standard semantics"};
      z = apply_std(scn, z, u);
    } catch (const std::exception& e) {
      return {false, i, e.what()};
    }
    if (system_hash(s) != trace.steps[i].hash) return {false, i, "rollback-semantics hash differs"};
    if (canonical(sta(s)) != canonical(z)) return {false, i, "projection differs from the standard system"};
  }
  return {};
}

}  // namespace rrsem
