#include "rrsem/explore.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <unordered_map>
#include <unordered_set>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "rrsem/invariants.hpp"

namespace rrsem {

namespace {

struct Succ {
  Transition via;
  System sys;
  std::string key;
};

struct Expansion {
  std::vector<Succ> succ;
  std::vector<std::pair<std::string, std::string>> violations;
  bool terminal = false;
  bool quiescent = false;
  std::size_t rollback_roots = 0;
  std::size_t rollback_completions = 0;
};

struct Context {
  const Scenario& scn;
  const ExploreOptions& opt;
  bool commit_free;
  bool check_rollbacks;
};

Expansion expand(const Context& cx, const System& s) {
  Expansion e;
  if (cx.opt.invariants)
    for (auto& v : check_invariants(s, cx.commit_free)) e.violations.emplace_back(v.invariant, v.detail);
  std::vector<Transition> en;
  try {
    en = enabled_rr(cx.scn, s);
  } catch (const WellDefinednessError& err) {
    e.violations.emplace_back("well-definedness", std::string(to_string(err.requirement)) + ": " + err.what());
    return e;
  } catch (const std::exception& err) {
    e.violations.emplace_back("semantics", err.what());
    return e;
  }
  if (en.empty()) {
    e.terminal = true;
    e.quiescent = rollback_quiescent(s);
    if (!e.quiescent && cx.opt.deadlock)
      e.violations.emplace_back("stuck", "no enabled transition while a rollback is pending");
  }
  if (cx.check_rollbacks && rollback_quiescent(s)) {
    for (const auto& t : en) {
      if (t.rule != Rule::Rollback) continue;
      ++e.rollback_roots;
      RollbackCheckResult r = check_rollback_at(cx.scn, s, t, cx.opt.max_states);
      e.rollback_completions += r.completions;
      for (auto& f : r.failures) e.violations.emplace_back("rollback", to_string(t) + ": " + f);
    }
  }
  e.succ.reserve(en.size());
  for (const auto& t : en) {
    try {
      System next = apply_rr(cx.scn, s, t, false);
      std::string key = canonical(next);
      e.succ.push_back({t, std::move(next), std::move(key)});
    } catch (const std::exception& err) {
      e.violations.emplace_back("semantics", to_string(t) + ": " + err.what());
    }
  }
  return e;
}

struct Node {
  std::size_t parent;
  Transition via;
};

std::vector<Transition> path_to(const std::vector<Node>& nodes, std::size_t id) {
  std::vector<Transition> out;
  while (id != 0) {
    out.push_back(nodes[id].via);
    id = nodes[id].parent;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

ExploreReport run_bfs(const Scenario& scn, const ExploreOptions& opt, bool parallel) {
  Context cx{scn, opt, !has_action(scn, Action::Op::Commit),
             opt.check_rollbacks && scn.options.oplus == Oplus::Restore};
  ExploreReport rep;
  std::vector<Node> nodes{{0, Transition{}}};
  std::unordered_set<std::string> visited;
  System init = initial_system(scn);
  visited.insert(canonical(init));
  std::vector<std::pair<std::size_t, System>> frontier;
  frontier.emplace_back(0, std::move(init));
  rep.states = 1;

  for (std::size_t depth = 0; !frontier.empty(); ++depth) {
    if (depth > opt.max_depth) {
      rep.depth_exhausted = true;
      break;
    }
    rep.depth = depth;
    std::vector<Expansion> ex(frontier.size());
    if (parallel) {
#pragma omp parallel for schedule(dynamic, 1)
      for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(frontier.size()); ++i)
        ex[i] = expand(cx, frontier[i].second);
    } else {
      for (std::size_t i = 0; i < frontier.size(); ++i) ex[i] = expand(cx, frontier[i].second);
    }

    std::vector<std::pair<std::size_t, System>> next;
    for (std::size_t i = 0; i < frontier.size(); ++i) {
      std::size_t id = frontier[i].first;
      Expansion& e = ex[i];
      for (auto& [kind, detail] : e.violations) rep.violations.push_back({kind, detail, path_to(nodes, id)});
      rep.terminal += e.terminal;
      rep.quiescent_terminal += e.terminal && e.quiescent;
      rep.rollback_roots += e.rollback_roots;
      rep.rollback_completions += e.rollback_completions;
      rep.transitions += e.succ.size();
      for (auto& sc : e.succ) {
        ++rep.rules[sc.via.rule];
        if (visited.count(sc.key)) continue;
        if (rep.states >= opt.max_states) {
          rep.state_bound_hit = true;
          continue;
        }
        visited.insert(std::move(sc.key));
        nodes.push_back({id, sc.via});
        next.emplace_back(nodes.size() - 1, std::move(sc.sys));
        ++rep.states;
      }
    }
    frontier = std::move(next);
  }
  return rep;
}

std::string first_difference(const AbstractSystem& got, const AbstractSystem& want) {
  return "rollback semantics:\n" + to_string(got) + "controlled backward semantics:\n" + to_string(want);
}

}  // namespace

ExploreReport explore_serial(const Scenario& scn, const ExploreOptions& opt) { return run_bfs(scn, opt, false); }

ExploreReport explore_parallel(const Scenario& scn, const ExploreOptions& opt) { return run_bfs(scn, opt, true); }

ExploreReport explore(const Scenario& scn, const ExploreOptions& opt) {
  return opt.parallel ? explore_parallel(scn, opt) : explore_serial(scn, opt);
}

RollbackCheckResult check_rollback_at(const Scenario& scn, const System& s0, const Transition& rollback,
                                      std::size_t max_states) {
  RollbackCheckResult res;
  Pid p = rollback.pid;
  CheckId tau{rollback.a};
  AbstractSystem expected;
  try {
    expected = ceil_of(ctrl_rollback(scn, mirror_of(s0), p, tau));
  } catch (const std::exception& err) {
    res.failures.push_back(std::string("controlled rollback failed: ") + err.what());
    return res;
  }
  std::unordered_set<std::string> visited;
  std::deque<System> queue;
  System s1 = apply_rr(scn, s0, rollback, false);
  visited.insert(canonical(s1));
  queue.push_back(std::move(s1));
  while (!queue.empty()) {
    System s = std::move(queue.front());
    queue.pop_front();
    ++res.states;
    if (rollback_completed(s, p, tau)) {
      ++res.completions;
      AbstractSystem got = floor_of(s);
      if (!(got == expected)) res.failures.push_back("completion state differs\n" + first_difference(got, expected));
      continue;
    }
    auto en = enabled_protocol(scn, s);
    if (en.empty()) {
      res.failures.push_back("rollback cannot complete\n" + to_string(s, &scn));
      continue;
    }
    for (const auto& t : en) {
      System next = apply_rr(scn, s, t, false);
      std::string key = canonical(next);
      if (!visited.insert(std::move(key)).second) continue;
      if (visited.size() > max_states) {
        res.failures.push_back("protocol exploration exceeded the state bound");
        return res;
      }
      queue.push_back(std::move(next));
    }
    if (res.failures.size() > 4) break;
  }
  return res;
}

TraceRollbackResult check_trace_rollbacks(const Scenario& scn, const std::vector<Transition>& trace) {
  TraceRollbackResult res;
  std::vector<System> states{initial_system(scn)};
  for (const auto& t : trace) states.push_back(apply_rr(scn, states.back(), t, true));
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (trace[i].rule != Rule::Rollback) continue;
    ++res.rollbacks;
    const System& s0 = states[i];
    if (!rollback_quiescent(s0)) continue;
    ++res.checked;
    std::string at = "step " + std::to_string(i) + " " + to_string(trace[i]) + ": ";
    RollbackCheckResult r = check_rollback_at(scn, s0, trace[i]);
    for (const auto& f : r.failures) res.failures.push_back(at + f);
    Pid p = trace[i].pid;
    CheckId tau{trace[i].a};
    for (std::size_t j = i + 1; j < states.size(); ++j) {
      if (rollback_completed(states[j], p, tau)) {
        AbstractSystem want = ceil_of(ctrl_rollback(scn, mirror_of(s0), p, tau));
        ++res.direct;
        if (!(floor_of(states[j]) == want))
          res.failures.push_back(at + "run completion differs\n" + first_difference(floor_of(states[j]), want));
        break;
      }
      if (j < trace.size() && !is_protocol(trace[j].rule)) break;
    }
  }
  return res;
}

ReachabilityResult check_forward_reachability(const Scenario& scn, std::size_t max_depth, std::size_t max_states) {
  ReachabilityResult r;
  std::set<std::string> from_rr, from_std;
  {
    std::unordered_set<std::string> seen;
    std::vector<System> level{initial_system(scn)};
    seen.insert(canonical(level[0]));
    for (std::size_t d = 0; !level.empty() && d <= max_depth && seen.size() < max_states; ++d) {
      std::vector<System> next;
      for (const auto& s : level) {
        from_rr.insert(canonical(sta(s)));
        if (d == max_depth) continue;
        for (const auto& t : enabled_rr(scn, s)) {
          System n = apply_rr(scn, s, t, false);
          if (seen.insert(canonical(n)).second) next.push_back(std::move(n));
        }
      }
      level = std::move(next);
    }
    r.rr_states = seen.size();
  }
  {
    std::vector<StdSystem> level{initial_std(scn)};
    for (std::size_t d = 0; !level.empty() && d <= max_depth && from_std.size() < max_states; ++d) {
      std::vector<StdSystem> next;
      for (const auto& s : level) {
        if (d == max_depth) continue;
        for (const auto& t : enabled_std(scn, s)) {
          StdSystem n = apply_std(scn, s, t);
          if (from_std.insert(canonical(n)).second) next.push_back(std::move(n));
        }
      }
      level = std::move(next);
    }
    from_std.insert(canonical(initial_std(scn)));
    r.std_states = from_std.size();
  }
  r.equal = from_rr == from_std;
  if (!r.equal) {
    for (const auto& k : from_rr)
      if (!from_std.count(k)) {
        r.detail = "only under the rollback semantics: " + k;
        break;
      }
    for (const auto& k : from_std)
      if (r.detail.empty() && !from_rr.count(k)) r.detail = "only under the standard semantics: " + k;
  }
  return r;
}

}  // namespace rrsem
