// rrsim: run, replay, validate and explore rollback-recovery scenarios.
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "rrsem/explore.hpp"
#include "rrsem/scenario_io.hpp"
#include "rrsem/trace_io.hpp"
#include "rrsem/validate.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace rrsem;

namespace {

constexpr int kPass = 0;
constexpr int kViolation = 1;
constexpr int kInput = 2;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Scenario load(const std::string& path, const std::string& oplus, const std::string& roll3) {
  Scenario scn = load_scenario(path);
  if (oplus == "restore") scn.options.oplus = Oplus::Restore;
  else if (oplus == "continue") scn.options.oplus = Oplus::Continue;
  else if (!oplus.empty()) throw InputError("--oplus must be restore or continue");
  if (roll3 == "sync") scn.options.roll3 = Roll3Reply::Sync;
  else if (roll3 == "async") scn.options.roll3 = Roll3Reply::Async;
  else if (!roll3.empty()) throw InputError("--roll3 must be sync or async");
  return scn;
}

std::string path_string(const std::vector<Transition>& path) {
  std::string out;
  for (const auto& t : path) out += (out.empty() ? "" : " ") + to_string(t);
  return out.empty() ? "(initial system)" : out;
}

int cmd_run(const std::string& scenario, std::uint64_t seed, const std::string& semantics, std::size_t max_steps,
            const std::string& oplus, const std::string& roll3, const std::string& trace_out, bool invariants,
            bool print) {
  Scenario scn = load(scenario, oplus, roll3);
  RunConfig cfg;
  cfg.seed = seed;
  cfg.max_steps = max_steps;
  cfg.check_invariants = invariants;
  auto sem = semantics_from_name(semantics);
  if (!sem) throw InputError("--semantics must be standard, rollback or reversible");
  if (max_steps < 1) throw InputError("--max-steps must be at least 1");
  cfg.semantics = *sem;
  RunResult res = run(scn, cfg);
  if (!trace_out.empty()) {
    std::ofstream out(trace_out, std::ios::binary);
    if (!out) throw InputError("cannot write " + trace_out);
    out << trace_to_jsonl(res.trace);
  }
  std::cout << "status: " << to_string(res.status) << "\n";
  std::cout << "steps: " << res.trace.steps.size() << "\n";
  std::cout << "forced picks: " << res.forced << "\n";
  if (!res.trace.steps.empty()) std::cout << "final hash: " << res.trace.steps.back().hash << "\n";
  if (print) {
    if (res.rr) std::cout << to_string(*res.rr, &scn);
    if (res.standard) std::cout << to_string(*res.standard, &scn);
    if (res.rev) std::cout << to_string(*res.rev, &scn);
  }
  int rc = kPass;
  if (res.status == RunStatus::MaxSteps) std::cerr << "max-steps reached before quiescence\n";
  if (res.aborted) {
    std::cerr << "well-definedness violation: " << to_string(*res.aborted) << "\n";
    rc = kViolation;
  }
  if (res.status == RunStatus::Stuck) {
    std::cerr << "no transition enabled while a rollback is pending\n";
    rc = kViolation;
  }
  for (const auto& v : res.violations) {
    std::cerr << "invariant " << v.invariant << ": " << v.detail << "\n";
    rc = kViolation;
  }
  return rc;
}

Trace load_trace(const std::string& path) { return parse_trace(read_file(path)); }

int cmd_replay(const std::string& scenario, const std::string& trace_path, const std::string& as) {
  Scenario scn = load(scenario, "", "");
  Trace trace = load_trace(trace_path);
  ReplayVerdict v;
  if (as.empty()) v = replay(scn, trace);
  else if (as == "standard") v = replay_as_standard(scn, trace);
  else throw InputError("--as must be standard");
  if (v.ok) {
    std::cout << "replay: pass (" << trace.steps.size() << " steps)\n";
    return kPass;
  }
  std::cout << "replay: fail at step " << v.step << "\n";
  std::cerr << "step " << v.step << ": " << v.detail << "\n";
  return kViolation;
}

int cmd_validate(const std::string& scenario, const std::string& trace_path) {
  Scenario scn = load(scenario, "", "");
  auto diags = validate_static(scn);
  if (!trace_path.empty()) {
    Trace trace = load_trace(trace_path);
    scn.options.oplus = trace.meta.oplus;
    scn.options.roll3 = trace.meta.roll3;
    System s = initial_system(scn);
    for (std::size_t i = 0; i < trace.steps.size(); ++i) {
      try {
        enabled_rr(scn, s);
        s = apply_rr(scn, s, trace.steps[i].t, true);
      } catch (const WellDefinednessError& e) {
        Diagnostic d = diagnostic_of(e);
        if (const ProcessConfig* pc = s.find(e.pid); pc && !pc->state.bottom)
          d.script = scn.script(pc->state.script).name;
        diags.push_back(d);
        break;
      } catch (const std::exception& e) {
        throw InputError("trace step " + std::to_string(i) + ": " + e.what());
      }
    }
  }
  for (const auto& d : diags) std::cerr << scenario << ": " << to_string(d) << "\n";
  if (diags.empty()) {
    std::cout << "valid\n";
    return kPass;
  }
  return kInput;
}

void print_report(const ExploreReport& r) {
  std::cout << "states: " << r.states << "\n"
            << "transitions: " << r.transitions << "\n"
            << "depth: " << r.depth << "\n"
            << "terminal: " << r.terminal << "\n"
            << "quiescent terminal: " << r.quiescent_terminal << "\n"
            << "rollback roots: " << r.rollback_roots << "\n"
            << "rollback completions: " << r.rollback_completions << "\n";
  std::cout << "rules:";
  for (const auto& [rule, n] : r.rules) std::cout << " " << rule_name(rule) << "=" << n;
  std::cout << "\n";
  std::cout << "complete: "
            << (r.complete() ? "yes" : r.state_bound_hit ? "no (state bound reached)" : "no (depth bound reached)")
            << "\n";
  std::cout << "violations: " << r.violations.size() << "\n";
  std::size_t shown = 0;
  for (const auto& v : r.violations) {
    if (++shown > 10) break;
    std::cout << "violation [" << v.kind << "] " << v.detail << "\n  path: " << path_string(v.path) << "\n";
  }
}

int cmd_explore(const std::string& scenario, std::size_t depth, std::size_t max_states, const std::string& check,
                bool parallel, int threads, const std::string& oplus, const std::string& roll3) {
  Scenario scn = load(scenario, oplus, roll3);
  if (depth < 1 || max_states < 1) throw InputError("bounds must be positive");
  for (const auto& d : validate_static(scn))
    if (d.requirement) {
      std::cerr << scenario << ": " << to_string(d) << "\n";
      std::cerr << "rejected before exploration\n";
      return kInput;
    }
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
  bool forward_only = !has_action(scn, Action::Op::Commit) && !has_action(scn, Action::Op::Rollback);
  int rc = kPass;
  if (check == "theorem1" || (check == "all" && forward_only)) {
    if (!forward_only) throw InputError("theorem1 needs a scenario without commit and rollback");
    ReachabilityResult t = check_forward_reachability(scn, depth, max_states);
    std::cout << "reachability: rollback states " << t.rr_states << ", standard states " << t.std_states
              << ", projections " << (t.equal ? "equal" : "differ") << "\n";
    if (!t.equal) {
      std::cerr << t.detail << "\n";
      rc = kViolation;
    }
    if (check == "theorem1") return rc;
  }
  ExploreOptions opt;
  opt.max_depth = depth;
  opt.max_states = max_states;
  opt.parallel = parallel;
  opt.invariants = check == "all" || check == "invariants";
  opt.deadlock = check == "all" || check == "deadlock";
  opt.check_rollbacks = check == "all" || check == "lemma1";
  if (check != "all" && check != "invariants" && check != "deadlock" && check != "lemma1")
    throw InputError("--check must be all, theorem1, lemma1, deadlock or invariants");
  if (check == "lemma1" && scn.options.oplus != Oplus::Restore) throw InputError("lemma1 needs restore mode");
  ExploreReport r = explore(scn, opt);
  print_report(r);
  for (const auto& v : r.violations) std::cerr << "[" << v.kind << "] " << v.detail << "\n";
  if (!r.ok()) rc = kViolation;
  if (!r.complete()) std::cerr << "exploration bound reached; result covers the explored states only\n";
  return rc;
}

int cmd_check_equiv(const std::string& scenario, const std::string& trace_path) {
  Scenario scn = load(scenario, "", "");
  Trace trace = load_trace(trace_path);
  if (trace.meta.semantics != SemanticsKind::Rollback) throw InputError("check-equiv needs a rollback-semantics trace");
  if (trace.meta.oplus != Oplus::Restore) throw InputError("check-equiv needs a restore-mode trace");
  scn.options.oplus = trace.meta.oplus;
  scn.options.roll3 = trace.meta.roll3;
  TraceRollbackResult r;
  try {
    r = check_trace_rollbacks(scn, trace.transitions());
  } catch (const std::exception& e) {
    throw InputError(std::string("trace does not replay: ") + e.what());
  }
  std::cout << "rollbacks: " << r.rollbacks << "\nchecked: " << r.checked << "\nrun completions: " << r.direct
            << "\nfailures: " << r.failures.size() << "\n";
  for (const auto& f : r.failures) std::cerr << f << "\n";
  return r.failures.empty() ? kPass : kViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rrsim: rollback-recovery semantics for message-passing processes"};
  app.require_subcommand(1);

  std::string scenario, trace_path, semantics = "rollback", oplus, roll3, as, check = "all";
  std::uint64_t seed = 0;
  std::size_t max_steps = 10000, depth = 1000000, max_states = 1000000;
  bool invariants = false, print = false, parallel = false;
  int threads = 0;

  auto* run = app.add_subcommand("run", "simulate one seeded run");
  run->add_option("scenario_pos", scenario, "scenario file")->check(CLI::ExistingFile);
  run->add_option("--scenario", scenario, "scenario file")->check(CLI::ExistingFile);
  run->add_option("--seed", seed, "scheduler seed");
  run->add_option("--semantics", semantics, "standard|rollback|reversible");
  run->add_option("--max-steps", max_steps, "step bound");
  run->add_option("--oplus", oplus, "restore|continue (overrides the scenario)");
  run->add_option("--roll3", roll3, "sync|async (overrides the scenario)");
  run->add_option("--trace", trace_path, "write the trace here");
  run->add_flag("--check-invariants", invariants, "check invariants after every step");
  run->add_flag("--print", print, "print the final system");

  auto* rep = app.add_subcommand("replay", "replay a trace and compare hashes");
  rep->add_option("--scenario", scenario, "scenario file")->required()->check(CLI::ExistingFile);
  rep->add_option("trace_pos", trace_path, "trace file")->check(CLI::ExistingFile);
  rep->add_option("--trace", trace_path, "trace file")->check(CLI::ExistingFile);
  rep->add_option("--as", as, "replay a rollback trace under the standard semantics");

  auto* val = app.add_subcommand("validate", "check the well-definedness requirements");
  val->add_option("scenario_pos", scenario, "scenario file")->check(CLI::ExistingFile);
  val->add_option("--scenario", scenario, "scenario file")->check(CLI::ExistingFile);
  val->add_option("--trace", trace_path, "also check a recorded run")->check(CLI::ExistingFile);

  auto* exp = app.add_subcommand("explore", "explore every interleaving");
  exp->add_option("scenario_pos", scenario, "scenario file")->check(CLI::ExistingFile);
  exp->add_option("--scenario", scenario, "scenario file")->check(CLI::ExistingFile);
  exp->add_option("--depth", depth, "depth bound");
  exp->add_option("--max-states", max_states, "state bound");
  exp->add_option("--check", check, "all|theorem1|lemma1|deadlock|invariants");
  exp->add_flag("--parallel", parallel, "expand each level with OpenMP");
  exp->add_option("--threads", threads, "OpenMP thread count");
  exp->add_option("--oplus", oplus, "restore|continue (overrides the scenario)");
  exp->add_option("--roll3", roll3, "sync|async (overrides the scenario)");

  auto* eqv = app.add_subcommand("check-equiv", "check every rollback of a trace against the controlled semantics");
  eqv->add_option("--scenario", scenario, "scenario file")->required()->check(CLI::ExistingFile);
  eqv->add_option("trace_pos", trace_path, "trace file")->check(CLI::ExistingFile);
  eqv->add_option("--trace", trace_path, "trace file")->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInput;
  }

  try {
    if ((run->parsed() || val->parsed() || exp->parsed()) && scenario.empty())
      throw InputError("a scenario file is required");
    if ((rep->parsed() || eqv->parsed()) && trace_path.empty()) throw InputError("a trace file is required");
    if (run->parsed())
      return cmd_run(scenario, seed, semantics, max_steps, oplus, roll3, trace_path, invariants, print);
    if (rep->parsed()) return cmd_replay(scenario, trace_path, as);
    if (val->parsed()) return cmd_validate(scenario, trace_path);
    if (exp->parsed()) return cmd_explore(scenario, depth, max_states, check, parallel, threads, oplus, roll3);
    if (eqv->parsed()) return cmd_check_equiv(scenario, trace_path);
  } catch (const ParseError& e) {
    for (const auto& m : e.errors) std::cerr << m << "\n";
    return kInput;
  } catch (const InputError& e) {
    std::cerr << e.what() << "\n";
    return kInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  }
  return kInput;
}
