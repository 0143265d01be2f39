#include <filesystem>

#include "rrsem/explore.hpp"
#include "rrsem/runner.hpp"
#include "support.hpp"

using namespace rrsem;
using namespace testing_support;

namespace {

void same_report(const ExploreReport& a, const ExploreReport& b) {
  CHECK(a.states == b.states);
  CHECK(a.transitions == b.transitions);
  CHECK(a.depth == b.depth);
  CHECK(a.terminal == b.terminal);
  CHECK(a.quiescent_terminal == b.quiescent_terminal);
  CHECK(a.rollback_roots == b.rollback_roots);
  CHECK(a.rollback_completions == b.rollback_completions);
  CHECK(a.rules == b.rules);
  CHECK(a.depth_exhausted == b.depth_exhausted);
  CHECK(a.state_bound_hit == b.state_bound_hit);
  REQUIRE(a.violations.size() == b.violations.size());
  for (std::size_t i = 0; i < a.violations.size(); ++i) {
    CHECK(a.violations[i].kind == b.violations[i].kind);
    CHECK(a.violations[i].detail == b.violations[i].detail);
    CHECK(a.violations[i].path == b.violations[i].path);
  }
}

ExploreOptions full() {
  ExploreOptions o;
  o.check_rollbacks = true;
  return o;
}

}  // namespace

TEST_CASE("serial and parallel exploration agree") {
  std::vector<std::pair<std::string, Scenario>> cases;
  for (const char* f : {"mutual.scn", "bank.scn", "delayed.scn", "rollbacks/07-crossing.scn", "rollbacks/17-both-roll.scn"})
    cases.emplace_back(f, scenario_file(f));
  Scenario async = scenario_file("mutual.scn");
  async.options.roll3 = Roll3Reply::Async;
  cases.emplace_back("mutual async", async);
  for (const auto& [name, scn] : cases) {
    INFO(name);
    ExploreOptions o = full();
    same_report(explore_serial(scn, o), explore_parallel(scn, o));
    o.max_states = 300;
    same_report(explore_serial(scn, o), explore_parallel(scn, o));
  }
}

TEST_CASE("mutual rollback has no stuck state") {
  ExploreReport r = explore(scenario_file("mutual.scn"), full());
  CHECK(r.complete());
  CHECK(r.ok());
  CHECK(r.terminal == r.quiescent_terminal);
  CHECK(r.rules[Rule::Roll3] > 0);
  CHECK(r.rollback_completions > 0);
}

TEST_CASE("asynchronous replies to an older rollback can get stuck") {
  Scenario scn = scenario_file("mutual.scn");
  scn.options.roll3 = Roll3Reply::Async;
  ExploreReport r = explore(scn, full());
  CHECK(r.complete());
  REQUIRE_FALSE(r.ok());
  bool stuck = false;
  for (const auto& v : r.violations) stuck |= v.kind == "stuck";
  CHECK(stuck);

  // the counterexample path replays and ends in a state with no steps
  const auto& v = r.violations.front();
  System s = initial_system(scn);
  for (const auto& t : v.path) {
    auto en = enabled_rr(scn, s);
    REQUIRE(std::find(en.begin(), en.end(), t) != en.end());
    s = apply_rr(scn, s, t);
  }
  CHECK(enabled_rr(scn, s).empty());
  CHECK_FALSE(rollback_quiescent(s));
}

TEST_CASE("bounds are reported apart from violations") {
  Scenario scn = scenario_file("mutual.scn");
  ExploreOptions o;
  o.max_depth = 3;
  ExploreReport r = explore(scn, o);
  CHECK(r.depth_exhausted);
  CHECK_FALSE(r.complete());
  CHECK(r.ok());
  o = {};
  o.max_states = 10;
  r = explore(scn, o);
  CHECK(r.state_bound_hit);
  CHECK(r.states <= 10);
  CHECK(r.ok());
}

TEST_CASE("ill-defined scenarios surface as violations") {
  ExploreReport r = explore(scenario_file("bad.scn"), {});
  REQUIRE_FALSE(r.ok());
  CHECK(r.violations.front().kind == "well-definedness");
}

TEST_CASE("every rollback completion matches the controlled rollback") {
  for (const auto& e : std::filesystem::directory_iterator(std::string(RRSEM_SCENARIO_DIR) + "/rollbacks")) {
    INFO(e.path().string());
    Scenario scn = load_scenario(e.path().string());
    REQUIRE(scn.options.oplus == Oplus::Restore);
    ExploreReport r = explore(scn, full());
    CHECK(r.complete());
    CHECK(r.ok());
    CHECK(r.rollback_roots > 0);
    CHECK(r.rollback_completions > 0);
  }
}

TEST_CASE("rollbacks along a recorded run") {
  Scenario scn = scenario_file("bank.scn");
  scn.options.oplus = Oplus::Restore;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    RunResult r = run(scn, {seed, 400, SemanticsKind::Rollback, false});
    auto res = check_trace_rollbacks(scn, r.trace.transitions());
    CHECK(res.rollbacks > 0);
    CHECK(res.checked == res.rollbacks);
    CHECK(res.failures.empty());
  }
}

TEST_CASE("continue mode diverges from the controlled rollback") {
  // continue mode keeps the program counter, which the controlled rollback
  // does not; the comparison must notice
  Scenario scn = scenario_file("rollbacks/01-single.scn");
  scn.options.oplus = Oplus::Continue;
  System s = initial_system(scn);
  std::optional<Transition> rb;
  while (!rb) {
    auto en = enabled_rr(scn, s);
    REQUIRE_FALSE(en.empty());
    for (const auto& t : en)
      if (t.rule == Rule::Rollback) rb = t;
    if (!rb) s = apply_rr(scn, s, en.front());
  }
  auto res = check_rollback_at(scn, s, *rb);
  CHECK_FALSE(res.failures.empty());
}
