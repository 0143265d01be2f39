#include <random>

#include "rrsem/equivalence.hpp"
#include "rrsem/generate.hpp"
#include "rrsem/runner.hpp"
#include "support.hpp"

using namespace rrsem;
using namespace testing_support;

namespace {

using NK = Notification::Kind;

std::size_t count_checks(const AbstractSystem& a) {
  std::size_t n = 0;
  for (const auto& [pid, c] : a.procs)
    for (const auto& it : c.hist) n += it.kind == AbsItem::Kind::Check;
  return n;
}

// Random forward-only rollback-semantics run.
std::vector<Transition> forward_run(const Scenario& scn, std::mt19937_64& rng, std::size_t max_steps) {
  System s = initial_system(scn);
  std::vector<Transition> out;
  while (out.size() < max_steps) {
    auto en = enabled_rr(scn, s);
    if (en.empty()) break;
    out.push_back(en[rng() % en.size()]);
    s = apply_rr(scn, s, out.back());
  }
  return out;
}

System apply_all(const Scenario& scn, const std::vector<Transition>& ts) {
  System s = initial_system(scn);
  for (const auto& t : ts) s = apply_rr(scn, s, t);
  return s;
}

}  // namespace

TEST_CASE("sta keeps pids, states and message payloads") {
  Scenario scn = scenario_file("bank.scn");
  System s = steps(scn, initial_system(scn),
                   {{Rule::Spawn, kInit}, {Rule::Spawn, kInit}, {Rule::Check, kBank}, {Rule::Send, kClient}});
  StdSystem z = sta(s);
  REQUIRE(z.procs.size() == 3);
  for (const auto& [pid, pc] : s.procs) CHECK(z.procs.at(pid) == pc.state);
  REQUIRE(z.messages.size() == 1);
  CHECK(z.messages[0].from == Pid{kClient});
  CHECK(z.messages[0].to == Pid{kBank});
  CHECK(z.messages[0].value == s.messages[0].value);
}

TEST_CASE("sta erases commit notifications") {
  Scenario scn = scenario_file("bank.scn");
  System s = steps(scn, initial_system(scn),
                   {{Rule::Spawn, kInit}, {Rule::Spawn, kInit}, {Rule::Check, kBank}, {Rule::Send, kClient},
                    {Rule::Receive, kBank}, {Rule::Send, kBank}, {Rule::Receive, kClient}});
  System c = step(scn, s, Rule::Commit, kBank);
  REQUIRE(c.notes.size() == 1);
  System d = step(scn, c, Rule::Commit2, kClient);
  CHECK(canonical(sta(c)) == canonical(sta(d)));
}

TEST_CASE("sta is undefined on blocked configurations") {
  Scenario scn = scenario_file("bank.scn");
  System s = step(scn, bank_before_rollback(scn), Rule::Rollback, kBank);
  CHECK_THROWS_AS(sta(s), SemanticsError);
}

TEST_CASE("floor") {
  SUBCASE("a blocked config has the image of its normal form") {
    Scenario scn = scenario_file("bank.scn");
    System s = step(scn, bank_before_rollback(scn), Rule::Rollback, kBank);
    System n = s;
    n.at(Pid{kBank}).mode = Mode::Normal;
    n.at(Pid{kBank}).block = {};
    n.notes.clear();
    CHECK(floor_of(s) == floor_of(n));
  }
  SUBCASE("delayed checkpoints vanish") {
    Scenario scn = scenario_file("delayed.scn");
    System s = steps(scn, initial_system(scn),
                     {{Rule::Check, 1}, {Rule::Seq, 1}, {Rule::Check, 1}, {Rule::Seq, 1}, {Rule::Delay, 1}});
    auto a = floor_of(s);
    REQUIRE(a.procs.at(Pid{1}).hist.size() == 1);
    CHECK(a.procs.at(Pid{1}).hist[0].tau == CheckId{2});
  }
  SUBCASE("empty system") { CHECK(floor_of(System{}) == AbstractSystem{}); }
}

TEST_CASE("ceil") {
  RevSystem s;
  LocalState s1, s2;
  s1.pc = 1;
  s2.pc = 2;
  RevItem seq{RevItem::Kind::Seq, s1, {}, {}, {}, {}, 0, {}};
  RevItem snd{RevItem::Kind::Send, s2, Pid{2}, {}, Tag{4}, {}, 0, {}};
  RevItem chk{RevItem::Kind::Check, s1, {}, {}, {}, {}, 0, CheckId{3}};
  s.procs[Pid{1}] = RevConfig{Pid{1}, {seq, snd, chk}, s2, {}};
  s.add_message({Pid{1}, Pid{2}, Tag{4}, Value::integer(7), 1});
  auto a = ceil_of(s);
  const auto& h = a.procs.at(Pid{1}).hist;
  REQUIRE(h.size() == 2);
  CHECK(h[0].kind == AbsItem::Kind::Send);
  CHECK(h[0].peer == Pid{2});
  CHECK(h[0].tag == Tag{4});
  CHECK(h[0].state == LocalState{});
  CHECK(h[1].kind == AbsItem::Kind::Check);
  CHECK(h[1].tau == CheckId{3});
  CHECK(h[1].state == s1);
  REQUIRE(a.messages.size() == 1);
  CHECK(a.messages[0] == AbsMessage{Pid{1}, Pid{2}, Tag{4}, Value::integer(7)});

  s.procs[Pid{1}].phi.insert(Request{Request::Kind::Check, CheckId{3}, Tag{}});
  CHECK_THROWS_AS(ceil_of(s), SemanticsError);
}

TEST_CASE("equiv on initial systems and on the bank before its rollback") {
  Scenario scn = scenario_file("bank.scn");
  CHECK(equiv(initial_system(scn), initial_rev(scn)));
  System s = bank_before_rollback(scn);
  CHECK(equiv(s, mirror_of(s)));
}

TEST_CASE("bank rollback completion matches the controlled rollback of its mirror") {
  Scenario scn = scenario_file("bank.scn");
  scn.options.oplus = Oplus::Restore;
  System s0 = bank_before_rollback(scn);
  System r = steps(scn, s0,
                   {{Rule::Rollback, kBank}, {Rule::Roll1, kClient}, {Rule::Resume3, kClient}, {Rule::UndoSend, kBank},
                    {Rule::UndoDep2, kBank}, {Rule::Resume1, kBank}, {Rule::Resume4, kClient}});
  RevSystem c = ctrl_rollback(scn, mirror_of(s0), Pid{kBank}, CheckId{2});
  CHECK(equiv(r, c));
  auto res = check_rollback_at(scn, s0, Transition{Rule::Rollback, Pid{kBank}, 2, 0, 0});
  CHECK(res.failures.empty());
  CHECK(res.completions > 0);
}

TEST_CASE("mirror replay") {
  SUBCASE("empty trace gives the initial system") {
    Scenario scn = scenario_file("bank.scn");
    RevSystem m = mirror_replay(scn, {});
    CHECK(m == initial_rev(scn));
    CHECK(equiv(initial_system(scn), m));
  }
  SUBCASE("random forward runs stay equivalent") {
    std::mt19937_64 rng(8);
    GenOptions opt;
    opt.min_checks = 1;
    for (int round = 0; round < 80; ++round) {
      Scenario scn = random_scenario(rng, opt);
      auto trace = forward_run(scn, rng, 40);
      System s = apply_all(scn, trace);
      RevSystem m = mirror_replay(scn, trace);
      CHECK(equiv(s, m));
      CHECK(count_checks(floor_of(s)) == count_checks(ceil_of(m)));
      CHECK(ceil_of(mirror_of(s)) == ceil_of(m));
      // full reversible replay agrees on states and messages
      RevSystem full = replay_rev(scn, trace);
      for (const auto& [pid, c] : full.procs) CHECK(c.state == s.at(pid).state);
      CHECK(full.messages.size() == s.messages.size());
    }
  }
}

TEST_CASE("equiv behaves as an equivalence on sampled triples") {
  std::mt19937_64 rng(31);
  GenOptions opt;
  opt.min_checks = 1;
  for (int round = 0; round < 60; ++round) {
    Scenario scn = random_scenario(rng, opt);
    auto trace = forward_run(scn, rng, 30);
    std::size_t cut = trace.empty() ? 0 : rng() % trace.size();
    std::vector<Transition> pre(trace.begin(), trace.begin() + static_cast<std::ptrdiff_t>(cut));
    System a = apply_all(scn, trace);
    System b = apply_all(scn, pre);
    RevSystem x = mirror_replay(scn, trace);
    RevSystem y = mirror_of(a);
    RevSystem z = mirror_replay(scn, pre);
    // reflexive through the mirror, symmetric and transitive through the images
    CHECK(equiv(a, x));
    CHECK(equiv(a, y));
    CHECK(equiv(b, z));
    CHECK((floor_of(a) == ceil_of(z)) == (ceil_of(z) == ceil_of(x)));
    CHECK((equiv(b, x) && equiv(b, y)) == (floor_of(b) == floor_of(a)));
  }
}

TEST_CASE("forward-only scenarios reach the same projected states as the standard semantics") {
  std::mt19937_64 rng(13);
  GenOptions opt;
  opt.max_procs = 3;
  opt.max_actions = 5;
  for (int round = 0; round < 15; ++round) {
    Scenario scn = random_scenario(rng, opt);
    auto r = check_forward_reachability(scn, 40, 20000);
    INFO(r.detail);
    CHECK(r.equal);
    CHECK(r.std_states > 1);
    CHECK(r.rr_states >= r.std_states);
  }
}

TEST_CASE("forward-only systems enable as many steps as their projection") {
  std::mt19937_64 rng(17);
  for (int round = 0; round < 60; ++round) {
    Scenario scn = random_scenario(rng);
    System s = initial_system(scn);
    for (int i = 0; i < 40; ++i) {
      auto en = enabled_rr(scn, s);
      auto es = enabled_std(scn, sta(s));
      CHECK(en.size() == es.size());
      for (const auto& t : en) CHECK(std::find(es.begin(), es.end(), std_step_of(t)) != es.end());
      if (en.empty()) break;
      s = apply_rr(scn, s, en[rng() % en.size()]);
    }
  }
}
