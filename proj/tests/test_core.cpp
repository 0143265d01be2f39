#include <random>

#include "rrsem/generate.hpp"
#include "rrsem/runner.hpp"
#include "support.hpp"

using namespace rrsem;
using namespace testing_support;

namespace {

Value atom(const char* a) { return Value::atom(a); }
Value pid(std::uint64_t p) { return Value::pid(Pid{p}); }

}  // namespace

TEST_CASE("match binds a sender and compares literals") {
  Pattern p = Term::tuple({Term::var("From"), Term::lit(atom("get"))});
  auto b = match_value(p, Value::tuple({pid(3), atom("get")}), {});
  REQUIRE(b);
  CHECK(*b == Bindings{{"From", pid(3)}});
}

TEST_CASE("distinct atoms do not match") {
  CHECK_FALSE(match_value(Term::lit(atom("ok")), atom("ack"), {}));
}

TEST_CASE("withdraw request binds client and amount") {
  Pattern p = Term::tuple({Term::var("C"), Term::lit(atom("withdraw")), Term::var("N")});
  auto b = match_value(p, Value::tuple({pid(3), atom("withdraw"), Value::integer(50)}), {});
  REQUIRE(b);
  CHECK(*b == Bindings{{"C", pid(3)}, {"N", Value::integer(50)}});
}

TEST_CASE("bound variables act as literals and inputs stay untouched") {
  Bindings env{{"C", pid(3)}};
  Pattern p = Term::tuple({Term::var("C"), Term::wild()});
  CHECK(match_value(p, Value::tuple({pid(3), atom("x")}), env));
  CHECK_FALSE(match_value(p, Value::tuple({pid(4), atom("x")}), env));
  CHECK(env == Bindings{{"C", pid(3)}});
  CHECK(duplicate_binders(Term::tuple({Term::var("X"), Term::var("X")})) == std::vector<std::string>{"X"});
}

TEST_CASE("fresh identifiers") {
  SUBCASE("after four issued pids the next one is 5") {
    std::uint64_t counter = 5;
    CHECK(fresh(IdKind::Pid, counter) == 5);
    CHECK(counter == 6);
  }
  SUBCASE("first tag of the initial system") {
    Scenario scn = scenario_file("bank.scn");
    System s = initial_system(scn);
    CHECK(fresh_tag(s) == Tag{1});
    CHECK(s.next_tag == 2);
  }
  SUBCASE("consecutive checkpoints are ordered") {
    System s;
    CheckId a = fresh_check(s), b = fresh_check(s);
    CHECK(a < b);
  }
  SUBCASE("overflow is refused") {
    std::uint64_t counter = std::numeric_limits<std::uint64_t>::max();
    CHECK_THROWS(fresh(IdKind::Tag, counter));
  }
}

TEST_CASE("eligible messages are the channel heads") {
  System s;
  auto msg = [](std::uint64_t from, std::uint64_t to, std::uint64_t tag, std::uint64_t seq) {
    return ExtendedMessage{{}, Pid{from}, Pid{to}, Tag{tag}, Value::integer(static_cast<std::int64_t>(tag)), seq};
  };
  SUBCASE("same channel") {
    s.add_message(msg(2, 1, 2, 2));
    s.add_message(msg(2, 1, 1, 1));
    auto e = eligible_messages(s, Pid{1});
    REQUIRE(e.size() == 1);
    CHECK(e[0]->seq == 1);
  }
  SUBCASE("two channels") {
    s.add_message(msg(2, 1, 1, 1));
    s.add_message(msg(3, 1, 2, 1));
    s.add_message(msg(3, 1, 3, 2));
    // Independent oracle: the minimum seq per sender.
    std::map<Pid, std::uint64_t> heads;
    for (const auto& m : s.messages)
      if (m.to == Pid{1} && (!heads.count(m.from) || m.seq < heads[m.from])) heads[m.from] = m.seq;
    auto e = eligible_messages(s, Pid{1});
    REQUIRE(e.size() == heads.size());
    for (auto* m : e) CHECK(heads.at(m->from) == m->seq);
  }
  SUBCASE("nothing addressed to p") {
    s.add_message(msg(1, 2, 1, 1));
    CHECK(eligible_messages(s, Pid{1}).empty());
  }
}

TEST_CASE("insertion order of the system multiset does not change enabled steps") {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 30; ++round) {
    Scenario scn = random_scenario(rng);
    RunConfig cfg;
    cfg.seed = round;
    cfg.max_steps = 12;
    RunResult r = run(scn, cfg);
    REQUIRE(r.rr);
    System a = *r.rr;
    System b = a;
    b.messages.clear();
    auto shuffled = a.messages;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    for (auto& m : shuffled) b.add_message(m);
    CHECK(b == a);
    CHECK(enabled_rr(scn, b) == enabled_rr(scn, a));
  }
}

TEST_CASE("identifiers are never issued twice along a run") {
  std::mt19937_64 rng(5);
  for (int round = 0; round < 40; ++round) {
    Scenario scn = random_scenario(rng);
    System s = initial_system(scn);
    std::set<std::uint64_t> pids{1}, tags, checks;
    std::mt19937_64 pick(round);
    for (int i = 0; i < 60; ++i) {
      auto en = enabled_rr(scn, s);
      if (en.empty()) break;
      Transition t = en[pick() % en.size()];
      s = apply_rr(scn, s, t);
      if (t.rule == Rule::Spawn) CHECK(pids.insert(t.a).second);
      if (t.rule == Rule::Send) CHECK(tags.insert(t.b).second);
      if (t.rule == Rule::Check) CHECK(checks.insert(t.a).second);
      CHECK(check_freshness(s).empty());
    }
  }
}
