#include "rrsem/invariants.hpp"
#include "rrsem/rollback.hpp"
#include "support.hpp"

using namespace rrsem;
using namespace testing_support;

namespace {

using K = HistoryItem::Kind;
using NK = Notification::Kind;

bool has_note(const System& s, NK kind, std::uint64_t from, std::uint64_t to, std::uint64_t tau) {
  for (const auto& n : s.notes)
    if (n.kind == kind && n.from.value == from && n.to.value == to && n.tau.value == tau) return true;
  return false;
}

Value withdraw_msg() { return Value::tuple({Value::pid(Pid{kClient}), Value::atom("withdraw"), Value::integer(50)}); }

const char* kSpawnUnderCheck = R"({"entry":"m","scripts":{
  "m":[{"op":"check","var":"T"},{"op":"spawn","var":"W","script":"w"},{"op":"rollback","var":"T"},{"op":"stop"}],
  "w":[{"op":"seq"},{"op":"stop"}]}})";

}  // namespace

TEST_CASE("check prepends a checkpoint and binds it") {
  Scenario scn = scenario_file("bank.scn");
  System s = steps(scn, initial_system(scn), {{Rule::Spawn, kInit}, {Rule::Spawn, kInit}});
  LocalState before = s.at(Pid{kBank}).state;
  s = step(scn, s, Rule::Check, kBank);
  const auto& h = s.at(Pid{kBank}).hist;
  REQUIRE(h.size() == 1);
  CHECK(h[0].kind == K::Check);
  CHECK(h[0].tau == CheckId{1});
  CHECK(h[0].state == before);
  CHECK(s.at(Pid{kBank}).state.env.at("T") == Value::check(CheckId{1}));
}

TEST_CASE("second bank cycle checkpoints on top of an emptied history") {
  Scenario scn = scenario_file("bank.scn");
  System s = bank_before_rollback(scn);
  const auto& h = s.at(Pid{kBank}).hist;
  REQUIRE(h.size() == 3);
  CHECK(h[2].kind == K::Check);
  CHECK(h[2].tau == CheckId{2});
  CHECK(h[1].kind == K::Rec);
  CHECK(h[1].value == withdraw_msg());
  CHECK(h[0].kind == K::Send);
  CHECK(h[0].peer == Pid{kClient});
}

TEST_CASE("client receiving ack gets a forced checkpoint under the receive") {
  Scenario scn = scenario_file("bank.scn");
  System s = bank_before_rollback(scn);
  const auto& h = s.at(Pid{kClient}).hist;
  REQUIRE(h.size() == 2);
  CHECK(h[0].kind == K::Rec);
  CHECK(h[0].cset == CheckSet{CheckId{2}});
  CHECK(h[0].peer == Pid{kBank});
  CHECK(h[0].value == Value::atom("ack"));
  CHECK(h[1].kind == K::Check);
  CHECK(h[1].tau == CheckId{2});
  CHECK(h[1].forced());
}

TEST_CASE("sending without an active checkpoint leaves the history empty") {
  Scenario scn = scenario_file("bank.scn");
  System s = steps(scn, initial_system(scn), {{Rule::Spawn, kInit}, {Rule::Spawn, kInit}, {Rule::Send, kClient}});
  CHECK(s.at(Pid{kClient}).hist.empty());
  REQUIRE(s.messages.size() == 1);
  CHECK(s.messages[0].cset.empty());
}

TEST_CASE("a child spawned under a checkpoint starts with a null checkpoint") {
  Scenario scn = parse(kSpawnUnderCheck);
  System s = steps(scn, initial_system(scn), {{Rule::Check, 1}, {Rule::Spawn, 1}});
  const auto& h = s.at(Pid{2}).hist;
  REQUIRE(h.size() == 1);
  CHECK(h[0].kind == K::Check);
  CHECK(h[0].tau == CheckId{1});
  CHECK(h[0].state.bottom);
}

TEST_CASE("blocked processes take no forward steps") {
  Scenario scn = parse(R"({"entry":"m","scripts":{"m":[{"op":"check","var":"T"},{"op":"stop"}]}})");
  System s = initial_system(scn);
  s.at(Pid{1}).mode = Mode::Blocked;
  CHECK_FALSE(enabled(scn, s, Rule::Check, 1));
  s.at(Pid{1}).mode = Mode::AwaitResume;
  CHECK_FALSE(enabled(scn, s, Rule::Check, 1));
}

TEST_CASE("bank rollback after the failed safety check") {
  Scenario scn = scenario_file("bank.scn");
  System s0 = bank_before_rollback(scn);
  Tag ack = tag_of_value(s0, Value::atom("ack"));
  CHECK_FALSE(ack.valid());  // already received

  System s = step(scn, s0, Rule::Rollback, kBank);
  const ProcessConfig& bank = s.at(Pid{kBank});
  CHECK(bank.mode == Mode::Blocked);
  CHECK(bank.block.tau == CheckId{2});
  CHECK(bank.block.initiator == Pid{kBank});
  CHECK(bank.block.requester == Pid{kBank});
  REQUIRE(bank.block.L.size() == 1);
  CHECK(bank.block.P == std::set<Pid>{Pid{kClient}});
  CHECK(bank.hist.empty());
  // withdraw floats again and the client is asked to roll back
  CHECK(tag_of_value(s, withdraw_msg()).valid());
  CHECK(has_note(s, NK::Roll, kBank, kClient, 2));

  SUBCASE("only the roll request can be delivered") {
    auto en = enabled_rr(scn, s);
    REQUIRE(en.size() == 1);
    CHECK(en[0] == Transition{Rule::Roll1, Pid{kClient}, kBank, 2, kBank});
  }

  SUBCASE("the handshake drains the rollback") {
    Tag ack_tag = *bank.block.L.begin();
    System r = step(scn, s, Rule::Roll1, kClient);
    const ProcessConfig& client = r.at(Pid{kClient});
    CHECK(client.mode == Mode::Blocked);
    CHECK(client.block.initiator == Pid{kBank});
    CHECK(client.block.L.empty());
    CHECK(client.block.P.empty());
    CHECK(client.hist.empty());
    CHECK(r.message_by_tag(ack_tag));
    CHECK(client.state == s0.at(Pid{kClient}).hist[1].state);

    // done-sync before the ack is deleted must wait for Undo-send
    r = step(scn, r, Rule::Resume3, kClient);
    CHECK(r.at(Pid{kClient}).mode == Mode::AwaitResume);
    CHECK(has_note(r, NK::DoneSync, kClient, kBank, 2));
    CHECK_FALSE(enabled(scn, r, Rule::UndoDep2, kBank));

    r = step(scn, r, Rule::UndoSend, kBank);
    CHECK_FALSE(r.message_by_tag(ack_tag));
    CHECK(r.at(Pid{kBank}).block.L.empty());

    r = step(scn, r, Rule::UndoDep2, kBank);
    CHECK(r.at(Pid{kBank}).block.P.empty());
    CHECK(has_note(r, NK::Resume, kBank, kClient, 2));

    r = step(scn, r, Rule::Resume1, kBank);
    CHECK(r.at(Pid{kBank}).mode == Mode::Normal);
    r = step(scn, r, Rule::Resume4, kClient);
    CHECK(r.at(Pid{kClient}).mode == Mode::Normal);
    CHECK(rollback_quiescent(r));
    CHECK(rollback_completed(r, Pid{kBank}, CheckId{2}));
    CHECK(check_post_rollback(r).empty());
    // bank continues at the loop head with its saved bindings
    CHECK(r.at(Pid{kBank}).state.env.count("N") == 0);
  }
}

TEST_CASE("rollback right after check blocks with nothing to undo") {
  Scenario scn = parse(R"({"entry":"m","scripts":{"m":[{"op":"check","var":"T"},{"op":"rollback","var":"T"},{"op":"stop"}]}})");
  System s = steps(scn, initial_system(scn), {{Rule::Check, 1}, {Rule::Rollback, 1}});
  const auto& p = s.at(Pid{1});
  CHECK(p.mode == Mode::Blocked);
  CHECK(p.block.L.empty());
  CHECK(p.block.P.empty());
  CHECK(s.notes.empty());
  s = step(scn, s, Rule::Resume1, 1);
  CHECK(s.at(Pid{1}).mode == Mode::Normal);
  CHECK(s.at(Pid{1}).state.pc == 0);
}

TEST_CASE("rolling back a spawn deletes the child") {
  Scenario scn = parse(kSpawnUnderCheck);
  System s = steps(scn, initial_system(scn), {{Rule::Check, 1}, {Rule::Spawn, 1}, {Rule::Rollback, 1}});
  CHECK(s.at(Pid{1}).block.L.empty());
  CHECK(s.at(Pid{1}).block.P == std::set<Pid>{Pid{2}});
  CHECK(has_note(s, NK::Roll, 1, 2, 1));
  s = step(scn, s, Rule::Roll1, 2);
  CHECK(s.at(Pid{2}).state.bottom);
  s = step(scn, s, Rule::Resume2, 2);
  CHECK_FALSE(s.find(Pid{2}));
  CHECK(has_note(s, NK::DoneAsync, 2, 1, 1));
  s = step(scn, s, Rule::UndoDep1, 1);
  CHECK(s.at(Pid{1}).block.P.empty());
  CHECK(s.notes.empty());
  s = step(scn, s, Rule::Resume1, 1);
  CHECK(rollback_quiescent(s));
}

TEST_CASE("roll request for an unknown checkpoint blocks without undoing") {
  Scenario scn = parse(R"({"entry":"m","scripts":{"m":[{"op":"seq"},{"op":"stop"}]}})");
  System s = initial_system(scn);
  s.procs[Pid{5}] = ProcessConfig{Pid{5}, Mode::Normal, {}, {}, {}, LocalState{}};
  s.add_note({Pid{5}, Pid{1}, NK::Roll, CheckId{3}, Pid{5}});
  System r = step(scn, s, Rule::Roll2, 1);
  const auto& p = r.at(Pid{1});
  CHECK(p.mode == Mode::Blocked);
  CHECK(p.block.tau == CheckId{3});
  CHECK(p.block.initiator == Pid{5});
  CHECK(p.block.requester == Pid{5});
  CHECK(p.block.L.empty());
  CHECK(p.block.P.empty());
  CHECK(p.state == s.at(Pid{1}).state);
  CHECK(p.hist == s.at(Pid{1}).hist);
  r = step(scn, r, Rule::Resume3, 1);
  CHECK(has_note(r, NK::DoneSync, 1, 5, 3));
}

TEST_CASE("roll request for the ongoing rollback is answered at once") {
  Scenario scn = scenario_file("bank.scn");
  System s = step(scn, bank_before_rollback(scn), Rule::Rollback, kBank);
  s.add_note({Pid{kClient}, Pid{kBank}, NK::Roll, CheckId{2}, Pid{kClient}});

  SUBCASE("synchronous reply") {
    System r = step(scn, s, Rule::Roll3, kBank);
    CHECK(has_note(r, NK::DoneSync, kBank, kClient, 2));
    CHECK(r.at(Pid{kBank}).block.W == CheckSet{CheckId{2}});
  }
  SUBCASE("asynchronous reply") {
    scn.options.roll3 = Roll3Reply::Async;
    System r = step(scn, s, Rule::Roll3, kBank);
    CHECK(has_note(r, NK::DoneAsync, kBank, kClient, 2));
    CHECK(r.at(Pid{kBank}).block == s.at(Pid{kBank}).block);
  }
}

TEST_CASE("roll requests wait while a process awaits resume") {
  Scenario scn = scenario_file("bank.scn");
  System s = steps(scn, bank_before_rollback(scn), {{Rule::Rollback, kBank}, {Rule::Roll1, kClient}, {Rule::Resume3, kClient}});
  REQUIRE(s.at(Pid{kClient}).mode == Mode::AwaitResume);
  s.add_note({Pid{kBank}, Pid{kClient}, NK::Roll, CheckId{7}, Pid{kBank}});
  for (auto r : {Rule::Roll1, Rule::Roll2, Rule::Roll3}) CHECK_FALSE(enabled(scn, s, r, kClient));
}

TEST_CASE("resume only reaches an awaiting process") {
  Scenario scn = scenario_file("bank.scn");
  System s = steps(scn, bank_before_rollback(scn), {{Rule::Rollback, kBank}, {Rule::Roll1, kClient}});
  s.add_note({Pid{kBank}, Pid{kClient}, NK::Resume, CheckId{2}, Pid{}});
  CHECK_FALSE(enabled(scn, s, Rule::Resume4, kClient));
}

TEST_CASE("two messages to undo need two Undo-send steps") {
  Scenario scn = parse(R"({"entry":"m","scripts":{
    "m":[{"op":"spawn","var":"W","script":"w"},{"op":"check","var":"T"},{"op":"send","to":"W","value":1},
         {"op":"send","to":"W","value":2},{"op":"rollback","var":"T"},{"op":"stop"}],
    "w":[{"op":"recv","pattern":"X"},{"op":"recv","pattern":"Y"},{"op":"stop"}]}})");
  System s = steps(scn, initial_system(scn),
                   {{Rule::Spawn, 1}, {Rule::Check, 1}, {Rule::Send, 1}, {Rule::Send, 1}, {Rule::Rollback, 1}});
  CHECK(s.at(Pid{1}).block.L.size() == 2);
  s = step(scn, s, Rule::UndoSend, 1);
  CHECK(s.at(Pid{1}).block.L.size() == 1);
  s = step(scn, s, Rule::UndoSend, 1);
  CHECK(s.at(Pid{1}).block.L.empty());
  CHECK(s.messages.empty());
}

TEST_CASE("commit of the first bank cycle") {
  Scenario scn = scenario_file("bank.scn");
  System s = steps(scn, initial_system(scn),
                   {{Rule::Spawn, kInit}, {Rule::Spawn, kInit}, {Rule::Check, kBank}, {Rule::Send, kClient},
                    {Rule::Receive, kBank}, {Rule::Send, kBank}});
  REQUIRE(s.at(Pid{kBank}).hist.size() == 3);
  System c = step(scn, s, Rule::Commit, kBank);
  CHECK(c.at(Pid{kBank}).hist.empty());
  CHECK(has_note(c, NK::Commit, kBank, kClient, 1));

  c = step(scn, c, Rule::Receive, kClient);
  REQUIRE(c.at(Pid{kClient}).hist.size() == 2);
  c = step(scn, c, Rule::Commit2, kClient);
  CHECK(c.at(Pid{kClient}).hist.empty());
  CHECK(c.notes.empty());
}

TEST_CASE("a commit notification waits for the message that creates its checkpoint") {
  Scenario scn = parse(R"({"entry":"m","scripts":{
    "m":[{"op":"spawn","var":"W","script":"w"},{"op":"check","var":"T"},{"op":"send","to":"W","value":1},
         {"op":"commit","var":"T"},{"op":"stop"}],
    "w":[{"op":"recv","pattern":"X"},{"op":"stop"}]}})");
  System s = steps(scn, initial_system(scn), {{Rule::Spawn, 1}, {Rule::Check, 1}, {Rule::Send, 1}, {Rule::Commit, 1}});
  CHECK(has_note(s, NK::Commit, 1, 2, 1));
  CHECK_FALSE(enabled(scn, s, Rule::Commit2, 2));
  s = step(scn, s, Rule::Receive, 2);
  s = step(scn, s, Rule::Commit2, 2);
  CHECK(s.at(Pid{2}).hist.empty());
}

TEST_CASE("nested checkpoints delay the older commit") {
  Scenario scn = scenario_file("delayed.scn");
  System s = steps(scn, initial_system(scn), {{Rule::Check, 1}, {Rule::Seq, 1}, {Rule::Check, 1}, {Rule::Seq, 1}});
  s = step(scn, s, Rule::Delay, 1);
  const auto& h = s.at(Pid{1}).hist;
  REQUIRE(h.size() == 2);
  CHECK(h[0].kind == K::Check);
  CHECK(h[1].kind == K::DelayedCheck);
  CHECK(delayed(h) == CheckSet{CheckId{1}});
  CHECK_FALSE(enabled(scn, s, Rule::Commit3, 1));

  SUBCASE("committing the inner checkpoint releases the delayed one") {
    s = steps(scn, s, {{Rule::Seq, 1}, {Rule::Seq, 1}, {Rule::Commit, 1}});
    CHECK(s.at(Pid{1}).hist == History{h[1]});
    s = step(scn, s, Rule::Commit3, 1);
    CHECK(s.at(Pid{1}).hist.empty());
  }
  SUBCASE("rolling back the inner checkpoint releases it too") {
    scn.oracles["resolve"] = {false};
    s = steps(scn, s, {{Rule::Seq, 1}, {Rule::Seq, 1}, {Rule::Rollback, 1}, {Rule::Resume1, 1}});
    s = step(scn, s, Rule::Commit3, 1);
    CHECK(s.at(Pid{1}).hist.empty());
  }
}

TEST_CASE("a propagated commit under a newer checkpoint is delayed") {
  Scenario scn = parse(R"({"entry":"m","scripts":{
    "m":[{"op":"spawn","var":"W","script":"w","args":{"P":"Self"}},{"op":"check","var":"T"},
         {"op":"send","to":"W","value":1},{"op":"commit","var":"T"},{"op":"stop"}],
    "w":[{"op":"recv","pattern":"X"},{"op":"check","var":"U"},{"op":"stop"}]}})");
  System s = steps(scn, initial_system(scn),
                   {{Rule::Spawn, 1}, {Rule::Check, 1}, {Rule::Send, 1}, {Rule::Receive, 2}, {Rule::Check, 2},
                    {Rule::Commit, 1}});
  s = step(scn, s, Rule::Delay2, 2);
  const auto& h = s.at(Pid{2}).hist;
  REQUIRE(h.size() == 3);
  CHECK(h[0].kind == K::Check);
  CHECK(h[2].kind == K::DelayedCheck);
  CHECK(h[2].tau == CheckId{1});
}

TEST_CASE("quiescent finished systems have nothing enabled") {
  Scenario scn = parse(R"({"entry":"m","scripts":{"m":[{"op":"stop"}]}})");
  System s = initial_system(scn);
  CHECK(enabled_rr(scn, s).empty());
  CHECK(rollback_quiescent(s));
}

TEST_CASE("well-definedness violations abort") {
  Scenario scn = scenario_file("bad.scn");
  System s = steps(scn, initial_system(scn), {{Rule::Check, 1}, {Rule::Commit, 1}});
  try {
    enabled_rr(scn, s);
    FAIL("expected a violation");
  } catch (const WellDefinednessError& e) {
    CHECK(e.requirement == WellDefinednessError::Requirement::NotBoth);
    CHECK(e.pid == Pid{1});
  }
}
