#pragma once

#include <doctest.h>

#include <algorithm>
#include <string>

#include "rrsem/explore.hpp"
#include "rrsem/scenario_io.hpp"

namespace testing_support {

using namespace rrsem;

inline Scenario scenario_file(const std::string& rel) { return load_scenario(std::string(RRSEM_SCENARIO_DIR) + "/" + rel); }

inline Scenario parse(const std::string& json) { return parse_scenario(json); }

// First enabled transition with the given rule and subject.
inline std::optional<Transition> find_step(const std::vector<Transition>& en, Rule r, std::uint64_t pid) {
  for (const auto& t : en)
    if (t.rule == r && t.pid.value == pid) return t;
  return std::nullopt;
}

inline System step(const Scenario& scn, const System& s, Rule r, std::uint64_t pid) {
  auto t = find_step(enabled_rr(scn, s), r, pid);
  INFO(rule_name(r), " at p", pid, " not enabled");
  REQUIRE(t.has_value());
  return apply_rr(scn, s, *t);
}

inline bool enabled(const Scenario& scn, const System& s, Rule r, std::uint64_t pid) {
  return find_step(enabled_rr(scn, s), r, pid).has_value();
}

struct Step {
  Rule rule;
  std::uint64_t pid;
};

inline System steps(const Scenario& scn, System s, std::initializer_list<Step> list) {
  for (const auto& st : list) s = step(scn, s, st.rule, st.pid);
  return s;
}

// Bank scenario pids: init 1, bank 2, client 3.
constexpr std::uint64_t kInit = 1, kBank = 2, kClient = 3;

// Up to the bank's rollback of its second checkpoint (safety check failed).
inline System bank_before_rollback(const Scenario& scn) {
  using R = Rule;
  return steps(scn, initial_system(scn),
               {{R::Spawn, kInit}, {R::Spawn, kInit}, {R::Check, kBank}, {R::Send, kClient}, {R::Receive, kBank},
                {R::Send, kBank}, {R::Receive, kClient}, {R::Commit, kBank}, {R::Commit2, kClient}, {R::Seq, kBank},
                {R::Check, kBank}, {R::Send, kClient}, {R::Receive, kBank}, {R::Send, kBank}, {R::Receive, kClient},
                {R::Seq, kBank}, {R::Seq, kBank}});
}

inline Tag tag_of_value(const System& s, const Value& v) {
  for (const auto& m : s.messages)
    if (m.value == v) return m.tag;
  return Tag{};
}

}  // namespace testing_support
