#include "rrsem/trace_io.hpp"

#include <array>
#include <sstream>

#include <json.hpp>

#include "rrsem/scenario_io.hpp"

namespace rrsem {

using nlohmann::json;

namespace {

using Fields = std::array<const char*, 3>;

Fields payload_fields(Rule r) {
  switch (r) {
    case Rule::Send:
    case Rule::SendBack: return {"to", "tag", "seq"};
    case Rule::Receive:
    case Rule::ReceiveBack: return {"from", "seq", "tag"};
    case Rule::Spawn:
    case Rule::SpawnBack: return {"child", nullptr, nullptr};
    case Rule::Check:
    case Rule::CheckBack:
    case Rule::Rollback:
    case Rule::Commit:
    case Rule::Delay:
    case Rule::Commit3:
    case Rule::Resume1:
    case Rule::Resume2:
    case Rule::Resume3: return {"check", nullptr, nullptr};
    case Rule::Roll1:
    case Rule::Roll2:
    case Rule::Roll3:
    case Rule::RollGone: return {"from", "check", "initiator"};
    case Rule::UndoSend: return {"tag", nullptr, nullptr};
    case Rule::UndoDep1:
    case Rule::UndoDep2:
    case Rule::Resume4:
    case Rule::Resume5:
    case Rule::Commit2:
    case Rule::Delay2:
    case Rule::CommitGone: return {"from", "check", nullptr};
    case Rule::Seq:
    case Rule::SeqBack: break;
  }
  return {nullptr, nullptr, nullptr};
}

}  // namespace

std::string trace_to_jsonl(const Trace& t) {
  std::ostringstream out;
  json meta{{"seed", t.meta.seed},
            {"semantics", to_string(t.meta.semantics)},
            {"oplus", to_string(t.meta.oplus)},
            {"roll3", to_string(t.meta.roll3)},
            {"max_steps", t.meta.max_steps}};
  out << json{{"meta", meta}}.dump() << '\n';
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    const auto& st = t.steps[i];
    json payload = json::object();
    Fields f = payload_fields(st.t.rule);
    std::array<std::uint64_t, 3> v{st.t.a, st.t.b, st.t.c};
    for (std::size_t k = 0; k < 3; ++k)
      if (f[k]) payload[f[k]] = v[k];
    json rec{{"i", i}, {"rule", rule_name(st.t.rule)}, {"pid", st.t.pid.value}, {"payload", payload}, {"hash", st.hash}};
    out << rec.dump() << '\n';
  }
  return out.str();
}

Trace parse_trace(const std::string& text) {
  Trace t;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  bool have_meta = false;
  auto fail = [&](const std::string& msg) { throw ParseError({"line " + std::to_string(lineno) + ": " + msg}); };
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      fail(e.what());
    }
    try {
      if (!have_meta) {
        if (!j.contains("meta")) fail("missing meta header");
        const json& m = j["meta"];
        t.meta.seed = m.at("seed").get<std::uint64_t>();
        auto sem = semantics_from_name(m.at("semantics").get<std::string>());
        if (!sem) fail("unknown semantics");
        t.meta.semantics = *sem;
        std::string oplus = m.at("oplus").get<std::string>();
        if (oplus != "restore" && oplus != "continue") fail("unknown oplus mode");
        t.meta.oplus = oplus == "restore" ? Oplus::Restore : Oplus::Continue;
        std::string roll3 = m.value("roll3", std::string("sync"));
        if (roll3 != "sync" && roll3 != "async") fail("unknown roll3 reply");
        t.meta.roll3 = roll3 == "sync" ? Roll3Reply::Sync : Roll3Reply::Async;
        t.meta.max_steps = m.at("max_steps").get<std::size_t>();
        have_meta = true;
        continue;
      }
      if (j.at("i").get<std::size_t>() != t.steps.size()) fail("step index out of sequence");
      auto rule = rule_from_name(j.at("rule").get<std::string>());
      if (!rule) fail("unknown rule " + j.at("rule").dump());
      TraceStep st;
      st.t.rule = *rule;
      st.t.pid = Pid{j.at("pid").get<std::uint64_t>()};
      Fields f = payload_fields(*rule);
      const json& p = j.at("payload");
      std::array<std::uint64_t*, 3> dst{&st.t.a, &st.t.b, &st.t.c};
      for (std::size_t k = 0; k < 3; ++k)
        if (f[k]) *dst[k] = p.at(f[k]).get<std::uint64_t>();
      st.hash = j.at("hash").get<std::string>();
      t.steps.push_back(std::move(st));
    } catch (const json::exception& e) {
      fail(e.what());
    }
  }
  if (!have_meta) throw ParseError({"line 1: missing meta header"});
  return t;
}

}  // namespace rrsem
