#include "rrsem/scenario_io.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace rrsem {

using nlohmann::json;

ParseError::ParseError(std::vector<std::string> errs)
    : std::runtime_error(errs.empty() ? "parse error" : errs.front()), errors(std::move(errs)) {}

namespace {

struct Reader {
  std::vector<std::string> errors;

  void fail(const std::string& where, const std::string& msg) { errors.push_back(where + ": " + msg); }

  bool looks_like_var(const std::string& s) {
    return !s.empty() && (std::isupper(static_cast<unsigned char>(s[0])) || s[0] == '_');
  }

  std::optional<Term> term(const json& j, const std::string& where) {
    if (j.is_number_integer()) return Term::lit(Value::integer(j.get<std::int64_t>()));
    if (j.is_string()) {
      auto s = j.get<std::string>();
      if (s == "_") return Term::wild();
      if (looks_like_var(s)) return Term::var(s);
      if (s.empty()) {
        fail(where, "empty atom");
        return std::nullopt;
      }
      return Term::lit(Value::atom(s));
    }
    if (j.is_array()) {
      std::vector<Term> elems;
      for (std::size_t i = 0; i < j.size(); ++i) {
        auto t = term(j[i], where + "/" + std::to_string(i));
        if (!t) return std::nullopt;
        elems.push_back(std::move(*t));
      }
      return Term::tuple(std::move(elems));
    }
    if (j.is_object() && j.size() == 1) {
      auto it = j.begin();
      if (it.key() == "atom" && it->is_string()) return Term::lit(Value::atom(it->get<std::string>()));
      if (it.key() == "pid" && it->is_number_unsigned()) return Term::lit(Value::pid(Pid{it->get<std::uint64_t>()}));
      if (it.key() == "check" && it->is_number_unsigned())
        return Term::lit(Value::check(CheckId{it->get<std::uint64_t>()}));
    }
    fail(where, "not a term: " + j.dump());
    return std::nullopt;
  }

  std::string str(const json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_string() || it->get<std::string>().empty()) {
      fail(where, std::string("missing string field \"") + key + "\"");
      return {};
    }
    return it->get<std::string>();
  }

  std::optional<Term> term_field(const json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) {
      fail(where, std::string("missing field \"") + key + "\"");
      return std::nullopt;
    }
    return term(*it, where + "/" + key);
  }

  std::optional<Action> action(const json& j, const std::string& where) {
    if (!j.is_object() || !j.contains("op") || !j["op"].is_string()) {
      fail(where, "action must be an object with an \"op\" string");
      return std::nullopt;
    }
    std::string op = j["op"].get<std::string>();
    std::size_t before = errors.size();
    Action a;
    if (op == "spawn") {
      std::map<std::string, Expr> args;
      if (auto it = j.find("args"); it != j.end()) {
        if (!it->is_object()) fail(where + "/args", "must be an object");
        else
          for (auto& [k, v] : it->items()) {
            if (!looks_like_var(k)) fail(where + "/args/" + k, "argument names are variables");
            if (auto t = term(v, where + "/args/" + k)) args.emplace(k, std::move(*t));
          }
      }
      a = Action::spawn(str(j, "var", where), str(j, "script", where), std::move(args));
    } else if (op == "send") {
      auto to = term_field(j, "to", where);
      auto v = term_field(j, "value", where);
      if (to && v) a = Action::send(std::move(*to), std::move(*v));
    } else if (op == "recv") {
      if (auto p = term_field(j, "pattern", where)) a = Action::recv(std::move(*p));
    } else if (op == "check") {
      a = Action::check(str(j, "var", where));
    } else if (op == "commit") {
      a = Action::commit(str(j, "var", where));
    } else if (op == "rollback") {
      a = Action::rollback(str(j, "var", where));
    } else if (op == "seq") {
      a = Action::seq();
    } else if (op == "label") {
      a = Action::label(str(j, "name", where));
    } else if (op == "goto") {
      a = Action::go(str(j, "label", where));
    } else if (op == "branch_oracle") {
      a = Action::branch(str(j, "oracle", where), str(j, "then", where), str(j, "else", where));
    } else if (op == "stop") {
      a = Action::stop();
    } else {
      fail(where + "/op", "unknown action kind \"" + op + "\"");
      return std::nullopt;
    }
    if (errors.size() != before) return std::nullopt;
    if (!a.var.empty() && !looks_like_var(a.var)) fail(where + "/var", "must be a variable name");
    return a;
  }

  void resolve(const Scenario& scn) {
    if (!scn.entry.empty() && !scn.find(scn.entry)) fail("/entry", "unknown script \"" + scn.entry + "\"");
    for (const auto& sc : scn.scripts) {
      std::set<std::string> labels;
      for (std::size_t i = 0; i < sc.actions.size(); ++i)
        if (sc.actions[i].op == Action::Op::Label && !labels.insert(sc.actions[i].name).second)
          fail("/scripts/" + sc.name + "/" + std::to_string(i), "duplicate label \"" + sc.actions[i].name + "\"");
      for (std::size_t i = 0; i < sc.actions.size(); ++i) {
        const Action& a = sc.actions[i];
        std::string where = "/scripts/" + sc.name + "/" + std::to_string(i);
        auto need_label = [&](const std::string& l) {
          if (!labels.count(l)) fail(where, "unresolved label \"" + l + "\"");
        };
        if (a.op == Action::Op::Goto) need_label(a.name);
        if (a.op == Action::Op::BranchOracle) {
          need_label(a.then_label);
          need_label(a.else_label);
          if (!scn.oracles.count(a.name)) fail(where, "unknown oracle \"" + a.name + "\"");
        }
        if (a.op == Action::Op::Spawn && !scn.find(a.name)) fail(where, "unresolved script \"" + a.name + "\"");
      }
    }
  }
};

std::string line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return std::to_string(line) + ":" + std::to_string(col);
}

json term_json(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Wild: return "_";
    case Term::Kind::Var: return t.name();
    case Term::Kind::Tuple: {
      json arr = json::array();
      for (const auto& e : t.elems()) arr.push_back(term_json(e));
      return arr;
    }
    case Term::Kind::Lit: break;
  }
  const Value& v = t.value();
  switch (v.kind()) {
    case Value::Kind::Int: return v.as_int();
    case Value::Kind::Pid: return json{{"pid", v.as_pid().value}};
    case Value::Kind::Check: return json{{"check", v.as_check().value}};
    case Value::Kind::Atom: {
      const auto& n = v.atom_name();
      if (n == "_" || n.empty() || std::isupper(static_cast<unsigned char>(n[0])) || n[0] == '_')
        return json{{"atom", n}};
      return n;
    }
    case Value::Kind::Tuple: {
      json arr = json::array();
      for (const auto& e : v.elems()) arr.push_back(term_json(Term::lit(e)));
      return arr;
    }
  }
  return nullptr;
}

json action_json(const Action& a) {
  json j;
  std::string op = op_name(a.op);
  j["op"] = op;
  switch (a.op) {
    case Action::Op::Spawn: {
      j["var"] = a.var;
      j["script"] = a.name;
      if (!a.args.empty()) {
        json args = json::object();
        for (const auto& [k, e] : a.args) args[k] = term_json(e);
        j["args"] = args;
      }
      break;
    }
    case Action::Op::Send:
      j["to"] = term_json(a.target);
      j["value"] = term_json(a.value);
      break;
    case Action::Op::Recv: j["pattern"] = term_json(a.pattern); break;
    case Action::Op::Check:
    case Action::Op::Commit:
    case Action::Op::Rollback: j["var"] = a.var; break;
    case Action::Op::Label: j["name"] = a.name; break;
    case Action::Op::Goto: j["label"] = a.name; break;
    case Action::Op::BranchOracle:
      j["oracle"] = a.name;
      j["then"] = a.then_label;
      j["else"] = a.else_label;
      break;
    default: break;
  }
  return j;
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
  Reader r;
  bool blank = text.find_first_not_of(" \t\r\n") == std::string::npos;
  if (blank) throw ParseError({"1:1: no entry script"});
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError({line_col(text, e.byte == 0 ? 0 : e.byte - 1) + ": " + e.what()});
  }
  if (!doc.is_object()) throw ParseError({"/: scenario must be an object"});

  Scenario scn;
  static const std::set<std::string> known{"entry", "oplus", "oracles", "scripts", "init", "roll3",
                                           "skip_own_forced", "answer_for_deleted"};
  for (auto& [k, v] : doc.items())
    if (!known.count(k)) r.fail("/" + k, "unknown field");

  if (!doc.contains("entry") || !doc["entry"].is_string() || doc["entry"].get<std::string>().empty())
    r.fail("/entry", "no entry script");
  else
    scn.entry = doc["entry"].get<std::string>();

  if (auto it = doc.find("oplus"); it != doc.end()) {
    if (*it == "restore") scn.options.oplus = Oplus::Restore;
    else if (*it == "continue") scn.options.oplus = Oplus::Continue;
    else r.fail("/oplus", "expected \"restore\" or \"continue\"");
  }
  if (auto it = doc.find("roll3"); it != doc.end()) {
    if (*it == "sync") scn.options.roll3 = Roll3Reply::Sync;
    else if (*it == "async") scn.options.roll3 = Roll3Reply::Async;
    else r.fail("/roll3", "expected \"sync\" or \"async\"");
  }
  for (const char* flag : {"skip_own_forced", "answer_for_deleted"}) {
    auto it = doc.find(flag);
    if (it == doc.end()) continue;
    if (!it->is_boolean()) {
      r.fail(std::string("/") + flag, "expected a boolean");
      continue;
    }
    (std::string(flag) == "skip_own_forced" ? scn.options.skip_own_forced : scn.options.answer_for_deleted) =
        it->get<bool>();
  }
  if (auto it = doc.find("oracles"); it != doc.end()) {
    if (!it->is_object()) r.fail("/oracles", "must be an object");
    else
      for (auto& [name, seq] : it->items()) {
        std::vector<bool> bits;
        if (!seq.is_array()) r.fail("/oracles/" + name, "must be an array of booleans");
        else
          for (std::size_t i = 0; i < seq.size(); ++i) {
            if (!seq[i].is_boolean()) r.fail("/oracles/" + name + "/" + std::to_string(i), "expected a boolean");
            else bits.push_back(seq[i].get<bool>());
          }
        scn.oracles[name] = std::move(bits);
      }
  }
  if (auto it = doc.find("init"); it != doc.end()) {
    if (!it->is_object()) r.fail("/init", "must be an object");
    else
      for (auto& [k, v] : it->items()) {
        auto t = r.term(v, "/init/" + k);
        if (!t) continue;
        try {
          scn.init[k] = eval(*t, {});
        } catch (const EvalError&) {
          r.fail("/init/" + k, "initial bindings must be closed values");
        }
      }
  }
  auto sit = doc.find("scripts");
  if (sit == doc.end() || !sit->is_object()) {
    r.fail("/scripts", "missing scripts object");
  } else {
    for (auto& [name, body] : sit->items()) {
      Script sc;
      sc.name = name;
      if (!body.is_array()) {
        r.fail("/scripts/" + name, "must be an array of actions");
      } else {
        for (std::size_t i = 0; i < body.size(); ++i)
          if (auto a = r.action(body[i], "/scripts/" + name + "/" + std::to_string(i))) sc.actions.push_back(*a);
      }
      scn.scripts.push_back(std::move(sc));
    }
  }
  if (r.errors.empty()) r.resolve(scn);
  if (!r.errors.empty()) throw ParseError(std::move(r.errors));
  return scn;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Scenario load_scenario(const std::string& path) {
  std::string text = read_file(path);
  try {
    return parse_scenario(text);
  } catch (ParseError& e) {
    for (auto& m : e.errors) m = path + ":" + m;
    throw ParseError(std::move(e.errors));
  }
}

std::string scenario_to_json(const Scenario& scn) {
  json doc;
  doc["entry"] = scn.entry;
  doc["oplus"] = to_string(scn.options.oplus);
  doc["roll3"] = to_string(scn.options.roll3);
  doc["skip_own_forced"] = scn.options.skip_own_forced;
  doc["answer_for_deleted"] = scn.options.answer_for_deleted;
  if (!scn.init.empty()) {
    json init = json::object();
    for (const auto& [k, v] : scn.init) init[k] = term_json(Term::lit(v));
    doc["init"] = init;
  }
  json oracles = json::object();
  for (const auto& [k, bits] : scn.oracles) oracles[k] = bits;
  doc["oracles"] = oracles;
  json scripts = json::object();
  for (const auto& sc : scn.scripts) {
    json body = json::array();
    for (const auto& a : sc.actions) body.push_back(action_json(a));
    scripts[sc.name] = body;
  }
  doc["scripts"] = scripts;
  return doc.dump(2) + "\n";
}

}  // namespace rrsem
