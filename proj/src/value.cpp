#include "rrsem/value.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace rrsem {

Value Value::atom(std::string name) {
  Value v;
  v.kind_ = Kind::Atom;
  v.atom_ = std::move(name);
  return v;
}

Value Value::integer(std::int64_t n) {
  Value v;
  v.kind_ = Kind::Int;
  v.atom_.clear();
  v.num_ = n;
  return v;
}

Value Value::pid(Pid p) {
  Value v;
  v.kind_ = Kind::Pid;
  v.atom_.clear();
  v.num_ = static_cast<std::int64_t>(p.value);
  return v;
}

Value Value::check(CheckId c) {
  Value v;
  v.kind_ = Kind::Check;
  v.atom_.clear();
  v.num_ = static_cast<std::int64_t>(c.value);
  return v;
}

Value Value::tuple(std::vector<Value> elems) {
  Value v;
  v.kind_ = Kind::Tuple;
  v.atom_.clear();
  v.elems_ = std::move(elems);
  return v;
}

std::strong_ordering operator<=>(const Value& a, const Value& b) {
  if (auto c = a.kind_ <=> b.kind_; c != 0) return c;
  switch (a.kind_) {
    case Value::Kind::Atom:
      return a.atom_.compare(b.atom_) <=> 0;
    case Value::Kind::Tuple:
      return std::lexicographical_compare_three_way(a.elems_.begin(), a.elems_.end(), b.elems_.begin(),
                                                    b.elems_.end());
    default:
      return a.num_ <=> b.num_;
  }
}

namespace {

bool plain_atom(const std::string& s) {
  if (s.empty() || !std::islower(static_cast<unsigned char>(s[0]))) return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

}  // namespace

std::string to_string(const Value& v) {
  switch (v.kind()) {
    case Value::Kind::Atom:
      return plain_atom(v.atom_name()) ? v.atom_name() : "'" + v.atom_name() + "'";
    case Value::Kind::Int:
      return std::to_string(v.as_int());
    case Value::Kind::Pid:
      return "<" + std::to_string(v.as_pid().value) + ">";
    case Value::Kind::Check:
      return "#" + std::to_string(v.as_check().value);
    case Value::Kind::Tuple: {
      std::string out = "{";
      for (std::size_t i = 0; i < v.elems().size(); ++i) {
        if (i) out += ",";
        out += to_string(v.elems()[i]);
      }
      return out + "}";
    }
  }
  return "?";
}

Term Term::lit(Value v) {
  Term t;
  t.kind_ = Kind::Lit;
  t.lit_ = std::move(v);
  return t;
}

Term Term::var(std::string name) {
  Term t;
  t.kind_ = Kind::Var;
  t.name_ = std::move(name);
  return t;
}

Term Term::wild() { return Term{}; }

Term Term::tuple(std::vector<Term> elems) {
  Term t;
  t.kind_ = Kind::Tuple;
  t.elems_ = std::move(elems);
  return t;
}

std::string to_string(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Lit:
      return to_string(t.value());
    case Term::Kind::Var:
      return t.name();
    case Term::Kind::Wild:
      return "_";
    case Term::Kind::Tuple: {
      std::string out = "{";
      for (std::size_t i = 0; i < t.elems().size(); ++i) {
        if (i) out += ",";
        out += to_string(t.elems()[i]);
      }
      return out + "}";
    }
  }
  return "?";
}

Value eval(const Expr& e, const Bindings& env) {
  switch (e.kind()) {
    case Term::Kind::Lit:
      return e.value();
    case Term::Kind::Var: {
      auto it = env.find(e.name());
      if (it == env.end()) throw EvalError("unbound variable " + e.name());
      return it->second;
    }
    case Term::Kind::Wild:
      throw EvalError("wildcard used as an expression");
    case Term::Kind::Tuple: {
      std::vector<Value> out;
      out.reserve(e.elems().size());
      for (const auto& sub : e.elems()) out.push_back(eval(sub, env));
      return Value::tuple(std::move(out));
    }
  }
  throw EvalError("bad term");
}

namespace {

bool match_into(const Pattern& p, const Value& v, Bindings& env) {
  switch (p.kind()) {
    case Term::Kind::Wild:
      return true;
    case Term::Kind::Lit:
      return p.value() == v;
    case Term::Kind::Var: {
      auto [it, inserted] = env.try_emplace(p.name(), v);
      return inserted || it->second == v;
    }
    case Term::Kind::Tuple: {
      if (!v.is_tuple() || v.elems().size() != p.elems().size()) return false;
      for (std::size_t i = 0; i < p.elems().size(); ++i)
        if (!match_into(p.elems()[i], v.elems()[i], env)) return false;
      return true;
    }
  }
  return false;
}

void binders(const Term& t, std::vector<std::string>& out) {
  if (t.kind() == Term::Kind::Var) out.push_back(t.name());
  if (t.kind() == Term::Kind::Tuple)
    for (const auto& e : t.elems()) binders(e, out);
}

}  // namespace

std::optional<Bindings> match_value(const Pattern& pattern, const Value& value, const Bindings& env) {
  Bindings out = env;
  if (!match_into(pattern, value, out)) return std::nullopt;
  return out;
}

std::vector<std::string> duplicate_binders(const Pattern& pattern) {
  std::vector<std::string> names;
  binders(pattern, names);
  std::set<std::string> seen, dups;
  for (const auto& n : names)
    if (!seen.insert(n).second) dups.insert(n);
  return {dups.begin(), dups.end()};
}

void collect_vars(const Term& t, std::vector<std::string>& out) { binders(t, out); }

}  // namespace rrsem
