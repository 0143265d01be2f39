#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rrsem/ids.hpp"

namespace rrsem {

// Closed runtime value: atom, integer, pid literal, checkpoint id, or tuple.
class Value {
 public:
  enum class Kind : std::uint8_t { Atom, Int, Pid, Check, Tuple };

  Value() = default;  // the atom ok

  static Value atom(std::string name);
  static Value integer(std::int64_t n);
  static Value pid(Pid p);
  static Value check(CheckId c);
  static Value tuple(std::vector<Value> elems);

  Kind kind() const { return kind_; }
  bool is_atom() const { return kind_ == Kind::Atom; }
  bool is_pid() const { return kind_ == Kind::Pid; }
  bool is_check() const { return kind_ == Kind::Check; }
  bool is_tuple() const { return kind_ == Kind::Tuple; }

  const std::string& atom_name() const { return atom_; }
  std::int64_t as_int() const { return num_; }
  Pid as_pid() const { return Pid{static_cast<std::uint64_t>(num_)}; }
  CheckId as_check() const { return CheckId{static_cast<std::uint64_t>(num_)}; }
  const std::vector<Value>& elems() const { return elems_; }

  friend bool operator==(const Value&, const Value&) = default;
  friend std::strong_ordering operator<=>(const Value& a, const Value& b);

 private:
  Kind kind_ = Kind::Atom;
  std::string atom_ = "ok";
  std::int64_t num_ = 0;
  std::vector<Value> elems_;
};

std::string to_string(const Value& v);

using Bindings = std::map<std::string, Value>;

// Pattern / expression syntax shared by Send, Recv and Spawn arguments.
// A variable that is already bound behaves like a literal inside a pattern.
class Term {
 public:
  enum class Kind : std::uint8_t { Lit, Var, Wild, Tuple };

  static Term lit(Value v);
  static Term var(std::string name);
  static Term wild();
  static Term tuple(std::vector<Term> elems);

  Kind kind() const { return kind_; }
  const Value& value() const { return lit_; }
  const std::string& name() const { return name_; }
  const std::vector<Term>& elems() const { return elems_; }

  friend bool operator==(const Term&, const Term&) = default;

 private:
  Kind kind_ = Kind::Wild;
  Value lit_;
  std::string name_;
  std::vector<Term> elems_;
};

using Pattern = Term;
using Expr = Term;

std::string to_string(const Term& t);

struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Evaluates a closed-under-env expression. Throws EvalError on an unbound
// variable or a wildcard.
Value eval(const Expr& e, const Bindings& env);

// Extends env with the binders of pattern if value matches; never mutates env.
std::optional<Bindings> match_value(const Pattern& pattern, const Value& value, const Bindings& env);

// Binder names used more than once in a pattern (empty when well-formed).
std::vector<std::string> duplicate_binders(const Pattern& pattern);

void collect_vars(const Term& t, std::vector<std::string>& out);

}  // namespace rrsem
