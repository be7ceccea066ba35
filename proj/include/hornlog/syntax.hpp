#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace hornlog {

// First-order terms. A term is either a variable or a functor application;
// a constant is an application with no arguments. Variable names start with
// an uppercase letter or underscore, functor names with a lowercase letter,
// so the two namespaces cannot collide.
struct Term {
  enum class Kind { Var, App };
  Kind kind = Kind::App;
  std::string name;
  std::vector<Term> args;

  bool is_var() const { return kind == Kind::Var; }
  bool is_app() const { return kind == Kind::App; }
  bool is_const() const { return kind == Kind::App && args.empty(); }
  bool operator==(const Term&) const = default;
  bool operator<(const Term& o) const;
};

Term tvar(std::string name);
Term tapp(std::string functor, std::vector<Term> args = {});

struct Atom {
  std::string pred;
  std::vector<Term> args;
  bool operator==(const Atom&) const = default;
};

Atom atom(std::string pred, std::vector<Term> args = {});

// A labelled Horn clause `label: head <= body.`; quantification is implicit
// over every variable occurring in the clause.
struct HornClause {
  std::string label;
  Atom head;
  std::vector<Atom> body;
  bool operator==(const HornClause&) const = default;
};

// Goal multiset. Source order is kept so the selection rule is
// deterministic; answer comparison ignores the order.
using GoalSet = std::vector<Atom>;

struct Program {
  std::vector<HornClause> clauses;

  const HornClause* find(const std::string& label) const;
  std::map<std::string, std::size_t> predicate_arities() const;
  std::set<std::string> functor_names() const;
  bool operator==(const Program&) const = default;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t line, std::size_t col);
  std::size_t line() const { return line_; }
  std::size_t col() const { return col_; }

 private:
  std::size_t line_;
  std::size_t col_;
};

// Parses a program file. Errors carry the offending line and column;
// duplicate labels and arity clashes (per predicate and per functor) are
// rejected here as well.
Program parse_program(const std::string& text);

// Parses a comma-separated atom list.
GoalSet parse_query(const std::string& text);

// Printing. The output parses back to the same structure; formatting is
// fixed: no spaces inside argument lists, one space after every comma that
// separates atoms.
std::string to_string(const Term&);
std::string to_string(const Atom&);
std::string to_string(const HornClause&);
std::string to_string(const Program&);
std::string to_string(const GoalSet&);  // "{a, b}"

// Variable traversal in syntactic order (first occurrence wins).
void collect_vars(const Term&, std::vector<std::string>& order,
                  std::set<std::string>& seen);
std::set<std::string> free_vars(const Term&);
std::set<std::string> free_vars(const Atom&);
std::set<std::string> free_vars(const GoalSet&);
std::set<std::string> free_vars(const HornClause&);

// Clause variables in formula order: body atoms left to right, then the
// head. This is the order rename_apart assigns fresh names in.
std::vector<std::string> clause_vars_in_order(const HornClause&);

// Deterministic source of fresh variable names _G0, _G1, ... skipping any
// name in the avoid set. Copy it to get restorable checkpoints.
class FreshSupply {
 public:
  FreshSupply() = default;
  explicit FreshSupply(std::set<std::string> avoid) : avoid_(std::move(avoid)) {}
  std::string fresh();
  void avoid(const std::string& name) { avoid_.insert(name); }
  void avoid(const std::set<std::string>& names);
  std::size_t counter() const { return next_; }

 private:
  std::size_t next_ = 0;
  std::set<std::string> avoid_;
};

// Alpha-renames the clause so its variables are disjoint from `used`.
HornClause rename_apart(const HornClause&, const std::set<std::string>& used);
HornClause rename_apart(const HornClause&, FreshSupply&);

// Renames every variable not in `keep` to _G0, _G1, ... in first-appearance
// order. Used when comparing goal sets and answers up to the names the
// engine happened to generate.
GoalSet canonical_goals(const GoalSet&, const std::set<std::string>& keep = {});

// Query predicates that do not occur in the program (non-fatal; the CLI
// warns about them).
std::vector<std::string> unknown_predicates(const Program&, const GoalSet&);

// Arity consistency of a query against a program; throws ParseError on a
// clash with the program's predicate or functor tables.
void check_query_against(const Program&, const GoalSet&);

}  // namespace hornlog
