#pragma once

#include <optional>

#include "hornlog/syntax.hpp"

namespace hornlog {

// Finite map from variable names to terms, applied simultaneously. No
// identity binding is ever stored. Unifiers returned by unify() are
// idempotent: no bound variable occurs in any range term.
class Substitution {
 public:
  Substitution() = default;
  static Substitution single(const std::string& var, Term t);

  Term apply(const Term&) const;
  Atom apply(const Atom&) const;
  GoalSet apply(const GoalSet&) const;
  HornClause apply(const HornClause&) const;

  // Inserts var |-> t, dropping identities. Overwrites silently.
  void bind(const std::string& var, Term t);

  bool contains(const std::string& var) const;
  const Term* find(const std::string& var) const;
  Substitution restrict_to(const std::set<std::string>& vars) const;

  bool empty() const { return map_.empty(); }
  std::size_t size() const { return map_.size(); }
  const std::map<std::string, Term>& bindings() const { return map_; }
  std::set<std::string> domain() const;
  bool is_idempotent() const;

  // "{X=node1, Y=node3}", variables in lexicographic order.
  std::string to_string() const;

  bool operator==(const Substitution&) const = default;

 private:
  std::map<std::string, Term> map_;
};

// compose(outer, inner): apply inner first, then outer.
Substitution compose(const Substitution& outer, const Substitution& inner);

// One-sided matching: only pattern variables may be instantiated, and a
// variable matched twice must receive identical terms. Failure is a value,
// not an error.
std::optional<Substitution> match(const Term& pattern, const Term& target);
std::optional<Substitution> match(const Atom& pattern, const Atom& target);

// First-order unification with occurs check, threading the accumulated
// substitution through the argument list left to right. The result is an
// idempotent most general unifier.
std::optional<Substitution> unify(const Term& a, const Term& b);
std::optional<Substitution> unify(const Atom& a, const Atom& b);

}  // namespace hornlog
