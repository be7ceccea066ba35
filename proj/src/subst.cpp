#include "hornlog/subst.hpp"

namespace hornlog {

Substitution Substitution::single(const std::string& var, Term t) {
  Substitution s;
  s.bind(var, std::move(t));
  return s;
}

void Substitution::bind(const std::string& var, Term t) {
  if (t.is_var() && t.name == var) {
    map_.erase(var);
    return;
  }
  map_[var] = std::move(t);
}

bool Substitution::contains(const std::string& var) const {
  return map_.count(var) != 0;
}

const Term* Substitution::find(const std::string& var) const {
  auto it = map_.find(var);
  return it == map_.end() ? nullptr : &it->second;
}

Term Substitution::apply(const Term& t) const {
  if (t.is_var()) {
    auto it = map_.find(t.name);
    return it == map_.end() ? t : it->second;
  }
  Term out = t;
  for (auto& a : out.args) a = apply(a);
  return out;
}

Atom Substitution::apply(const Atom& a) const {
  Atom out = a;
  for (auto& t : out.args) t = apply(t);
  return out;
}

GoalSet Substitution::apply(const GoalSet& g) const {
  GoalSet out;
  out.reserve(g.size());
  for (const auto& a : g) out.push_back(apply(a));
  return out;
}

HornClause Substitution::apply(const HornClause& c) const {
  HornClause out;
  out.label = c.label;
  out.head = apply(c.head);
  out.body.reserve(c.body.size());
  for (const auto& b : c.body) out.body.push_back(apply(b));
  return out;
}

Substitution Substitution::restrict_to(const std::set<std::string>& vars) const {
  Substitution out;
  for (const auto& [v, t] : map_)
    if (vars.count(v)) out.map_.emplace(v, t);
  return out;
}

std::set<std::string> Substitution::domain() const {
  std::set<std::string> out;
  for (const auto& [v, t] : map_) out.insert(v);
  return out;
}

bool Substitution::is_idempotent() const {
  for (const auto& [v, t] : map_)
    for (const auto& rv : free_vars(t))
      if (map_.count(rv)) return false;
  return true;
}

std::string Substitution::to_string() const {
  std::string out = "{";
  bool first = true;
  for (const auto& [v, t] : map_) {
    if (!first) out += ", ";
    first = false;
    out += v;
    out += '=';
    out += hornlog::to_string(t);
  }
  out += '}';
  return out;
}

Substitution compose(const Substitution& outer, const Substitution& inner) {
  Substitution out;
  for (const auto& [v, t] : inner.bindings()) out.bind(v, outer.apply(t));
  for (const auto& [v, t] : outer.bindings())
    if (!inner.contains(v)) out.bind(v, t);
  return out;
}

// ---------------------------------------------------------------------------
// Matching: binds pattern variables only, and a variable bound twice must
// receive the same term.

namespace {

bool match_into(const Term& pattern, const Term& target, Substitution& out) {
  if (pattern.is_var()) {
    if (const Term* bound = out.find(pattern.name)) return *bound == target;
    if (target.is_var() && target.name == pattern.name) return true;
    out.bind(pattern.name, target);
    return true;
  }
  if (!target.is_app() || pattern.name != target.name ||
      pattern.args.size() != target.args.size())
    return false;
  for (std::size_t i = 0; i < pattern.args.size(); ++i)
    if (!match_into(pattern.args[i], target.args[i], out)) return false;
  return true;
}

}  // namespace

std::optional<Substitution> match(const Term& pattern, const Term& target) {
  Substitution out;
  if (!match_into(pattern, target, out)) return std::nullopt;
  return out;
}

std::optional<Substitution> match(const Atom& pattern, const Atom& target) {
  if (pattern.pred != target.pred ||
      pattern.args.size() != target.args.size())
    return std::nullopt;
  Substitution out;
  for (std::size_t i = 0; i < pattern.args.size(); ++i)
    if (!match_into(pattern.args[i], target.args[i], out)) return std::nullopt;
  return out;
}

// ---------------------------------------------------------------------------
// Unification, threading the accumulated substitution left to right.

namespace {

bool occurs(const std::string& var, const Term& t) {
  if (t.is_var()) return t.name == var;
  for (const auto& a : t.args)
    if (occurs(var, a)) return true;
  return false;
}

bool unify_into(const Term& ta, const Term& tb, Substitution& g) {
  Term a = g.apply(ta);
  Term b = g.apply(tb);
  if (a.is_var()) {
    if (b.is_var() && b.name == a.name) return true;
    if (occurs(a.name, b)) return false;
    g = compose(Substitution::single(a.name, b), g);
    return true;
  }
  if (b.is_var()) {
    if (occurs(b.name, a)) return false;
    g = compose(Substitution::single(b.name, a), g);
    return true;
  }
  if (a.name != b.name || a.args.size() != b.args.size()) return false;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!unify_into(a.args[i], b.args[i], g)) return false;
  return true;
}

}  // namespace

std::optional<Substitution> unify(const Term& a, const Term& b) {
  Substitution g;
  if (!unify_into(a, b, g)) return std::nullopt;
  return g;
}

std::optional<Substitution> unify(const Atom& a, const Atom& b) {
  if (a.pred != b.pred || a.args.size() != b.args.size()) return std::nullopt;
  Substitution g;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!unify_into(a.args[i], b.args[i], g)) return std::nullopt;
  return g;
}

}  // namespace hornlog
