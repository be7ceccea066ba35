#include "hornlog/syntax.hpp"

#include <cctype>
#include <sstream>

namespace hornlog {

bool Term::operator<(const Term& o) const {
  if (kind != o.kind) return kind < o.kind;
  if (name != o.name) return name < o.name;
  return args < o.args;
}

Term tvar(std::string name) {
  Term t;
  t.kind = Term::Kind::Var;
  t.name = std::move(name);
  return t;
}

Term tapp(std::string functor, std::vector<Term> args) {
  Term t;
  t.kind = Term::Kind::App;
  t.name = std::move(functor);
  t.args = std::move(args);
  return t;
}

Atom atom(std::string pred, std::vector<Term> args) {
  return Atom{std::move(pred), std::move(args)};
}

const HornClause* Program::find(const std::string& label) const {
  for (const auto& c : clauses)
    if (c.label == label) return &c;
  return nullptr;
}

std::map<std::string, std::size_t> Program::predicate_arities() const {
  std::map<std::string, std::size_t> out;
  auto note = [&](const Atom& a) { out.emplace(a.pred, a.args.size()); };
  for (const auto& c : clauses) {
    note(c.head);
    for (const auto& b : c.body) note(b);
  }
  return out;
}

namespace {

void collect_functors(const Term& t, std::set<std::string>& out) {
  if (t.is_app()) {
    out.insert(t.name);
    for (const auto& a : t.args) collect_functors(a, out);
  }
}

}  // namespace

std::set<std::string> Program::functor_names() const {
  std::set<std::string> out;
  for (const auto& c : clauses) {
    for (const auto& t : c.head.args) collect_functors(t, out);
    for (const auto& b : c.body)
      for (const auto& t : b.args) collect_functors(t, out);
  }
  return out;
}

ParseError::ParseError(const std::string& msg, std::size_t line,
                       std::size_t col)
    : std::runtime_error(msg + " at " + std::to_string(line) + ":" +
                         std::to_string(col)),
      line_(line),
      col_(col) {}

// ---------------------------------------------------------------------------
// Parser

namespace {

struct Scanner {
  const std::string& text;
  std::size_t pos = 0;
  std::size_t line = 1;
  std::size_t col = 1;

  explicit Scanner(const std::string& t) : text(t) {}

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, line, col);
  }

  bool eof() const { return pos >= text.size(); }
  char peek() const { return text[pos]; }

  void bump() {
    if (text[pos] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++pos;
  }

  void skip_ws() {
    while (!eof()) {
      char c = peek();
      if (c == '%') {
        while (!eof() && peek() != '\n') bump();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        bump();
      } else {
        break;
      }
    }
  }

  bool try_consume(char c) {
    skip_ws();
    if (!eof() && peek() == c) {
      bump();
      return true;
    }
    return false;
  }

  bool try_consume(const std::string& s) {
    skip_ws();
    if (text.compare(pos, s.size(), s) == 0) {
      for (std::size_t i = 0; i < s.size(); ++i) bump();
      return true;
    }
    return false;
  }

  void expect(char c, const std::string& what) {
    if (!try_consume(c)) fail("expected '" + std::string(1, c) + "' " + what);
  }

  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  }

  // VAR := [A-Z_][A-Za-z0-9_]*  IDENT := [a-z0-9][A-Za-z0-9_]*
  std::string name() {
    skip_ws();
    if (eof() || !ident_char(peek())) fail("expected identifier");
    std::string out;
    while (!eof() && ident_char(peek())) {
      out += peek();
      bump();
    }
    return out;
  }

  static bool is_var_name(const std::string& n) {
    return std::isupper(static_cast<unsigned char>(n[0])) || n[0] == '_';
  }
};

// Arity bookkeeping shared by program and query parsing.
struct ArityTable {
  std::map<std::string, std::size_t> preds;
  std::map<std::string, std::size_t> functors;

  void note_pred(const std::string& p, std::size_t n, const Scanner& s) {
    auto [it, fresh] = preds.emplace(p, n);
    if (!fresh && it->second != n)
      s.fail("arity clash for predicate '" + p + "' (" +
             std::to_string(it->second) + " vs " + std::to_string(n) + ")");
  }
  void note_functor(const std::string& f, std::size_t n, const Scanner& s) {
    auto [it, fresh] = functors.emplace(f, n);
    if (!fresh && it->second != n)
      s.fail("arity clash for functor '" + f + "' (" +
             std::to_string(it->second) + " vs " + std::to_string(n) + ")");
  }
};

Term parse_term(Scanner& s, ArityTable& arity);

std::vector<Term> parse_arg_list(Scanner& s, ArityTable& arity) {
  std::vector<Term> args;
  args.push_back(parse_term(s, arity));
  while (s.try_consume(',')) args.push_back(parse_term(s, arity));
  s.expect(')', "to close argument list");
  return args;
}

Term parse_term(Scanner& s, ArityTable& arity) {
  std::string n = s.name();
  if (Scanner::is_var_name(n)) return tvar(n);
  std::vector<Term> args;
  if (s.try_consume('(')) args = parse_arg_list(s, arity);
  arity.note_functor(n, args.size(), s);
  return tapp(n, std::move(args));
}

Atom parse_atom(Scanner& s, ArityTable& arity) {
  s.skip_ws();
  std::string n = s.name();
  if (Scanner::is_var_name(n))
    s.fail("predicate name must start with a lowercase letter");
  std::vector<Term> args;
  if (s.try_consume('(')) args = parse_arg_list(s, arity);
  arity.note_pred(n, args.size(), s);
  return Atom{std::move(n), std::move(args)};
}

}  // namespace

Program parse_program(const std::string& text) {
  Scanner s(text);
  ArityTable arity;
  Program p;
  std::set<std::string> labels;
  while (true) {
    s.skip_ws();
    if (s.eof()) break;
    std::string label = s.name();
    if (Scanner::is_var_name(label))
      s.fail("clause label must start with a lowercase letter");
    if (!labels.insert(label).second) s.fail("duplicate label '" + label + "'");
    s.expect(':', "after clause label");
    HornClause c;
    c.label = std::move(label);
    c.head = parse_atom(s, arity);
    if (s.try_consume("<=")) {
      c.body.push_back(parse_atom(s, arity));
      while (s.try_consume(',')) c.body.push_back(parse_atom(s, arity));
    }
    s.expect('.', "at end of clause");
    p.clauses.push_back(std::move(c));
  }
  return p;
}

GoalSet parse_query(const std::string& text) {
  Scanner s(text);
  ArityTable arity;
  GoalSet goals;
  s.skip_ws();
  if (s.eof()) return goals;
  goals.push_back(parse_atom(s, arity));
  while (s.try_consume(',')) goals.push_back(parse_atom(s, arity));
  s.skip_ws();
  if (!s.eof()) s.fail("trailing input after query");
  return goals;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

void print_term(const Term& t, std::string& out) {
  out += t.name;
  if (t.is_app() && !t.args.empty()) {
    out += '(';
    for (std::size_t i = 0; i < t.args.size(); ++i) {
      if (i) out += ',';
      print_term(t.args[i], out);
    }
    out += ')';
  }
}

void print_atom(const Atom& a, std::string& out) {
  out += a.pred;
  if (!a.args.empty()) {
    out += '(';
    for (std::size_t i = 0; i < a.args.size(); ++i) {
      if (i) out += ',';
      print_term(a.args[i], out);
    }
    out += ')';
  }
}

}  // namespace

std::string to_string(const Term& t) {
  std::string out;
  print_term(t, out);
  return out;
}

std::string to_string(const Atom& a) {
  std::string out;
  print_atom(a, out);
  return out;
}

std::string to_string(const HornClause& c) {
  std::string out = c.label + ": ";
  print_atom(c.head, out);
  if (!c.body.empty()) {
    out += " <= ";
    for (std::size_t i = 0; i < c.body.size(); ++i) {
      if (i) out += ", ";
      print_atom(c.body[i], out);
    }
  }
  out += '.';
  return out;
}

std::string to_string(const Program& p) {
  std::string out;
  for (const auto& c : p.clauses) {
    out += to_string(c);
    out += '\n';
  }
  return out;
}

std::string to_string(const GoalSet& g) {
  std::string out = "{";
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (i) out += ", ";
    print_atom(g[i], out);
  }
  out += '}';
  return out;
}

// ---------------------------------------------------------------------------
// Variables and renaming

void collect_vars(const Term& t, std::vector<std::string>& order,
                  std::set<std::string>& seen) {
  if (t.is_var()) {
    if (seen.insert(t.name).second) order.push_back(t.name);
  } else {
    for (const auto& a : t.args) collect_vars(a, order, seen);
  }
}

namespace {

void collect_vars(const Atom& a, std::vector<std::string>& order,
                  std::set<std::string>& seen) {
  for (const auto& t : a.args) collect_vars(t, order, seen);
}

}  // namespace

std::set<std::string> free_vars(const Term& t) {
  std::vector<std::string> order;
  std::set<std::string> seen;
  collect_vars(t, order, seen);
  return seen;
}

std::set<std::string> free_vars(const Atom& a) {
  std::vector<std::string> order;
  std::set<std::string> seen;
  collect_vars(a, order, seen);
  return seen;
}

std::set<std::string> free_vars(const GoalSet& g) {
  std::vector<std::string> order;
  std::set<std::string> seen;
  for (const auto& a : g) collect_vars(a, order, seen);
  return seen;
}

std::set<std::string> free_vars(const HornClause& c) {
  std::vector<std::string> order;
  std::set<std::string> seen;
  for (const auto& b : c.body) collect_vars(b, order, seen);
  collect_vars(c.head, order, seen);
  return seen;
}

std::vector<std::string> clause_vars_in_order(const HornClause& c) {
  std::vector<std::string> order;
  std::set<std::string> seen;
  for (const auto& b : c.body) collect_vars(b, order, seen);
  collect_vars(c.head, order, seen);
  return order;
}

std::string FreshSupply::fresh() {
  while (true) {
    std::string candidate = "_G" + std::to_string(next_++);
    if (!avoid_.count(candidate)) return candidate;
  }
}

void FreshSupply::avoid(const std::set<std::string>& names) {
  avoid_.insert(names.begin(), names.end());
}

namespace {

Term rename_term(const Term& t, const std::map<std::string, std::string>& m) {
  if (t.is_var()) {
    auto it = m.find(t.name);
    return it == m.end() ? t : tvar(it->second);
  }
  Term out = t;
  for (auto& a : out.args) a = rename_term(a, m);
  return out;
}

Atom rename_atom(const Atom& a, const std::map<std::string, std::string>& m) {
  Atom out = a;
  for (auto& t : out.args) t = rename_term(t, m);
  return out;
}

}  // namespace

HornClause rename_apart(const HornClause& c, FreshSupply& supply) {
  std::map<std::string, std::string> m;
  for (const auto& v : clause_vars_in_order(c)) m.emplace(v, supply.fresh());
  HornClause out;
  out.label = c.label;
  out.head = rename_atom(c.head, m);
  out.body.reserve(c.body.size());
  for (const auto& b : c.body) out.body.push_back(rename_atom(b, m));
  return out;
}

HornClause rename_apart(const HornClause& c,
                        const std::set<std::string>& used) {
  FreshSupply supply(used);
  return rename_apart(c, supply);
}

GoalSet canonical_goals(const GoalSet& g, const std::set<std::string>& keep) {
  std::vector<std::string> order;
  std::set<std::string> seen;
  for (const auto& a : g) collect_vars(a, order, seen);
  FreshSupply supply(keep);
  std::map<std::string, std::string> m;
  for (const auto& v : order)
    if (!keep.count(v)) m.emplace(v, supply.fresh());
  GoalSet out;
  out.reserve(g.size());
  for (const auto& a : g) out.push_back(rename_atom(a, m));
  return out;
}

std::vector<std::string> unknown_predicates(const Program& p,
                                            const GoalSet& q) {
  auto known = p.predicate_arities();
  std::vector<std::string> out;
  std::set<std::string> reported;
  for (const auto& a : q)
    if (!known.count(a.pred) && reported.insert(a.pred).second)
      out.push_back(a.pred);
  return out;
}

namespace {

void check_functor_arities(const Term& t,
                           const std::map<std::string, std::size_t>& known,
                           std::map<std::string, std::size_t>& local) {
  if (t.is_var()) return;
  auto it = known.find(t.name);
  std::size_t n = t.args.size();
  if (it != known.end() && it->second != n)
    throw ParseError("arity clash for functor '" + t.name + "' (" +
                         std::to_string(it->second) + " vs " +
                         std::to_string(n) + ")",
                     0, 0);
  auto [lit, fresh] = local.emplace(t.name, n);
  if (!fresh && lit->second != n)
    throw ParseError("arity clash for functor '" + t.name + "'", 0, 0);
  for (const auto& a : t.args) check_functor_arities(a, known, local);
}

}  // namespace

void check_query_against(const Program& p, const GoalSet& q) {
  auto preds = p.predicate_arities();
  std::map<std::string, std::size_t> known;
  for (const auto& c : p.clauses) {
    std::map<std::string, std::size_t> local;
    for (const auto& t : c.head.args) check_functor_arities(t, known, local);
    for (const auto& b : c.body)
      for (const auto& t : b.args) check_functor_arities(t, known, local);
    known.insert(local.begin(), local.end());
  }
  for (const auto& a : q) {
    auto it = preds.find(a.pred);
    if (it != preds.end() && it->second != a.args.size())
      throw ParseError("arity clash for predicate '" + a.pred + "' (" +
                           std::to_string(it->second) + " vs " +
                           std::to_string(a.args.size()) + ")",
                       0, 0);
    std::map<std::string, std::size_t> local;
    for (const auto& t : a.args) check_functor_arities(t, known, local);
    known.insert(local.begin(), local.end());
  }
}

}  // namespace hornlog
