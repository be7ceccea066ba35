#include "hornlog/proof.hpp"

#include <algorithm>
#include <functional>

namespace hornlog {

ProofRef pconst(std::string label) {
  return std::make_shared<ProofTerm>(
      ProofTerm{ProofTerm::Kind::Const, std::move(label), nullptr, nullptr});
}

ProofRef pvar(std::string name) {
  return std::make_shared<ProofTerm>(
      ProofTerm{ProofTerm::Kind::Var, std::move(name), nullptr, nullptr});
}

ProofRef plam(std::string binder, ProofRef body) {
  return std::make_shared<ProofTerm>(ProofTerm{
      ProofTerm::Kind::Lam, std::move(binder), std::move(body), nullptr});
}

ProofRef papp(ProofRef fun, ProofRef arg) {
  return std::make_shared<ProofTerm>(
      ProofTerm{ProofTerm::Kind::App, {}, std::move(fun), std::move(arg)});
}

ProofRef papps(ProofRef head, const std::vector<ProofRef>& args) {
  ProofRef out = std::move(head);
  for (const auto& a : args) out = papp(out, a);
  return out;
}

bool proof_equal(const ProofRef& a, const ProofRef& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case ProofTerm::Kind::Const:
    case ProofTerm::Kind::Var:
      return a->name == b->name;
    case ProofTerm::Kind::Lam:
      return a->name == b->name && proof_equal(a->fun, b->fun);
    case ProofTerm::Kind::App:
      return proof_equal(a->fun, b->fun) && proof_equal(a->arg, b->arg);
  }
  return false;
}

namespace {

bool alpha_eq(const ProofRef& a, const ProofRef& b,
              std::map<std::string, std::string>& ab,
              std::map<std::string, std::string>& ba) {
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case ProofTerm::Kind::Const:
      return a->name == b->name;
    case ProofTerm::Kind::Var: {
      auto it = ab.find(a->name);
      if (it != ab.end()) return it->second == b->name;
      // both free
      return !ba.count(b->name) && a->name == b->name;
    }
    case ProofTerm::Kind::Lam: {
      auto saved_ab = ab;
      auto saved_ba = ba;
      ab[a->name] = b->name;
      ba[b->name] = a->name;
      bool ok = alpha_eq(a->fun, b->fun, ab, ba);
      ab = std::move(saved_ab);
      ba = std::move(saved_ba);
      return ok;
    }
    case ProofTerm::Kind::App:
      return alpha_eq(a->fun, b->fun, ab, ba) &&
             alpha_eq(a->arg, b->arg, ab, ba);
  }
  return false;
}

void free_vars_into(const ProofRef& e, std::set<std::string>& bound,
                    std::set<std::string>& out) {
  if (!e) return;
  switch (e->kind) {
    case ProofTerm::Kind::Const:
      return;
    case ProofTerm::Kind::Var:
      if (!bound.count(e->name)) out.insert(e->name);
      return;
    case ProofTerm::Kind::Lam: {
      bool added = bound.insert(e->name).second;
      free_vars_into(e->fun, bound, out);
      if (added) bound.erase(e->name);
      return;
    }
    case ProofTerm::Kind::App:
      free_vars_into(e->fun, bound, out);
      free_vars_into(e->arg, bound, out);
      return;
  }
}

}  // namespace

bool alpha_equal(const ProofRef& a, const ProofRef& b) {
  std::map<std::string, std::string> ab, ba;
  return alpha_eq(a, b, ab, ba);
}

std::set<std::string> free_proof_vars(const ProofRef& e) {
  std::set<std::string> bound, out;
  free_vars_into(e, bound, out);
  return out;
}

namespace {

bool is_leaf(const ProofRef& e) {
  return e->kind == ProofTerm::Kind::Const || e->kind == ProofTerm::Kind::Var;
}

void print_proof(const ProofRef& e, std::string& out, bool parenthesize) {
  switch (e->kind) {
    case ProofTerm::Kind::Const:
    case ProofTerm::Kind::Var:
      out += e->name;
      return;
    case ProofTerm::Kind::Lam:
      if (parenthesize) out += '(';
      out += '\\';
      out += e->name;
      out += ". ";
      print_proof(e->fun, out, false);
      if (parenthesize) out += ')';
      return;
    case ProofTerm::Kind::App:
      if (parenthesize) out += '(';
      print_proof(e->fun, out, !is_leaf(e->fun));
      out += ' ';
      print_proof(e->arg, out, !is_leaf(e->arg));
      if (parenthesize) out += ')';
      return;
  }
}

}  // namespace

std::string to_string(const ProofRef& e) {
  std::string out;
  print_proof(e, out, false);
  return out;
}

// ---------------------------------------------------------------------------
// Beta reduction

namespace {

std::string fresh_binder(const std::string& base,
                         const std::set<std::string>& avoid) {
  std::string name = base;
  while (avoid.count(name)) name += '\'';
  return name;
}

ProofRef psubst(const ProofRef& e, const std::string& var,
                const ProofRef& value) {
  switch (e->kind) {
    case ProofTerm::Kind::Const:
      return e;
    case ProofTerm::Kind::Var:
      return e->name == var ? value : e;
    case ProofTerm::Kind::App:
      return papp(psubst(e->fun, var, value), psubst(e->arg, var, value));
    case ProofTerm::Kind::Lam: {
      if (e->name == var) return e;
      std::set<std::string> value_free = free_proof_vars(value);
      if (value_free.count(e->name)) {
        std::set<std::string> avoid = value_free;
        avoid.merge(free_proof_vars(e->fun));
        avoid.insert(var);
        std::string renamed = fresh_binder(e->name, avoid);
        ProofRef body = psubst(e->fun, e->name, pvar(renamed));
        return plam(renamed, psubst(body, var, value));
      }
      return plam(e->name, psubst(e->fun, var, value));
    }
  }
  return e;
}

// One leftmost-outermost step; nothing when already normal.
std::optional<ProofRef> beta_step(const ProofRef& e) {
  switch (e->kind) {
    case ProofTerm::Kind::Const:
    case ProofTerm::Kind::Var:
      return std::nullopt;
    case ProofTerm::Kind::Lam: {
      auto body = beta_step(e->fun);
      if (!body) return std::nullopt;
      return plam(e->name, *body);
    }
    case ProofTerm::Kind::App: {
      if (e->fun->kind == ProofTerm::Kind::Lam)
        return psubst(e->fun->fun, e->fun->name, e->arg);
      if (auto f = beta_step(e->fun)) return papp(*f, e->arg);
      if (auto a = beta_step(e->arg)) return papp(e->fun, *a);
      return std::nullopt;
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<ProofRef> beta_normalize(const ProofRef& e, std::size_t fuel) {
  ProofRef cur = e;
  while (auto next = beta_step(cur)) {
    if (fuel == 0) return std::nullopt;
    --fuel;
    cur = *next;
  }
  return cur;
}

bool is_first_order(const ProofRef& e) {
  switch (e->kind) {
    case ProofTerm::Kind::Const:
    case ProofTerm::Kind::Var:
      return true;
    case ProofTerm::Kind::Lam:
      return false;
    case ProofTerm::Kind::App:
      return is_first_order(e->fun) && is_first_order(e->arg);
  }
  return false;
}

// ---------------------------------------------------------------------------
// Proof extraction

std::optional<ExtractResult> extract_proof(const DerivationTrace& trace) {
  auto renamed = replay_renamed_clauses(trace);
  if (!renamed) return std::nullopt;

  struct Node {
    std::string clause;  // empty for an unresolved leaf
    std::vector<std::size_t> children;
    std::string leftover;
    std::size_t root = 0;
  };
  std::vector<Node> nodes;
  std::vector<std::size_t> positions;
  for (std::size_t j = 0; j < trace.initial.size(); ++j) {
    nodes.push_back({{}, {}, {}, j});
    positions.push_back(j);
  }
  for (std::size_t k = 0; k < trace.steps.size(); ++k) {
    const auto& step = trace.steps[k];
    if (step.mode == StepMode::Sub) continue;
    std::size_t idx = step.selected_index;
    std::size_t id = positions[idx];
    std::size_t m = (*renamed)[k].body.size();
    nodes[id].clause = step.clause_label;
    std::vector<std::size_t> kids;
    for (std::size_t c = 0; c < m; ++c) {
      kids.push_back(nodes.size());
      nodes.push_back({{}, {}, {}, nodes[id].root});
    }
    nodes[id].children = kids;
    positions.erase(positions.begin() + static_cast<std::ptrdiff_t>(idx));
    positions.insert(positions.begin() + static_cast<std::ptrdiff_t>(idx),
                     kids.begin(), kids.end());
  }

  const GoalSet final_goals =
      trace.steps.empty() ? trace.initial : trace.steps.back().goals_after;
  Substitution final_state =
      trace.steps.empty() ? Substitution{} : trace.steps.back().state;

  // Unresolved positions become proof variables b1, b2, ... left to right.
  std::vector<std::vector<Atom>> premises(trace.initial.size());
  std::vector<std::vector<std::string>> binders(trace.initial.size());
  for (std::size_t i = 0; i < positions.size(); ++i) {
    Node& n = nodes[positions[i]];
    n.leftover = "b" + std::to_string(i + 1);
    premises[n.root].push_back(final_state.apply(final_goals[i]));
    binders[n.root].push_back(n.leftover);
  }

  std::function<ProofRef(std::size_t)> build = [&](std::size_t id) -> ProofRef {
    const Node& n = nodes[id];
    if (!n.leftover.empty()) return pvar(n.leftover);
    std::vector<ProofRef> args;
    args.reserve(n.children.size());
    for (std::size_t c : n.children) args.push_back(build(c));
    return papps(pconst(n.clause), args);
  };

  ExtractResult out;
  out.final_state = final_state;
  for (std::size_t j = 0; j < trace.initial.size(); ++j) {
    ProofRef body = build(j);
    for (auto it = binders[j].rbegin(); it != binders[j].rend(); ++it)
      body = plam(*it, body);
    out.proofs.push_back(body);
    out.judgements.push_back(
        {body, premises[j], final_state.apply(trace.initial[j])});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Judgement checking

namespace {

bool merge_binding(Substitution& acc, const Substitution& s) {
  for (const auto& [v, t] : s.bindings()) {
    if (const Term* prior = acc.find(v)) {
      if (!(*prior == t)) return false;
    } else {
      acc.bind(v, t);
    }
  }
  return true;
}

struct Reconstructor {
  const Program& program;
  const std::map<std::string, Atom>& env;  // binder -> frozen premise
  FreshSupply supply;
  std::string diag;
  std::size_t breadth = 0;
  static constexpr std::size_t kMaxBreadth = 512;

  struct Cand {
    Atom conclusion;  // already instantiated by the state
    Substitution state;
  };

  void note(const std::string& msg) {
    if (diag.empty()) diag = msg;
  }

  std::vector<Cand> eval(const ProofRef& e, const Substitution& g) {
    std::vector<Cand> out;
    if (breadth > kMaxBreadth) return out;
    // spine decomposition
    const ProofRef* cur = &e;
    std::vector<ProofRef> args;
    while ((*cur)->kind == ProofTerm::Kind::App) {
      args.push_back((*cur)->arg);
      cur = &(*cur)->fun;
    }
    std::reverse(args.begin(), args.end());
    const ProofRef& head = *cur;
    if (head->kind == ProofTerm::Kind::Lam) {
      note("lambda in applied position");
      return out;
    }
    if (head->kind == ProofTerm::Kind::Var) {
      if (!args.empty()) {
        note("premise variable '" + head->name + "' applied to arguments");
        return out;
      }
      auto it = env.find(head->name);
      if (it == env.end()) {
        note("unbound proof variable '" + head->name + "'");
        return out;
      }
      ++breadth;
      out.push_back({g.apply(it->second), g});
      return out;
    }
    // clause constant
    const HornClause* clause = program.find(head->name);
    if (!clause) {
      note("unknown clause constant '" + head->name + "'");
      return out;
    }
    if (args.size() != clause->body.size()) {
      note("clause '" + head->name + "' takes " +
           std::to_string(clause->body.size()) + " proofs, got " +
           std::to_string(args.size()));
      return out;
    }
    HornClause renamed = rename_apart(*clause, supply);
    std::size_t m = args.size();
    std::vector<std::size_t> perm(m);
    for (std::size_t i = 0; i < m; ++i) perm[i] = i;
    do {
      std::function<void(std::size_t, const Substitution&)> go =
          [&](std::size_t i, const Substitution& gi) {
            if (breadth > kMaxBreadth) return;
            if (i == m) {
              ++breadth;
              out.push_back({gi.apply(renamed.head), gi});
              return;
            }
            for (const auto& cand : eval(args[i], gi)) {
              auto delta =
                  unify(cand.conclusion, cand.state.apply(renamed.body[perm[i]]));
              if (!delta) {
                note("argument " + std::to_string(i + 1) + " of '" +
                     head->name + "' does not prove its premise");
                continue;
              }
              go(i + 1, compose(*delta, cand.state));
            }
          };
      go(0, g);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
  }
};

std::string fresh_constant(std::size_t& counter,
                           const std::set<std::string>& taken) {
  while (true) {
    std::string name = "sk" + std::to_string(counter++);
    if (!taken.count(name)) return name;
  }
}

}  // namespace

CheckResult check_judgement(const Program& p, const Judgement& j,
                            std::size_t fuel) {
  auto nf = beta_normalize(j.proof, fuel);
  if (!nf) return {false, "normalization fuel exhausted"};

  // Freeze the judgement's term variables to fresh constants; the head must
  // then come out as an instance of the reconstructed conclusion.
  std::set<std::string> jvars = free_vars(j.head);
  for (const auto& a : j.premises) {
    auto fv = free_vars(a);
    jvars.insert(fv.begin(), fv.end());
  }
  std::set<std::string> taken = p.functor_names();
  std::size_t counter = 0;
  Substitution frozen;
  for (const auto& v : jvars)
    frozen.bind(v, tapp(fresh_constant(counter, taken)));
  Atom head = frozen.apply(j.head);
  std::vector<Atom> premises;
  premises.reserve(j.premises.size());
  for (const auto& a : j.premises) premises.push_back(frozen.apply(a));

  std::vector<std::string> binders;
  ProofRef body = *nf;
  while (body->kind == ProofTerm::Kind::Lam) {
    binders.push_back(body->name);
    body = body->fun;
  }

  // A bare clause constant proves any instance of its own formula, premises
  // taken in any order.
  if (binders.empty() && body->kind == ProofTerm::Kind::Const &&
      !premises.empty()) {
    const HornClause* clause = p.find(body->name);
    if (!clause) return {false, "unknown clause constant '" + body->name + "'"};
    if (clause->body.size() != premises.size())
      return {false, "premise count differs from clause '" + body->name + "'"};
    std::size_t m = premises.size();
    std::vector<std::size_t> perm(m);
    for (std::size_t i = 0; i < m; ++i) perm[i] = i;
    do {
      Substitution theta;
      auto h = match(clause->head, head);
      if (!h || !merge_binding(theta, *h)) continue;
      bool ok = true;
      for (std::size_t i = 0; i < m && ok; ++i) {
        auto b = match(clause->body[i], premises[perm[i]]);
        ok = b && merge_binding(theta, *b);
      }
      if (ok) return {true, {}};
    } while (std::next_permutation(perm.begin(), perm.end()));
    return {false, "judgement is not an instance of clause '" + body->name +
                       "'"};
  }

  if (binders.size() != premises.size())
    return {false, "proof binds " + std::to_string(binders.size()) +
                       " variables for " + std::to_string(premises.size()) +
                       " premises"};
  if (!is_first_order(body))
    return {false, "proof body is not a first-order term"};

  std::map<std::string, Atom> env;
  for (std::size_t i = 0; i < binders.size(); ++i) {
    if (!env.emplace(binders[i], premises[i]).second)
      return {false, "duplicate binder '" + binders[i] + "'"};
  }

  Reconstructor rec{p, env, FreshSupply{}, {}, 0};
  auto cands = rec.eval(body, {});
  for (const auto& c : cands)
    if (match(c.conclusion, head)) return {true, {}};
  std::string diag = rec.diag.empty()
                         ? "declared head is not an instance of any computed "
                           "conclusion (" +
                               std::to_string(cands.size()) + " candidates)"
                         : rec.diag;
  return {false, diag};
}

}  // namespace hornlog
