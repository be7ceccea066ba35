#include "hornlog/realize.hpp"

#include <algorithm>
#include <functional>

namespace hornlog {

std::string NameScheme::functor(const std::string& label,
                                std::size_t body_arity) const {
  return (body_arity == 0 ? fact_prefix : rule_prefix) + label;
}

// ---------------------------------------------------------------------------
// Representation of first-order normal proofs

Term represent(const ProofRef& e, const RepEnv& env, const NameScheme& scheme) {
  const ProofRef* cur = &e;
  std::vector<ProofRef> args;
  while ((*cur)->kind == ProofTerm::Kind::App) {
    args.push_back((*cur)->arg);
    cur = &(*cur)->fun;
  }
  std::reverse(args.begin(), args.end());
  const ProofRef& head = *cur;
  if (head->kind == ProofTerm::Kind::Lam)
    throw std::invalid_argument("represent: proof term is not first order");
  if (head->kind == ProofTerm::Kind::Var) {
    if (!args.empty())
      throw std::invalid_argument(
          "represent: proof variable applied to arguments");
    auto it = env.find(head->name);
    if (it == env.end())
      throw std::invalid_argument("represent: unbound proof variable '" +
                                  head->name + "'");
    return it->second;
  }
  std::vector<Term> rep;
  rep.reserve(args.size());
  for (const auto& a : args) rep.push_back(represent(a, env, scheme));
  return tapp(scheme.functor(head->name, args.size()), std::move(rep));
}

// ---------------------------------------------------------------------------
// Program and query transformation

namespace {

std::string fresh_var(const std::string& prefix, std::size_t& counter,
                      const std::set<std::string>& taken) {
  while (true) {
    std::string name = prefix + std::to_string(counter++);
    if (!taken.count(name)) return name;
  }
}

}  // namespace

Program transform_program(const Program& p, const NameScheme& scheme) {
  std::set<std::string> existing = p.functor_names();
  Program out;
  out.clauses.reserve(p.clauses.size());
  for (const auto& c : p.clauses) {
    std::size_t m = c.body.size();
    std::string witness = scheme.functor(c.label, m);
    if (existing.count(witness))
      throw TransformError("witness functor '" + witness +
                           "' collides with a functor of the program");
    std::set<std::string> taken = free_vars(c);
    std::size_t counter = 1;
    HornClause t;
    t.label = c.label;
    t.body.reserve(m);
    std::vector<Term> witness_args;
    witness_args.reserve(m);
    for (const auto& b : c.body) {
      Atom tb = b;
      Term y = tvar(fresh_var(scheme.clause_arg_prefix, counter, taken));
      witness_args.push_back(y);
      tb.args.push_back(y);
      t.body.push_back(std::move(tb));
    }
    t.head = c.head;
    t.head.args.push_back(tapp(witness, std::move(witness_args)));
    out.clauses.push_back(std::move(t));
  }
  return out;
}

GoalSet transform_query(const GoalSet& q, const NameScheme& scheme) {
  std::set<std::string> taken = free_vars(q);
  std::size_t counter = 0;
  GoalSet out;
  out.reserve(q.size());
  for (const auto& a : q) {
    Atom t = a;
    t.args.push_back(tvar(fresh_var(scheme.query_arg_prefix, counter, taken)));
    out.push_back(std::move(t));
  }
  return out;
}

Judgement transform_judgement(const Judgement& j, const NameScheme& scheme) {
  auto nf = beta_normalize(j.proof);
  if (!nf) throw TransformError("proof does not normalize within fuel");
  std::vector<std::string> binders;
  ProofRef body = *nf;
  while (body->kind == ProofTerm::Kind::Lam) {
    binders.push_back(body->name);
    body = body->fun;
  }
  if (!is_first_order(body))
    throw TransformError("proof body is not a first-order term");
  if (binders.size() != j.premises.size()) {
    if (binders.empty() && body->kind == ProofTerm::Kind::Const) {
      // A bare clause constant stands for its own eta-expansion.
      binders.reserve(j.premises.size());
      std::vector<ProofRef> args;
      for (std::size_t i = 0; i < j.premises.size(); ++i) {
        binders.push_back("a" + std::to_string(i + 1));
        args.push_back(pvar(binders.back()));
      }
      body = papps(body, args);
    } else {
      throw TransformError("binder count differs from premise count");
    }
  }

  std::set<std::string> taken = free_vars(j.head);
  for (const auto& a : j.premises) {
    auto fv = free_vars(a);
    taken.insert(fv.begin(), fv.end());
  }
  std::size_t counter = 1;
  RepEnv env;
  Judgement out;
  out.proof = j.proof;
  out.premises.reserve(j.premises.size());
  for (std::size_t i = 0; i < j.premises.size(); ++i) {
    Term y = tvar(fresh_var(scheme.clause_arg_prefix, counter, taken));
    env.emplace(binders[i], y);
    Atom a = j.premises[i];
    a.args.push_back(y);
    out.premises.push_back(std::move(a));
  }
  out.head = j.head;
  out.head.args.push_back(represent(body, env, scheme));
  return out;
}

// ---------------------------------------------------------------------------
// Non-overlapping

OverlapResult check_non_overlapping(const Program& p) {
  for (std::size_t i = 0; i < p.clauses.size(); ++i) {
    for (std::size_t k = i + 1; k < p.clauses.size(); ++k) {
      FreshSupply supply;
      HornClause a = rename_apart(p.clauses[i], supply);
      HornClause b = rename_apart(p.clauses[k], supply);
      if (auto u = unify(a.head, b.head)) {
        return {false,
                OverlapWitness{p.clauses[i].label, p.clauses[k].label, *u}};
      }
    }
  }
  return {true, std::nullopt};
}

// ---------------------------------------------------------------------------
// Productivity

namespace {

bool contains_term(const Term& hay, const Term& needle) {
  if (hay == needle) return true;
  if (hay.is_var()) return false;
  for (const auto& a : hay.args)
    if (contains_term(a, needle)) return true;
  return false;
}

bool strict_subterm(const Term& sub, const Term& super) {
  if (super.is_var()) return false;
  for (const auto& a : super.args)
    if (contains_term(a, sub)) return true;
  return false;
}

// Measured argument of an atom, or nothing for a zero-arity predicate or an
// out-of-range position.
const Term* measured_arg(const Atom& a,
                         const std::map<std::string, std::size_t>& positions) {
  std::size_t pos = a.args.size();  // default: last argument
  auto it = positions.find(a.pred);
  if (it != positions.end()) pos = it->second;
  if (pos == 0 || pos > a.args.size()) return nullptr;
  return &a.args[pos - 1];
}

struct LoopFinder {
  const Program& program;
  const std::map<std::string, std::size_t>& positions;
  std::size_t bound;
  std::size_t nodes = 0;
  static constexpr std::size_t kNodeCap = 20000;

  // Chain of (clause label, child ordinal) leading to a self-embedding.
  std::vector<std::pair<std::string, std::size_t>> chain;

  bool explore(const Atom& a, std::vector<Atom>& ancestors) {
    if (ancestors.size() >= bound || ++nodes > kNodeCap) return false;
    ancestors.push_back(a);
    FreshSupply supply{free_vars(a)};
    for (const auto& anc : ancestors) supply.avoid(free_vars(anc));
    for (const auto& clause : program.clauses) {
      FreshSupply attempt = supply;
      HornClause renamed = rename_apart(clause, attempt);
      auto sigma = match(renamed.head, a);
      if (!sigma) continue;
      for (std::size_t c = 0; c < renamed.body.size(); ++c) {
        Atom child = sigma->apply(renamed.body[c]);
        chain.emplace_back(clause.label, c);
        for (const auto& anc : ancestors)
          if (match(anc, child)) return true;  // child is an instance
        if (explore(child, ancestors)) return true;
        chain.pop_back();
      }
    }
    ancestors.pop_back();
    return false;
  }
};

// Rebuilds the witness as a goal-multiset trace along the loop chain.
DerivationTrace witness_trace(
    const Program& p, const Atom& seed,
    const std::vector<std::pair<std::string, std::size_t>>& chain) {
  DerivationTrace t;
  t.program = p;
  t.initial = {seed};
  FreshSupply supply{free_vars(seed)};
  GoalSet goals = t.initial;
  std::size_t pos = 0;
  for (const auto& [label, ordinal] : chain) {
    const HornClause* c = p.find(label);
    HornClause renamed = rename_apart(*c, supply);
    auto app = apply_clause(renamed, goals, {}, pos, StepMode::Tm);
    if (!app) break;  // cannot happen on a chain the finder produced
    t.steps.push_back(
        {StepMode::Tm, label, pos, app->local, Substitution{}, app->goals});
    goals = app->goals;
    pos += ordinal;
  }
  t.outcome = {OutcomeKind::TmDivergence, {}};
  return t;
}

}  // namespace

Certificate check_productivity(const Program& p,
                               const std::map<std::string, std::size_t>&
                                   positions,
                               std::size_t bound) {
  auto arities = p.predicate_arities();
  for (const auto& [pred, pos] : positions) {
    auto it = arities.find(pred);
    if (it != arities.end() && (pos == 0 || pos > it->second))
      throw std::out_of_range("measure position " + std::to_string(pos) +
                              " out of range for predicate '" + pred + "'");
  }

  bool decreasing = true;
  for (const auto& c : p.clauses) {
    const Term* head_m = measured_arg(c.head, positions);
    for (const auto& b : c.body) {
      const Term* body_m = measured_arg(b, positions);
      if (!head_m || !body_m || !strict_subterm(*body_m, *head_m)) {
        decreasing = false;
        break;
      }
    }
    if (!decreasing) break;
  }
  if (decreasing) {
    Certificate cert;
    cert.kind = Certificate::Kind::MeasureDecreasing;
    for (const auto& [pred, arity] : arities) {
      auto it = positions.find(pred);
      cert.positions[pred] = it != positions.end() ? it->second : arity;
    }
    return cert;
  }

  // Bounded exploration: most general queries for every predicate, plus the
  // clause heads themselves (a most general query can be irreducible while
  // instances loop).
  std::vector<Atom> seeds;
  for (const auto& [pred, arity] : arities) {
    Atom a;
    a.pred = pred;
    for (std::size_t i = 0; i < arity; ++i)
      a.args.push_back(tvar("X" + std::to_string(i + 1)));
    seeds.push_back(std::move(a));
  }
  for (const auto& c : p.clauses) seeds.push_back(c.head);

  Certificate cert;
  cert.depth = bound;
  cert.queries_tried = seeds.size();
  for (const auto& seed : seeds) {
    LoopFinder finder{p, positions, bound, 0, {}};
    std::vector<Atom> ancestors;
    if (finder.explore(seed, ancestors)) {
      cert.kind = Certificate::Kind::Refuted;
      cert.witness = witness_trace(p, seed, finder.chain);
      return cert;
    }
  }
  cert.kind = Certificate::Kind::BoundedEvidence;
  return cert;
}

bool measure_decreases(const DerivationTrace& t,
                       const std::map<std::string, std::size_t>& positions) {
  GoalSet goals = t.initial;
  for (const auto& step : t.steps) {
    if (step.mode == StepMode::Tm) {
      const HornClause* c = t.program.find(step.clause_label);
      if (!c || step.selected_index >= goals.size()) return false;
      const Atom consumed = goals[step.selected_index];
      const Term* from = measured_arg(consumed, positions);
      for (std::size_t k = 0; k < c->body.size(); ++k) {
        const Atom& produced = step.goals_after[step.selected_index + k];
        const Term* to = measured_arg(produced, positions);
        if (!from || !to || !strict_subterm(*to, *from)) return false;
      }
    }
    goals = step.goals_after;
  }
  return true;
}

}  // namespace hornlog
