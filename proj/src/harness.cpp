#include "hornlog/harness.hpp"

#include <algorithm>
#include <random>

#include "json.hpp"

namespace hornlog {

// ---------------------------------------------------------------------------
// Random programs

namespace {

struct Gen {
  std::mt19937_64 rng;
  explicit Gen(std::uint64_t seed) : rng(seed) {}
  std::size_t below(std::size_t n) {
    return n == 0 ? 0 : static_cast<std::size_t>(rng() % n);
  }
  bool chance(unsigned percent) { return below(100) < percent; }
};

const char* kVarPool[] = {"X", "Y", "Z", "W"};

Term random_term(Gen& g, std::size_t depth, bool allow_vars) {
  if (allow_vars && g.chance(40)) return tvar(kVarPool[g.below(4)]);
  if (depth == 0 || g.chance(50)) {
    static const char* consts[] = {"a", "b", "c"};
    return tapp(consts[g.below(3)]);
  }
  if (g.chance(60)) return tapp("f", {random_term(g, depth - 1, allow_vars)});
  return tapp("g", {random_term(g, depth - 1, allow_vars),
                    random_term(g, depth - 1, allow_vars)});
}

}  // namespace

Program generate_program(const GenConfig& cfg) {
  Gen g(cfg.seed * 0x9e3779b97f4a7c15ULL + 1);
  std::size_t npreds =
      1 + g.below(std::min<std::size_t>(3, std::max<std::size_t>(cfg.max_clauses, 1)));
  std::vector<std::string> preds;
  std::vector<std::size_t> arities;
  for (std::size_t i = 0; i < npreds; ++i) {
    preds.push_back(std::string(1, static_cast<char>('p' + i)));
    arities.push_back(1 + g.below(cfg.max_arity));
  }

  Program p;
  std::size_t label = 0;
  auto random_atom = [&](std::size_t pred, bool allow_vars) {
    Atom a;
    a.pred = preds[pred];
    for (std::size_t i = 0; i < arities[pred]; ++i)
      a.args.push_back(random_term(g, g.below(cfg.max_term_depth), allow_vars));
    return a;
  };

  // One fact per predicate keeps derivations inhabited.
  for (std::size_t i = 0; i < npreds; ++i) {
    HornClause c;
    c.label = "k" + std::to_string(++label);
    c.head = random_atom(i, true);
    p.clauses.push_back(std::move(c));
  }
  // Extra clauses; bodies only call predicates of strictly lower index, so
  // every derivation tree is finite.
  while (p.clauses.size() < std::max<std::size_t>(cfg.max_clauses, npreds)) {
    std::size_t pred = g.below(npreds);
    HornClause c;
    c.label = "k" + std::to_string(++label);
    c.head = random_atom(pred, true);
    std::size_t body_len = pred == 0 ? 0 : g.below(cfg.max_body + 1);
    for (std::size_t i = 0; i < body_len; ++i)
      c.body.push_back(random_atom(g.below(pred), true));
    p.clauses.push_back(std::move(c));
  }
  return p;
}

std::vector<GoalSet> corpus_queries(const Program& p) {
  std::vector<GoalSet> out;
  for (const auto& [pred, arity] : p.predicate_arities()) {
    Atom a;
    a.pred = pred;
    for (std::size_t i = 0; i < arity; ++i)
      a.args.push_back(tvar("Q" + std::to_string(i + 1)));
    out.push_back({std::move(a)});
  }
  for (const auto& c : p.clauses) {
    if (!c.body.empty()) continue;
    Substitution ground;
    for (const auto& v : free_vars(c.head)) ground.bind(v, tapp("a"));
    out.push_back({ground.apply(c.head)});
    break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Breadth-first oracle

namespace {

struct OState {
  GoalSet goals;
  Substitution state;
};

void print_skeleton(const Term& t, std::string& out) {
  if (t.is_var()) {
    out += '_';
    return;
  }
  out += t.name;
  if (!t.args.empty()) {
    out += '(';
    for (std::size_t i = 0; i < t.args.size(); ++i) {
      if (i) out += ',';
      print_skeleton(t.args[i], out);
    }
    out += ')';
  }
}

std::string skeleton(const Atom& a) {
  std::string out = a.pred;
  out += '(';
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (i) out += ',';
    print_skeleton(a.args[i], out);
  }
  out += ')';
  return out;
}

// Goal order is irrelevant to the oracle (it expands every selection), so
// states are stored with goals sorted and variables renamed canonically;
// permutations of one another collapse to one state.
OState canonical_state(const OState& st, const std::set<std::string>& keep) {
  std::vector<std::size_t> order(st.goals.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    auto ka = std::make_pair(skeleton(st.goals[a]), to_string(st.goals[a]));
    auto kb = std::make_pair(skeleton(st.goals[b]), to_string(st.goals[b]));
    return ka < kb;
  });
  std::vector<std::string> var_order;
  std::set<std::string> seen;
  for (std::size_t i : order)
    for (const auto& t : st.goals[i].args) collect_vars(t, var_order, seen);
  for (const auto& [v, t] : st.state.bindings()) collect_vars(t, var_order, seen);
  FreshSupply supply(keep);
  Substitution rename;
  for (const auto& v : var_order)
    if (!keep.count(v)) rename.bind(v, tvar(supply.fresh()));
  OState out;
  out.goals.reserve(st.goals.size());
  for (std::size_t i : order) out.goals.push_back(rename.apply(st.goals[i]));
  for (const auto& [v, t] : st.state.bindings())
    out.state.bind(v, rename.apply(t));
  return out;
}

std::string state_key(const OState& st) {
  std::string out;
  for (const auto& a : st.goals) {
    out += to_string(a);
    out += ';';
  }
  out += '|';
  out += st.state.to_string();
  return out;
}

std::set<std::string> expansion_avoid(const OState& st,
                                      const std::set<std::string>& keep) {
  std::set<std::string> avoid = keep;
  auto gv = free_vars(st.goals);
  avoid.insert(gv.begin(), gv.end());
  for (const auto& [v, t] : st.state.bindings()) {
    avoid.insert(v);
    auto rv = free_vars(t);
    avoid.insert(rv.begin(), rv.end());
  }
  return avoid;
}

// Deterministic matching normalization used by the structural oracle:
// leftmost reducible atom, first matching clause. Reports the steps taken.
struct NormResult {
  GoalSet goals;
  bool ok = true;
  std::vector<std::pair<std::size_t, std::string>> steps;  // (index, clause)
};

NormResult oracle_normalize(const Program& p, GoalSet goals,
                            const Substitution& state, FreshSupply& supply,
                            std::size_t tm_cap) {
  NormResult out;
  std::size_t phase = 0;
  while (true) {
    bool stepped = false;
    for (std::size_t idx = 0; idx < goals.size() && !stepped; ++idx) {
      for (const auto& clause : p.clauses) {
        FreshSupply attempt = supply;
        HornClause renamed = rename_apart(clause, attempt);
        auto app = apply_clause(renamed, goals, state, idx, StepMode::Tm);
        if (!app) continue;
        if (++phase > tm_cap) {
          out.ok = false;
          out.goals = std::move(goals);
          return out;
        }
        out.steps.emplace_back(idx, clause.label);
        goals = std::move(app->goals);
        supply = std::move(attempt);
        stepped = true;
        break;
      }
    }
    if (!stepped) break;
  }
  out.goals = std::move(goals);
  return out;
}

}  // namespace

OracleResult oracle_answers(const Program& p, const GoalSet& query,
                            Strategy mode, std::size_t depth,
                            std::size_t node_cap, std::size_t tm_cap,
                            const std::set<std::string>* answer_vars) {
  OracleResult res;
  const std::set<std::string> keep = free_vars(query);
  const std::set<std::string> record_vars = answer_vars ? *answer_vars : keep;
  std::size_t nodes = 0;

  auto record = [&](const Substitution& state, std::size_t d) {
    std::string b = canonical_answer(state, record_vars);
    res.per_depth[d].insert(b);
    res.bindings.insert(b);
  };

  std::vector<OState> layer;
  // Deduplicated per layer, not globally: one state can be reached by
  // derivations of different lengths, and the per-depth success sets must
  // count the continuations of each.
  std::set<std::string> seen;

  auto push = [&](OState st, std::vector<OState>& next) {
    st = canonical_state(st, keep);
    std::string key = state_key(st);
    if (seen.insert(key).second) next.push_back(std::move(st));
  };

  // Depth-0 state (for Struct: pre-normalized).
  {
    OState init{query, {}};
    if (mode == Strategy::Struct) {
      FreshSupply supply(keep);
      auto norm = oracle_normalize(p, init.goals, init.state, supply, tm_cap);
      if (!norm.ok) {
        res.tm_divergence = true;
        res.exhausted = false;
        return res;
      }
      init.goals = std::move(norm.goals);
    }
    if (init.goals.empty()) {
      record(init.state, 0);
      return res;
    }
    std::vector<OState> first;
    push(std::move(init), first);
    layer = std::move(first);
  }

  for (std::size_t d = 1; d <= depth && !layer.empty(); ++d) {
    std::vector<OState> next;
    seen.clear();
    for (const auto& st : layer) {
      std::set<std::string> avoid = expansion_avoid(st, keep);
      bool st_has_sub = false;
      for (std::size_t idx = 0; idx < st.goals.size(); ++idx) {
        for (const auto& clause : p.clauses) {
          if (++nodes > node_cap) {
            res.exhausted = false;
            res.capped = true;
            return res;
          }
          FreshSupply supply(avoid);
          HornClause renamed = rename_apart(clause, supply);
          if (mode == Strategy::Unif) {
            auto app =
                apply_clause(renamed, st.goals, st.state, idx, StepMode::Unif);
            if (!app) continue;
            if (app->goals.empty())
              record(app->state, d);
            else
              push({std::move(app->goals), app->state.restrict_to(keep)}, next);
          } else if (mode == Strategy::Tm) {
            auto app =
                apply_clause(renamed, st.goals, st.state, idx, StepMode::Tm);
            if (!app) continue;
            if (app->goals.empty())
              record(st.state, d);
            else
              push({std::move(app->goals), st.state}, next);
          } else {  // Struct: one substitutional step, then normalize
            auto sub =
                apply_clause(renamed, st.goals, st.state, idx, StepMode::Sub);
            if (!sub) continue;
            st_has_sub = true;
            auto norm_supply = supply;
            auto norm =
                oracle_normalize(p, sub->goals, sub->state, norm_supply, tm_cap);
            if (!norm.ok) {
              res.tm_divergence = true;
              res.exhausted = false;
              continue;
            }
            // Fused shape: the substitutional step must be answered by
            // exactly one matching step, same clause, same atom.
            if (norm.steps.size() != 1 || norm.steps[0].first != idx ||
                norm.steps[0].second != clause.label)
              res.shape_ok = false;
            if (norm.goals.empty())
              record(sub->state, d);
            else
              push({std::move(norm.goals), sub->state.restrict_to(keep)}, next);
          }
        }
      }
      if (mode == Strategy::Struct && !st_has_sub && !res.saw_stuck) {
        res.saw_stuck = true;
        res.first_stuck = st.goals;
      }
    }
    layer = std::move(next);
  }
  if (!layer.empty()) res.exhausted = false;
  return res;
}

// ---------------------------------------------------------------------------
// Theorem checks

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "holds";
    case Verdict::Refuted: return "refuted";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

struct DepthSets {
  std::map<std::size_t, std::set<std::string>> per_depth;
  bool exhausted;
  std::size_t successes() const {
    std::size_t n = 0;
    for (const auto& [d, s] : per_depth) n += s.size();
    return n;
  }
};

// Restricts recorded bindings to the given variables by re-canonicalizing
// the printed form. Cheap trick: the oracle already records restricted
// bindings when asked, so this is used only where both sides were recorded
// against the same variables.
std::string diff_depths(const DepthSets& a, const DepthSets& b,
                        std::size_t max_depth, std::size_t* bad_depth) {
  for (std::size_t d = 0; d <= max_depth; ++d) {
    std::set<std::string> sa, sb;
    if (auto it = a.per_depth.find(d); it != a.per_depth.end()) sa = it->second;
    if (auto it = b.per_depth.find(d); it != b.per_depth.end()) sb = it->second;
    if (sa != sb) {
      if (bad_depth) *bad_depth = d;
      std::string out = "depth " + std::to_string(d) + ": left {";
      bool first = true;
      for (const auto& s : sa) {
        if (!first) out += ", ";
        first = false;
        out += s;
      }
      out += "} right {";
      first = true;
      for (const auto& s : sb) {
        if (!first) out += ", ";
        first = false;
        out += s;
      }
      out += "}";
      return out;
    }
  }
  return {};
}

}  // namespace

TheoremReport check_equiv_struct_unif(const Program& p, const GoalSet& query,
                                      const CheckBudget& budget,
                                      bool transform_query_first) {
  TheoremReport rep;
  rep.theorem = "equiv";
  GoalSet q = transform_query_first ? transform_query(query) : query;
  auto u = oracle_answers(p, q, Strategy::Unif, budget.depth, budget.node_cap,
                          budget.tm_cap);
  auto s = oracle_answers(p, q, Strategy::Struct, budget.depth,
                          budget.node_cap, budget.tm_cap);
  // One side ran out of its normalization or node budget: nothing can be
  // claimed from possibly incomplete sets.
  if (s.tm_divergence) {
    rep.verdict = Verdict::Inconclusive;
    rep.detail = "matching normalization exceeded its cap";
    return rep;
  }
  if (u.capped || s.capped) {
    rep.verdict = Verdict::Inconclusive;
    rep.detail = "node budget interrupted the enumeration";
    return rep;
  }
  DepthSets du{u.per_depth, u.exhausted};
  DepthSets ds{s.per_depth, s.exhausted};
  std::string diff = diff_depths(du, ds, budget.depth, nullptr);
  if (!diff.empty()) {
    rep.verdict = Verdict::Refuted;
    rep.detail = diff;
    if (s.saw_stuck)
      rep.detail += "; structural side stuck at " + to_string(s.first_stuck);
    return rep;
  }
  if (transform_query_first && !s.shape_ok) {
    rep.verdict = Verdict::Refuted;
    rep.detail = "a substitutional step was not answered by a single "
                 "matching step on the same atom";
    return rep;
  }
  if ((u.exhausted && s.exhausted) || du.successes() > 0) {
    rep.verdict = Verdict::Holds;
    rep.detail = std::to_string(du.successes()) + " bindings agree";
  } else {
    rep.verdict = Verdict::Inconclusive;
    rep.detail = "no success within depth " + std::to_string(budget.depth);
  }
  return rep;
}

TheoremReport check_preservation(const Program& p, const GoalSet& query,
                                 const CheckBudget& budget) {
  TheoremReport rep;
  rep.theorem = "preserve";
  Program fp;
  GoalSet fq;
  try {
    fp = transform_program(p);
    fq = transform_query(query);
  } catch (const TransformError& e) {
    rep.verdict = Verdict::Inconclusive;
    rep.detail = e.what();
    return rep;
  }
  auto a = oracle_answers(p, query, Strategy::Unif, budget.depth,
                          budget.node_cap, budget.tm_cap);
  // The transformed side is recorded against the original query variables
  // only, dropping the witness bindings.
  std::set<std::string> original_vars = free_vars(query);
  auto b = oracle_answers(fp, fq, Strategy::Unif, budget.depth,
                          budget.node_cap, budget.tm_cap, &original_vars);
  if (a.capped || b.capped) {
    rep.verdict = Verdict::Inconclusive;
    rep.detail = "node budget interrupted the enumeration";
    return rep;
  }
  DepthSets da{a.per_depth, a.exhausted};
  DepthSets db{b.per_depth, b.exhausted};
  std::string diff = diff_depths(da, db, budget.depth, nullptr);
  if (!diff.empty()) {
    rep.verdict = Verdict::Refuted;
    rep.detail = diff;
    return rep;
  }
  if ((da.exhausted && db.exhausted) || da.successes() > 0) {
    rep.verdict = Verdict::Holds;
    rep.detail = std::to_string(da.successes()) + " bindings agree";
  } else {
    rep.verdict = Verdict::Inconclusive;
    rep.detail = "budget: no success within depth " +
                 std::to_string(budget.depth) + " on either side";
  }
  return rep;
}

TheoremReport check_record(const Program& p, const GoalSet& query,
                           const CheckBudget& budget) {
  TheoremReport rep;
  rep.theorem = "record";
  if (query.size() != 1) {
    rep.verdict = Verdict::Inconclusive;
    rep.detail = "single-atom query required";
    return rep;
  }
  Program fp;
  GoalSet fq;
  try {
    fp = transform_program(p);
    fq = transform_query(query);
  } catch (const TransformError& e) {
    rep.verdict = Verdict::Inconclusive;
    rep.detail = e.what();
    return rep;
  }
  const std::string witness_var = fq[0].args.back().name;

  Budget b;
  b.max_depth = budget.depth;
  b.max_steps = budget.node_cap;
  b.max_tm_steps = budget.tm_cap;
  b.max_solutions = 64;
  auto res = solve(fp, fq, Strategy::Unif, b);

  std::size_t successes = 0;
  for (const auto& ans : res.answers) {
    if (ans.trace.outcome.kind != OutcomeKind::Success) continue;
    ++successes;
    auto ext = extract_proof(ans.trace);
    if (!ext) {
      rep.verdict = Verdict::Refuted;
      rep.detail = "success trace does not replay";
      return rep;
    }
    auto nf = beta_normalize(ext->proofs[0]);
    if (!nf || !is_first_order(*nf)) {
      rep.verdict = Verdict::Refuted;
      rep.detail = "extracted proof has no first-order normal form";
      return rep;
    }
    Term recorded;
    try {
      recorded = represent(*nf, {});
    } catch (const std::invalid_argument& e) {
      rep.verdict = Verdict::Refuted;
      rep.detail = e.what();
      return rep;
    }
    const Term* bound = ans.bindings.find(witness_var);
    if (!bound || !(*bound == recorded)) {
      rep.verdict = Verdict::Refuted;
      rep.detail = "representation " + to_string(recorded) +
                   " differs from witness binding " +
                   (bound ? to_string(*bound) : std::string("<unbound>"));
      return rep;
    }
  }
  bool truncated = res.outcome.kind == OutcomeKind::SearchBudget ||
                   res.outcome.kind == OutcomeKind::TmDivergence;
  if (successes > 0 || !truncated) {
    rep.verdict = Verdict::Holds;
    rep.detail = std::to_string(successes) + " successes recorded their proof";
  } else {
    rep.verdict = Verdict::Inconclusive;
    rep.detail = "no success within budget";
  }
  return rep;
}

namespace {

// Reachable states for the stepwise sampler: breadth-first by unification,
// every selection and clause, deduplicated canonically.
std::vector<OState> sample_states(const Program& p, const GoalSet& q,
                                  std::size_t depth, std::size_t limit) {
  const std::set<std::string> keep = free_vars(q);
  std::vector<OState> out;
  std::set<std::string> seen;
  std::vector<OState> layer;
  {
    OState init{q, {}};
    init = canonical_state(init, keep);
    seen.insert(state_key(init));
    out.push_back(init);
    layer.push_back(std::move(init));
  }
  for (std::size_t d = 0; d < depth && out.size() < limit; ++d) {
    std::vector<OState> next;
    for (const auto& st : layer) {
      std::set<std::string> avoid = expansion_avoid(st, keep);
      for (std::size_t idx = 0; idx < st.goals.size(); ++idx) {
        for (const auto& clause : p.clauses) {
          FreshSupply supply(avoid);
          HornClause renamed = rename_apart(clause, supply);
          auto app =
              apply_clause(renamed, st.goals, st.state, idx, StepMode::Unif);
          if (!app || app->goals.empty()) continue;
          OState ns{std::move(app->goals), app->state.restrict_to(keep)};
          ns = canonical_state(ns, keep);
          if (seen.insert(state_key(ns)).second) {
            out.push_back(ns);
            next.push_back(std::move(ns));
            if (out.size() >= limit) return out;
          }
        }
      }
    }
    layer = std::move(next);
  }
  return out;
}

}  // namespace

TheoremReport check_stepwise(const Program& p, const GoalSet& query,
                             const CheckBudget& budget) {
  TheoremReport rep;
  rep.theorem = "stepwise";
  auto overlap = check_non_overlapping(p);
  if (!overlap.non_overlapping) {
    rep.verdict = Verdict::Inconclusive;
    rep.detail = "precondition: clauses " + overlap.witness->label_a + " and " +
                 overlap.witness->label_b + " overlap";
    return rep;
  }
  auto cert = check_productivity(p);
  if (cert.kind != Certificate::Kind::MeasureDecreasing) {
    rep.verdict = Verdict::Inconclusive;
    rep.detail = "precondition: no decreasing measure certificate";
    return rep;
  }

  const std::set<std::string> qvars = free_vars(query);
  std::size_t checked = 0;

  // Part 1: a single unification step is absorbed by the structural system.
  auto states = sample_states(p, query, 3, budget.samples);
  for (const auto& st : states) {
    std::set<std::string> avoid = expansion_avoid(st, qvars);
    FreshSupply supply(avoid);
    auto norm = oracle_normalize(p, st.goals, st.state, supply, budget.tm_cap);
    if (!norm.ok) {
      rep.verdict = Verdict::Refuted;
      rep.detail = "certified program diverged under matching";
      return rep;
    }
    const GoalSet& S = norm.goals;
    if (S.empty()) continue;
    for (std::size_t idx = 0; idx < S.size(); ++idx) {
      for (const auto& clause : p.clauses) {
        FreshSupply attempt = supply;
        HornClause renamed = rename_apart(clause, attempt);
        auto u = apply_clause(renamed, S, st.state, idx, StepMode::Unif);
        if (!u) continue;
        ++checked;
        if (auto m = apply_clause(renamed, S, st.state, idx, StepMode::Tm)) {
          if (m->goals != u->goals) {
            rep.verdict = Verdict::Refuted;
            rep.detail = "matching and unification disagree on " +
                         to_string(S[idx]);
            return rep;
          }
          continue;
        }
        auto sub = apply_clause(renamed, S, st.state, idx, StepMode::Sub);
        auto after = sub ? apply_clause(renamed, sub->goals, sub->state, idx,
                                        StepMode::Tm)
                         : std::nullopt;
        if (!after || after->goals != u->goals) {
          rep.verdict = Verdict::Refuted;
          rep.detail = "substitutional step on " + to_string(S[idx]) +
                       " is not absorbed by clause " + clause.label;
          return rep;
        }
        // The matching step after the substitutional one is forced: no
        // other clause may match the instantiated atom.
        for (const auto& other : p.clauses) {
          if (other.label == clause.label) continue;
          FreshSupply os = attempt;
          HornClause orn = rename_apart(other, os);
          if (match(orn.head, sub->goals[idx])) {
            rep.verdict = Verdict::Refuted;
            rep.detail = "clauses " + clause.label + " and " + other.label +
                         " both match " + to_string(sub->goals[idx]);
            return rep;
          }
        }
      }
    }
  }

  // Part 2: structural prefixes replay as chains of unification steps.
  Budget sb;
  sb.max_depth = budget.depth;
  sb.max_steps = budget.node_cap;
  sb.max_tm_steps = budget.tm_cap;
  sb.max_solutions = 16;
  auto sres = solve(p, query, Strategy::Struct, sb);
  std::vector<const DerivationTrace*> traces;
  for (const auto& a : sres.answers) traces.push_back(&a.trace);
  if (sres.stuck_trace) traces.push_back(&*sres.stuck_trace);
  for (const DerivationTrace* t : traces) {
    GoalSet ugoals = t->initial;
    Substitution ustate;
    FreshSupply usupply{free_vars(t->initial)};
    std::optional<std::pair<std::size_t, std::string>> pending;
    bool bad = false;
    for (const auto& step : t->steps) {
      if (step.mode == StepMode::Sub) {
        if (pending) {
          bad = true;
          break;
        }
        pending = {step.selected_index, step.clause_label};
        continue;
      }
      if (pending && (pending->first != step.selected_index ||
                      pending->second != step.clause_label)) {
        bad = true;
        break;
      }
      pending.reset();
      auto u = step_unif(p, ugoals, ustate, step.selected_index,
                         step.clause_label, usupply);
      if (!u) {
        bad = true;
        break;
      }
      ugoals = u->first;
      ustate = u->second;
      ++checked;
      if (to_string(canonical_goals(ugoals, qvars)) !=
              to_string(canonical_goals(step.goals_after, qvars)) ||
          canonical_answer(ustate, qvars) !=
              canonical_answer(step.state, qvars)) {
        bad = true;
        break;
      }
    }
    if (pending) bad = true;
    if (bad) {
      rep.verdict = Verdict::Refuted;
      rep.detail = "structural prefix does not replay as unification steps";
      return rep;
    }
  }

  if (checked == 0) {
    rep.verdict = Verdict::Inconclusive;
    rep.detail = "no step to sample";
  } else {
    rep.verdict = Verdict::Holds;
    rep.detail = std::to_string(checked) + " steps verified";
  }
  return rep;
}

std::string report_to_json(const TheoremReport& rep, std::uint64_t seed,
                           const std::string& program_text,
                           const std::string& query_text) {
  nlohmann::json j;
  j["theorem"] = rep.theorem;
  j["seed"] = seed;
  j["program"] = program_text;
  j["query"] = query_text;
  j["verdict"] = to_string(rep.verdict);
  j["detail"] = rep.detail;
  return j.dump();
}

}  // namespace hornlog
