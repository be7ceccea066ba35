#include "hornlog/engine.hpp"

#include <algorithm>

#include "json.hpp"

namespace hornlog {

std::optional<StepApplication> apply_clause(const HornClause& renamed,
                                            const GoalSet& goals,
                                            const Substitution& state,
                                            std::size_t index, StepMode mode) {
  if (index >= goals.size()) return std::nullopt;
  if (mode == StepMode::Tm) {
    auto sigma = match(renamed.head, goals[index]);
    if (!sigma) return std::nullopt;
    StepApplication app;
    app.goals.reserve(goals.size() + renamed.body.size());
    for (std::size_t j = 0; j < goals.size(); ++j) {
      if (j == index) {
        for (const auto& b : renamed.body) app.goals.push_back(sigma->apply(b));
      } else {
        app.goals.push_back(goals[j]);
      }
    }
    app.local = std::move(*sigma);
    app.state = state;  // matching never touches the state
    return app;
  }
  auto gamma = unify(renamed.head, goals[index]);
  if (!gamma) return std::nullopt;
  StepApplication app;
  if (mode == StepMode::Unif) {
    for (std::size_t j = 0; j < goals.size(); ++j) {
      if (j == index) {
        for (const auto& b : renamed.body) app.goals.push_back(gamma->apply(b));
      } else {
        app.goals.push_back(gamma->apply(goals[j]));
      }
    }
  } else {  // Sub: instantiate everything, resolve nothing
    app.goals = gamma->apply(goals);
  }
  app.state = compose(*gamma, state);
  app.local = std::move(*gamma);
  return app;
}

namespace {

std::optional<StepApplication> step_impl(const Program& p, const GoalSet& g,
                                         const Substitution& state,
                                         std::size_t index,
                                         const std::string& label,
                                         FreshSupply& supply, StepMode mode) {
  const HornClause* c = p.find(label);
  if (!c) return std::nullopt;
  FreshSupply attempt = supply;
  HornClause renamed = rename_apart(*c, attempt);
  auto app = apply_clause(renamed, g, state, index, mode);
  if (app) supply = attempt;
  return app;
}

}  // namespace

std::optional<GoalSet> step_tm(const Program& p, const GoalSet& g,
                               const Substitution& state, std::size_t index,
                               const std::string& label, FreshSupply& supply) {
  auto app = step_impl(p, g, state, index, label, supply, StepMode::Tm);
  if (!app) return std::nullopt;
  return std::move(app->goals);
}

std::optional<std::pair<GoalSet, Substitution>> step_unif(
    const Program& p, const GoalSet& g, const Substitution& state,
    std::size_t index, const std::string& label, FreshSupply& supply) {
  auto app = step_impl(p, g, state, index, label, supply, StepMode::Unif);
  if (!app) return std::nullopt;
  return std::make_pair(std::move(app->goals), std::move(app->state));
}

std::optional<std::pair<GoalSet, Substitution>> step_sub(
    const Program& p, const GoalSet& g, const Substitution& state,
    std::size_t index, const std::string& label, FreshSupply& supply) {
  auto app = step_impl(p, g, state, index, label, supply, StepMode::Sub);
  if (!app) return std::nullopt;
  return std::make_pair(std::move(app->goals), std::move(app->state));
}

// ---------------------------------------------------------------------------
// Search

namespace {

struct Searcher {
  const Program& program;
  GoalSet initial;
  Budget budget;
  Selection sel;
  std::set<std::string> query_vars;

  SolveResult result;
  std::optional<DerivationTrace> stuck_trace;
  std::vector<DerivationStep> path;
  std::set<std::string> seen_normal_forms;  // TM-mode answer dedup

  std::size_t attempts = 0;
  std::size_t iter = 0;
  bool budget_hit = false;
  bool tm_divergence = false;
  bool solutions_capped = false;
  bool frontier_hit = false;
  bool stuck_seen = false;
  GoalSet first_stuck;
  bool success_seen = false;

  Searcher(const Program& p, GoalSet q, const Budget& b, Selection s)
      : program(p), initial(std::move(q)), budget(b), sel(s),
        query_vars(free_vars(initial)) {}

  bool aborted() const { return budget_hit || solutions_capped; }

  bool charge() {
    if (++attempts > budget.max_steps) {
      budget_hit = true;
      return false;
    }
    return true;
  }

  std::size_t select(const GoalSet& g) const {
    return sel == Selection::Leftmost ? 0 : g.size() - 1;
  }

  DerivationTrace make_trace(Outcome outcome) const {
    return DerivationTrace{program, initial, path, std::move(outcome)};
  }

  void emit_success(const Substitution& state) {
    success_seen = true;
    Answer a;
    a.bindings = state.restrict_to(query_vars);
    a.trace = make_trace({OutcomeKind::Success, {}});
    result.answers.push_back(std::move(a));
    if (result.answers.size() >= budget.max_solutions) solutions_capped = true;
  }

  void note_stuck(const GoalSet& goals) {
    if (!stuck_seen) {
      stuck_seen = true;
      first_stuck = goals;
      stuck_trace = make_trace({OutcomeKind::Stuck, goals});
    }
  }

  // -- resolution by unification, one deepening iteration ------------------

  void dfs_unif(const GoalSet& goals, const Substitution& state,
                const FreshSupply& supply, std::size_t depth) {
    if (aborted()) return;
    if (goals.empty()) {
      if (depth == iter) emit_success(state);
      return;
    }
    if (depth == iter) {
      frontier_hit = true;
      return;
    }
    std::size_t idx = select(goals);
    bool any = false;
    for (const auto& clause : program.clauses) {
      if (!charge()) return;
      FreshSupply attempt = supply;
      HornClause renamed = rename_apart(clause, attempt);
      auto app = apply_clause(renamed, goals, state, idx, StepMode::Unif);
      if (!app) continue;
      any = true;
      path.push_back({StepMode::Unif, clause.label, idx, app->local,
                      app->state, app->goals});
      dfs_unif(app->goals, app->state, attempt, depth + 1);
      path.pop_back();
      if (aborted()) return;
    }
    if (!any) note_stuck(goals);
  }

  // -- matching-only reduction ---------------------------------------------

  struct TmChoice {
    const HornClause* clause;
    std::size_t index;
    StepApplication app;
    FreshSupply supply;
  };

  // Leftmost (or rightmost) atom that admits a matching step, with every
  // clause that matches it. Empty result means a normal form.
  std::vector<TmChoice> tm_choices(const GoalSet& goals,
                                   const Substitution& state,
                                   const FreshSupply& supply) {
    std::vector<TmChoice> out;
    std::vector<std::size_t> order(goals.size());
    for (std::size_t i = 0; i < goals.size(); ++i)
      order[i] = sel == Selection::Leftmost ? i : goals.size() - 1 - i;
    for (std::size_t idx : order) {
      for (const auto& clause : program.clauses) {
        if (!charge()) return {};
        FreshSupply attempt = supply;
        HornClause renamed = rename_apart(clause, attempt);
        auto app = apply_clause(renamed, goals, state, idx, StepMode::Tm);
        if (app)
          out.push_back({&clause, idx, std::move(*app), std::move(attempt)});
      }
      if (!out.empty()) break;
    }
    return out;
  }

  void emit_tm_report(const GoalSet& goals, const Substitution& state) {
    std::string key = to_string(canonical_goals(goals, query_vars));
    if (!seen_normal_forms.insert(key).second) return;
    if (goals.empty()) {
      emit_success(state);
      return;
    }
    note_stuck(goals);
    Answer a;
    a.bindings = state.restrict_to(query_vars);
    a.trace = make_trace({OutcomeKind::Stuck, goals});
    result.answers.push_back(std::move(a));
    if (result.answers.size() >= budget.max_solutions) solutions_capped = true;
  }

  void dfs_tm(const GoalSet& goals, const Substitution& state,
              const FreshSupply& supply) {
    if (aborted()) return;
    auto choices = tm_choices(goals, state, supply);
    if (aborted()) return;
    if (choices.empty()) {
      emit_tm_report(goals, state);
      return;
    }
    if (path.size() >= budget.max_tm_steps) {
      tm_divergence = true;
      return;
    }
    for (auto& ch : choices) {
      path.push_back({StepMode::Tm, ch.clause->label, ch.index, ch.app.local,
                      state, ch.app.goals});
      dfs_tm(ch.app.goals, state, ch.supply);
      path.pop_back();
      if (aborted()) return;
    }
  }

  // -- structural reduction -------------------------------------------------

  // Reduces to a matching normal form in place, appending the steps taken.
  // Deterministic: selected atom per the selection rule, first matching
  // clause in program order. Returns false when max_tm_steps is exceeded.
  bool normalize(GoalSet& goals, const Substitution& state,
                 FreshSupply& supply) {
    std::size_t phase = 0;
    while (!aborted()) {
      std::optional<TmChoice> found;
      std::vector<std::size_t> order(goals.size());
      for (std::size_t i = 0; i < goals.size(); ++i)
        order[i] = sel == Selection::Leftmost ? i : goals.size() - 1 - i;
      for (std::size_t idx : order) {
        for (const auto& clause : program.clauses) {
          if (!charge()) return false;
          FreshSupply attempt = supply;
          HornClause renamed = rename_apart(clause, attempt);
          auto app = apply_clause(renamed, goals, state, idx, StepMode::Tm);
          if (app) {
            found = TmChoice{&clause, idx, std::move(*app), std::move(attempt)};
            break;
          }
        }
        if (found) break;
      }
      if (!found) return true;  // normal form
      if (++phase > budget.max_tm_steps) {
        tm_divergence = true;
        return false;
      }
      path.push_back({StepMode::Tm, found->clause->label, found->index,
                      found->app.local, state, found->app.goals});
      goals = std::move(found->app.goals);
      supply = std::move(found->supply);
    }
    return false;
  }

  void dfs_struct(GoalSet goals, const Substitution& state, FreshSupply supply,
                  std::size_t subs_used) {
    if (aborted()) return;
    std::size_t mark = path.size();
    if (!normalize(goals, state, supply)) {
      path.resize(mark);
      return;
    }
    if (goals.empty()) {
      if (subs_used == iter) emit_success(state);
      path.resize(mark);
      return;
    }
    std::size_t idx = select(goals);
    bool any = false;
    if (subs_used == iter) {
      // Peek whether a substitutional step exists before deciding between
      // frontier and stuck.
      for (const auto& clause : program.clauses) {
        if (!charge()) break;
        FreshSupply attempt = supply;
        HornClause renamed = rename_apart(clause, attempt);
        if (apply_clause(renamed, goals, state, idx, StepMode::Sub)) {
          any = true;
          break;
        }
      }
      if (any)
        frontier_hit = true;
      else
        note_stuck(goals);
      path.resize(mark);
      return;
    }
    for (const auto& clause : program.clauses) {
      if (!charge()) break;
      FreshSupply attempt = supply;
      HornClause renamed = rename_apart(clause, attempt);
      auto app = apply_clause(renamed, goals, state, idx, StepMode::Sub);
      if (!app) continue;
      any = true;
      path.push_back({StepMode::Sub, clause.label, idx, app->local, app->state,
                      app->goals});
      dfs_struct(app->goals, app->state, attempt, subs_used + 1);
      path.pop_back();
      if (aborted()) break;
    }
    if (!any && !aborted()) note_stuck(goals);
    path.resize(mark);
  }

  Outcome summary() const {
    if (budget_hit) return {OutcomeKind::SearchBudget, {}};
    if (tm_divergence) return {OutcomeKind::TmDivergence, {}};
    if (solutions_capped || success_seen) return {OutcomeKind::Success, {}};
    if (stuck_seen) return {OutcomeKind::Stuck, first_stuck};
    return {OutcomeKind::Stuck, {}};
  }

  Outcome summary_with_frontier(bool exhausted) const {
    if (budget_hit) return {OutcomeKind::SearchBudget, {}};
    if (tm_divergence) return {OutcomeKind::TmDivergence, {}};
    if (solutions_capped) return {OutcomeKind::Success, {}};
    if (!exhausted) return {OutcomeKind::SearchBudget, {}};
    if (success_seen) return {OutcomeKind::Success, {}};
    if (stuck_seen) return {OutcomeKind::Stuck, first_stuck};
    return {OutcomeKind::Stuck, {}};
  }
};

}  // namespace

SolveResult solve(const Program& p, const GoalSet& q, Strategy strategy,
                  const Budget& budget, Selection sel) {
  Searcher s(p, q, budget, sel);
  FreshSupply supply0{free_vars(q)};

  if (strategy == Strategy::Tm) {
    s.dfs_tm(q, {}, supply0);
    s.result.outcome = s.summary();
    s.result.steps_used = s.attempts;
    s.result.stuck_trace = std::move(s.stuck_trace);
    return std::move(s.result);
  }

  bool exhausted = false;
  if (strategy == Strategy::Unif) {
    if (q.empty()) {
      s.emit_success({});
      s.result.outcome = {OutcomeKind::Success, {}};
      return std::move(s.result);
    }
    for (s.iter = 1; s.iter <= budget.max_depth; ++s.iter) {
      s.frontier_hit = false;
      s.dfs_unif(q, {}, supply0, 0);
      if (s.aborted()) break;
      if (!s.frontier_hit) {
        exhausted = true;
        break;
      }
    }
  } else {  // Struct
    for (s.iter = 0; s.iter <= budget.max_depth; ++s.iter) {
      s.frontier_hit = false;
      s.dfs_struct(q, {}, supply0, 0);
      if (s.aborted() || s.tm_divergence) break;
      if (!s.frontier_hit) {
        exhausted = true;
        break;
      }
    }
  }
  s.result.outcome = s.summary_with_frontier(exhausted);
  s.result.steps_used = s.attempts;
  s.result.stuck_trace = std::move(s.stuck_trace);
  return std::move(s.result);
}

// ---------------------------------------------------------------------------
// Replay

std::optional<std::vector<HornClause>> replay_renamed_clauses(
    const DerivationTrace& t) {
  FreshSupply supply{free_vars(t.initial)};
  GoalSet goals = t.initial;
  Substitution state;
  std::vector<HornClause> out;
  out.reserve(t.steps.size());
  for (const auto& step : t.steps) {
    const HornClause* c = t.program.find(step.clause_label);
    if (!c) return std::nullopt;
    HornClause renamed = rename_apart(*c, supply);
    auto app =
        apply_clause(renamed, goals, state, step.selected_index, step.mode);
    if (!app) return std::nullopt;
    if (app->goals != step.goals_after || app->state != step.state ||
        app->local != step.local_binding)
      return std::nullopt;
    goals = app->goals;
    state = app->state;
    out.push_back(std::move(renamed));
  }
  // Success and an empty final goal set imply one another.
  if ((t.outcome.kind == OutcomeKind::Success) != goals.empty())
    return std::nullopt;
  return out;
}

bool replay(const DerivationTrace& t) {
  return replay_renamed_clauses(t).has_value();
}

// ---------------------------------------------------------------------------
// Formats

namespace {

const char* mode_name(StepMode m) {
  switch (m) {
    case StepMode::Tm: return "tm";
    case StepMode::Unif: return "unif";
    case StepMode::Sub: return "sub";
  }
  return "?";
}

const char* outcome_name(OutcomeKind k) {
  switch (k) {
    case OutcomeKind::Success: return "success";
    case OutcomeKind::Stuck: return "stuck";
    case OutcomeKind::TmDivergence: return "tm-divergence";
    case OutcomeKind::SearchBudget: return "search-budget";
  }
  return "?";
}

}  // namespace

std::string outcome_to_text(const Outcome& o) {
  std::string out = "outcome=";
  out += outcome_name(o.kind);
  if (o.kind == OutcomeKind::Stuck && !o.stuck_goals.empty())
    out += " goals=" + to_string(o.stuck_goals);
  return out;
}

std::string trace_to_text(const DerivationTrace& t) {
  std::string out;
  std::size_t n = 0;
  for (const auto& s : t.steps) {
    out += "step=" + std::to_string(++n);
    out += " mode=";
    out += mode_name(s.mode);
    out += " clause=" + s.clause_label;
    out += " at=" + std::to_string(s.selected_index);
    out += " bind=" + s.local_binding.to_string();
    out += " state=" + s.state.to_string();
    out += '\n';
    out += "goals=" + to_string(s.goals_after);
    out += '\n';
  }
  out += outcome_to_text(t.outcome);
  out += '\n';
  return out;
}

std::string trace_to_json(const DerivationTrace& t) {
  nlohmann::json j;
  j["program"] = nlohmann::json::array();
  for (const auto& c : t.program.clauses) j["program"].push_back(to_string(c));
  j["initial"] = nlohmann::json::array();
  for (const auto& a : t.initial) j["initial"].push_back(to_string(a));
  j["steps"] = nlohmann::json::array();
  for (const auto& s : t.steps) {
    nlohmann::json js;
    js["mode"] = mode_name(s.mode);
    js["clause"] = s.clause_label;
    js["at"] = s.selected_index;
    nlohmann::json bind = nlohmann::json::object();
    for (const auto& [v, term] : s.local_binding.bindings())
      bind[v] = to_string(term);
    js["bind"] = bind;
    nlohmann::json st = nlohmann::json::object();
    for (const auto& [v, term] : s.state.bindings()) st[v] = to_string(term);
    js["state"] = st;
    js["goals"] = nlohmann::json::array();
    for (const auto& a : s.goals_after) js["goals"].push_back(to_string(a));
    j["steps"].push_back(std::move(js));
  }
  j["outcome"]["kind"] = outcome_name(t.outcome.kind);
  if (t.outcome.kind == OutcomeKind::Stuck) {
    j["outcome"]["goals"] = nlohmann::json::array();
    for (const auto& a : t.outcome.stuck_goals)
      j["outcome"]["goals"].push_back(to_string(a));
  }
  return j.dump(2);
}

std::string canonical_answer(const Substitution& s,
                             const std::set<std::string>& query_vars) {
  Substitution r = s.restrict_to(query_vars);
  std::vector<std::string> order;
  std::set<std::string> seen;
  for (const auto& [v, t] : r.bindings()) collect_vars(t, order, seen);
  FreshSupply supply(query_vars);
  Substitution rename;
  for (const auto& v : order)
    if (!query_vars.count(v)) rename.bind(v, tvar(supply.fresh()));
  Substitution out;
  for (const auto& [v, t] : r.bindings()) out.bind(v, rename.apply(t));
  return out.to_string();
}

}  // namespace hornlog
