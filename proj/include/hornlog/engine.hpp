#pragma once

#include <optional>
#include <utility>

#include "hornlog/subst.hpp"

namespace hornlog {

// The three ways a clause can reduce a goal:
//   Tm   - the clause head is matched onto the selected atom; the matcher
//          instantiates only the (renamed) clause, other goals and the
//          state are untouched.
//   Unif - the head is unified with the selected atom; the unifier is
//          applied to every goal and composed into the state.
//   Sub  - as Unif, but the selected atom is instantiated in place instead
//          of being replaced by the clause body.
enum class StepMode { Tm, Unif, Sub };

// Search strategies: the three reduction systems.
enum class Strategy { Unif, Tm, Struct };

enum class Selection { Leftmost, Rightmost };

struct DerivationStep {
  StepMode mode;
  std::string clause_label;
  std::size_t selected_index = 0;
  Substitution local_binding;  // this step's matcher or unifier
  Substitution state;          // accumulated state after the step
  GoalSet goals_after;
  bool operator==(const DerivationStep&) const = default;
};

enum class OutcomeKind { Success, Stuck, TmDivergence, SearchBudget };

struct Outcome {
  OutcomeKind kind = OutcomeKind::Stuck;
  GoalSet stuck_goals;  // the normal form a stuck run halted at
  bool operator==(const Outcome&) const = default;
};

// A single derivation path, replayable from the program and the initial
// goals: fresh names are assigned by a counter that only ever advances on
// recorded steps.
struct DerivationTrace {
  Program program;
  GoalSet initial;
  std::vector<DerivationStep> steps;
  Outcome outcome;
};

struct Answer {
  Substitution bindings;  // final state restricted to the query variables
  DerivationTrace trace;
};

struct Budget {
  std::size_t max_steps = 10000;     // clause application attempts overall
  std::size_t max_tm_steps = 1000;   // matching steps per normalization run
  std::size_t max_solutions = 16;
  std::size_t max_depth = 64;        // derivation depth (per-path steps)
};

struct SolveResult {
  std::vector<Answer> answers;  // successes; in matching mode also the
                                // nonempty normal forms (trace outcome
                                // distinguishes the two)
  Outcome outcome;
  std::optional<DerivationTrace> stuck_trace;  // first dead end, replayable
  std::size_t steps_used = 0;
};

// One clause application against a clause that has already been renamed
// apart from the goals and state.
struct StepApplication {
  GoalSet goals;
  Substitution local;
  Substitution state;
};

std::optional<StepApplication> apply_clause(const HornClause& renamed,
                                            const GoalSet& goals,
                                            const Substitution& state,
                                            std::size_t index, StepMode mode);

// Single reduction steps. The clause is renamed apart using the supply; on
// failure the supply is left unchanged.
std::optional<GoalSet> step_tm(const Program&, const GoalSet&,
                               const Substitution& state, std::size_t index,
                               const std::string& clause_label, FreshSupply&);
std::optional<std::pair<GoalSet, Substitution>> step_unif(
    const Program&, const GoalSet&, const Substitution& state,
    std::size_t index, const std::string& clause_label, FreshSupply&);
std::optional<std::pair<GoalSet, Substitution>> step_sub(
    const Program&, const GoalSet&, const Substitution& state,
    std::size_t index, const std::string& clause_label, FreshSupply&);

// All-solutions search under the given strategy.
//
//   Unif   - resolution by unification on the selected atom, clauses in
//            program order, enumerated by iterative deepening so recursive
//            programs still yield their finite answers.
//   Tm     - matching-only reduction; every reachable normal form is
//            reported as an answer (an empty one is a success, a nonempty
//            one a partial result).
//   Struct - repeat [normalize under matching, then at most one
//            substitutional step]; a run succeeds when a normal form is
//            empty, gets stuck when a nonempty normal form admits no
//            substitutional step, and diverges when normalization exceeds
//            max_tm_steps.
SolveResult solve(const Program&, const GoalSet&, Strategy,
                  const Budget& = {}, Selection = Selection::Leftmost);

// Re-validates every recorded step and the state-update law.
bool replay(const DerivationTrace&);

// The renamed clause instance each step used, re-derived from the trace.
// Empty when the trace does not replay.
std::optional<std::vector<HornClause>> replay_renamed_clauses(
    const DerivationTrace&);

// Line-oriented trace format:
//   step=<n> mode=<tm|unif|sub> clause=<label> at=<i> bind=<s> state=<s>
//   goals=<goal list>
// terminated by "outcome=<success|stuck|tm-divergence|search-budget>".
std::string trace_to_text(const DerivationTrace&);
std::string outcome_to_text(const Outcome&);

// Structured tree form of the same data, for machine diffing.
std::string trace_to_json(const DerivationTrace&);

// Canonical printing of an answer substitution: restricted to the query
// variables, leftover free variables renamed in first-appearance order.
std::string canonical_answer(const Substitution&,
                             const std::set<std::string>& query_vars);

}  // namespace hornlog
