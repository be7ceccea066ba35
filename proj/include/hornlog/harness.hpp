#pragma once

#include "hornlog/realize.hpp"

namespace hornlog {

// Random program generation for differential runs. Deterministic per seed.
// Predicates are rank-stratified (a body atom only uses predicates of
// strictly lower rank), so every derivation tree is finite and the
// breadth-first oracle can enumerate it exhaustively.
struct GenConfig {
  std::size_t max_clauses = 5;
  std::size_t max_body = 2;
  std::size_t max_arity = 2;
  std::size_t max_term_depth = 3;
  std::uint64_t seed = 0;
};

Program generate_program(const GenConfig&);

// Most general query P(X1,...,Xn) for every predicate, plus one ground
// fact-instance query per program (gives the matching strategy something
// it can finish).
std::vector<GoalSet> corpus_queries(const Program&);

// Brute-force answer enumeration: breadth-first over every selection index
// and every clause at once, deduplicating states, no backtracking
// heuristics. Success bindings are recorded per derivation length in
// canonical form. For Struct, one expansion is [at most one substitutional
// step, then normalize]; lengths count the substitutional steps.
struct OracleResult {
  std::map<std::size_t, std::set<std::string>> per_depth;
  std::set<std::string> bindings;  // union over depths
  bool exhausted = true;        // the whole space fit inside the bounds
  bool capped = false;          // the node budget interrupted a layer, so
                                // the per-depth sets may be incomplete
  bool tm_divergence = false;   // a normalization hit its cap (Struct)
  bool shape_ok = true;         // every substitutional step was answered by
                                // exactly one matching step, same clause,
                                // same atom, normal form preserved
  bool saw_stuck = false;
  GoalSet first_stuck;
};

// answer_vars, when given, restricts recorded bindings to those variables
// (they must be a subset of the query's variables).
OracleResult oracle_answers(const Program&, const GoalSet&, Strategy,
                            std::size_t depth, std::size_t node_cap = 200000,
                            std::size_t tm_cap = 512,
                            const std::set<std::string>* answer_vars = nullptr);

enum class Verdict { Holds, Refuted, Inconclusive };
std::string to_string(Verdict);

struct TheoremReport {
  std::string theorem;
  Verdict verdict = Verdict::Inconclusive;
  std::string detail;
};

struct CheckBudget {
  std::size_t depth = 6;
  std::size_t node_cap = 200000;
  std::size_t tm_cap = 512;
  std::size_t samples = 40;  // states sampled by the stepwise check
};

// Success-binding sets of resolution and structural reduction agree at
// matched depth (one unification step per substitutional step), and every
// structural success path has the fused pair shape. Pass
// transform_query_first=false to run the query untouched on an
// untransformed program.
TheoremReport check_equiv_struct_unif(const Program& transformed,
                                      const GoalSet& query,
                                      const CheckBudget& = {},
                                      bool transform_query_first = true);

// Answers of the query under the program and of the extended query under
// the transformed program correspond depth for depth.
TheoremReport check_preservation(const Program&, const GoalSet&,
                                 const CheckBudget& = {});

// Every success on the transformed program records its own proof: the
// extracted proof normalizes to a first-order term whose representation
// equals the witness binding.
TheoremReport check_record(const Program&, const GoalSet& single_atom,
                           const CheckBudget& = {});

// Stepwise correspondence on certified (non-overlapping, measure-certified)
// programs: every sampled unification step is absorbed by a structural
// macro step reconverging on the same normal form, and every structural
// prefix replays as a chain of unification steps.
TheoremReport check_stepwise(const Program&, const GoalSet&,
                             const CheckBudget& = {});

// One structured record per checked item, for report files.
std::string report_to_json(const TheoremReport&, std::uint64_t seed,
                           const std::string& program_text,
                           const std::string& query_text);

}  // namespace hornlog
