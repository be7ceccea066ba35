#pragma once

#include "hornlog/proof.hpp"

namespace hornlog {

// Naming for the proof-witness symbols introduced by the transformation:
// clause k with a nonempty body contributes the functor f_k, a fact
// contributes the constant c_k. One family, two spellings.
struct NameScheme {
  std::string rule_prefix = "f_";
  std::string fact_prefix = "c_";
  std::string clause_arg_prefix = "U";   // fresh witness slots in clauses
  std::string query_arg_prefix = "_P";   // fresh witness slots in queries

  std::string functor(const std::string& label, std::size_t body_arity) const;
};

class TransformError : public std::runtime_error {
 public:
  explicit TransformError(const std::string& msg) : std::runtime_error(msg) {}
};

// Maps a first-order normal proof term to the first-order term that
// records it: variables through env, k p1 ... pn to f_k(r1,...,rn).
// Throws std::invalid_argument on lambdas, applied variables or variables
// missing from env.
Term represent(const ProofRef&, const RepEnv& env, const NameScheme& = {});

// Extends every atom with one proof-witness argument: body atom i of a
// clause gets a fresh variable y_i, the head gets f_k(y_1,...,y_m).
// Throws TransformError when a witness functor collides with a functor
// already used by the program.
Program transform_program(const Program&, const NameScheme& = {});

// Each query atom gets a distinct fresh variable as its witness slot.
GoalSet transform_query(const GoalSet&, const NameScheme& = {});

// Premise i gets a fresh y_i; the head records the proof body under the
// binder-to-y assignment. The proof term itself is unchanged.
Judgement transform_judgement(const Judgement&, const NameScheme& = {});

struct OverlapWitness {
  std::string label_a;
  std::string label_b;
  Substitution unifier;
};

struct OverlapResult {
  bool non_overlapping = true;
  std::optional<OverlapWitness> witness;
};

// Heads of distinct clauses must have no common instance; tested by
// renaming each pair apart and unifying.
OverlapResult check_non_overlapping(const Program&);

struct Certificate {
  enum class Kind { MeasureDecreasing, BoundedEvidence, Refuted, Unknown };
  Kind kind = Kind::Unknown;
  // Measured argument position per predicate, 1-based (MeasureDecreasing).
  std::map<std::string, std::size_t> positions;
  std::size_t depth = 0;          // exploration bound actually used
  std::size_t queries_tried = 0;  // seeds explored
  std::optional<DerivationTrace> witness;  // matching-reduction loop
};

// Productivity certificate. MeasureDecreasing holds when every body atom's
// measured argument is a strict subterm of the head's measured argument;
// that survives instantiation, so it is a sound termination certificate.
// Otherwise a bounded matching-reduction exploration either refutes
// (self-embedding loop, with a replayable witness trace) or reports
// bounded evidence. Positions default to each predicate's last argument.
// Throws std::out_of_range for an explicit position beyond the arity.
Certificate check_productivity(const Program&,
                               const std::map<std::string, std::size_t>&
                                   positions = {},
                               std::size_t bound = 64);

// True when every matching step in the trace replaces the consumed atom by
// atoms whose measured argument is a strict subterm of the consumed one's.
bool measure_decreases(const DerivationTrace&,
                       const std::map<std::string, std::size_t>& positions =
                           {});

}  // namespace hornlog
