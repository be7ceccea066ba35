#pragma once

#include <memory>

#include "hornlog/engine.hpp"

namespace hornlog {

// Proof terms: clause constants, proof variables, lambda abstraction and
// binary application. Immutable; shared subtrees are fine.
struct ProofTerm;
using ProofRef = std::shared_ptr<const ProofTerm>;

struct ProofTerm {
  enum class Kind { Const, Var, Lam, App };
  Kind kind;
  std::string name;  // Const: clause label, Var: name, Lam: binder
  ProofRef fun;      // Lam: body, App: function
  ProofRef arg;      // App: argument
};

ProofRef pconst(std::string label);
ProofRef pvar(std::string name);
ProofRef plam(std::string binder, ProofRef body);
ProofRef papp(ProofRef fun, ProofRef arg);
ProofRef papps(ProofRef head, const std::vector<ProofRef>& args);

bool proof_equal(const ProofRef&, const ProofRef&);
bool alpha_equal(const ProofRef&, const ProofRef&);
std::set<std::string> free_proof_vars(const ProofRef&);

// Application spines print as "(k1 k2) k3", lambdas as "\b. (k1 b) k2".
std::string to_string(const ProofRef&);

// Leftmost-outermost reduction with capture-avoiding substitution; returns
// nothing when the fuel runs out (well-typed terms always normalize).
std::optional<ProofRef> beta_normalize(const ProofRef&,
                                       std::size_t fuel = 100000);

// True iff the term is built from constants and variables by application
// alone (no lambda anywhere).
bool is_first_order(const ProofRef&);

// e : premises => head, implicitly quantified over its term variables.
struct Judgement {
  ProofRef proof;
  std::vector<Atom> premises;
  Atom head;
};

struct ExtractResult {
  std::vector<ProofRef> proofs;       // one per initial goal
  std::vector<Judgement> judgements;  // same order, heads instantiated by
                                      // the final state
  Substitution final_state;
};

// Reads a proof out of a derivation trace (resolution or structural; the
// substitutional steps contribute bindings only). Each consuming step with
// clause k and body length m turns a goal into the application of k to the
// m subproofs in clause-body order. Goals left unresolved become bound
// proof variables b1, b2, ... and wrap the affected proofs in lambdas.
// Empty when the trace does not replay.
std::optional<ExtractResult> extract_proof(const DerivationTrace&);

struct CheckResult {
  bool ok = false;
  std::string diagnostic;
};

// Derivability check for a beta-normal judgement (non-normal proofs are
// normalized first). Binders are associated with the premises, premise
// variables are frozen to fresh constants, and the most general conclusion
// of the body is computed by unifying argument conclusions against the
// clause's body atoms; argument-to-premise association is tried in every
// order, so judgements are accepted up to premise permutation. The
// declared head must be an instance of a computed conclusion.
CheckResult check_judgement(const Program&, const Judgement&,
                            std::size_t fuel = 100000);

// Environment for representing first-order proof terms as first-order
// terms; must cover every free proof variable of the term.
using RepEnv = std::map<std::string, Term>;

}  // namespace hornlog
