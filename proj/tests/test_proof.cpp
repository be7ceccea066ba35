#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "testutil.hpp"

using namespace hornlog;
using testutil::load;

namespace {

// (\b. (k1 b) k3) k2
ProofRef paper_connect_proof() {
  return papp(plam("b", papp(papp(pconst("k1"), pvar("b")), pconst("k3"))),
              pconst("k2"));
}

DerivationTrace connect_success_trace() {
  Program p = load("connect.lp");
  Budget b;
  b.max_depth = 4;
  SolveResult res = solve(p, parse_query("connect(X,Y)"), Strategy::Unif, b);
  for (const auto& a : res.answers) {
    if (a.trace.steps.size() == 3) return a.trace;
  }
  REQUIRE(false);
  return {};
}

}  // namespace

TEST_CASE("proof term printing") {
  ProofRef p = papps(pconst("k1"), {pconst("k2"), pconst("k3")});
  CHECK(to_string(p) == "(k1 k2) k3");
  CHECK(to_string(plam("b", papp(papp(pconst("k1"), pvar("b")), pconst("k2")))) ==
        "\\b. (k1 b) k2");
  CHECK(to_string(papp(pconst("k"), plam("x", pvar("x")))) == "k (\\x. x)");
}

TEST_CASE("beta normalization") {
  auto nf = beta_normalize(paper_connect_proof());
  REQUIRE(nf);
  CHECK(proof_equal(*nf, papps(pconst("k1"), {pconst("k2"), pconst("k3")})));
  CHECK(to_string(*nf) == "(k1 k2) k3");

  auto id = beta_normalize(pconst("k"));
  REQUIRE(id);
  CHECK(proof_equal(*id, pconst("k")));

  auto redex = beta_normalize(papp(plam("a", pvar("a")), pconst("k")));
  REQUIRE(redex);
  CHECK(proof_equal(*redex, pconst("k")));
}

TEST_CASE("normalization runs out of fuel on the looping term") {
  ProofRef delta = plam("a", papp(pvar("a"), pvar("a")));
  CHECK(!beta_normalize(papp(delta, delta), 1000));
}

TEST_CASE("substitution avoids capture") {
  // (\x. \y. x) y  -->  \y'. y  (the free y must not be captured)
  ProofRef t = papp(plam("x", plam("y", pvar("x"))), pvar("y"));
  auto nf = beta_normalize(t);
  REQUIRE(nf);
  REQUIRE((*nf)->kind == ProofTerm::Kind::Lam);
  CHECK((*nf)->name != "y");
  CHECK(proof_equal((*nf)->fun, pvar("y")));
}

TEST_CASE("first-orderness") {
  CHECK(is_first_order(papps(pconst("k1"), {pconst("k2"), pconst("k3")})));
  CHECK(!is_first_order(plam("a", pvar("a"))));
  CHECK(is_first_order(pvar("a")));
}

TEST_CASE("alpha equality") {
  CHECK(alpha_equal(plam("a", pvar("a")), plam("b", pvar("b"))));
  CHECK(!alpha_equal(plam("a", pvar("a")), plam("b", pconst("b"))));
  CHECK(!alpha_equal(pvar("a"), pvar("b")));
}

TEST_CASE("extraction from the composite connect derivation") {
  DerivationTrace t = connect_success_trace();
  auto ext = extract_proof(t);
  REQUIRE(ext);
  REQUIRE(ext->proofs.size() == 1);
  auto nf = beta_normalize(ext->proofs[0]);
  REQUIRE(nf);
  CHECK(to_string(*nf) == "(k1 k2) k3");
  CHECK(is_first_order(*nf));

  // The judgement carries the instantiated goal.
  CHECK(ext->judgements[0].premises.empty());
  CHECK(to_string(ext->judgements[0].head) == "connect(node1,node3)");
}

TEST_CASE("extraction base case: one fact step") {
  Program p = load("connect.lp");
  GoalSet q = parse_query("connect(node1,node2)");
  FreshSupply supply{free_vars(q)};
  DerivationTrace t;
  t.program = p;
  t.initial = q;
  HornClause renamed = rename_apart(*p.find("k2"), supply);
  auto app = apply_clause(renamed, q, {}, 0, StepMode::Unif);
  REQUIRE(app);
  t.steps.push_back({StepMode::Unif, "k2", 0, app->local, app->state,
                     app->goals});
  t.outcome = {OutcomeKind::Success, {}};
  auto ext = extract_proof(t);
  REQUIRE(ext);
  CHECK(proof_equal(ext->proofs[0], pconst("k2")));
}

TEST_CASE("partial extraction binds leftover goals") {
  // Stop after resolving the first subgoal: the remaining goal becomes a
  // bound proof variable.
  Program p = load("connect.lp");
  GoalSet q = parse_query("connect(node1,Z)");
  FreshSupply supply{free_vars(q)};
  DerivationTrace t;
  t.program = p;
  t.initial = q;
  GoalSet goals = q;
  Substitution state;
  for (const char* label : {"k1", "k2"}) {
    HornClause renamed = rename_apart(*p.find(label), supply);
    auto app = apply_clause(renamed, goals, state, 0, StepMode::Unif);
    REQUIRE(app);
    t.steps.push_back({StepMode::Unif, label, 0, app->local, app->state,
                       app->goals});
    goals = app->goals;
    state = app->state;
  }
  t.outcome = {OutcomeKind::Stuck, goals};
  CHECK(to_string(goals) == "{connect(node2,Z)}");

  auto ext = extract_proof(t);
  REQUIRE(ext);
  CHECK(alpha_equal(ext->proofs[0],
                    plam("b", papp(papps(pconst("k1"), {pconst("k2")}),
                                   pvar("b")))));
  REQUIRE(ext->judgements[0].premises.size() == 1);
  CHECK(to_string(ext->judgements[0].premises[0]) == "connect(node2,Z)");
  CHECK(to_string(ext->judgements[0].head) == "connect(node1,Z)");
  CHECK(check_judgement(p, ext->judgements[0]).ok);
}

TEST_CASE("extraction skips substitutional steps") {
  Program fc = transform_program(load("connect.lp"));
  Budget b;
  b.max_depth = 4;
  SolveResult res =
      solve(fc, parse_query("connect(X,Y,U)"), Strategy::Struct, b);
  const Answer* composite = nullptr;
  for (const auto& a : res.answers)
    if (a.bindings.find("U") &&
        to_string(*a.bindings.find("U")) == "f_k1(c_k2,c_k3)")
      composite = &a;
  REQUIRE(composite);
  auto ext = extract_proof(composite->trace);
  REQUIRE(ext);
  auto nf = beta_normalize(ext->proofs[0]);
  REQUIRE(nf);
  CHECK(to_string(*nf) == "(k1 k2) k3");
}

TEST_CASE("extraction handles several initial goals") {
  Program p = load("blist.lp");
  GoalSet q = parse_query("bit(X), blist(Y)");
  Budget b;
  b.max_depth = 3;
  SolveResult res = solve(p, q, Strategy::Unif, b);
  REQUIRE(!res.answers.empty());
  const Answer& a = res.answers.front();
  auto ext = extract_proof(a.trace);
  REQUIRE(ext);
  REQUIRE(ext->proofs.size() == 2);
  for (const auto& j : ext->judgements) {
    CHECK(j.premises.empty());
    CHECK(check_judgement(p, j).ok);
  }
}

TEST_CASE("judgement checking accepts the worked examples") {
  Program p = load("connect.lp");

  Judgement closed{papps(pconst("k1"), {pconst("k2"), pconst("k3")}),
                   {},
                   parse_query("connect(node1,node3)")[0]};
  CHECK(check_judgement(p, closed).ok);

  // The same judgement with the argument order of the conditional proof
  // swapped relative to the clause body; accepted up to premise
  // permutation.
  Judgement cond{plam("b", papp(papp(pconst("k1"), pvar("b")), pconst("k2"))),
                 {parse_query("connect(node2,Z)")[0]},
                 parse_query("connect(node1,Z)")[0]};
  CHECK(check_judgement(p, cond).ok);

  Judgement wrong{pconst("k2"), {}, parse_query("connect(node2,node3)")[0]};
  auto res = check_judgement(p, wrong);
  CHECK(!res.ok);
  CHECK(!res.diagnostic.empty());
}

TEST_CASE("judgement checking normalizes first") {
  Program p = load("connect.lp");
  Judgement j{paper_connect_proof(), {}, parse_query("connect(node1,node3)")[0]};
  CHECK(check_judgement(p, j).ok);
}

TEST_CASE("a bare clause constant proves instances of its own formula") {
  Program p = load("connect.lp");
  Judgement j{pconst("k1"),
              {parse_query("connect(node1,W)")[0],
               parse_query("connect(W,node3)")[0]},
              parse_query("connect(node1,node3)")[0]};
  CHECK(check_judgement(p, j).ok);

  // Premises in swapped order are accepted as well.
  Judgement swapped{pconst("k1"),
                    {parse_query("connect(W,node3)")[0],
                     parse_query("connect(node1,W)")[0]},
                    parse_query("connect(node1,node3)")[0]};
  CHECK(check_judgement(p, swapped).ok);

  Judgement bad{pconst("k1"),
                {parse_query("connect(node1,W)")[0],
                 parse_query("connect(node2,node3)")[0]},
                parse_query("connect(node1,node3)")[0]};
  CHECK(!check_judgement(p, bad).ok);
}

TEST_CASE("checking is stable under renaming and instantiation") {
  Program p = load("connect.lp");
  Judgement j{plam("b", papp(papps(pconst("k1"), {pconst("k2")}), pvar("b"))),
              {parse_query("connect(node2,Z)")[0]},
              parse_query("connect(node1,Z)")[0]};
  REQUIRE(check_judgement(p, j).ok);

  // Alpha-renamed proof and renamed judgement variable.
  Judgement renamed{
      plam("c", papp(papps(pconst("k1"), {pconst("k2")}), pvar("c"))),
      {parse_query("connect(node2,W)")[0]},
      parse_query("connect(node1,W)")[0]};
  CHECK(check_judgement(p, renamed).ok);

  // Z instantiated with a fresh constant.
  Judgement ground{j.proof,
                   {parse_query("connect(node2,somewhere)")[0]},
                   parse_query("connect(node1,somewhere)")[0]};
  CHECK(check_judgement(p, ground).ok);
}

TEST_CASE("partial application of a clause constant is rejected") {
  Program p = load("connect.lp");
  Judgement j{papps(pconst("k1"), {pconst("k2")}),
              {},
              parse_query("connect(node1,node3)")[0]};
  auto res = check_judgement(p, j);
  CHECK(!res.ok);
  Judgement over{papps(pconst("k2"), {pconst("k3")}),
                 {},
                 parse_query("connect(node1,node2)")[0]};
  CHECK(!check_judgement(p, over).ok);
}

TEST_CASE("soundness of resolution on the connect program") {
  Program p = load("connect.lp");
  Budget b;
  b.max_depth = 4;
  SolveResult res = solve(p, parse_query("connect(X,Y)"), Strategy::Unif, b);
  REQUIRE(!res.answers.empty());
  for (const auto& a : res.answers) {
    auto ext = extract_proof(a.trace);
    REQUIRE(ext);
    for (const auto& j : ext->judgements) {
      CHECK(check_judgement(p, j).ok);
      auto nf = beta_normalize(j.proof);
      REQUIRE(nf);
      CHECK(is_first_order(*nf));
      CHECK(free_proof_vars(*nf).empty());
    }
  }
}

TEST_CASE("soundness of matching: the original goal is proven unchanged") {
  Program blist = load("blist.lp");
  GoalSet q = parse_query("blist(cons(0,nil))");
  SolveResult res = solve(blist, q, Strategy::Tm);
  REQUIRE(res.outcome.kind == OutcomeKind::Success);
  const Answer* success = nullptr;
  for (const auto& a : res.answers)
    if (a.trace.outcome.kind == OutcomeKind::Success) success = &a;
  REQUIRE(success);
  CHECK(success->trace.steps.back().state.empty());
  auto ext = extract_proof(success->trace);
  REQUIRE(ext);
  CHECK(ext->judgements[0].head == q[0]);
  CHECK(check_judgement(blist, ext->judgements[0]).ok);
}
