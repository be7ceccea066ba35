#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "testutil.hpp"

using namespace hornlog;
using testutil::AtomGen;
using testutil::atom_vars;
using testutil::brute_force_unifiers;
using testutil::instance_of;
using testutil::load;

TEST_CASE("application replaces bound variables homomorphically") {
  Substitution s = Substitution::single("X", tapp("node1"));
  CHECK(s.apply(atom("connect", {tvar("X"), tvar("Y")})) ==
        atom("connect", {tapp("node1"), tvar("Y")}));

  Substitution empty;
  Term t = tapp("f", {tvar("X"), tapp("a")});
  CHECK(empty.apply(t) == t);

  Substitution cons =
      Substitution::single("Y", tapp("cons", {tvar("X2"), tvar("Y2")}));
  CHECK(to_string(cons.apply(atom("stream", {tvar("Y")}))) ==
        "stream(cons(X2,Y2))");
}

TEST_CASE("composition laws") {
  Substitution s = Substitution::single("X", tapp("f", {tvar("Y")}));
  CHECK(compose({}, s) == s);
  CHECK(compose(s, {}) == s);

  Substitution outer = Substitution::single("Y", tapp("node3"));
  Substitution inner = Substitution::single("X", tapp("node1"));
  Atom goal = atom("connect", {tvar("X"), tvar("Y")});
  CHECK(to_string(compose(outer, inner).apply(goal)) ==
        "connect(node1,node3)");
}

TEST_CASE("composition is associative behaviorally") {
  AtomGen gen(11);
  for (int i = 0; i < 200; ++i) {
    Atom a = gen.atom(), b = gen.atom(), c = gen.atom(), d = gen.atom();
    auto u1 = unify(a, b);
    auto u2 = unify(b, c);
    auto u3 = unify(c, d);
    if (!u1 || !u2 || !u3) continue;
    Term probe = tapp("t", {tvar("X"), tvar("Y"), tvar("Z")});
    CHECK(compose(*u1, compose(*u2, *u3)).apply(probe) ==
          compose(compose(*u1, *u2), *u3).apply(probe));
  }
}

TEST_CASE("matching instantiates the pattern side only") {
  auto m = match(atom("blist", {tapp("cons", {tvar("X1"), tvar("Y1")})}),
                 atom("blist", {tapp("cons", {tvar("X"), tvar("Y")})}));
  REQUIRE(m);
  CHECK(m->to_string() == "{X1=X, Y1=Y}");

  CHECK(!match(atom("p", {tvar("X"), tvar("X")}),
               atom("p", {tapp("a"), tapp("b")})));

  CHECK(!match(atom("p", {tapp("c")}), atom("p", {tvar("X")})));
  auto ok = match(atom("p", {tvar("X")}), atom("p", {tapp("c")}));
  REQUIRE(ok);
  CHECK(ok->to_string() == "{X=c}");
}

TEST_CASE("a variable matched twice must receive one term") {
  auto same = match(atom("p", {tvar("X"), tvar("X")}),
                    atom("p", {tapp("a"), tapp("a")}));
  REQUIRE(same);
  CHECK(same->to_string() == "{X=a}");
}

TEST_CASE("unification examples") {
  auto u = unify(atom("connect", {tvar("X1"), tvar("Z1")}),
                 atom("connect", {tvar("X"), tvar("Y")}));
  REQUIRE(u);
  CHECK(u->to_string() == "{X1=X, Z1=Y}");

  CHECK(!unify(atom("p", {tvar("X")}), atom("p", {tapp("f", {tvar("X")})})));
  CHECK(!unify(atom("p", {tvar("X"), tvar("X")}),
               atom("p", {tapp("a"), tapp("b")})));

  auto v = unify(atom("p", {tvar("X"), tapp("b")}),
                 atom("p", {tapp("a"), tvar("Y")}));
  REQUIRE(v);
  CHECK(v->to_string() == "{X=a, Y=b}");
}

TEST_CASE("substitution printing is sorted and bit-stable") {
  Substitution s;
  s.bind("Y", tapp("node3"));
  s.bind("X", tapp("node1"));
  CHECK(s.to_string() == "{X=node1, Y=node3}");
  CHECK(Substitution{}.to_string() == "{}");
}

// The seeded pair suite: correctness, idempotence, occurs check, the
// match-implies-unify subsumption and most-generality against the
// brute-force enumerator.
TEST_CASE("random atom pair properties") {
  AtomGen gen(42);
  std::size_t unified = 0, matched = 0, mgu_checked = 0;
  for (int i = 0; i < 1000; ++i) {
    Atom a = gen.atom();
    Atom b = gen.atom();
    auto vars = atom_vars(a, b);

    // Subsumption needs variable-disjoint sides, as when a renamed-apart
    // clause head is matched onto a goal.
    Atom target = gen.disjoint_atom();
    auto sigma = match(a, target);
    if (sigma) {
      ++matched;
      auto g = unify(a, target);
      REQUIRE(g);
      CHECK(g->apply(a) == g->apply(target));
      CHECK(g->apply(a) == g->apply(sigma->apply(a)));
    }

    auto gamma = unify(a, b);
    if (gamma) {
      ++unified;
      CHECK(gamma->apply(a) == gamma->apply(b));
      CHECK(gamma->is_idempotent());
      Term probe = tapp("t", {tvar("X"), tvar("Y"), tvar("Z")});
      CHECK(compose(*gamma, *gamma).apply(probe) == gamma->apply(probe));
      for (const auto& s : brute_force_unifiers(a, b)) {
        ++mgu_checked;
        CHECK(instance_of(s, *gamma, vars));
      }
    } else {
      // No unifier, so the enumerator must not find one either.
      CHECK(brute_force_unifiers(a, b).empty());
    }
  }
  // The suite only means something if it exercised every branch.
  CHECK(matched > 20);
  CHECK(unified > 100);
  CHECK(mgu_checked > 200);
}

TEST_CASE("occurs check rejects cyclic bindings at any depth") {
  AtomGen gen(7);
  for (int i = 0; i < 100; ++i) {
    Term t = gen.term(2);
    if (free_vars(t).count("X") && !t.is_var()) {
      CHECK(!unify(atom("q", {tvar("X")}), atom("q", {t})));
      CHECK(!unify(atom("q", {t}), atom("q", {tvar("X")})));
    }
  }
}

TEST_CASE("the final state of a derivation is the composition of its steps") {
  Program p = load("connect.lp");
  GoalSet q = parse_query("connect(X,Y)");
  FreshSupply supply{free_vars(q)};
  Substitution state;

  auto s1 = step_unif(p, q, state, 0, "k1", supply);
  REQUIRE(s1);
  auto s2 = step_unif(p, s1->first, s1->second, 0, "k2", supply);
  REQUIRE(s2);
  auto s3 = step_unif(p, s2->first, s2->second, 0, "k3", supply);
  REQUIRE(s3);
  CHECK(s3->first.empty());

  CHECK(s3->second.restrict_to({"X", "Y"}).to_string() ==
        "{X=node1, Y=node3}");

  // Recompute the state by composing the three local unifiers directly.
  FreshSupply supply2{free_vars(q)};
  Substitution manual;
  GoalSet goals = q;
  for (const char* label : {"k1", "k2", "k3"}) {
    const HornClause* c = p.find(label);
    HornClause renamed = rename_apart(*c, supply2);
    auto app = apply_clause(renamed, goals, manual, 0, StepMode::Unif);
    REQUIRE(app);
    manual = compose(app->local, manual);
    goals = app->goals;
  }
  CHECK(manual == s3->second);
  CHECK(manual.is_idempotent());
}
