#pragma once

#include <fstream>
#include <random>
#include <sstream>

#include "hornlog/harness.hpp"

namespace testutil {

using namespace hornlog;

inline std::string data_file(const std::string& name) {
  std::ifstream in(std::string(HORNLOG_TEST_DATA) + "/" + name);
  REQUIRE(in.good());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

inline Program load(const std::string& name) {
  return parse_program(data_file(name));
}

// Random atoms over a tiny signature: predicates p/2, q/1, functors f/1,
// g/2, constants a, b, and a three-variable pool. A suffix separates the
// pools of the two sides where a property needs variable-disjoint atoms
// (matching is only ever applied to a renamed-apart clause head).
struct AtomGen {
  std::mt19937_64 rng;
  std::string suffix;
  explicit AtomGen(std::uint64_t seed, std::string var_suffix = "")
      : rng(seed), suffix(std::move(var_suffix)) {}

  std::size_t below(std::size_t n) {
    return static_cast<std::size_t>(rng() % n);
  }

  Term term(std::size_t depth) {
    switch (below(depth == 0 ? 4 : 6)) {
      case 0: return tvar("X" + suffix);
      case 1: return tvar("Y" + suffix);
      case 2: return tvar("Z" + suffix);
      case 3: return tapp(below(2) ? "a" : "b");
      case 4: return tapp("f", {term(depth - 1)});
      default: return tapp("g", {term(depth - 1), term(depth - 1)});
    }
  }

  Atom atom() {
    if (below(2)) return hornlog::atom("p", {term(below(3)), term(below(3))});
    return hornlog::atom("q", {term(below(3))});
  }

  // Same shape distribution, variables drawn from a disjoint pool.
  Atom disjoint_atom() {
    std::string saved = suffix;
    suffix = saved + "1";
    Atom out = atom();
    suffix = saved;
    return out;
  }
};

inline std::set<std::string> atom_vars(const Atom& a, const Atom& b) {
  std::set<std::string> vars = free_vars(a);
  auto vb = free_vars(b);
  vars.insert(vb.begin(), vb.end());
  return vars;
}

// sigma is an instance of gamma: some delta maps gamma's image pointwise
// onto sigma's.
inline bool instance_of(const Substitution& sigma, const Substitution& gamma,
                        const std::set<std::string>& vars) {
  std::vector<Term> from, to;
  for (const auto& v : vars) {
    from.push_back(gamma.apply(tvar(v)));
    to.push_back(sigma.apply(tvar(v)));
  }
  return match(tapp("t", from), tapp("t", to)).has_value();
}

inline void subterms_into(const Term& t, std::vector<Term>& out) {
  out.push_back(t);
  for (const auto& a : t.args) subterms_into(a, out);
}

// Every unifier over the subterm-closed candidate set, by exhaustive
// enumeration. Independent of the unification algorithm.
inline std::vector<Substitution> brute_force_unifiers(const Atom& a,
                                                      const Atom& b) {
  std::vector<Substitution> found;
  if (a.pred != b.pred || a.args.size() != b.args.size()) return found;
  std::vector<Term> candidates;
  for (const auto& t : a.args) subterms_into(t, candidates);
  for (const auto& t : b.args) subterms_into(t, candidates);
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()),
                   candidates.end());
  std::vector<std::string> vars;
  for (const auto& v : atom_vars(a, b)) vars.push_back(v);
  if (vars.size() > 3) return found;

  std::size_t options = candidates.size() + 1;  // +1 leaves the var alone
  std::vector<std::size_t> pick(vars.size(), 0);
  while (true) {
    Substitution s;
    for (std::size_t i = 0; i < vars.size(); ++i)
      if (pick[i] > 0) s.bind(vars[i], candidates[pick[i] - 1]);
    if (s.apply(a) == s.apply(b)) found.push_back(s);
    std::size_t i = 0;
    for (; i < pick.size(); ++i) {
      if (++pick[i] < options) break;
      pick[i] = 0;
    }
    if (i == pick.size()) break;
  }
  return found;
}

}  // namespace testutil
