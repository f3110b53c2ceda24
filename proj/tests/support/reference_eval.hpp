#pragma once

// Brute-force evaluator used as an oracle for lcw::Evaluator. It walks the
// AST directly with a name -> element environment and shares no code with
// the compiled evaluator beyond the AST and RelStructure::holds.

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <lcw/folang.hpp>
#include <lcw/relstructure.hpp>

namespace lcw_test {

using Env = std::map<std::string, lcw::Index>;

inline bool ref_eval(const lcw::RelStructure& s, const lcw::Formula& f, Env& env) {
  using Op = lcw::Formula::Op;
  switch (f.op) {
    case Op::True: return true;
    case Op::False: return false;
    case Op::Atom: {
      lcw::Tuple t;
      for (const auto& v : f.vars) t.push_back(env.at(v));
      return s.holds(f.rel, t);
    }
    case Op::Eq: return env.at(f.vars[0]) == env.at(f.vars[1]);
    case Op::Not: return !ref_eval(s, *f.kids[0], env);
    case Op::And: return ref_eval(s, *f.kids[0], env) && ref_eval(s, *f.kids[1], env);
    case Op::Or: return ref_eval(s, *f.kids[0], env) || ref_eval(s, *f.kids[1], env);
    case Op::Implies: return !ref_eval(s, *f.kids[0], env) || ref_eval(s, *f.kids[1], env);
    case Op::Exists:
    case Op::Forall: {
      const std::string& x = f.vars[0];
      auto saved = env.find(x) == env.end() ? std::optional<lcw::Index>{} : std::optional<lcw::Index>{env[x]};
      const bool want = f.op == Op::Exists;
      bool result = !want;
      for (lcw::Index a = 0; a < s.size(); ++a) {
        env[x] = a;
        if (ref_eval(s, *f.kids[0], env) == want) {
          result = want;
          break;
        }
      }
      if (saved) env[x] = *saved;
      else env.erase(x);
      return result;
    }
  }
  return false;
}

// Full truth table over the given parameter order, one entry per
// assignment in lexicographic order of element indices.
inline std::vector<bool> ref_truth_table(const lcw::RelStructure& s, const lcw::Formula& f,
                                         const std::vector<std::string>& params) {
  std::vector<bool> out;
  std::vector<lcw::Index> a(params.size(), 0);
  if (s.size() == 0 && !params.empty()) return out;
  while (true) {
    Env env;
    for (std::size_t i = 0; i < params.size(); ++i) env[params[i]] = a[i];
    out.push_back(ref_eval(s, f, env));
    std::size_t k = params.size();
    while (k > 0) {
      if (++a[k - 1] < s.size()) break;
      a[k - 1] = 0;
      --k;
    }
    if (k == 0) break;
  }
  return out;
}

// Random structures over a fixed small signature: unary P, Q; binary E, R;
// ternary T.
inline lcw::Signature random_signature() { return {{"P", 1}, {"Q", 1}, {"E", 2}, {"R", 2}, {"T", 3}}; }

inline lcw::RelStructure random_structure(std::mt19937_64& rng, std::size_t n) {
  lcw::RelStructure s;
  for (std::size_t i = 0; i < n; ++i) s.add_element("d" + std::to_string(i));
  for (const auto& [rel, arity] : random_signature()) s.declare(rel, arity);
  std::bernoulli_distribution coin(std::uniform_real_distribution<double>(0.15, 0.7)(rng));
  for (lcw::Index a = 0; a < n; ++a) {
    if (coin(rng)) s.add("P", lcw::Tuple{a});
    if (coin(rng)) s.add("Q", lcw::Tuple{a});
    for (lcw::Index b = 0; b < n; ++b) {
      if (coin(rng)) s.add("E", lcw::Tuple{a, b});
      if (coin(rng)) s.add("R", lcw::Tuple{a, b});
      for (lcw::Index c = 0; c < n; ++c)
        if (coin(rng) && coin(rng)) s.add("T", lcw::Tuple{a, b, c});
    }
  }
  return s;
}

inline lcw::FormulaPtr random_formula(std::mt19937_64& rng, int depth, const std::vector<std::string>& vars) {
  using namespace lcw::fo;
  auto pick = [&](std::size_t k) { return std::uniform_int_distribution<std::size_t>(0, k - 1)(rng); };
  auto var = [&] { return vars[pick(vars.size())]; };
  if (depth <= 0 || pick(5) == 0) {
    switch (pick(7)) {
      case 0: return atom("P", {var()});
      case 1: return atom("Q", {var()});
      case 2: return atom("E", {var(), var()});
      case 3: return atom("R", {var(), var()});
      case 4: return atom("T", {var(), var(), var()});
      case 5: return eq(var(), var());
      default: return truth(pick(2) == 0);
    }
  }
  switch (pick(7)) {
    case 0: return neg(random_formula(rng, depth - 1, vars));
    case 1: return conj(random_formula(rng, depth - 1, vars), random_formula(rng, depth - 1, vars));
    case 2: return disj(random_formula(rng, depth - 1, vars), random_formula(rng, depth - 1, vars));
    case 3: return implies(random_formula(rng, depth - 1, vars), random_formula(rng, depth - 1, vars));
    case 4:
    case 5: return exists(var(), random_formula(rng, depth - 1, vars));
    default: return forall(var(), random_formula(rng, depth - 1, vars));
  }
}

struct ReferenceAgreement {
  std::size_t instances = 0;
  std::size_t agreed = 0;
  std::size_t assignments = 0;
  std::string first_failure;
};

// Compares lcw::satisfying against the reference truth table on random
// (structure, formula) pairs with domain size 1..5. Also checks that the
// printed form parses back to an equivalent formula.
inline ReferenceAgreement reference_agreement(std::uint64_t seed, std::size_t count) {
  ReferenceAgreement r;
  std::mt19937_64 rng(seed);
  const std::vector<std::string> vars = {"x", "y", "z", "w"};
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t n = 1 + i % 5;
    auto s = random_structure(rng, n);
    auto f = random_formula(rng, 1 + static_cast<int>(i % 5), vars);
    auto fv = lcw::free_variables(*f);
    std::vector<std::string> params(fv.begin(), fv.end());
    auto want = ref_truth_table(s, *f, params);

    std::vector<bool> got(want.size(), false);
    std::set<lcw::Tuple> sat;
    for (const auto& t : lcw::satisfying(s, f, params)) sat.insert(t);
    std::size_t k = 0;
    std::vector<lcw::Index> a(params.size(), 0);
    for (; k < want.size(); ++k) {
      got[k] = sat.count(lcw::Tuple(a.begin(), a.end())) > 0;
      for (std::size_t j = params.size(); j > 0; --j) {
        if (++a[j - 1] < n) break;
        a[j - 1] = 0;
      }
    }
    auto reparsed = lcw::parse_formula(lcw::to_string(*f), random_signature());
    bool ok = got == want && ref_truth_table(s, *reparsed, params) == want;
    if (params.size() <= 2) {
      std::map<std::string, std::string> env;
      if (!params.empty()) env[params[0]] = s.element(n - 1);
      if (params.size() == 2) env[params[1]] = s.element(0);
      Env renv;
      for (const auto& [v, e] : env) renv[v] = s.index_of(e);
      ok = ok && lcw::eval(s, f, env) == ref_eval(s, *f, renv);
    }
    ++r.instances;
    r.assignments += want.size();
    if (ok) ++r.agreed;
    else if (r.first_failure.empty()) r.first_failure = "instance " + std::to_string(i) + ": " + lcw::to_string(*f);
  }
  return r;
}

}  // namespace lcw_test
