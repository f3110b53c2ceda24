#pragma once

#include <cctype>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "lcw/graph.hpp"
#include "lcw/relstructure.hpp"

namespace lcw {

class FormulaError : public std::runtime_error {
 public:
  FormulaError(const std::string& what, std::size_t pos = npos_pos)
      : std::runtime_error(pos == npos_pos ? what : what + " at offset " + std::to_string(pos)), offset(pos) {}
  static constexpr std::size_t npos_pos = static_cast<std::size_t>(-1);
  std::size_t offset;
};

using Signature = std::map<std::string, int>;

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  enum class Op { True, False, Atom, Eq, Not, And, Or, Implies, Exists, Forall };
  Op op = Op::True;
  std::string rel;                // Atom
  std::vector<std::string> vars;  // atom arguments, the two sides of Eq, or the bound variable
  std::vector<FormulaPtr> kids;
};

namespace fo {
inline FormulaPtr make(Formula::Op op, std::vector<FormulaPtr> kids = {}, std::vector<std::string> vars = {},
                       std::string rel = {}) {
  auto f = std::make_shared<Formula>();
  f->op = op;
  f->kids = std::move(kids);
  f->vars = std::move(vars);
  f->rel = std::move(rel);
  return f;
}
inline FormulaPtr atom(const std::string& r, std::vector<std::string> args) {
  return make(Formula::Op::Atom, {}, std::move(args), r);
}
inline FormulaPtr eq(const std::string& a, const std::string& b) { return make(Formula::Op::Eq, {}, {a, b}); }
inline FormulaPtr neg(FormulaPtr a) { return make(Formula::Op::Not, {std::move(a)}); }
inline FormulaPtr conj(FormulaPtr a, FormulaPtr b) { return make(Formula::Op::And, {std::move(a), std::move(b)}); }
inline FormulaPtr disj(FormulaPtr a, FormulaPtr b) { return make(Formula::Op::Or, {std::move(a), std::move(b)}); }
inline FormulaPtr implies(FormulaPtr a, FormulaPtr b) {
  return make(Formula::Op::Implies, {std::move(a), std::move(b)});
}
inline FormulaPtr exists(const std::string& v, FormulaPtr a) { return make(Formula::Op::Exists, {std::move(a)}, {v}); }
inline FormulaPtr forall(const std::string& v, FormulaPtr a) { return make(Formula::Op::Forall, {std::move(a)}, {v}); }
inline FormulaPtr truth(bool b) { return make(b ? Formula::Op::True : Formula::Op::False); }
}  // namespace fo

inline std::string to_string(const Formula& f) {
  using Op = Formula::Op;
  auto join = [](const std::vector<std::string>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i];
    return s;
  };
  switch (f.op) {
    case Op::True: return "true";
    case Op::False: return "false";
    case Op::Atom: return f.rel + "(" + join(f.vars) + ")";
    case Op::Eq: return f.vars[0] + " = " + f.vars[1];
    case Op::Not: return "!" + to_string(*f.kids[0]);
    case Op::And: return "(" + to_string(*f.kids[0]) + " & " + to_string(*f.kids[1]) + ")";
    case Op::Or: return "(" + to_string(*f.kids[0]) + " | " + to_string(*f.kids[1]) + ")";
    case Op::Implies: return "(" + to_string(*f.kids[0]) + " -> " + to_string(*f.kids[1]) + ")";
    case Op::Exists: return "exists " + f.vars[0] + " " + to_string(*f.kids[0]);
    case Op::Forall: return "forall " + f.vars[0] + " " + to_string(*f.kids[0]);
  }
  return {};
}

inline void collect_free(const Formula& f, std::set<std::string>& bound, std::set<std::string>& out) {
  using Op = Formula::Op;
  switch (f.op) {
    case Op::Atom:
    case Op::Eq:
      for (const auto& v : f.vars)
        if (!bound.count(v)) out.insert(v);
      return;
    case Op::Exists:
    case Op::Forall: {
      bool fresh = bound.insert(f.vars[0]).second;
      collect_free(*f.kids[0], bound, out);
      if (fresh) bound.erase(f.vars[0]);
      return;
    }
    default:
      for (const auto& k : f.kids) collect_free(*k, bound, out);
  }
}

inline std::set<std::string> free_variables(const Formula& f) {
  std::set<std::string> bound, out;
  collect_free(f, bound, out);
  return out;
}

// ---------------------------------------------------------------------------
// Parser
//
//   formula  := disj ('->' formula)?
//   disj     := conj ('|' conj)*
//   conj     := unary ('&' unary)*
//   unary    := '!' unary | ('exists'|'forall') var (',' var)* unary | primary
//   primary  := '(' formula ')' | 'true' | 'false' | R '(' var (',' var)* ')'
//             | var '=' var | var '!=' var
//
// A quantifier scopes over the following unary formula, so bodies with
// connectives need parentheses.

namespace detail {
class FormulaParser {
 public:
  FormulaParser(const std::string& text, const Signature& sig) : s_(text), sig_(sig) {}

  FormulaPtr parse() {
    auto f = implication();
    skip();
    if (p_ != s_.size()) throw FormulaError("unexpected '" + std::string(1, s_[p_]) + "'", p_);
    return f;
  }

 private:
  void skip() {
    while (p_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[p_]))) ++p_;
  }
  bool eat(const std::string& tok) {
    skip();
    if (s_.compare(p_, tok.size(), tok) != 0) return false;
    p_ += tok.size();
    return true;
  }
  void expect(const std::string& tok) {
    if (!eat(tok)) throw FormulaError("expected '" + tok + "'", p_);
  }
  std::string ident() {
    skip();
    std::size_t start = p_;
    if (p_ < s_.size() && (std::isalpha(static_cast<unsigned char>(s_[p_])) || s_[p_] == '_')) {
      ++p_;
      while (p_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[p_])) || s_[p_] == '_' || s_[p_] == '\''))
        ++p_;
    }
    if (start == p_) throw FormulaError(p_ < s_.size() ? "expected identifier" : "unexpected end of formula", p_);
    return s_.substr(start, p_ - start);
  }
  bool peek_keyword(const std::string& kw) {
    skip();
    if (s_.compare(p_, kw.size(), kw) != 0) return false;
    std::size_t e = p_ + kw.size();
    return e >= s_.size() || !(std::isalnum(static_cast<unsigned char>(s_[e])) || s_[e] == '_');
  }

  FormulaPtr implication() {
    auto a = disjunction();
    if (eat("->")) return fo::implies(a, implication());
    return a;
  }
  FormulaPtr disjunction() {
    auto a = conjunction();
    while (eat("|")) a = fo::disj(a, conjunction());
    return a;
  }
  FormulaPtr conjunction() {
    auto a = unary();
    while (eat("&")) a = fo::conj(a, unary());
    return a;
  }
  FormulaPtr unary() {
    skip();
    if (p_ < s_.size() && s_[p_] == '!' && s_.compare(p_, 2, "!=") != 0) {
      ++p_;
      return fo::neg(unary());
    }
    for (const char* q : {"exists", "forall"}) {
      if (!peek_keyword(q)) continue;
      p_ += std::string(q).size();
      std::vector<std::string> vars{ident()};
      while (eat(",")) vars.push_back(ident());
      auto body = unary();
      for (auto it = vars.rbegin(); it != vars.rend(); ++it)
        body = q[0] == 'e' ? fo::exists(*it, body) : fo::forall(*it, body);
      return body;
    }
    return primary();
  }
  FormulaPtr primary() {
    skip();
    if (eat("(")) {
      auto f = implication();
      expect(")");
      return f;
    }
    if (peek_keyword("true")) {
      p_ += 4;
      return fo::truth(true);
    }
    if (peek_keyword("false")) {
      p_ += 5;
      return fo::truth(false);
    }
    std::size_t at = (skip(), p_);
    std::string name = ident();
    if (eat("(")) {
      std::vector<std::string> args{ident()};
      while (eat(",")) args.push_back(ident());
      expect(")");
      auto it = sig_.find(name);
      if (it == sig_.end()) throw FormulaError("unknown relation '" + name + "'", at);
      if (it->second != static_cast<int>(args.size()))
        throw FormulaError("relation '" + name + "' has arity " + std::to_string(it->second) + ", got " +
                               std::to_string(args.size()),
                           at);
      return fo::atom(name, args);
    }
    if (eat("!=")) return fo::neg(fo::eq(name, ident()));
    if (eat("=")) return fo::eq(name, ident());
    throw FormulaError("expected an atom or comparison after '" + name + "'", p_);
  }

  const std::string& s_;
  const Signature& sig_;
  std::size_t p_ = 0;
};
}  // namespace detail

inline FormulaPtr parse_formula(const std::string& text, const Signature& sig) {
  return detail::FormulaParser(text, sig).parse();
}

/// Arity check against a signature (for formulas built programmatically).
inline void check_signature(const Formula& f, const Signature& sig) {
  if (f.op == Formula::Op::Atom) {
    auto it = sig.find(f.rel);
    if (it == sig.end()) throw FormulaError("unknown relation '" + f.rel + "'");
    if (it->second != static_cast<int>(f.vars.size())) throw FormulaError("arity mismatch for '" + f.rel + "'");
  }
  for (const auto& k : f.kids) check_signature(*k, sig);
}

// ---------------------------------------------------------------------------
// Evaluation: variables are compiled to slots, relations to table pointers.

class Evaluator {
 public:
  /// `params` name the free variables, in the order values are passed.
  Evaluator(const RelStructure& s, FormulaPtr f, std::vector<std::string> params) : s_(s), f_(std::move(f)) {
    check_signature(*f_, s_.signature());
    std::map<std::string, int> scope;
    for (const auto& v : params) {
      if (scope.count(v)) throw FormulaError("parameter '" + v + "' listed twice");
      scope[v] = slots_++;
    }
    nparams_ = slots_;
    root_ = compile(*f_, scope);
  }

  [[nodiscard]] bool operator()(const std::vector<Index>& values) const {
    if (values.size() != nparams_) throw FormulaError("wrong number of values");
    std::vector<Index> env(slots_, 0);
    std::copy(values.begin(), values.end(), env.begin());
    Tuple buf;
    return run(root_, env, buf);
  }

 private:
  struct Node {
    Formula::Op op;
    const RelStructure::Relation* rel = nullptr;
    std::vector<int> slots;
    std::vector<int> kids;
  };

  int compile(const Formula& f, std::map<std::string, int>& scope) {
    Node n;
    n.op = f.op;
    using Op = Formula::Op;
    if (f.op == Op::Atom || f.op == Op::Eq) {
      if (f.op == Op::Atom) n.rel = &s_.relation(f.rel);
      for (const auto& v : f.vars) {
        auto it = scope.find(v);
        if (it == scope.end()) throw FormulaError("unbound variable '" + v + "'");
        n.slots.push_back(it->second);
      }
    } else if (f.op == Op::Exists || f.op == Op::Forall) {
      const int slot = slots_++;
      n.slots.push_back(slot);
      auto prev = scope.find(f.vars[0]);
      std::optional<int> saved;
      if (prev != scope.end()) saved = prev->second;
      scope[f.vars[0]] = slot;
      n.kids.push_back(compile(*f.kids[0], scope));
      if (saved) scope[f.vars[0]] = *saved;
      else scope.erase(f.vars[0]);
    } else {
      for (const auto& k : f.kids) n.kids.push_back(compile(*k, scope));
    }
    nodes_.push_back(std::move(n));
    return static_cast<int>(nodes_.size()) - 1;
  }

  bool run(int id, std::vector<Index>& env, Tuple& buf) const {
    const Node& n = nodes_[id];
    using Op = Formula::Op;
    switch (n.op) {
      case Op::True: return true;
      case Op::False: return false;
      case Op::Atom:
        buf.resize(n.slots.size());
        for (std::size_t i = 0; i < n.slots.size(); ++i) buf[i] = env[n.slots[i]];
        return n.rel->contains(buf);
      case Op::Eq: return env[n.slots[0]] == env[n.slots[1]];
      case Op::Not: return !run(n.kids[0], env, buf);
      case Op::And: return run(n.kids[0], env, buf) && run(n.kids[1], env, buf);
      case Op::Or: return run(n.kids[0], env, buf) || run(n.kids[1], env, buf);
      case Op::Implies: return !run(n.kids[0], env, buf) || run(n.kids[1], env, buf);
      case Op::Exists:
        for (Index a = 0; a < s_.size(); ++a) {
          env[n.slots[0]] = a;
          if (run(n.kids[0], env, buf)) return true;
        }
        return false;
      case Op::Forall:
        for (Index a = 0; a < s_.size(); ++a) {
          env[n.slots[0]] = a;
          if (!run(n.kids[0], env, buf)) return false;
        }
        return true;
    }
    return false;
  }

  const RelStructure& s_;
  FormulaPtr f_;
  std::vector<Node> nodes_;
  int root_ = 0;
  int slots_ = 0;
  std::size_t nparams_ = 0;
};

inline bool eval(const RelStructure& s, const FormulaPtr& f, const std::map<std::string, std::string>& env) {
  std::vector<std::string> params;
  std::vector<Index> values;
  for (const auto& v : free_variables(*f)) {
    auto it = env.find(v);
    if (it == env.end()) throw FormulaError("unbound variable '" + v + "'");
    params.push_back(v);
    values.push_back(s.index_of(it->second));
  }
  return Evaluator(s, f, params)(values);
}

/// All tuples over `vars` satisfying f (lexicographic order).
inline std::vector<Tuple> satisfying(const RelStructure& s, const FormulaPtr& f, const std::vector<std::string>& vars) {
  for (const auto& v : free_variables(*f))
    if (std::find(vars.begin(), vars.end(), v) == vars.end()) throw FormulaError("unbound variable '" + v + "'");
  Evaluator ev(s, f, vars);
  std::vector<Tuple> out;
  Tuple t(vars.size(), 0);
  if (s.size() == 0 && !vars.empty()) return out;
  while (true) {
    if (ev(t)) out.push_back(t);
    std::size_t i = t.size();
    while (i > 0 && ++t[i - 1] == s.size()) t[--i] = 0;
    if (i == 0) break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Transduction steps

struct CopyStep {
  int k = 1;
};

/// Explicit valuation of new unary predicates (predicate -> element names).
struct ColorStep {
  std::map<std::string, std::vector<std::string>> valuation;
};

struct RelationDefinition {
  std::string name;
  std::vector<std::string> vars;
  FormulaPtr body;
};

struct Interpretation {
  std::string nu_var = "x";
  FormulaPtr nu = fo::truth(true);
  std::vector<RelationDefinition> rho;
  bool keep_unlisted = true;  // relations without a formula are kept as they are
};

using TransductionStep = std::variant<CopyStep, ColorStep, Interpretation>;

inline std::string copy_name(const std::string& e, int k) { return e + "/" + std::to_string(k); }

inline RelStructure apply_step(const RelStructure& s, const CopyStep& c) {
  if (c.k < 1) throw FormulaError("copy count must be positive");
  auto sig = s.signature();
  if (sig.count("F")) throw FormulaError("signature clash: F already present");
  for (int i = 1; i <= c.k; ++i)
    if (sig.count("M" + std::to_string(i))) throw FormulaError("signature clash: M" + std::to_string(i));
  RelStructure out;
  const auto k = static_cast<Index>(c.k);
  for (const auto& e : s.domain())
    for (int i = 1; i <= c.k; ++i) out.add_element(copy_name(e, i));
  auto at = [&](Index e, Index i) { return e * k + i; };
  for (const auto& [name, arity] : sig) {
    out.declare(name, arity);
    for (const auto& t : s.tuples(name))
      for (Index i = 0; i < k; ++i) {
        Tuple u;
        for (Index e : t) u.push_back(at(e, i));
        out.add(name, u);
      }
  }
  out.declare("F", 2);
  for (int i = 1; i <= c.k; ++i) out.declare("M" + std::to_string(i), 1);
  for (Index e = 0; e < s.size(); ++e)
    for (Index i = 0; i < k; ++i) {
      out.add("M" + std::to_string(i + 1), Tuple{at(e, i)});
      for (Index j = 0; j < k; ++j)
        if (i != j) out.add("F", Tuple{at(e, i), at(e, j)});
    }
  return out;
}

inline RelStructure apply_step(const RelStructure& s, const ColorStep& c) {
  RelStructure out = s;
  for (const auto& [name, elems] : c.valuation) {
    if (s.has_relation(name)) throw FormulaError("signature clash: " + name + " already present");
    out.declare(name, 1);
    for (const auto& e : elems) out.add(name, std::vector<std::string>{e});
  }
  return out;
}

inline RelStructure apply_step(const RelStructure& s, const Interpretation& in) {
  RelStructure out;
  std::vector<Index> keep;
  for (const auto& t : satisfying(s, in.nu, {in.nu_var})) keep.push_back(t[0]);
  std::vector<Index> pos(s.size(), npos);
  for (Index i = 0; i < keep.size(); ++i) {
    pos[keep[i]] = i;
    out.add_element(s.element(keep[i]));
  }
  std::set<std::string> defined;
  for (const auto& d : in.rho) {
    if (!defined.insert(d.name).second) throw FormulaError("relation '" + d.name + "' defined twice");
    out.declare(d.name, static_cast<int>(d.vars.size()));
    for (const auto& t : satisfying(s, d.body, d.vars)) {
      Tuple u;
      bool inside = true;
      for (Index e : t) {
        inside = inside && pos[e] != npos;
        u.push_back(pos[e]);
      }
      if (inside) out.add(d.name, u);
    }
  }
  if (in.keep_unlisted)
    for (const auto& [name, arity] : s.signature()) {
      if (defined.count(name)) continue;
      out.declare(name, arity);
      for (const auto& t : s.tuples(name)) {
        Tuple u;
        bool inside = true;
        for (Index e : t) {
          inside = inside && pos[e] != npos;
          u.push_back(pos[e]);
        }
        if (inside) out.add(name, u);
      }
    }
  return out;
}

inline RelStructure apply_step(const RelStructure& s, const TransductionStep& step) {
  return std::visit([&](const auto& st) { return apply_step(s, st); }, step);
}

// ---------------------------------------------------------------------------
// Library

struct NamedFormula {
  std::string name;
  std::string text;
  std::vector<std::string> params;
  Signature signature;
  FormulaPtr formula;
};

inline Signature model_signature(int n) {
  Signature sig{{"L", 1}, {"A", 1}, {"C", 1}, {"Lt", 2}, {"Inf", 3}};
  for (int i = 1; i <= n; ++i) {
    sig["Col" + std::to_string(i)] = 1;
    for (int j = 1; j <= n; ++j) sig["K" + std::to_string(i) + "_" + std::to_string(j)] = 1;
  }
  return sig;
}

/// lambda(x,y) over the model structure of an n-coloured T-model.
inline std::string lambda_text(int n, const std::string& x = "x", const std::string& y = "y") {
  std::string colours;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      auto a = std::to_string(i), b = std::to_string(j);
      colours += std::string(colours.empty() ? "" : " | ") + "(Col" + a + "(" + x + ") & Col" + b + "(" + y + ") & K" +
                 a + "_" + b + "(z))";
    }
  return "L(" + x + ") & L(" + y + ") & exists z (Inf(" + x + "," + y + ",z) & ((A(z) & " + x + " != " + y +
         ") | (C(z) & Lt(" + x + "," + y + "))) & (" + colours + "))";
}

inline std::string edge_text(int n) { return "(" + lambda_text(n, "x", "y") + ") | (" + lambda_text(n, "y", "x") + ")"; }

inline std::string dist_text(int d, const std::string& x = "x", const std::string& y = "y") {
  // x = y | exists z1 (E(x,z1) & (z1 = y | exists z2 (...)))
  std::string tail = "false";
  for (int k = d; k >= 1; --k) {
    std::string prev = k == 1 ? x : "z" + std::to_string(k - 1);
    std::string cur = "z" + std::to_string(k);
    tail = "exists " + cur + " (E(" + prev + "," + cur + ") & (" + cur + " = " + y + " | " + tail + "))";
  }
  return x + " = " + y + " | " + tail;
}

inline std::string kdiff_text(const std::string& a, const std::string& b) {
  return "!((K1(" + a + ") & K1(" + b + ")) | (K2(" + a + ") & K2(" + b + ")) | (K3(" + a + ") & K3(" + b + ")))";
}

inline std::string chi1_text(const std::string& x = "x", const std::string& y = "y") {
  return "exists z (" + kdiff_text("z", x) + " & E(" + x + ",z) & !E(z," + y + "))";
}

inline std::string chi2_text(const std::string& x = "x", const std::string& y = "y") {
  return "exists z1, z2 (" + kdiff_text(x, "z1") + " & " + kdiff_text(x, "z2") + " & E(" + x + ",z1) & !E(z1,z2) & E(z2," +
         y + "))";
}

/// Part of b strictly before the part of a (a, b of different colours), the
/// case chi2 alone misses. Its end atoms are negative, so the witness
/// colours are pinned: z1 opposite to a, z2 the colour of a.
inline std::string chi3_text(const std::string& a = "x", const std::string& b = "y") {
  std::string opposite = "((Col1(" + a + ") & Col2(z1)) | (Col2(" + a + ") & Col1(z1)))";
  std::string same = "((Col1(" + a + ") & Col1(z2)) | (Col2(" + a + ") & Col2(z2)))";
  return "exists z1, z2 (" + kdiff_text(a, "z1") + " & " + kdiff_text(a, "z2") + " & " + opposite + " & " + same +
         " & !E(" + a + ",z1) & E(z1,z2) & !E(z2," + b + "))";
}

inline std::string same_part_text() {
  std::string same_k = "((K1(x) & K1(y)) | (K2(x) & K2(y)) | (K3(x) & K3(y)))";
  std::string same_c = "((Col1(x) & Col1(y)) | (Col2(x) & Col2(y)))";
  return same_k + " & ((" + same_c + " & !(" + chi1_text("x", "y") + ") & !(" + chi1_text("y", "x") + ")) | (!" + same_c +
         " & !(" + chi2_text("x", "y") + ") & !(" + chi2_text("y", "x") + ") & !(" + chi3_text("x", "y") + ") & !(" +
         chi3_text("y", "x") + ")))";
}

inline Signature indexed_bipartite_signature() {
  return {{"E", 2}, {"Col1", 1}, {"Col2", 1}, {"K1", 1}, {"K2", 1}, {"K3", 1}};
}

/// Coupling after Copy(4) and the colouring P_k := M_k.
inline Signature copied_coupling_signature() {
  return {{"Lt", 2}, {"E", 2}, {"Gr", 1}, {"F", 2}, {"P1", 1}, {"P2", 1}, {"P3", 1}, {"P4", 1}};
}

inline std::string encode_lt_text() {
  return "(P4(u) & P4(v) & Lt(u,v)) | (F(u,v) & P1(v) & (P2(u) | P3(u) | P4(u))) | "
         "(P2(u) & (P3(v) | P1(v)) & (exists w (P2(w) & F(v,w) & E(u,w))))";
}

inline Signature colored_poset_signature() { return {{"Lt", 2}, {"Gr", 1}, {"P1", 1}, {"P2", 1}, {"P3", 1}, {"P4", 1}}; }

// own clones of a ground element u: the largest P4 element below it, the P3
// element below it, and the P2 element below it that is not below that P3.
inline std::string own4_text(const std::string& u, const std::string& a) {
  const std::string w = "w_" + a;  // bound name that cannot capture a or u
  return "(P4(" + a + ") & Lt(" + a + "," + u + ") & (forall " + w + " ((P4(" + w + ") & Lt(" + w + "," + u + ")) -> (" + w +
         " = " + a + " | Lt(" + w + "," + a + ")))))";
}
inline std::string own3_text(const std::string& u, const std::string& a) {
  return "(P3(" + a + ") & Lt(" + a + "," + u + "))";
}
inline std::string own2_text(const std::string& u, const std::string& a) {
  return "(P2(" + a + ") & Lt(" + a + "," + u + ") & !(exists c (P3(c) & Lt(c," + u + ") & Lt(" + a + ",c))))";
}

inline std::string decode_lt_text() {
  return "Gr(u) & Gr(v) & exists a, b (" + own4_text("u", "a") + " & " + own4_text("v", "b") + " & Lt(a,b))";
}

inline std::string decode_e_text() {
  return "Gr(u) & Gr(v) & exists a, b (" + own2_text("u", "a") + " & " + own3_text("v", "b") + " & Lt(a,b))";
}

inline std::map<std::string, NamedFormula> builtin_formulas() {
  std::map<std::string, NamedFormula> lib;
  auto add = [&](const std::string& name, const std::string& text, std::vector<std::string> params, Signature sig) {
    lib[name] = NamedFormula{name, text, std::move(params), sig, parse_formula(text, sig)};
  };
  add("lambda1", lambda_text(1), {"x", "y"}, model_signature(1));
  add("lambda2", lambda_text(2), {"x", "y"}, model_signature(2));
  add("build_edge1", edge_text(1), {"x", "y"}, model_signature(1));
  add("build_edge2", edge_text(2), {"x", "y"}, model_signature(2));
  add("dist_le6", dist_text(6), {"x", "y"}, {{"E", 2}});
  add("chi1", chi1_text(), {"x", "y"}, indexed_bipartite_signature());
  add("chi2", chi2_text(), {"x", "y"}, indexed_bipartite_signature());
  add("chi3", chi3_text(), {"x", "y"}, indexed_bipartite_signature());
  add("same_part", same_part_text(), {"x", "y"}, indexed_bipartite_signature());
  add("encode_lt", encode_lt_text(), {"u", "v"}, copied_coupling_signature());
  add("encode_gr", "P1(u) & Gr(u)", {"u"}, copied_coupling_signature());
  add("decode_lt", decode_lt_text(), {"u", "v"}, colored_poset_signature());
  add("decode_e", decode_e_text(), {"u", "v"}, colored_poset_signature());
  return lib;
}

// ---------------------------------------------------------------------------
// Structures the library formulas run on

inline RelStructure graph_structure(const Graph& g) {
  RelStructure s;
  for (const auto& v : g.names()) s.add_element(v);
  s.declare("E", 2);
  for (auto [u, v] : g.edges()) {
    s.add("E", Tuple{u, v});
    s.add("E", Tuple{v, u});
  }
  return s;
}

/// E, Col1/Col2 from the sides and K1..K3 from a part index (K_{1 + i mod 3}).
inline RelStructure indexed_bipartite_structure(const BipartiteGraph& b, const std::vector<std::size_t>& part) {
  RelStructure s = graph_structure(b.graph);
  for (auto& [r, a] : indexed_bipartite_signature()) s.declare(r, a);
  for (Index v = 0; v < b.graph.size(); ++v) {
    s.add(b.side[v] == 1 ? "Col1" : "Col2", Tuple{v});
    s.add("K" + std::to_string(1 + part[v] % 3), Tuple{v});
  }
  return s;
}

/// The pipeline Copy(4), colour P_k := M_k, interpret Lt and Gr.
inline RelStructure encode_via_formulas(const RelStructure& coupling) {
  RelStructure c = apply_step(coupling, CopyStep{4});
  ColorStep col;
  for (int k = 1; k <= 4; ++k) {
    auto& v = col.valuation["P" + std::to_string(k)];
    for (const auto& t : c.tuples("M" + std::to_string(k))) v.push_back(c.element(t[0]));
  }
  c = apply_step(c, col);
  Interpretation in;
  in.nu_var = "u";
  auto sig = c.signature();
  in.rho.push_back({"Lt", {"u", "v"}, parse_formula(encode_lt_text(), sig)});
  in.rho.push_back({"Gr", {"u"}, parse_formula("P1(u) & Gr(u)", sig)});
  in.keep_unlisted = false;
  RelStructure out = apply_step(c, in);
  for (int k = 1; k <= 4; ++k) {
    const std::string p = "P" + std::to_string(k);
    out.declare(p, 1);
    for (const auto& t : c.tuples(p)) out.add(p, Tuple{t[0]});
  }
  return out;
}

/// The inverse interpretation: ground elements with Lt and E.
inline RelStructure decode_via_formulas(const RelStructure& poset) {
  auto sig = poset.signature();
  Interpretation in;
  in.nu_var = "u";
  in.nu = parse_formula("Gr(u)", sig);
  in.rho.push_back({"Lt", {"u", "v"}, parse_formula(decode_lt_text(), sig)});
  in.rho.push_back({"E", {"u", "v"}, parse_formula(decode_e_text(), sig)});
  in.rho.push_back({"Gr", {"u"}, parse_formula("Gr(u)", sig)});
  in.keep_unlisted = false;
  RelStructure raw = apply_step(poset, in);
  // Back to source names: the surviving elements are the "e/1" clones.
  RelStructure out;
  for (const auto& e : raw.domain()) {
    auto slash = e.rfind('/');
    out.add_element(slash == std::string::npos ? e : e.substr(0, slash));
  }
  for (const auto& [rel, arity] : raw.signature()) {
    out.declare(rel, arity);
    for (const auto& t : raw.tuples(rel)) out.add(rel, t);
  }
  return out;
}

}  // namespace lcw
