#include <gtest/gtest.h>

#include <lcw/lcw.hpp>

#include "support/reference_eval.hpp"

using namespace lcw;

namespace {

const Signature kGraphSig = {{"E", 2}};

RelStructure path_structure(std::size_t n) { return graph_structure(path_graph(n)); }

std::vector<std::size_t> part_index(const BipartiteGraph& b, const std::vector<IndexSet>& parts) {
  std::vector<std::size_t> part(b.size());
  for (std::size_t k = 0; k < parts.size(); ++k)
    for (Index v : parts[k]) part[v] = k;
  return part;
}

// A quantifier that rebinds a variable already in scope; none of the
// library formulas should need one.
std::string shadowed(const Formula& f, std::set<std::string> scope) {
  if (f.op == Formula::Op::Exists || f.op == Formula::Op::Forall) {
    if (!scope.insert(f.vars[0]).second) return f.vars[0];
  }
  for (const auto& k : f.kids)
    if (auto v = shadowed(*k, scope); !v.empty()) return v;
  return {};
}

}  // namespace

TEST(Parse, ConjunctionWithNegation) {
  auto f = parse_formula("E(x,y) & !E(y,z)", kGraphSig);
  ASSERT_EQ(f->op, Formula::Op::And);
  ASSERT_EQ(f->kids.size(), 2u);
  EXPECT_EQ(f->kids[0]->op, Formula::Op::Atom);
  EXPECT_EQ(f->kids[0]->vars, (std::vector<std::string>{"x", "y"}));
  EXPECT_EQ(f->kids[1]->op, Formula::Op::Not);
  EXPECT_EQ(free_variables(*f), (std::set<std::string>{"x", "y", "z"}));
}

TEST(Parse, QuantifierScopesOverTheParenthesis) {
  auto f = parse_formula("exists z (E(x,z) & !E(z,y))", kGraphSig);
  ASSERT_EQ(f->op, Formula::Op::Exists);
  EXPECT_EQ(f->vars, (std::vector<std::string>{"z"}));
  EXPECT_EQ(f->kids[0]->op, Formula::Op::And);
  EXPECT_EQ(free_variables(*f), (std::set<std::string>{"x", "y"}));
}

TEST(Parse, PrecedenceAndImplication) {
  auto f = parse_formula("E(x,y) | E(y,x) & x = y -> x != y", kGraphSig);
  ASSERT_EQ(f->op, Formula::Op::Implies);
  ASSERT_EQ(f->kids[0]->op, Formula::Op::Or);
  EXPECT_EQ(f->kids[0]->kids[1]->op, Formula::Op::And);
  EXPECT_EQ(f->kids[1]->op, Formula::Op::Not);
  auto g = parse_formula("forall x, y E(x,y)", kGraphSig);
  ASSERT_EQ(g->op, Formula::Op::Forall);
  EXPECT_EQ(g->kids[0]->op, Formula::Op::Forall);
}

TEST(Parse, ErrorsCarryAnOffset) {
  try {
    parse_formula("E(x", kGraphSig);
    FAIL() << "accepted";
  } catch (const FormulaError& e) {
    EXPECT_NE(e.offset, FormulaError::npos_pos);
    EXPECT_LE(e.offset, 3u);
  }
  EXPECT_THROW(parse_formula("F(x)", kGraphSig), FormulaError);
  EXPECT_THROW(parse_formula("E(x,y,z)", kGraphSig), FormulaError);
  EXPECT_THROW(parse_formula("E(x,y) &", kGraphSig), FormulaError);
  EXPECT_THROW(parse_formula("E(x,y) extra", kGraphSig), FormulaError);
}

TEST(Parse, PrintedFormParsesBack) {
  auto f = parse_formula("forall a (exists b (E(a,b) -> !(a = b)) | true) & false", kGraphSig);
  auto g = parse_formula(to_string(*f), kGraphSig);
  EXPECT_EQ(to_string(*f), to_string(*g));
}

TEST(Eval, TrivialAndUnbound) {
  RelStructure one;
  one.add_element("a");
  one.declare("E", 2);
  EXPECT_TRUE(eval(one, parse_formula("x = x", kGraphSig), {{"x", "a"}}));
  EXPECT_FALSE(eval(one, parse_formula("E(x,x)", kGraphSig), {{"x", "a"}}));
  EXPECT_THROW(eval(one, parse_formula("E(x,y)", kGraphSig), {{"x", "a"}}), FormulaError);
}

TEST(Eval, SatisfyingIsLexicographic) {
  RelStructure s = path_structure(3);
  auto f = parse_formula("E(x,y)", kGraphSig);
  auto got = satisfying(s, f, {"x", "y"});
  EXPECT_EQ(got, (std::vector<Tuple>{{0, 1}, {1, 0}, {1, 2}, {2, 1}}));
  EXPECT_TRUE(std::is_sorted(got.begin(), got.end()));
  RelStructure empty;
  empty.declare("E", 2);
  auto none = satisfying(empty, f, {"x", "y"});
  EXPECT_TRUE(none.empty());
}

TEST(Eval, AgreesWithTheReferenceEvaluator) {
  auto r = lcw_test::reference_agreement(2024, 1000);
  EXPECT_EQ(r.instances, 1000u);
  EXPECT_EQ(r.agreed, r.instances) << r.first_failure;
  EXPECT_GT(r.assignments, 1000u);
}

TEST(Library, HasTheExpectedFormulas) {
  auto lib = builtin_formulas();
  EXPECT_GE(lib.size(), 6u);
  for (const char* name : {"lambda1", "lambda2", "dist_le6", "chi1", "chi2", "same_part", "encode_lt", "decode_lt"})
    EXPECT_TRUE(lib.count(name)) << name;
  for (const auto& [name, nf] : lib) {
    auto fv = free_variables(*nf.formula);
    EXPECT_EQ(std::vector<std::string>(fv.begin(), fv.end()), nf.params) << name;
    EXPECT_EQ(shadowed(*nf.formula, {fv.begin(), fv.end()}), "") << name;
  }
}

TEST(Library, DistanceFormulaMatchesBfs) {
  RelStructure p9 = path_structure(9);
  Evaluator ev(p9, builtin_formulas().at("dist_le6").formula, {"x", "y"});
  EXPECT_TRUE(ev({0, 6}));
  EXPECT_FALSE(ev({0, 7}));
  EXPECT_TRUE(ev({4, 4}));
  for (std::uint64_t s = 0; s < 40; ++s) {
    Graph g = gen_graph(derive_seed(61, s), 9, 0.15 + 0.05 * static_cast<double>(s % 4));
    RelStructure st = graph_structure(g);
    Evaluator e(st, builtin_formulas().at("dist_le6").formula, {"x", "y"});
    for (Index a = 0; a < g.size(); ++a) {
      auto d = bfs_distances(g, a);
      for (Index b = 0; b < g.size(); ++b) EXPECT_EQ(e({a, b}), d[b] && *d[b] <= 6) << "seed " << s;
    }
  }
}

TEST(Library, LambdaMatchesBuild) {
  for (std::uint64_t s = 0; s < 60; ++s) {
    const int n = 1 + static_cast<int>(s % 3);
    TModel m = gen_tmodel(derive_seed(62, s), n, 8, 3);
    RelStructure st = model_structure(m);
    Evaluator ev(st, parse_formula(edge_text(n), model_signature(n)), {"x", "y"});
    Graph g = build(m);
    for (Index a = 0; a < g.size(); ++a)
      for (Index b = 0; b < g.size(); ++b)
        EXPECT_EQ(ev({st.index_of(g.name(a)), st.index_of(g.name(b))}), a != b && g.adjacent(a, b)) << "seed " << s;
  }
}

TEST(Library, SamePartRecoversTheOPartition) {
  std::vector<BipartiteGraph> inputs = {half_graph(4), half_graph(7)};
  for (std::uint64_t s = 0; s < 25; ++s) inputs.push_back(build_bipartite(gen_o_partitionable(derive_seed(63, s), 14)));
  const auto lib = builtin_formulas();
  for (const auto& b : inputs) {
    auto parts = o_partition(b);
    ASSERT_GE(parts.size(), 2u);
    auto part = part_index(b, parts);
    RelStructure st = indexed_bipartite_structure(b, part);
    Evaluator sp(st, lib.at("same_part").formula, {"x", "y"});
    for (Index x = 0; x < b.size(); ++x)
      for (Index y = 0; y < b.size(); ++y) EXPECT_EQ(sp({x, y}), part[x] == part[y]) << b.graph.name(x) << "," << b.graph.name(y);
  }
}

TEST(Steps, CopyAddsTwinsAndMarks) {
  RelStructure k1;
  k1.add_element("v");
  RelStructure c = apply_step(k1, CopyStep{2});
  EXPECT_EQ(c.domain(), (std::vector<std::string>{"v/1", "v/2"}));
  EXPECT_TRUE(c.holds("F", {0, 1}));
  EXPECT_TRUE(c.holds("F", {1, 0}));
  EXPECT_FALSE(c.holds("F", {0, 0}));
  EXPECT_TRUE(c.holds("M1", {0}));
  EXPECT_TRUE(c.holds("M2", {1}));
  EXPECT_THROW(apply_step(k1, CopyStep{0}), FormulaError);
  EXPECT_THROW(apply_step(c, CopyStep{2}), FormulaError);
}

TEST(Steps, CopyKeepsRelationsInsideEachLayer) {
  RelStructure p = path_structure(3);
  RelStructure c = apply_step(p, CopyStep{3});
  EXPECT_EQ(c.size(), 9u);
  EXPECT_EQ(c.tuples("E").size(), 3 * p.tuples("E").size());
  EXPECT_TRUE(c.holds("E", {c.index_of("p1/2"), c.index_of("p2/2")}));
  EXPECT_FALSE(c.holds("E", {c.index_of("p1/1"), c.index_of("p2/2")}));
}

TEST(Steps, ColorAndInterpretation) {
  RelStructure p = path_structure(4);
  ColorStep col;
  col.valuation["P"] = {"p1", "p3"};
  RelStructure c = apply_step(p, col);
  EXPECT_TRUE(c.holds("P", {0}));
  EXPECT_FALSE(c.holds("P", {1}));
  EXPECT_THROW(apply_step(c, col), FormulaError);

  Interpretation in;
  in.nu = parse_formula("P(x)", c.signature());
  in.rho.push_back({"D", {"x", "y"}, parse_formula("exists z (E(x,z) & E(z,y)) & x != y", c.signature())});
  RelStructure out = apply_step(c, in);
  EXPECT_EQ(out.domain(), (std::vector<std::string>{"p1", "p3"}));
  EXPECT_TRUE(out.holds("D", {0, 1}));
  EXPECT_EQ(out.tuples("E").size(), 0u);  // kept, but no edge survives

  Interpretation empty;
  empty.nu = fo::truth(false);
  EXPECT_EQ(apply_step(p, empty).size(), 0u);

  Interpretation twice;
  twice.rho = {{"D", {"x"}, fo::truth(true)}, {"D", {"x"}, fo::truth(true)}};
  EXPECT_THROW(apply_step(p, twice), FormulaError);
}

TEST(Steps, FormulaEncodingMatchesTheDirectEncoding) {
  for (std::uint64_t s = 0; s < 40; ++s) {
    RelStructure m = gen_coupling(derive_seed(64, s), 1 + s % 5, s % 2 == 1);
    RelStructure viaf = encode_via_formulas(m);
    auto names = encoded_names(m);
    std::set<std::pair<std::string, std::string>> want, got;
    for (auto [a, b] : encode_generators(m)) want.emplace(names[a], names[b]);
    for (const auto& t : viaf.tuples("Lt")) got.emplace(viaf.element(t[0]), viaf.element(t[1]));
    EXPECT_EQ(got, want) << "seed " << s;
    ColoredPoset p = encode_poset(m);
    PairSet rel;
    for (const auto& t : viaf.tuples("Lt")) rel.emplace_back(t[0], t[1]);
    EXPECT_EQ(poset_from_generators(viaf.domain(), rel), p.poset) << "seed " << s;
    EXPECT_EQ(decode_via_formulas(to_structure(p)), decode_poset(p)) << "seed " << s;
  }
}
