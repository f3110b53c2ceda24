#include <gtest/gtest.h>

#include <lcw/lcw.hpp>

using namespace lcw;

namespace {

Graph p3() {
  Graph g({"a", "b", "c"});
  g.add_edge("a", "b");
  g.add_edge("b", "c");
  return g;
}

// Tiny oracle: a graph on <= 10 vertices is a cograph iff no 4-subset
// induces a path, checked by direct edge counting on each subset.
bool brute_force_p4_free(const Graph& g) {
  const std::size_t n = g.size();
  for (Index a = 0; a < n; ++a)
    for (Index b = a + 1; b < n; ++b)
      for (Index c = b + 1; c < n; ++c)
        for (Index d = c + 1; d < n; ++d) {
          Index q[4] = {a, b, c, d};
          int edges = 0, deg[4] = {0, 0, 0, 0};
          for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j)
              if (g.adjacent(q[i], q[j])) {
                ++edges;
                ++deg[i];
                ++deg[j];
              }
          int ones = 0, twos = 0;
          for (int i : deg) ones += i == 1, twos += i == 2;
          if (edges == 3 && ones == 2 && twos == 2) return false;
        }
  return true;
}

}  // namespace

TEST(Cotree, P3DecomposesToJoinOverUnion) {
  TModel t = cograph_decompose(p3());
  EXPECT_EQ(t[t.root].type, NodeType::J);
  EXPECT_EQ(height(t), 3u);
  ASSERT_EQ(t[t.root].children.size(), 2u);
  Index leaf = npos, uni = npos;
  for (Index c : t[t.root].children) (t[c].is_leaf() ? leaf : uni) = c;
  ASSERT_NE(leaf, npos);
  ASSERT_NE(uni, npos);
  EXPECT_EQ(t[leaf].id, "b");
  EXPECT_EQ(t[uni].type, NodeType::U);
  std::set<std::string> under;
  for (Index l : leaves_below(t, uni)) under.insert(t[l].id);
  EXPECT_EQ(under, (std::set<std::string>{"a", "c"}));
  EXPECT_TRUE(is_clean_cotree(t));
  EXPECT_EQ(build(t), p3());
}

TEST(Cotree, K1IsASingleLeaf) {
  TModel t = cograph_decompose(Graph({"v"}));
  EXPECT_EQ(t.size(), 1u);
  EXPECT_TRUE(t[t.root].is_leaf());
  EXPECT_TRUE(is_clean_cotree(t));
}

TEST(Cotree, EmptyGraphIsAnInputError) { EXPECT_THROW(cograph_decompose(Graph{}), ModelError); }

TEST(Cotree, P4RaisesWithInducedP4Witness) {
  Graph g = path_graph(4);
  try {
    cograph_decompose(g);
    FAIL() << "P4 accepted";
  } catch (const NotCograph& e) {
    ASSERT_EQ(e.witness.size(), 4u);
    Graph w = induced_subgraph(g, e.witness);
    EXPECT_EQ(w.edge_count(), 3u);
    for (std::size_t i = 0; i + 1 < 4; ++i) EXPECT_TRUE(w.adjacent(w.index_of(e.witness[i]), w.index_of(e.witness[i + 1])));
  }
}

TEST(Cotree, RejectsExactlyTheGraphsWithAnInducedP4) {
  std::size_t rejected = 0, accepted = 0;
  for (std::uint64_t s = 0; s < 400; ++s) {
    Graph g = gen_graph(derive_seed(3, s), 2 + s % 8, 0.2 + 0.1 * static_cast<double>(s % 6));
    const bool cograph = brute_force_p4_free(g);
    EXPECT_EQ(cograph, !has_induced_path(g, 4));
    try {
      TModel t = cograph_decompose(g);
      ++accepted;
      EXPECT_TRUE(cograph) << "seed " << s;
      EXPECT_TRUE(is_clean_cotree(t));
      EXPECT_EQ(build(t), g);
    } catch (const NotCograph& e) {
      ++rejected;
      EXPECT_FALSE(cograph) << "seed " << s;
      EXPECT_FALSE(brute_force_p4_free(induced_subgraph(g, e.witness)));
    }
  }
  EXPECT_GT(rejected, 50u);
  EXPECT_GT(accepted, 50u);
}

TEST(Cotree, CleanlinessChecks) {
  TModel unary = make_node(NodeKind::A, NodeType::U, cotree_kappa(NodeType::U), {single_leaf("a")}, 1);
  EXPECT_FALSE(is_clean_cotree(unary));
  TModel inner = cotree_node(NodeType::J, {single_leaf("a"), single_leaf("b")});
  TModel jj = cotree_node(NodeType::J, {inner, single_leaf("c")});
  EXPECT_FALSE(is_clean_cotree(jj));
  TModel ok = cotree_node(NodeType::U, {inner, single_leaf("c")});
  EXPECT_TRUE(is_clean_cotree(ok));
}

TEST(Cotree, ModelRoundTripIsUnique) {
  for (std::uint64_t s = 0; s < 300; ++s) {
    TModel t = gen_clean_cotree(derive_seed(4, s), 10, 5);
    ASSERT_TRUE(is_clean_cotree(t));
    Graph g = build(t);
    TModel back = cograph_decompose(g);
    EXPECT_TRUE(model_iso_fixing_ground(back, t)) << "seed " << s;
    EXPECT_EQ(build(back), g);
    EXPECT_LE(height(back), 5u);
  }
}

TEST(Cotree, OutputIsDeterministic) {
  Graph g = build(gen_clean_cotree(99, 10, 5));
  EXPECT_EQ(to_json(cograph_decompose(g)).dump(), to_json(cograph_decompose(g)).dump());
}
