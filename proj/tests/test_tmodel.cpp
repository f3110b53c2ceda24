#include <gtest/gtest.h>

#include <functional>

#include <lcw/lcw.hpp>

using namespace lcw;

namespace {

// C-root, kappa(1,2) only, leaves a1 b1 a2 b2 coloured 1 2 1 2.
TModel half_graph_model() {
  TModel m;
  m.n = 2;
  Index r = m.add_node("r", NodeKind::C);
  m.set_kappa(r, 1, 2, true);
  m.add_leaf("a1", 1, r);
  m.add_leaf("b1", 2, r);
  m.add_leaf("a2", 1, r);
  m.add_leaf("b2", 2, r);
  return m;
}

std::set<std::pair<std::string, std::string>> edge_names(const Graph& g) {
  std::set<std::pair<std::string, std::string>> out;
  for (auto [a, b] : g.edges()) out.emplace(std::min(g.name(a), g.name(b)), std::max(g.name(a), g.name(b)));
  return out;
}

std::vector<std::string> subset(const std::vector<std::string>& all, std::uint64_t mask) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < all.size(); ++i)
    if (mask >> i & 1) out.push_back(all[i]);
  return out;
}

// All ordered rooted trees on k nodes, as parent arrays in preorder.
void for_each_plane_tree(std::size_t k, const std::function<void(const std::vector<Index>&)>& fn) {
  // Dyck words of length 2(k-1): '(' descends to a new child, ')' returns.
  std::string word;
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t open, std::size_t close) {
    if (open == k - 1 && close == k - 1) {
      std::vector<Index> parent{0};
      std::vector<Index> stack{0};
      for (char c : word) {
        if (c == '(') {
          parent.push_back(stack.back());
          stack.push_back(parent.size() - 1);
        } else {
          stack.pop_back();
        }
      }
      fn(parent);
      return;
    }
    if (open < k - 1) {
      word.push_back('(');
      rec(open + 1, close);
      word.pop_back();
    }
    if (close < open) {
      word.push_back(')');
      rec(open, close + 1);
      word.pop_back();
    }
  };
  rec(0, 0);
}

}  // namespace

TEST(Build, SingleLeafIsK1) {
  Graph g = build(single_leaf("v"));
  EXPECT_EQ(g.size(), 1u);
  EXPECT_EQ(g.edge_count(), 0u);
}

TEST(Build, ARootWithTrueTableIsK2) {
  TModel m;
  Index r = m.add_node("r", NodeKind::A);
  m.set_kappa(r, 1, 1, true);
  m.add_leaf("x", 1, r);
  m.add_leaf("y", 1, r);
  Graph g = build(m);
  EXPECT_EQ(edge_names(g), (std::set<std::pair<std::string, std::string>>{{"x", "y"}}));
}

TEST(Build, HalfGraphH2) {
  Graph g = build(half_graph_model());
  EXPECT_EQ(edge_names(g), (std::set<std::pair<std::string, std::string>>{{"a1", "b1"}, {"a1", "b2"}, {"a2", "b2"}}));
  BipartiteGraph b = build_bipartite(half_graph_model());
  EXPECT_EQ(b.side[b.graph.index_of("b1")], 2);
}

TEST(Build, MalformedModelIsRejected) {
  TModel m = half_graph_model();
  m[1].color = 3;
  EXPECT_THROW(build(m), ModelError);
}

TEST(Restrict, ToAllLeavesIsIdentity) {
  TModel m = half_graph_model();
  TModel r = restrict(m, ground(m));
  EXPECT_TRUE(same_tree(m, r));
  EXPECT_TRUE(model_iso_fixing_ground(m, r));
}

TEST(Restrict, HalfGraphToOneEdge) {
  TModel r = restrict(half_graph_model(), {"a1", "b2"});
  EXPECT_EQ(r[r.root].kind, NodeKind::C);
  EXPECT_EQ(r[r.root].children.size(), 2u);
  EXPECT_EQ(build(r).edge_count(), 1u);
}

TEST(Restrict, EmptySetGivesEmptyModel) {
  EXPECT_TRUE(restrict(half_graph_model(), {}).empty());
  EXPECT_THROW(restrict(half_graph_model(), {"r"}), ModelError);
  EXPECT_THROW(restrict(half_graph_model(), {"zz"}), ModelError);
}

TEST(Restrict, KeepsUnaryNodes) {
  TModel m = gen_tmodel(3, 2, 8, 4);
  auto g = ground(m);
  TModel r = restrict(m, {g.front()});
  EXPECT_EQ(height(r), depths(m)[leaves(m).front()] + 1);
}

TEST(Restrict, CommutesWithInducedSubgraphExhaustively) {
  std::size_t subsets = 0;
  for (std::uint64_t s = 0; s < 120; ++s) {
    TModel m = gen_tmodel(derive_seed(11, s), 1 + static_cast<int>(s % 3), 8, 4);
    Graph g = build(m);
    auto leaves_ = ground(m);
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << leaves_.size()); ++mask) {
      auto x = subset(leaves_, mask);
      ASSERT_EQ(build(restrict(m, x)), induced_subgraph(g, x)) << "seed " << s << " mask " << mask;
      ++subsets;
    }
  }
  EXPECT_GT(subsets, 1000u);
}

TEST(Subtree, RootLeafAndInducedGraph) {
  TModel m = gen_tmodel(5, 2, 8, 4);
  EXPECT_TRUE(same_tree(subtree_at(m, m.root), m));
  Index leaf = leaves(m).front();
  TModel one = subtree_at(m, leaf);
  EXPECT_EQ(one.size(), 1u);
  EXPECT_EQ(height(one), 1u);
  EXPECT_THROW(subtree_at(m, "no-such-node"), ModelError);
  Graph g = build(m);
  for (Index u = 0; u < m.size(); ++u) {
    std::vector<std::string> under;
    for (Index l : leaves_below(m, u)) under.push_back(m[l].id);
    EXPECT_EQ(build(subtree_at(m, u)), induced_subgraph(g, under));
  }
}

TEST(Sigma, Sigma3OfSingleNode) {
  RelStructure s = encode_sigma3(single_leaf("v"));
  EXPECT_EQ(s.size(), 1u);
  EXPECT_EQ(s.tuples("Root").size(), 1u);
  EXPECT_TRUE(s.tuples("E").empty());
  EXPECT_TRUE(s.tuples("Ord").empty());
}

TEST(Sigma, Sigma3OfOrderedPair) {
  TModel m;
  Index r = m.add_node("root", NodeKind::C);
  m.add_leaf("c1", 1, r);
  m.add_leaf("c2", 1, r);
  RelStructure s = encode_sigma3(m);
  EXPECT_TRUE(s.holds("Root", {s.index_of("root")}));
  EXPECT_TRUE(s.holds("E", {s.index_of("root"), s.index_of("c1")}));
  EXPECT_TRUE(s.holds("E", {s.index_of("root"), s.index_of("c2")}));
  EXPECT_TRUE(s.holds("Ord", {s.index_of("c1"), s.index_of("c2")}));
  EXPECT_FALSE(s.holds("Ord", {s.index_of("c2"), s.index_of("c1")}));
}

TEST(Sigma, Sigma2OrderOnHalfGraph) {
  TModel m = half_graph_model();
  RelStructure s = encode_sigma2(m);
  std::vector<std::string> order = {"a1", "b1", "a2", "b2"};
  for (std::size_t i = 0; i < order.size(); ++i)
    for (std::size_t j = 0; j < order.size(); ++j)
      EXPECT_EQ(s.holds("Lt", {s.index_of(order[i]), s.index_of(order[j])}), i < j);
  for (const auto& v : order) EXPECT_TRUE(s.holds("Lt", {s.index_of("r"), s.index_of(v)}));
}

TEST(Sigma, LeavesComparableIffInfimumIsC) {
  for (std::uint64_t s = 0; s < 80; ++s) {
    TModel m = gen_tmodel(derive_seed(21, s), 2, 9, 5);
    RelStructure st = encode_sigma2(m);
    for (Index x : leaves(m))
      for (Index y : leaves(m)) {
        if (x == y) continue;
        bool comparable = st.holds("Lt", {st.index_of(m[x].id), st.index_of(m[y].id)}) ||
                          st.holds("Lt", {st.index_of(m[y].id), st.index_of(m[x].id)});
        EXPECT_EQ(comparable, m[lca(m, x, y)].kind == NodeKind::C);
      }
  }
}

TEST(Sigma, Sigma1InfimumRelationIsTheLca) {
  TModel m = gen_tmodel(8, 2, 8, 4);
  RelStructure s = encode_sigma1(m);
  for (Index a = 0; a < m.size(); ++a)
    for (Index b = 0; b < m.size(); ++b)
      EXPECT_TRUE(s.holds("Inf", {s.index_of(m[a].id), s.index_of(m[b].id), s.index_of(m[lca(m, a, b)].id)}));
}

TEST(Sigma, Sigma3RoundTripOnAllTreesUpTo8Nodes) {
  std::size_t trees = 0;
  for (std::size_t k = 1; k <= 8; ++k)
    for_each_plane_tree(k, [&](const std::vector<Index>& parent) {
      std::vector<Index> internal;
      std::vector<std::size_t> kids(k, 0);
      for (Index v = 1; v < k; ++v) ++kids[parent[v]];
      for (Index v = 0; v < k; ++v)
        if (kids[v]) internal.push_back(v);
      for (std::uint64_t cmask = 0; cmask < (std::uint64_t{1} << internal.size()); ++cmask) {
        std::vector<NodeKind> kind(k, NodeKind::Leaf);
        for (std::size_t i = 0; i < internal.size(); ++i)
          kind[internal[i]] = cmask >> i & 1 ? NodeKind::C : NodeKind::A;
        TModel m;
        for (Index v = 0; v < k; ++v) {
          Index nv = m.add_node("n" + std::to_string(v), kind[v], v == 0 ? npos : parent[v]);
          if (kind[v] == NodeKind::Leaf) m[nv].color = 1;
        }
        TModel back = decode_sigma3(encode_sigma3(m), height(m));
        ASSERT_TRUE(same_tree(back, demote_unary_c(m))) << format_tree(m);
        ++trees;
      }
    });
  EXPECT_GT(trees, 10000u);
}

TEST(Sigma, Sigma3DecodeRejectsTooSmallHeight) {
  TModel m = half_graph_model();
  EXPECT_THROW(decode_sigma3(encode_sigma3(m), 1), ModelError);
  EXPECT_NO_THROW(decode_sigma3(encode_sigma3(m), 2));
}

TEST(Sigma, Sigma3RoundTripOnPathShapedTree) {
  TModel m;
  Index prev = m.add_node("u0", NodeKind::C);
  for (int i = 1; i < 6; ++i) {
    m.add_leaf("l" + std::to_string(i), 1, prev);
    prev = m.add_node("u" + std::to_string(i), i % 2 ? NodeKind::A : NodeKind::C, prev);
  }
  m.add_leaf("last", 1, prev);
  m.add_leaf("last2", 1, prev);
  EXPECT_EQ(height(m), 7u);
  EXPECT_TRUE(same_tree(decode_sigma3(encode_sigma3(m), 7), demote_unary_c(m)));
}

TEST(Iso, ReflexiveAndIgnoresAChildOrder) {
  TModel m = gen_tmodel(4, 2, 8, 4);
  EXPECT_TRUE(model_iso_fixing_ground(m, m));
  TModel a;
  Index r = a.add_node("r", NodeKind::A);
  a.set_kappa(r, 1, 1, true);
  a.add_leaf("x", 1, r);
  a.add_leaf("y", 1, r);
  TModel b;
  r = b.add_node("r", NodeKind::A);
  b.set_kappa(r, 1, 1, true);
  b.add_leaf("y", 1, r);
  b.add_leaf("x", 1, r);
  EXPECT_TRUE(model_iso_fixing_ground(a, b));
}

TEST(Iso, CChildSwapIsDetected) {
  TModel m = half_graph_model();
  TModel w = m;
  std::swap(w[w.root].children[0], w[w.root].children[1]);
  EXPECT_FALSE(model_iso_fixing_ground(m, w));
}

TEST(Iso, TableAndColourChangesAreDetected) {
  TModel m = half_graph_model();
  TModel w = m;
  w.set_kappa(w.root, 2, 1, true);
  EXPECT_FALSE(model_iso_fixing_ground(m, w));
  TModel c = m;
  c[1].color = 2;
  EXPECT_FALSE(model_iso_fixing_ground(m, c));
}

TEST(Validate, AsymmetricTableOnANode) {
  TModel m;
  m.n = 2;
  Index r = m.add_node("r", NodeKind::A);
  m.set_kappa(r, 1, 2, true);
  m.add_leaf("x", 1, r);
  m.add_leaf("y", 2, r);
  auto v = validate(m);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_NE(v[0].find("symmetric"), std::string::npos);
  m.set_kappa(r, 2, 1, true);
  EXPECT_TRUE(validate(m).empty());
}

TEST(Validate, ValidModelsHaveEmptyReportAndHeightCountsVertices) {
  for (std::uint64_t s = 0; s < 50; ++s) EXPECT_TRUE(validate(gen_tmodel(s, 3, 10, 5)).empty());
  EXPECT_EQ(height(single_leaf("v")), 1u);
  EXPECT_EQ(height(half_graph_model()), 2u);
}

TEST(Json, TModelRoundTrip) {
  for (std::uint64_t s = 0; s < 30; ++s) {
    TModel m = gen_tmodel(s, 2, 9, 4);
    TModel back = tmodel_from_json(to_json(m));
    EXPECT_TRUE(same_tree(m, back));
    EXPECT_TRUE(model_iso_fixing_ground(m, back));
  }
}

TEST(Json, MalformedModelsAreRejected) {
  EXPECT_ANY_THROW(tmodel_from_json(nlohmann::ordered_json::parse(R"({"n": 1})")));
  EXPECT_ANY_THROW(tmodel_from_json(nlohmann::ordered_json::parse(R"([1,2,3])")));
}
