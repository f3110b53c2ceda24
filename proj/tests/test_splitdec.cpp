#include <gtest/gtest.h>

#include <lcw/lcw.hpp>

using namespace lcw;

namespace {

std::vector<std::string> subset(const std::vector<std::string>& all, std::uint64_t mask) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < all.size(); ++i)
    if (mask >> i & 1) out.push_back(all[i]);
  return out;
}

std::vector<int> gamma_of(const Graph& g, const TModel& m) {
  std::vector<int> gamma(g.size(), 0);
  for (Index v : leaves(m)) gamma[g.index_of(m[v].id)] = m[v].color;
  return gamma;
}

}  // namespace

TEST(VerifySplit, MonochromaticP4CellFails) {
  Graph g = path_graph(4);
  auto r = verify_split(g, {1, 1, 1, 1}, 1, 5);
  ASSERT_FALSE(r.ok());
  EXPECT_NE(r.failures[0].find("cell 1"), std::string::npos);
  EXPECT_NE(r.failures[0].find("P4"), std::string::npos);
}

TEST(VerifySplit, AlternatingC4IsValid) {
  Graph g = cycle_graph(4);
  auto r = verify_split(g, {1, 2, 1, 2}, 2, 2);
  EXPECT_TRUE(r.ok());
  EXPECT_EQ(r.cell_heights.at(1), 2u);
  EXPECT_EQ(r.pair_heights.at({1, 2}), 2u);
}

TEST(VerifySplit, EmptyGraphIsValid) { EXPECT_TRUE(verify_split(Graph{}, {}, 1, 1).ok()); }

TEST(VerifySplit, BadColouringsAreReported) {
  EXPECT_FALSE(verify_split(path_graph(2), {1}, 1, 1).ok());
  EXPECT_FALSE(verify_split(path_graph(2), {1, 3}, 2, 1).ok());
}

TEST(VerifySplit, TooTallCellFails) {
  // P3 needs height 3.
  EXPECT_FALSE(verify_split(path_graph(3), {1, 1, 1}, 1, 2).ok());
  EXPECT_TRUE(verify_split(path_graph(3), {1, 1, 1}, 1, 3).ok());
}

TEST(SplitFromModel, SingleColourGivesTheCotreeSkeleton) {
  TModel t = gen_clean_cotree(5, 8, 4);
  Split s = split_from_tmodel(t);
  EXPECT_EQ(s.N, 1);
  EXPECT_TRUE(s.pair_witness.empty());
  ASSERT_EQ(s.cell_witness.size(), 1u);
  EXPECT_TRUE(same_tree(s.cell_witness.at(1), t));
  EXPECT_TRUE(is_cotree(s.cell_witness.at(1)));
  EXPECT_TRUE(verify_split(s).ok());
}

TEST(SplitFromModel, ReversedTableBecomesOWithReversedChildren) {
  TModel m;
  m.n = 2;
  Index r = m.add_node("r", NodeKind::C);
  m.set_kappa(r, 2, 1, true);
  m.add_leaf("a", 1, r);
  m.add_leaf("b", 2, r);
  m.add_leaf("c", 1, r);
  Split s = split_from_tmodel(m);
  const TModel& p = s.pair_witness.at({1, 2});
  EXPECT_EQ(bicotree_type(p, p.root), NodeType::O);
  std::vector<std::string> order;
  for (Index c : p[p.root].children) order.push_back(p[c].id);
  EXPECT_EQ(order, (std::vector<std::string>{"c", "b", "a"}));
  Graph g = build(m);
  EXPECT_EQ(build_bipartite(p).graph, g);
  EXPECT_TRUE(verify_split(s).ok());
}

TEST(SplitFromModel, RandomModelsGiveValidSplits) {
  for (std::uint64_t s = 0; s < 120; ++s) {
    TModel m = gen_tmodel(derive_seed(41, s), 3, 12, 3);
    Split sp = split_from_tmodel(m);
    auto r = verify_split(sp);
    EXPECT_TRUE(r.ok()) << "seed " << s << ": " << (r.failures.empty() ? "" : r.failures[0]);
    for (const auto& [ij, t] : sp.pair_witness) {
      BipartiteGraph want = semi_induced(sp.graph, sp.cell(ij.first), sp.cell(ij.second));
      EXPECT_EQ(build_bipartite(t).graph, want.graph) << "seed " << s;
      EXPECT_LE(height(t), sp.h);
    }
    for (const auto& [i, t] : sp.cell_witness) EXPECT_EQ(build(t), induced_subgraph(sp.graph, sp.cell(i)));
  }
}

TEST(Amalgam, AlternatingC4) {
  Graph g = cycle_graph(4);
  Amalgam a = amalgam_build(g, {1, 2, 1, 2}, 2);
  EXPECT_TRUE(validate_amalgam(a).empty());
  for (int i : {1, 2}) {
    const TModel& t = a.cell_trees.at(i);
    EXPECT_EQ(t[t.root].type, NodeType::U);
    EXPECT_EQ(build(t).edge_count(), 0u);
  }
  const TModel& p = a.pair_trees.at({1, 2});
  EXPECT_EQ(bicotree_type(p, p.root), NodeType::B);
  EXPECT_EQ(sbuild(a), g);
}

TEST(Amalgam, K1IsTrivial) {
  Graph g({"v"});
  Amalgam a = amalgam_build(g, {1}, 1);
  EXPECT_EQ(a.cell_trees.at(1).size(), 1u);
  EXPECT_TRUE(a.pair_trees.empty());
  EXPECT_EQ(sbuild(a), g);
  EXPECT_EQ(coupling_view(a).size(), 2u);
  Amalgam a2 = amalgam_build(g, {1}, 2);
  EXPECT_EQ(coupling_view(a2).size(), 3u);
}

TEST(Amalgam, EveryValidTwoCellSplitOfP4) {
  Graph g = path_graph(4);
  std::size_t valid = 0;
  for (std::uint64_t mask = 0; mask < 16; ++mask) {
    std::vector<int> gamma(4);
    for (int v = 0; v < 4; ++v) gamma[v] = 1 + static_cast<int>(mask >> v & 1);
    if (!verify_split(g, gamma, 2, 3).ok()) continue;
    ++valid;
    EXPECT_EQ(sbuild(amalgam_build(g, gamma, 2)), g);
  }
  EXPECT_EQ(valid, 14u);  // all but the two monochromatic colourings
}

TEST(Amalgam, SingleCellOfACograph) {
  TModel t = gen_clean_cotree(8, 9, 4);
  Graph g = build(t);
  Amalgam a = amalgam_build(g, std::vector<int>(g.size(), 1), 1);
  EXPECT_EQ(sbuild(a), g);
}

TEST(Amalgam, NonCographCellIsRejected) {
  EXPECT_THROW(amalgam_build(path_graph(4), {1, 1, 1, 1}, 1), NotCograph);
  EXPECT_THROW(amalgam_build(path_graph(2), {1, 4}, 2), AmalgamError);
}

TEST(Amalgam, RoundTripAndExhaustiveRestriction) {
  std::size_t subsets = 0;
  for (std::uint64_t s = 0; s < 60; ++s) {
    TModel m = gen_tmodel(derive_seed(42, s), 3, 8, 3);
    Graph g = build(m);
    Amalgam a = amalgam_build(g, gamma_of(g, m), 3);
    ASSERT_TRUE(validate_amalgam(a).empty());
    ASSERT_EQ(sbuild(a), g) << "seed " << s;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << a.ground.size()); ++mask) {
      auto w = subset(a.ground, mask);
      Amalgam r = amalgam_restrict(a, w);
      ASSERT_EQ(sbuild(r), induced_subgraph(g, w)) << "seed " << s << " mask " << mask;
      ++subsets;
    }
  }
  EXPECT_GT(subsets, 1000u);
}

TEST(Amalgam, RestrictToGroundAndToNothing) {
  TModel m = gen_tmodel(43, 2, 8, 3);
  Graph g = build(m);
  Amalgam a = amalgam_build(g, gamma_of(g, m), 2);
  Amalgam all = amalgam_restrict(a, a.ground);
  EXPECT_TRUE(amalgam_equal_fixing_ground(all, a));
  Amalgam none = amalgam_restrict(a, {});
  EXPECT_TRUE(none.ground.empty());
  EXPECT_TRUE(sbuild(none).empty());
  EXPECT_THROW(amalgam_restrict(a, {"not-a-vertex"}), AmalgamError);
}

TEST(Amalgam, BrokenInjectionIsReported) {
  Amalgam a = amalgam_build(cycle_graph(4), {1, 2, 1, 2}, 2);
  Amalgam b = a;
  b.iota_cell.begin()->second = "nowhere";
  EXPECT_FALSE(validate_amalgam(b).empty());
  EXPECT_THROW(sbuild(b), AmalgamError);
}

TEST(Amalgam, JsonRoundTrip) {
  TModel m = gen_tmodel(44, 3, 9, 3);
  Graph g = build(m);
  Amalgam a = amalgam_build(g, gamma_of(g, m), 3);
  Amalgam back = amalgam_from_json(to_json(a));
  EXPECT_TRUE(amalgam_equal_fixing_ground(a, back));
  EXPECT_EQ(sbuild(back), g);
}

TEST(Coupling, ChainsAreTotalAndSeparate) {
  for (std::uint64_t s = 0; s < 60; ++s) {
    TModel m = gen_tmodel(derive_seed(45, s), 3, 10, 3);
    Graph g = build(m);
    Amalgam a = amalgam_build(g, gamma_of(g, m), 3);
    RelStructure c = coupling_view(a);
    EXPECT_TRUE(chain_union_violations(c, "Lt").empty()) << "seed " << s;
    // Comparable elements live in the same tree, below the same parent.
    auto prefix = [](const std::string& x) { return x.substr(0, x.find(':')); };
    auto parent_of = [&](Index x) {
      std::string tree = prefix(c.element(x));
      const TModel& t = tree.find(',') == std::string::npos
                            ? a.cell_trees.at(std::stoi(tree.substr(1)))
                            : a.pair_trees.at(parse_pair_key(tree.substr(1)));
      const auto& node = t[t.index_of(c.element(x).substr(tree.size() + 1))];
      return t[node.parent].id;
    };
    for (const auto& t : c.tuples("Lt")) {
      EXPECT_EQ(prefix(c.element(t[0])), prefix(c.element(t[1])));
      EXPECT_EQ(parent_of(t[0]), parent_of(t[1]));
    }
    // Ground size, tree nodes, and the E-reduct stays sparse.
    std::size_t nodes = a.ground.size();
    for (const auto& [i, t] : a.cell_trees) nodes += t.size();
    for (const auto& [p, t] : a.pair_trees) nodes += t.size();
    EXPECT_EQ(c.size(), nodes);
    Graph e(c.domain());
    for (const auto& t : c.tuples("E"))
      if (t[0] < t[1]) e.add_edge(t[0], t[1]);
    EXPECT_LE(degeneracy(e), 2u) << "seed " << s;
  }
}

TEST(Coupling, AttachmentsLinkEachVertexToAllItsCopies) {
  Amalgam a = amalgam_build(cycle_graph(6), {1, 2, 3, 1, 2, 3}, 3);
  RelStructure c = coupling_view(a);
  for (const auto& v : a.ground) {
    Index e = c.index_of("V:" + v);
    std::size_t deg = 0;
    for (Index u = 0; u < c.size(); ++u) deg += c.holds("E", {e, u});
    EXPECT_EQ(deg, 3u);  // one cell tree and two pair trees
  }
}
