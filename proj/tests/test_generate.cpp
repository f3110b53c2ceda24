#include <gtest/gtest.h>

#include <lcw/lcw.hpp>

using namespace lcw;

TEST(Generate, SameSeedSameOutput) {
  EXPECT_EQ(to_json(gen_clean_cotree(7, 12, 5)).dump(), to_json(gen_clean_cotree(7, 12, 5)).dump());
  EXPECT_EQ(to_json(gen_tmodel(7, 3, 12, 4)).dump(), to_json(gen_tmodel(7, 3, 12, 4)).dump());
  EXPECT_EQ(gen_graph(7, 10, 0.4), gen_graph(7, 10, 0.4));
  EXPECT_EQ(gen_coupling(7, 6), gen_coupling(7, 6));
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
}

TEST(Generate, BoundsAreChecked) {
  EXPECT_THROW(gen_clean_cotree(1, 0, 3), GenerationError);
  EXPECT_THROW(gen_clean_cotree(1, 3, 0), GenerationError);
  EXPECT_THROW(gen_clean_bicotree(1, 1, 3, NodeType::O), GenerationError);
  EXPECT_THROW(gen_clean_bicotree(1, 5, 2, NodeType::O), GenerationError);
  EXPECT_THROW(gen_o_partitionable(1, 7), GenerationError);
  EXPECT_THROW(gen_tmodel(1, 0, 5, 3), GenerationError);
  EXPECT_NO_THROW(gen_o_partitionable(1, 8));
}

TEST(Generate, CotreesAreCleanAndWithinBounds) {
  for (std::uint64_t s = 0; s < 200; ++s) {
    TModel t = gen_clean_cotree(derive_seed(71, s), 12, 5);
    EXPECT_TRUE(is_clean_cotree(t)) << "seed " << s;
    EXPECT_LE(height(t), 5u);
    EXPECT_LE(leaves(t).size(), 12u);
    EXPECT_TRUE(validate(t).empty());
  }
}

// Clean bicotrees are not unique, so the round trip is checked on graphs.
TEST(Generate, BicotreesAreCleanAndRoundTrip) {
  for (std::uint64_t s = 0; s < 200; ++s) {
    std::optional<NodeType> root;
    if (s % 4 == 1) root = NodeType::O;
    TModel t = gen_clean_bicotree(derive_seed(72, s), 12, 4, root);
    EXPECT_TRUE(is_clean_bicotree(t)) << "seed " << s;
    EXPECT_LE(height(t), 4u);
    if (root) {
      EXPECT_EQ(bicotree_type(t, t.root), NodeType::O);
    }
    BipartiteGraph b = build_bipartite(t);
    TModel back = sob_decompose(b);
    EXPECT_TRUE(is_clean_bicotree(back)) << "seed " << s;
    EXPECT_EQ(build_bipartite(back), b) << "seed " << s;
  }
}

TEST(Generate, RawBicotreesAreBicotrees) {
  for (std::uint64_t s = 0; s < 100; ++s) {
    TModel t = gen_raw_bicotree(derive_seed(73, s), 10, 4);
    EXPECT_TRUE(is_bicotree(t)) << "seed " << s;
    EXPECT_LE(height(t), 4u);
  }
}

TEST(Generate, OPartitionableInstances) {
  for (std::uint64_t s = 0; s < 60; ++s) {
    TModel t = gen_o_partitionable(derive_seed(74, s), 16);
    EXPECT_GE(leaves(t).size(), 8u);
    EXPECT_LE(leaves(t).size(), 16u);
    EXPECT_EQ(bicotree_type(t, t.root), NodeType::O);
    BipartiteGraph b = build_bipartite(t);
    auto parts = o_partition(b);
    EXPECT_TRUE(is_o_partition(b, parts));
    EXPECT_GE(parts.size(), 2u);
  }
}

TEST(Generate, ModelsRespectColoursAndValidate) {
  for (std::uint64_t s = 0; s < 100; ++s) {
    TModel m = gen_tmodel(derive_seed(75, s), 3, 10, 4);
    EXPECT_TRUE(validate(m).empty()) << "seed " << s;
    EXPECT_LE(height(m), 4u);
    for (Index l : leaves(m)) {
      EXPECT_GE(m[l].color, 1);
      EXPECT_LE(m[l].color, 3);
    }
  }
}

TEST(Generate, CouplingsAreWellFormed) {
  for (std::uint64_t s = 0; s < 100; ++s) {
    RelStructure m = gen_coupling(derive_seed(76, s), 1 + s % 7, s % 2 == 1);
    EXPECT_NO_THROW(check_coupling(m)) << "seed " << s;
    RelStructure sp = gen_sparse_coupling(derive_seed(77, s), 3 + s % 6);
    EXPECT_NO_THROW(check_coupling(sp)) << "seed " << s;
  }
}

TEST(Generate, ColouringsStayInRange) {
  auto z = gen_colouring(5, {"a", "b", "c", "d"}, 3);
  EXPECT_EQ(z.size(), 4u);
  for (const auto& [v, c] : z) {
    EXPECT_GE(c, 1);
    EXPECT_LE(c, 3);
  }
}
