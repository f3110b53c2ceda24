#include <gtest/gtest.h>

#include <lcw/lcw.hpp>

using namespace lcw;

namespace {

RelStructure coupling(std::vector<std::string> elements, std::vector<std::pair<std::string, std::string>> lt,
                      std::vector<std::pair<std::string, std::string>> e) {
  RelStructure s;
  for (const auto& x : elements) s.add_element(x);
  s.declare("Lt", 2);
  s.declare("E", 2);
  s.declare("Gr", 1);
  for (const auto& x : elements) s.add("Gr", {x});
  for (const auto& [a, b] : lt) s.add("Lt", {a, b});
  for (const auto& [a, b] : e) {
    s.add("E", {a, b});
    s.add("E", {b, a});
  }
  return s;
}

std::set<std::pair<std::string, std::string>> order_pairs(const ColoredPoset& p) {
  std::set<std::pair<std::string, std::string>> out;
  for (auto [a, b] : p.poset.relation()) out.emplace(p.poset.element(a), p.poset.element(b));
  return out;
}

// What decode should return: the {Lt, E, Gr} structure on the ground.
RelStructure ground_reduct(const RelStructure& m) {
  IndexSet g;
  for (Index a = 0; a < m.size(); ++a)
    if (m.holds("Gr", {a})) g.push_back(a);
  return reduct(substructure(m, g), {"Lt", "E", "Gr"});
}

}  // namespace

TEST(Encode, SingleElement) {
  ColoredPoset p = encode_poset(coupling({"u"}, {}, {}));
  EXPECT_EQ(p.size(), 4u);
  EXPECT_EQ(order_pairs(p), (std::set<std::pair<std::string, std::string>>{{"u/2", "u/1"}, {"u/3", "u/1"}, {"u/4", "u/1"}}));
  EXPECT_EQ(p.gr, (std::vector<std::uint8_t>{1, 0, 0, 0}));
  EXPECT_EQ(p.mark, (std::vector<int>{1, 2, 3, 4}));
}

TEST(Encode, K2) {
  RelStructure k2 = coupling({"u", "v"}, {}, {{"u", "v"}});
  ColoredPoset p = encode_poset(k2);
  EXPECT_EQ(p.size(), 8u);
  auto rel = order_pairs(p);
  for (auto want : std::vector<std::pair<std::string, std::string>>{{"u/2", "v/3"}, {"u/2", "v/1"}, {"v/2", "u/3"},
                                                                    {"v/2", "u/1"}, {"u/2", "u/1"}, {"u/3", "u/1"},
                                                                    {"u/4", "u/1"}, {"v/4", "v/1"}})
    EXPECT_TRUE(rel.count(want)) << want.first << " < " << want.second;
  EXPECT_EQ(rel.size(), 10u);
  EXPECT_EQ(decode_poset(p), ground_reduct(k2));
}

TEST(Encode, ChainGetsClosureEdge) {
  ColoredPoset p = encode_poset(coupling({"u", "v"}, {{"u", "v"}}, {}));
  auto rel = order_pairs(p);
  EXPECT_TRUE(rel.count({"u/4", "v/4"}));
  EXPECT_TRUE(rel.count({"u/4", "v/1"}));
  EXPECT_FALSE(rel.count({"u/1", "v/1"}));
  EXPECT_EQ(rel.size(), 8u);
}

TEST(Encode, RejectsBrokenCouplings) {
  RelStructure bad = coupling({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}}, {});
  EXPECT_THROW(encode_poset(bad), PosetError);
  RelStructure loop = coupling({"a"}, {}, {});
  loop.add("E", std::vector<std::string>{"a", "a"});
  EXPECT_THROW(encode_poset(loop), PosetError);
  RelStructure missing;
  missing.add_element("a");
  EXPECT_THROW(encode_poset(missing), PosetError);
}

TEST(Decode, EmptyIsEmpty) {
  RelStructure empty = coupling({}, {}, {});
  ColoredPoset p = encode_poset(empty);
  EXPECT_EQ(p.size(), 0u);
  EXPECT_EQ(decode_poset(p).size(), 0u);
  EXPECT_TRUE(weak_sparseness_probe(p, 1));
}

TEST(Decode, RoundTripOnRandomCouplings) {
  for (std::uint64_t s = 0; s < 500; ++s) {
    RelStructure m = gen_coupling(derive_seed(51, s), 1 + s % 6, s % 4 == 3);
    ColoredPoset p = encode_poset(m);
    EXPECT_TRUE(poset_violations(p).empty()) << "seed " << s;
    EXPECT_EQ(decode_poset(p), ground_reduct(m)) << "seed " << s;
  }
}

TEST(Decode, JsonRoundTripOfTheColouredPoset) {
  RelStructure m = gen_coupling(52, 5);
  ColoredPoset p = encode_poset(m);
  ColoredPoset back = colored_poset_from_structure(to_structure(p));
  EXPECT_EQ(back.poset, p.poset);
  EXPECT_EQ(decode_poset(back), decode_poset(p));
}

TEST(Encode, CoversOnlyJoinRelatedSources) {
  for (std::uint64_t s = 0; s < 200; ++s) {
    RelStructure m = gen_coupling(derive_seed(53, s), 1 + s % 6);
    ColoredPoset p = encode_poset(m);
    for (auto [a, b] : cover_relation(p.poset)) {
      Index u = p.clone_of[a], v = p.clone_of[b];
      EXPECT_TRUE(u == v || m.holds("E", {u, v}) || m.holds("Lt", {u, v})) << "seed " << s;
    }
  }
}

TEST(Sparseness, SparseCouplingsHaveBicliqueFreeCoverGraphs) {
  for (std::uint64_t s = 0; s < 200; ++s) {
    RelStructure m = gen_sparse_coupling(derive_seed(54, s), 3 + s % 6);
    ColoredPoset p = encode_poset(m);
    EXPECT_TRUE(weak_sparseness_probe(p, 2)) << "seed " << s;
    EXPECT_TRUE(weak_sparseness_probe(p, 3)) << "seed " << s;
  }
}

TEST(Sparseness, CompleteEGivesLargeBicliques) {
  std::vector<std::string> el;
  std::vector<std::pair<std::string, std::string>> e;
  for (int i = 0; i < 6; ++i) el.push_back("e" + std::to_string(i));
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j) e.emplace_back(el[i], el[j]);
  ColoredPoset p = encode_poset(coupling(el, {}, e));
  EXPECT_FALSE(weak_sparseness_probe(p, 3));
  auto w = find_ktt_subgraph(cover_graph(p.poset), 3);
  ASSERT_TRUE(w.has_value());
  std::set<int> marks;
  for (Index a : w->first) marks.insert(p.mark[a]);
  for (Index b : w->second) marks.insert(p.mark[b]);
  EXPECT_TRUE(marks.count(2));
}
