#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "lcw/bicotree.hpp"
#include "lcw/cotree.hpp"
#include "lcw/graph.hpp"
#include "lcw/poset.hpp"
#include "lcw/relstructure.hpp"
#include "lcw/splitdec.hpp"
#include "lcw/tmodel.hpp"

namespace lcw {

class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Rng = std::mt19937_64;

namespace gen {

inline std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

/// Random composition of k into c positive parts, each at least `least`.
inline std::vector<std::size_t> split(Rng& rng, std::size_t k, std::size_t c, std::size_t least = 1) {
  std::vector<std::size_t> parts(c, least);
  for (std::size_t r = k - c * least; r > 0; --r) ++parts[uniform(rng, 0, c - 1)];
  return parts;
}

/// Renames leaves to v1..vk through a random permutation, then normalises.
inline TModel relabel(Rng& rng, const TModel& m) {
  auto lv = leaves(m);
  std::vector<std::size_t> perm(lv.size());
  std::iota(perm.begin(), perm.end(), 1);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::map<std::string, std::string> names;
  for (std::size_t i = 0; i < lv.size(); ++i) names[m[lv[i]].id] = "v" + std::to_string(perm[i]);
  return normalized(rename_leaves(m, names));
}

struct Counter {
  std::size_t next = 0;
  std::string fresh() { return "t" + std::to_string(next++); }
};

inline TModel cotree_rec(Rng& rng, Counter& ids, std::size_t k, std::size_t h, bool join) {
  if (k == 1) return single_leaf(ids.fresh());
  std::size_t c = h == 2 ? k : uniform(rng, 2, std::min<std::size_t>(k, 4));
  std::vector<TModel> kids;
  for (std::size_t part : split(rng, k, c)) kids.push_back(cotree_rec(rng, ids, part, h - 1, !join));
  return cotree_node(join ? NodeType::J : NodeType::U, kids);
}

enum class Need { None, Connected, CoConnected, Bicoloured };

inline bool satisfies(const TModel& m, Need need) {
  if (need == Need::None) return true;
  BipartiteGraph b = build_bipartite(m);
  IndexSet all(b.graph.size());
  std::iota(all.begin(), all.end(), 0);
  switch (need) {
    case Need::Connected: return bip_components_within(b, all, false).size() == 1;
    case Need::CoConnected: return bip_components_within(b, all, true).size() == 1;
    default: return bicoloured(b, all);
  }
}

inline std::optional<TModel> bicotree_rec(Rng& rng, Counter& ids, std::size_t k, std::size_t h, Need need,
                                          std::optional<NodeType> forced = std::nullopt) {
  for (int attempt = 0; attempt < 60; ++attempt) {
    if (k == 1 && !forced) {
      if (need == Need::Bicoloured) return std::nullopt;
      return single_leaf(ids.fresh(), coin(rng) ? 1 : 2, 2);
    }
    if (h < 2 || k < 2) return std::nullopt;
    NodeType t = coin(rng) ? NodeType::U : NodeType::B;
    if (h >= 3 && coin(rng, 0.4)) t = NodeType::O;
    if (forced) t = *forced;
    if (t == NodeType::O && (h < 3 || k < 2)) return std::nullopt;
    const std::size_t least = t == NodeType::O ? 2 : 1;
    std::size_t maxc = k / least;
    std::size_t c = h == 2 ? k : uniform(rng, std::min<std::size_t>(2, maxc), std::min<std::size_t>(maxc, 4));
    Need child = t == NodeType::U ? Need::Connected : (t == NodeType::B ? Need::CoConnected : Need::Bicoloured);
    std::vector<TModel> kids;
    bool ok = true;
    for (std::size_t part : split(rng, k, c, least)) {
      auto sub = bicotree_rec(rng, ids, part, h - 1, child);
      if (!sub) {
        ok = false;
        break;
      }
      kids.push_back(std::move(*sub));
    }
    if (!ok) continue;
    TModel m = bicotree_node(t, kids);
    if (satisfies(m, need)) return m;
  }
  return std::nullopt;
}

inline TModel raw_bicotree_rec(Rng& rng, Counter& ids, std::size_t k, std::size_t h) {
  if (k == 1 || h == 1) return single_leaf(ids.fresh(), coin(rng) ? 1 : 2, 2);
  std::size_t c = uniform(rng, 1, k);
  static const NodeType types[] = {NodeType::U, NodeType::B, NodeType::O};
  NodeType t = types[uniform(rng, 0, 2)];
  std::vector<TModel> kids;
  for (std::size_t part : split(rng, k, c)) kids.push_back(raw_bicotree_rec(rng, ids, part, h - 1));
  return bicotree_node(t, kids);
}

inline TModel tmodel_rec(Rng& rng, Counter& ids, int n, std::size_t k, std::size_t h) {
  if (k == 1 || h == 1) return single_leaf(ids.fresh(), static_cast<int>(uniform(rng, 1, n)), n);
  std::size_t c = uniform(rng, 1, k);
  bool chain = coin(rng);
  std::vector<std::uint8_t> kappa(static_cast<std::size_t>(n * n), 0);
  for (int i = 0; i < n; ++i)
    for (int j = chain ? 0 : i; j < n; ++j) {
      std::uint8_t b = coin(rng) ? 1 : 0;
      kappa[i * n + j] = b;
      if (!chain) kappa[j * n + i] = b;
    }
  std::vector<TModel> kids;
  for (std::size_t part : split(rng, k, c)) kids.push_back(tmodel_rec(rng, ids, n, part, h - 1));
  return make_node(chain ? NodeKind::C : NodeKind::A, NodeType::None, kappa, kids, n);
}

// Heights from 2 and at least two leaves whenever the bounds allow.
inline std::size_t pick_height(Rng& rng, std::size_t max_height) {
  return uniform(rng, std::min<std::size_t>(2, max_height), max_height);
}
inline std::size_t pick_leaves(Rng& rng, std::size_t max_leaves, std::size_t h) {
  return h <= 1 ? 1 : uniform(rng, std::min<std::size_t>(2, max_leaves), max_leaves);
}

}  // namespace gen

/// Clean cotree with 1..max_leaves leaves named v1..vk and height at most
/// max_height.
inline TModel gen_clean_cotree(std::uint64_t seed, std::size_t max_leaves, std::size_t max_height) {
  if (max_leaves < 1 || max_height < 1) throw GenerationError("bounds must be at least 1");
  Rng rng(seed);
  std::size_t h = gen::pick_height(rng, max_height);
  std::size_t k = gen::pick_leaves(rng, max_leaves, h);
  gen::Counter ids;
  return tag_cotree(gen::relabel(rng, gen::cotree_rec(rng, ids, k, h, gen::coin(rng))));
}

/// Clean bicotree; `root` forces the root type (O needs two leaves and
/// height 3).
inline TModel gen_clean_bicotree(std::uint64_t seed, std::size_t max_leaves, std::size_t max_height,
                                 std::optional<NodeType> root = std::nullopt) {
  if (max_leaves < 1 || max_height < 1) throw GenerationError("bounds must be at least 1");
  if (root == NodeType::O && (max_leaves < 2 || max_height < 3))
    throw GenerationError("an O-rooted clean bicotree needs at least 2 leaves and height 3");
  if (root && *root != NodeType::O && (max_leaves < 2 || max_height < 2))
    throw GenerationError("a typed root needs at least 2 leaves and height 2");
  Rng rng(seed);
  for (int attempt = 0; attempt < 200; ++attempt) {
    std::size_t h = root ? gen::uniform(rng, *root == NodeType::O ? 3 : 2, max_height) : gen::pick_height(rng, max_height);
    std::size_t k = gen::pick_leaves(rng, max_leaves, h);
    gen::Counter ids;
    auto m = gen::bicotree_rec(rng, ids, k, h, gen::Need::None, root);
    if (m) return tag_bicotree(gen::relabel(rng, *m));
  }
  throw GenerationError("could not generate a clean bicotree within the bounds");
}

/// Bicotree with arbitrary types and child counts (usually not clean).
inline TModel gen_raw_bicotree(std::uint64_t seed, std::size_t max_leaves, std::size_t max_height) {
  if (max_leaves < 1 || max_height < 1) throw GenerationError("bounds must be at least 1");
  Rng rng(seed);
  std::size_t h = gen::pick_height(rng, max_height);
  std::size_t k = gen::pick_leaves(rng, max_leaves, h);
  gen::Counter ids;
  return tag_bicotree(gen::relabel(rng, gen::raw_bicotree_rec(rng, ids, k, h)));
}

/// Connected, co-connected graph with an O-partition: an O-root over
/// bicoloured parts. The end parts are unions of two bijoins, otherwise
/// their colour-1 (first part) or colour-2 (last part) vertices would be
/// universal. Height 3 or 4.
inline TModel gen_o_partitionable(std::uint64_t seed, std::size_t max_leaves) {
  if (max_leaves < 8) throw GenerationError("an O-partitionable instance needs at least 8 leaves");
  Rng rng(seed);
  gen::Counter ids;
  auto bijoin = [&](std::size_t k) {
    std::vector<TModel> kids;
    for (std::size_t i = 0; i < k; ++i) {
      int colour = i == 0 ? 1 : (i == 1 ? 2 : (gen::coin(rng) ? 1 : 2));
      kids.push_back(single_leaf(ids.fresh(), colour, 2));
    }
    return bicotree_node(NodeType::B, kids);
  };
  auto unite = [&](std::size_t k) {
    std::size_t a = gen::uniform(rng, 2, k - 2);
    return bicotree_node(NodeType::U, {bijoin(a), bijoin(k - a)});
  };
  std::size_t k = gen::uniform(rng, 8, max_leaves);
  std::size_t middle = gen::uniform(rng, 0, (k - 8) / 2);
  auto sizes = gen::split(rng, k - 8 - 2 * middle, middle + 2, 0);
  std::vector<TModel> parts;
  parts.push_back(unite(4 + sizes[0]));
  for (std::size_t i = 0; i < middle; ++i) {
    std::size_t part = 2 + sizes[i + 1];
    parts.push_back(part >= 4 && gen::coin(rng, 0.3) ? unite(part) : bijoin(part));
  }
  parts.push_back(unite(4 + sizes[middle + 1]));
  return tag_bicotree(gen::relabel(rng, bicotree_node(NodeType::O, parts)));
}

/// T-model of complexity (n, max_height): random kinds, tables symmetric at
/// A-nodes, colours in [n].
inline TModel gen_tmodel(std::uint64_t seed, int n, std::size_t max_leaves, std::size_t max_height) {
  if (n < 1 || max_leaves < 1 || max_height < 1) throw GenerationError("bounds must be at least 1");
  Rng rng(seed);
  std::size_t h = gen::pick_height(rng, max_height);
  std::size_t k = gen::pick_leaves(rng, max_leaves, h);
  gen::Counter ids;
  return gen::relabel(rng, gen::tmodel_rec(rng, ids, n, k, h));
}

inline Graph gen_graph(std::uint64_t seed, std::size_t n, double p) {
  Rng rng(seed);
  Graph g;
  for (std::size_t i = 1; i <= n; ++i) g.add_vertex("v" + std::to_string(i));
  for (Index a = 0; a < n; ++a)
    for (Index b = a + 1; b < n; ++b)
      if (gen::coin(rng, p)) g.add_edge(a, b);
  return g;
}

/// Coupling {Lt, E, Gr} on `n` elements: Lt a random strict order (the
/// closure of random forward pairs of a random permutation), E random, Gr
/// all elements unless `partial_ground`.
inline RelStructure gen_coupling(std::uint64_t seed, std::size_t n, bool partial_ground = false) {
  Rng rng(seed);
  RelStructure s;
  for (std::size_t i = 1; i <= n; ++i) s.add_element("e" + std::to_string(i));
  s.declare("Lt", 2);
  s.declare("E", 2);
  s.declare("Gr", 1);
  std::vector<Index> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  const double po = std::uniform_real_distribution<double>(0.0, 0.6)(rng);
  const double pe = std::uniform_real_distribution<double>(0.0, 0.7)(rng);
  PairSet gens;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (gen::coin(rng, po)) gens.emplace_back(perm[a], perm[b]);
  auto closure = transitive_closure(n, gens);
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b) {
      if (closure[a][b]) s.add("Lt", Tuple{a, b});
      if (a < b && gen::coin(rng, pe)) {
        s.add("E", Tuple{a, b});
        s.add("E", Tuple{b, a});
      }
    }
  for (Index a = 0; a < n; ++a)
    if (!partial_ground || gen::coin(rng, 0.7)) s.add("Gr", Tuple{a});
  return s;
}

/// Coupling whose order is a disjoint union of chains and whose E is
/// K_{2,2}-free (edges added one by one, rejected when they create a C4
/// subgraph).
inline RelStructure gen_sparse_coupling(std::uint64_t seed, std::size_t n) {
  Rng rng(seed);
  RelStructure s;
  for (std::size_t i = 1; i <= n; ++i) s.add_element("e" + std::to_string(i));
  s.declare("Lt", 2);
  s.declare("E", 2);
  s.declare("Gr", 1);
  std::vector<Index> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::size_t pos = 0;
  while (pos < n) {
    std::size_t len = gen::uniform(rng, 1, std::min<std::size_t>(4, n - pos));
    for (std::size_t a = pos; a < pos + len; ++a)
      for (std::size_t b = a + 1; b < pos + len; ++b) s.add("Lt", Tuple{perm[a], perm[b]});
    pos += len;
  }
  Graph g;
  for (const auto& e : s.domain()) g.add_vertex(e);
  const double pe = std::uniform_real_distribution<double>(0.1, 0.6)(rng);
  for (Index a = 0; a < n; ++a)
    for (Index b = a + 1; b < n; ++b) {
      if (!gen::coin(rng, pe)) continue;
      g.add_edge(a, b);
      if (has_ktt_subgraph(g, 2)) g.remove_edge(a, b);
    }
  for (auto [a, b] : g.edges()) {
    s.add("E", Tuple{a, b});
    s.add("E", Tuple{b, a});
  }
  for (Index a = 0; a < n; ++a) s.add("Gr", Tuple{a});
  return s;
}

/// Random colouring of a vertex list with colours 1..k.
inline std::map<std::string, int> gen_colouring(std::uint64_t seed, const std::vector<std::string>& vs, int k) {
  Rng rng(seed);
  std::map<std::string, int> z;
  for (const auto& v : vs) z[v] = static_cast<int>(gen::uniform(rng, 1, static_cast<std::size_t>(k)));
  return z;
}

/// Mixes an instance index into a base seed.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace lcw
