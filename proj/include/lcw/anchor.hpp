#pragma once

#include <algorithm>
#include <bit>
#include <functional>
#include <cstdint>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "lcw/bicotree.hpp"
#include "lcw/cotree.hpp"
#include "lcw/splitdec.hpp"
#include "lcw/tmodel.hpp"

namespace lcw {

class AnchorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// F: ground element -> witness set containing it.
struct Anchor {
  std::map<std::string, std::vector<std::string>> F;
  std::size_t bound = 0;  // largest admissible |F(u)|

  [[nodiscard]] std::size_t size() const {
    std::size_t s = 0;
    for (const auto& [u, f] : F) s = std::max(s, f.size());
    return s;
  }

  [[nodiscard]] std::vector<std::string> violations() const {
    std::vector<std::string> out;
    for (const auto& [u, f] : F) {
      if (std::find(f.begin(), f.end(), u) == f.end()) out.push_back(u + " is not in its own witness set");
      if (f.size() > bound)
        out.push_back("|F(" + u + ")| = " + std::to_string(f.size()) + " exceeds " + std::to_string(bound));
    }
    return out;
  }

  /// Union of F over the given elements, sorted.
  [[nodiscard]] std::vector<std::string> closure(const std::vector<std::string>& x) const {
    std::set<std::string> y;
    for (const auto& u : x) {
      auto it = F.find(u);
      if (it == F.end()) throw AnchorError("element '" + u + "' outside the anchor's domain");
      y.insert(it->second.begin(), it->second.end());
    }
    return {y.begin(), y.end()};
  }
};

inline nlohmann::ordered_json to_json(const Anchor& a) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [u, f] : a.F) j[u] = f;
  return j;
}

inline Anchor anchor_from_json(const nlohmann::ordered_json& j, std::size_t bound = static_cast<std::size_t>(-1)) {
  Anchor a;
  a.bound = bound;
  try {
    for (const auto& [u, f] : j.items()) a.F[u] = f.get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw AnchorError(std::string("malformed anchor JSON: ") + e.what());
  }
  return a;
}

inline std::size_t pow5(std::size_t e) {
  std::size_t r = 1;
  while (e--) r *= 5;
  return r;
}

/// Anchors and restricted models of one clean cotree or bicotree. Leaves
/// are numbered by id order (at most 64); every node caches its leaf mask
/// and the anchor of its subtree.
class AnchorEngine {
 public:
  explicit AnchorEngine(const TModel& t) : t_(t) {
    if (t_.empty()) throw AnchorError("anchor of an empty model");
    bico_ = t_.n == 2;
    if (bico_) {
      if (!is_clean_bicotree(t_)) throw AnchorError("anchor: input is not a clean bicotree");
    } else if (!is_clean_cotree(t_)) {
      throw AnchorError("anchor: input is not a clean cotree");
    }
    auto lv = leaves(t_);
    if (lv.size() > 64) throw AnchorError("anchor: more than 64 leaves");
    std::sort(lv.begin(), lv.end(), [&](Index a, Index b) { return t_[a].id < t_[b].id; });
    for (Index v : lv) {
      bit_[t_[v].id] = static_cast<int>(names_.size());
      names_.push_back(t_[v].id);
      colour_.push_back(t_[v].color);
    }
    for (int b = 0; b < static_cast<int>(names_.size()); ++b)
      colour_mask_[colour_[b] == 1 ? 0 : 1] |= std::uint64_t{1} << b;
    Graph g = build(t_);
    adj_.assign(names_.size(), 0);
    for (auto [u, v] : g.edges()) {
      int a = bit_.at(g.name(u)), b = bit_.at(g.name(v));
      adj_[a] |= std::uint64_t{1} << b;
      adj_[b] |= std::uint64_t{1} << a;
    }
    mask_.assign(t_.size(), 0);
    F_.assign(t_.size(), std::vector<std::uint64_t>(names_.size(), 0));
    height_.assign(t_.size(), 1);
    auto order = preorder(t_);
    for (auto it = order.rbegin(); it != order.rend(); ++it) compute(*it);
  }

  [[nodiscard]] const TModel& tree() const { return t_; }
  [[nodiscard]] bool bicotree() const { return bico_; }
  [[nodiscard]] const std::vector<std::string>& names() const { return names_; }
  [[nodiscard]] std::uint64_t ground_mask() const { return mask_[t_.root]; }

  [[nodiscard]] std::uint64_t mask_of(const std::vector<std::string>& ids) const {
    std::uint64_t m = 0;
    for (const auto& id : ids) {
      auto it = bit_.find(id);
      if (it == bit_.end()) throw AnchorError("'" + id + "' is not a leaf of the model");
      m |= std::uint64_t{1} << it->second;
    }
    return m;
  }

  [[nodiscard]] std::vector<std::string> names_of(std::uint64_t m) const {
    std::vector<std::string> out;
    for (; m; m &= m - 1) out.push_back(names_[std::countr_zero(m)]);
    return out;
  }

  [[nodiscard]] std::uint64_t F(int bit) const { return F_[t_.root][bit]; }

  [[nodiscard]] std::size_t size_bound() const {
    const std::size_t h = height(t_);
    return bico_ ? pow5(h + 1) - 1 : h;
  }

  [[nodiscard]] Anchor anchor() const {
    Anchor a;
    a.bound = size_bound();
    for (std::size_t b = 0; b < names_.size(); ++b) a.F[names_[b]] = names_of(F(static_cast<int>(b)));
    return a;
  }

  /// Clean model with ground `lprime` for which the anchor is anchoring.
  [[nodiscard]] TModel restricted(std::uint64_t lprime) const {
    if (lprime & ~ground_mask()) throw AnchorError("restricted model: L' is not a set of leaves");
    if (!lprime) return TModel{t_.n, {}, npos};
    return bico_ ? brm(t_.root, lprime, false) : crm(t_.root, lprime);
  }

 private:
  static std::uint64_t low(std::uint64_t m) { return m & (~m + 1); }

  [[nodiscard]] NodeType effective(Index v, bool co) const {
    NodeType ty = bicotree_type(t_, v);
    if (co && ty == NodeType::U) return NodeType::B;
    if (co && ty == NodeType::B) return NodeType::U;
    return ty;
  }

  /// Neighbours of `b` inside `w` in the built graph, or in its bipartite
  /// complement when `co` is set.
  [[nodiscard]] std::uint64_t nbrs(int b, std::uint64_t w, bool co) const {
    if (!co) return adj_[b] & w;
    std::uint64_t opp = colour_mask_[colour_[b] == 1 ? 1 : 0];
    return opp & ~adj_[b] & w;
  }

  [[nodiscard]] std::vector<std::uint64_t> components(std::uint64_t w, bool co) const {
    std::vector<std::uint64_t> out;
    std::uint64_t rest = w;
    while (rest) {
      std::uint64_t comp = low(rest), frontier = comp;
      while (frontier) {
        std::uint64_t next = 0;
        for (std::uint64_t f = frontier; f; f &= f - 1) next |= nbrs(std::countr_zero(f), w, co);
        next &= ~comp;
        comp |= next;
        frontier = next;
      }
      out.push_back(comp);
      rest &= ~comp;
    }
    return out;
  }

  /// Vertex set of the lexicographically first shortest path from x to t in
  /// the graph induced by w.
  [[nodiscard]] std::uint64_t path(int x, int t, std::uint64_t w, bool co) const {
    std::vector<int> dist(names_.size(), -1);
    dist[t] = 0;
    std::uint64_t seen = std::uint64_t{1} << t, frontier = seen;
    int d = 0;
    while (frontier && dist[x] < 0) {
      ++d;
      std::uint64_t next = 0;
      for (std::uint64_t f = frontier; f; f &= f - 1) next |= nbrs(std::countr_zero(f), w, co);
      next &= ~seen;
      for (std::uint64_t n = next; n; n &= n - 1) dist[std::countr_zero(n)] = d;
      seen |= next;
      frontier = next;
    }
    if (dist[x] < 0) throw AnchorError("anchor: child graph is not connected");
    std::uint64_t out = std::uint64_t{1} << x;
    int cur = x;
    while (cur != t) {
      for (std::uint64_t n = nbrs(cur, w, co); n; n &= n - 1) {
        int u = std::countr_zero(n);
        if (dist[u] == dist[cur] - 1) {
          cur = u;
          break;
        }
      }
      out |= std::uint64_t{1} << cur;
    }
    return out;
  }

  void compute(Index v) {
    const auto& node = t_[v];
    if (node.is_leaf()) {
      int b = bit_.at(node.id);
      mask_[v] = std::uint64_t{1} << b;
      F_[v][b] = mask_[v];
      return;
    }
    for (Index c : node.children) {
      mask_[v] |= mask_[c];
      height_[v] = std::max(height_[v], height_[c] + 1);
    }
    const auto& kids = node.children;
    const std::size_t k = kids.size();
    if (!bico_) {
      for (Index c : kids) {
        std::uint64_t witness = low(mask_[v] & ~mask_[c]);
        for (std::uint64_t m = mask_[c]; m; m &= m - 1) {
          int u = std::countr_zero(m);
          F_[v][u] = F_[c][u] | witness;
        }
      }
      return;
    }
    NodeType ty = bicotree_type(t_, v);
    if (ty == NodeType::U || ty == NodeType::B) {
      const bool co = ty == NodeType::B;
      for (Index c : kids) {
        int t = std::countr_zero(mask_[c]);
        for (std::uint64_t m = mask_[c]; m; m &= m - 1) {
          int u = std::countr_zero(m);
          std::uint64_t f = 0;
          for (std::uint64_t x = F_[c][u]; x; x &= x - 1) f |= path(std::countr_zero(x), t, mask_[c], co);
          F_[v][u] = f;
        }
      }
      return;
    }
    auto witnesses = [&](std::size_t i) {
      std::uint64_t w = 0;
      for (int j = 0; j < 2; ++j) w |= low(mask_[kids[i]] & colour_mask_[j]);
      return w;
    };
    const std::uint64_t ends = witnesses(0) | witnesses(k - 1);
    for (std::size_t i = 0; i < k; ++i) {
      std::uint64_t near = ends | witnesses(i);
      if (i > 0) near |= witnesses(i - 1);
      if (i + 1 < k) near |= witnesses(i + 1);
      for (std::uint64_t m = mask_[kids[i]]; m; m &= m - 1) {
        int u = std::countr_zero(m);
        F_[v][u] = F_[kids[i]][u] | near;
      }
    }
  }

  [[nodiscard]] bool some_anchored(Index v, std::uint64_t l) const {
    for (std::uint64_t m = l; m; m &= m - 1)
      if (!(F_[v][std::countr_zero(m)] & ~l)) return true;
    return false;
  }

  [[nodiscard]] TModel leaf_model(std::uint64_t l) const {
    int b = std::countr_zero(l);
    return single_leaf(names_[b], colour_[b], t_.n);
  }

  // --- cotrees --------------------------------------------------------------

  [[nodiscard]] TModel cfresh(std::uint64_t l) const {
    Graph g;
    for (std::uint64_t m = l; m; m &= m - 1) g.add_vertex(names_[std::countr_zero(m)]);
    for (Index a = 0; a < g.size(); ++a)
      for (Index b = a + 1; b < g.size(); ++b)
        if (adj_[bit_.at(g.name(a))] >> bit_.at(g.name(b)) & 1) g.add_edge(a, b);
    return tag_cotree(cograph_decompose(g));
  }

  [[nodiscard]] TModel crm(Index v, std::uint64_t l) const {
    if (!some_anchored(v, l)) return cfresh(l);
    if (t_[v].is_leaf()) return leaf_model(l);
    const NodeType ty = t_[v].kappa[0] ? NodeType::J : NodeType::U;
    std::vector<TModel> children;
    for (Index c : t_[v].children) {
      std::uint64_t lc = l & mask_[c];
      if (!lc) continue;
      TModel m = crm(c, lc);
      if (!m[m.root].is_leaf() && m[m.root].kappa[0] == t_[v].kappa[0]) {
        for (Index g : m[m.root].children) children.push_back(subtree_at(m, g));
      } else {
        children.push_back(std::move(m));
      }
    }
    return cotree_node(ty, children);
  }

  // --- bicotrees ------------------------------------------------------------
  // With `co` set the routines work in the dual tree: U and B swapped, O
  // children reversed, adjacency through the bipartite complement. Anchors
  // coincide for a tree and its dual.

  [[nodiscard]] TModel bfresh(Index v, std::uint64_t l, bool co) const {
    TModel m = clean_bicotree(restrict(subtree_at(t_, v), names_of(l)));
    return co ? dual_star(m) : m;
  }

  [[nodiscard]] TModel brm(Index v, std::uint64_t l, bool co) const {
    if (!some_anchored(v, l)) return bfresh(v, l, co);
    if (t_[v].is_leaf()) return leaf_model(l);
    switch (effective(v, co)) {
      case NodeType::U: return brm_union(v, l, co);
      case NodeType::B: return dual_star(brm_union(v, l, !co));
      default: return brm_ordered(v, l, co);
    }
  }

  [[nodiscard]] TModel brm_union(Index v, std::uint64_t l, bool co) const {
    std::vector<TModel> children;
    for (Index c : t_[v].children) {
      std::uint64_t lc = l & mask_[c];
      if (!lc) continue;
      std::uint64_t t = low(mask_[c]);
      for (auto comp : components(lc, co)) children.push_back(comp & t ? brm(c, comp, co) : bfresh(c, comp, co));
    }
    return bicotree_node(NodeType::U, children);
  }

  [[nodiscard]] TModel brm_ordered(Index v, std::uint64_t l, bool co) const {
    std::vector<Index> kids = t_[v].children;
    if (co) std::reverse(kids.begin(), kids.end());
    auto kind = [&](std::uint64_t m) {
      bool one = m & colour_mask_[0], two = m & colour_mask_[1];
      return one && two ? 'b' : (one ? '1' : (two ? '2' : '0'));
    };
    if (kind(l & mask_[kids.front()]) != 'b' || kind(l & mask_[kids.back()]) != 'b') return bfresh(v, l, co);
    std::vector<std::pair<Index, std::uint64_t>> pieces;
    for (Index c : kids)
      if (l & mask_[c]) pieces.emplace_back(c, l & mask_[c]);
    // Blocks 1* (b | 2) 2*: colour 1 before the pivot, colour 2 after it.
    std::vector<TModel> blocks;
    std::size_t p = 0;
    while (p < pieces.size()) {
      std::size_t start = p;
      while (p < pieces.size() && kind(pieces[p].second) == '1') ++p;
      if (p < pieces.size()) ++p;
      while (p < pieces.size() && kind(pieces[p].second) == '2') ++p;
      if (p - start == 1) {
        blocks.push_back(brm(pieces[start].first, pieces[start].second, co));
        continue;
      }
      // Pieces of a block are pairwise completely joined across colours, so
      // the co-components of the block are those of its pieces.
      std::vector<TModel> parts;
      for (std::size_t q = start; q < p; ++q)
        for (auto comp : components(pieces[q].second, !co)) parts.push_back(bfresh(pieces[q].first, comp, co));
      blocks.push_back(bicotree_node(NodeType::B, parts));
    }
    return bicotree_node(NodeType::O, blocks);
  }

  TModel t_;
  bool bico_ = false;
  std::vector<std::string> names_;
  std::unordered_map<std::string, int> bit_;
  std::vector<int> colour_;
  std::uint64_t colour_mask_[2] = {0, 0};
  std::vector<std::uint64_t> adj_;
  std::vector<std::uint64_t> mask_;
  std::vector<std::vector<std::uint64_t>> F_;
  std::vector<std::size_t> height_;
};

inline Anchor cotree_anchor(const TModel& t) {
  if (t.n != 1) throw AnchorError("cotree_anchor: not a cotree");
  return AnchorEngine(t).anchor();
}

inline Anchor bicotree_anchor(const TModel& t) {
  if (t.n != 2) throw AnchorError("bicotree_anchor: not a bicotree");
  return AnchorEngine(t).anchor();
}

/// T_{L'} for a clean cotree or bicotree. `F` must be the anchor the
/// constructors produce for `t`.
inline TModel restricted_model(const TModel& t, const Anchor& F, const std::vector<std::string>& lprime) {
  if (t.empty()) {
    if (!lprime.empty()) throw AnchorError("restricted model: L' is not a set of leaves");
    return t;
  }
  AnchorEngine e(t);
  auto own = e.anchor();
  if (own.F != F.F) throw AnchorError("restricted model: the anchor was not constructed for this tree");
  return e.restricted(e.mask_of(lprime));
}

// ---------------------------------------------------------------------------
// Verification

struct AnchoringReport {
  bool ok = true;
  bool exhaustive = true;
  std::size_t checked = 0;
  std::vector<std::string> witness;  // a failing X
  std::string message;
};

/// Checks M<X> = M'<X> (isomorphism fixing X) for every X whose witness
/// sets lie inside the ground of M'. Exhaustive up to 16 qualifying
/// elements, otherwise 10^4 uniformly sampled subsets.
inline AnchoringReport verify_anchoring(const TModel& t, const TModel& tprime, const Anchor& F,
                                        std::uint64_t seed = 1) {
  AnchoringReport r;
  auto lt = ground(t);
  std::sort(lt.begin(), lt.end());
  if (lt.size() > 64) throw AnchorError("verify_anchoring: ground larger than 64");
  std::unordered_map<std::string, int> bit;
  for (std::size_t i = 0; i < lt.size(); ++i) bit[lt[i]] = static_cast<int>(i);
  std::uint64_t lp = 0;
  for (const auto& id : ground(tprime)) {
    auto it = bit.find(id);
    if (it == bit.end()) throw AnchorError("verify_anchoring: '" + id + "' is not in the ground of the first model");
    lp |= std::uint64_t{1} << it->second;
  }
  std::vector<std::uint64_t> f(lt.size(), 0);
  std::uint64_t qualifying = 0;
  for (std::size_t i = 0; i < lt.size(); ++i) {
    auto it = F.F.find(lt[i]);
    if (it == F.F.end()) throw AnchorError("verify_anchoring: anchor misses '" + lt[i] + "'");
    for (const auto& w : it->second) {
      auto b = bit.find(w);
      // Witnesses outside the ground can never be inside L'.
      f[i] |= b == bit.end() ? ~std::uint64_t{0} : std::uint64_t{1} << b->second;
    }
    if (!(f[i] & ~lp)) qualifying |= std::uint64_t{1} << i;
  }
  MaskedModel a(t, bit), b(tprime, bit);
  std::vector<std::uint32_t> ca, cb;
  auto check = [&](std::uint64_t x) {
    ++r.checked;
    a.canon(x, ca);
    b.canon(x, cb);
    if (ca == cb) return true;
    r.ok = false;
    for (std::uint64_t m = x; m; m &= m - 1) r.witness.push_back(lt[std::countr_zero(m)]);
    r.message = "restrictions differ on the witness subset";
    return false;
  };
  const int q = std::popcount(qualifying);
  if (q <= 16) {
    for (std::uint64_t x = qualifying;; x = (x - 1) & qualifying) {
      if (x && !check(x)) return r;
      if (!x) break;
    }
  } else {
    r.exhaustive = false;
    std::mt19937_64 rng(seed);
    for (int s = 0; s < 10000; ++s) {
      std::uint64_t x = rng() & qualifying;
      if (x && !check(x)) return r;
    }
    r.message = "sampled 10000 subsets (" + std::to_string(q) + " qualifying elements exceed the exhaustive cap of 16)";
  }
  return r;
}

// ---------------------------------------------------------------------------
// Amalgams

inline std::map<std::string, std::string> invert(const std::map<std::string, std::string>& m) {
  std::map<std::string, std::string> out;
  for (const auto& [k, v] : m) out[v] = k;
  return out;
}

/// Anchor engines for every nonempty tree of an amalgam.
struct AmalgamAnchors {
  std::map<int, std::shared_ptr<AnchorEngine>> cells;
  std::map<CellPair, std::shared_ptr<AnchorEngine>> pairs;
  Anchor F;
  std::size_t h = 1;  // largest tree height
};

inline std::size_t amalgam_height(const Amalgam& a) {
  std::size_t h = 1;
  for (const auto& [i, t] : a.cell_trees) h = std::max(h, height(t));
  for (const auto& [p, t] : a.pair_trees) h = std::max(h, height(t));
  return h;
}

inline std::size_t amalgam_anchor_bound(std::size_t h, int n) {
  return h + pow5(h + 1) * static_cast<std::size_t>(n - 1);
}

inline AmalgamAnchors amalgam_anchors(const Amalgam& a) {
  require_valid_amalgam(a);
  AmalgamAnchors out;
  out.h = amalgam_height(a);
  for (const auto& [i, t] : a.cell_trees)
    if (!t.empty()) out.cells[i] = std::make_shared<AnchorEngine>(t);
  for (const auto& [p, t] : a.pair_trees)
    if (!t.empty()) out.pairs[p] = std::make_shared<AnchorEngine>(t);
  auto back_cell = invert(a.iota_cell);
  std::map<CellPair, std::map<std::string, std::string>> back_pair;
  for (const auto& [p, m] : a.iota_pair) back_pair[p] = invert(m);
  out.F.bound = amalgam_anchor_bound(out.h, a.n);
  for (const auto& v : a.ground) {
    const int c = a.cell.at(v);
    std::set<std::string> f;
    const auto& ce = *out.cells.at(c);
    for (const auto& leaf : ce.names_of(ce.F(static_cast<int>(
             std::find(ce.names().begin(), ce.names().end(), a.iota_cell.at(v)) - ce.names().begin()))))
      f.insert(back_cell.at(leaf));
    for (int k = 1; k <= a.n; ++k) {
      if (k == c) continue;
      auto p = ordered_pair(c, k);
      const auto& pe = *out.pairs.at(p);
      const auto& leaf = a.iota_pair.at(p).at(v);
      int b = static_cast<int>(std::find(pe.names().begin(), pe.names().end(), leaf) - pe.names().begin());
      for (const auto& w : pe.names_of(pe.F(b))) f.insert(back_pair.at(p).at(w));
    }
    out.F.F[v] = {f.begin(), f.end()};
  }
  return out;
}

inline Anchor amalgam_anchor(const Amalgam& a) { return amalgam_anchors(a).F; }

/// Same ground, same injections, and every tree isomorphic fixing leaves.
inline bool amalgam_equal_fixing_ground(const Amalgam& a, const Amalgam& b) {
  if (a.n != b.n || a.cell != b.cell || a.iota_cell != b.iota_cell || a.iota_pair != b.iota_pair) return false;
  std::set<std::string> ga(a.ground.begin(), a.ground.end()), gb(b.ground.begin(), b.ground.end());
  if (ga != gb) return false;
  for (const auto& [i, t] : a.cell_trees) {
    auto it = b.cell_trees.find(i);
    if (it == b.cell_trees.end() || !model_iso_fixing_ground(t, it->second)) return false;
  }
  for (const auto& [p, t] : a.pair_trees) {
    auto it = b.pair_trees.find(p);
    if (it == b.pair_trees.end() || !model_iso_fixing_ground(t, it->second)) return false;
  }
  return a.cell_trees.size() == b.cell_trees.size() && a.pair_trees.size() == b.pair_trees.size();
}

struct CoverPiece {
  std::vector<int> S;
  std::vector<std::string> U;  // {u : zeta(F(u)) within S}
  std::vector<std::string> W;  // ground of R: zeta^{-1}(S), or U when built literally
  Amalgam R;
};

struct CoverReport {
  std::vector<CoverPiece> pieces;
  std::size_t q = 0;
  std::size_t s = 0;  // colour sets have this size
  std::size_t checked = 0;
  std::size_t skipped = 0;  // X whose colour demand exceeds s
  std::vector<std::string> failures;
  [[nodiscard]] bool ok() const { return failures.empty(); }
};

/// The amalgam on `us` with each tree replaced by its restricted model on
/// the leaves of `us`.
inline Amalgam cover_member(const Amalgam& a, const AmalgamAnchors& an, const std::vector<std::string>& us) {
  Amalgam r = amalgam_restrict(a, us);
  for (auto& [i, t] : r.cell_trees) {
    std::vector<std::string> l;
    for (const auto& v : r.ground)
      if (r.cell.at(v) == i) l.push_back(r.iota_cell.at(v));
    auto it = an.cells.find(i);
    t = it == an.cells.end() ? t : it->second->restricted(it->second->mask_of(l));
  }
  for (auto& [p, t] : r.pair_trees) {
    std::vector<std::string> l;
    if (auto ip = r.iota_pair.find(p); ip != r.iota_pair.end())
      for (const auto& [v, leaf] : ip->second) l.push_back(leaf);
    auto it = an.pairs.find(p);
    t = it == an.pairs.end() ? t : it->second->restricted(it->second->mask_of(l));
  }
  return r;
}

/// Ground element standing for an element of the coupling view: itself for
/// ground elements, otherwise the smallest leaf below the tree node, mapped
/// back through the injections.
inline std::string coupling_representative(const Amalgam& a, const std::string& element) {
  if (element.rfind("V:", 0) == 0) return element.substr(2);
  auto colon = element.find(':');
  if (element.empty() || element[0] != 'T' || colon == std::string::npos)
    throw AmalgamError("not a coupling element: '" + element + "'");
  const std::string key = element.substr(1, colon - 1), id = element.substr(colon + 1);
  const TModel* t;
  std::map<std::string, std::string> back;
  if (key.find(',') == std::string::npos) {
    int i = std::stoi(key);
    t = &a.cell_trees.at(i);
    back = invert(a.iota_cell);
  } else {
    auto p = parse_pair_key(key);
    t = &a.pair_trees.at(p);
    back = invert(a.iota_pair.at(p));
  }
  auto below = leaves_below(*t, t->index_of(id));
  std::string best;
  for (Index l : below)
    if (best.empty() || (*t)[l].id < best) best = (*t)[l].id;
  return back.at(best);
}

inline std::set<int> colour_demand(const Anchor& F, const std::map<std::string, int>& zeta,
                                   const std::vector<std::string>& y) {
  std::set<int> d;
  for (const auto& w : F.closure(y)) d.insert(zeta.at(w));
  return d;
}

/// Checks the cover guarantee for every X of at most p coupling elements
/// whose colour demand zeta(F(Y_X)) fits in s colours: X lies in M<Y_X> and
/// every emitted R_S with S containing the demand agrees with M on Y_X.
inline void check_cover(const Amalgam& a, const Anchor& F, const std::map<std::string, int>& zeta, std::size_t p,
                        CoverReport& rep) {
  rep.checked = rep.skipped = 0;
  rep.failures.clear();
  RelStructure view = coupling_view(a);
  const std::vector<std::string>& elems = view.domain();
  std::vector<std::string> rep_of;
  for (const auto& e : elems) rep_of.push_back(coupling_representative(a, e));
  std::vector<std::size_t> x;
  std::function<void(std::size_t)> scan = [&](std::size_t from) {
    if (!x.empty()) {
      std::set<std::string> ys;
      for (auto i : x) ys.insert(rep_of[i]);
      std::vector<std::string> y(ys.begin(), ys.end());
      auto d = colour_demand(F, zeta, y);
      if (d.size() > rep.s) {
        ++rep.skipped;
      } else {
        ++rep.checked;
        std::string xs;
        for (auto i : x) xs += " " + elems[i];
        Amalgam m = amalgam_restrict(a, y);
        RelStructure mv = coupling_view(m);
        for (auto i : x)
          if (!mv.find(elems[i])) rep.failures.push_back("element " + elems[i] + " missing from M<Y_X>");
        bool found = false;
        for (const auto& piece : rep.pieces) {
          std::set<int> S(piece.S.begin(), piece.S.end());
          if (!std::includes(S.begin(), S.end(), d.begin(), d.end())) continue;
          found = true;
          if (!amalgam_equal_fixing_ground(m, amalgam_restrict(piece.R, y)))
            rep.failures.push_back("R_S<Y_X> differs from M<Y_X> for X =" + xs);
        }
        if (!found) rep.failures.push_back("no emitted colour set covers the demand of X =" + xs);
      }
    }
    if (x.size() == p) return;
    for (std::size_t i = from; i < elems.size() && rep.failures.size() < 8; ++i) {
      x.push_back(i);
      scan(i + 1);
      x.pop_back();
    }
  };
  scan(0);
}

/// Covers by colour sets of size s (default min(p*q, #colours); smaller sets
/// are dominated by the maximal ones, so only those are emitted), followed
/// by the guarantee check. R_S lives on zeta^{-1}(S): anchoring needs
/// F(Y_X) inside the restricted ground, and F(Y_X) is only known to have
/// colours in S. `literal` builds R_S on U_S instead, which can fail.
inline CoverReport build_cover(const Amalgam& a, const std::map<std::string, int>& zeta, std::size_t p,
                               std::size_t s_override = 0, bool literal = false) {
  if (p < 1) throw AnchorError("build_cover: p must be at least 1");
  for (const auto& v : a.ground)
    if (!zeta.count(v)) throw AnchorError("build_cover: colouring misses " + v);
  CoverReport rep;
  AmalgamAnchors an = amalgam_anchors(a);
  rep.q = an.F.size();
  std::set<int> colours;
  for (const auto& v : a.ground) colours.insert(zeta.at(v));
  std::vector<int> cl(colours.begin(), colours.end());
  rep.s = std::min(p * rep.q, cl.size());
  if (s_override) rep.s = std::min(s_override, cl.size());

  std::vector<int> pick(rep.s);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t from, std::size_t depth) {
    if (depth == rep.s) {
      CoverPiece piece;
      piece.S = pick;
      std::set<int> S(pick.begin(), pick.end());
      for (const auto& v : a.ground) {
        auto d = colour_demand(an.F, zeta, {v});
        if (std::includes(S.begin(), S.end(), d.begin(), d.end())) piece.U.push_back(v);
        if (S.count(zeta.at(v))) piece.W.push_back(v);
      }
      if (literal) piece.W = piece.U;
      piece.R = cover_member(a, an, piece.W);
      rep.pieces.push_back(std::move(piece));
      return;
    }
    for (std::size_t i = from; i < cl.size(); ++i) {
      pick[depth] = cl[i];
      rec(i + 1, depth + 1);
    }
  };
  rec(0, 0);
  check_cover(a, an.F, zeta, p, rep);
  return rep;
}

}  // namespace lcw
