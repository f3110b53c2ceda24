#pragma once

#include <algorithm>
#include <bit>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lcw/cotree.hpp"
#include "lcw/graph.hpp"
#include "lcw/tmodel.hpp"

namespace lcw {

class NotSob : public ModelError {
 public:
  NotSob(const std::string& what, std::vector<std::string> p7) : ModelError(what), witness(std::move(p7)) {}
  std::vector<std::string> witness;  // induced P7 when one exists, else empty
};

class NoOPartition : public ModelError {
 public:
  NoOPartition(const std::string& what, std::vector<std::string> rest) : ModelError(what), state(std::move(rest)) {}
  std::vector<std::string> state;  // the vertices that could not be split
};

inline std::vector<std::uint8_t> bicotree_kappa(NodeType t) {
  // row-major over colours (1,1) (1,2) (2,1) (2,2)
  switch (t) {
    case NodeType::U: return {0, 0, 0, 0};
    case NodeType::B: return {0, 1, 1, 0};
    case NodeType::O: return {0, 1, 0, 0};
    default: throw ModelError("bicotree nodes are typed U, B or O");
  }
}

inline TModel bicotree_node(NodeType t, const std::vector<TModel>& children) {
  return make_node(t == NodeType::O ? NodeKind::C : NodeKind::A, t, bicotree_kappa(t), children, 2);
}

/// Type of an internal node read off its kind and table; None when the
/// node matches none of the three bicotree shapes.
inline NodeType bicotree_type(const TModel& m, Index v) {
  const auto& node = m[v];
  if (node.is_leaf()) return NodeType::None;
  const auto& k = node.kappa;
  if (k.size() != 4 || k[0] || k[3]) return NodeType::None;
  if (node.kind == NodeKind::A) return k[1] ? NodeType::B : NodeType::U;
  if (k[1] && !k[2]) return NodeType::O;
  return NodeType::None;
}

inline bool is_bicotree(const TModel& m) {
  if (m.n != 2 || !validate(m).empty()) return false;
  for (Index v = 0; v < m.size(); ++v)
    if (!m[v].is_leaf() && bicotree_type(m, v) == NodeType::None) return false;
  return true;
}

inline TModel tag_bicotree(TModel m) {
  for (Index v = 0; v < m.size(); ++v) m[v].type = bicotree_type(m, v);
  return m;
}

inline void require_bicotree(const TModel& m, const char* op) {
  if (!is_bicotree(m)) throw ModelError(std::string(op) + ": input is not a valid bicotree");
}

/// Exchanges U and B and reverses every O-node's children.
inline TModel dual_star(TModel m) {
  require_bicotree(m, "dual_star");
  for (Index v = 0; v < m.size(); ++v) {
    auto t = bicotree_type(m, v);
    auto& node = m[v];
    if (t == NodeType::U || t == NodeType::B) {
      node.kappa = bicotree_kappa(t == NodeType::U ? NodeType::B : NodeType::U);
      node.type = t == NodeType::U ? NodeType::B : NodeType::U;
    } else if (t == NodeType::O) {
      std::reverse(node.children.begin(), node.children.end());
    }
  }
  return m;
}

/// Components of b[s], or of its bipartite complement when `co` is set.
inline std::vector<IndexSet> bip_components_within(const BipartiteGraph& b, const IndexSet& s, bool co) {
  std::vector<IndexSet> comps;
  std::vector<char> done(s.size(), 0);
  for (std::size_t a = 0; a < s.size(); ++a) {
    if (done[a]) continue;
    std::vector<std::size_t> queue{a};
    done[a] = 1;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      Index v = s[queue[head]];
      for (std::size_t c = 0; c < s.size(); ++c) {
        if (done[c]) continue;
        Index u = s[c];
        if (b.side[u] == b.side[v]) continue;
        if (b.graph.adjacent(u, v) != co) {
          done[c] = 1;
          queue.push_back(c);
        }
      }
    }
    IndexSet comp;
    for (auto q : queue) comp.push_back(s[q]);
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  return comps;
}

inline bool bicoloured(const BipartiteGraph& b, const IndexSet& s) {
  bool one = false, two = false;
  for (Index v : s) (b.side[v] == 1 ? one : two) = true;
  return one && two;
}

/// Clean conditions: children of U-nodes induce connected graphs, children
/// of B-nodes induce graphs with connected bipartite complement, children of
/// O-nodes contain both colours.
inline bool is_clean_bicotree(const TModel& m) {
  if (!is_bicotree(m)) return false;
  if (m.empty()) return true;
  BipartiteGraph b = build_bipartite(m);
  for (Index v = 0; v < m.size(); ++v) {
    auto t = bicotree_type(m, v);
    if (t == NodeType::None) continue;
    for (Index c : m[v].children) {
      IndexSet s;
      for (Index l : leaves_below(m, c)) s.push_back(b.graph.index_of(m[l].id));
      if (t == NodeType::O && !bicoloured(b, s)) return false;
      if (t == NodeType::U && bip_components_within(b, s, false).size() != 1) return false;
      if (t == NodeType::B && bip_components_within(b, s, true).size() != 1) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// O-partition

namespace detail {
/// Predecessor relation of the order constraints: for cross-colour x (1),
/// y (2), an edge forces part(x) <= part(y) and a non-edge part(y) <= part(x).
inline bool o_arc(const BipartiteGraph& b, Index u, Index v) {
  if (b.side[u] == b.side[v]) return false;
  bool e = b.graph.adjacent(u, v);
  return b.side[u] == 1 ? e : !e;
}

inline IndexSet down_closure(const BipartiteGraph& b, const IndexSet& r, Index v) {
  std::vector<char> in(b.size(), 0), seen(b.size(), 0);
  for (Index u : r) in[u] = 1;
  IndexSet out{v};
  seen[v] = 1;
  for (std::size_t head = 0; head < out.size(); ++head) {
    Index w = out[head];
    for (Index u : r)
      if (in[u] && !seen[u] && o_arc(b, u, w)) {
        seen[u] = 1;
        out.push_back(u);
      }
  }
  std::sort(out.begin(), out.end());
  return out;
}
}  // namespace detail

/// Checks the defining condition of an ordered partition: every part has
/// both colours, and cross-colour pairs in different parts are adjacent iff
/// the colour-1 end lies in the earlier part.
inline bool is_o_partition(const BipartiteGraph& b, const std::vector<IndexSet>& parts) {
  std::vector<long> part(b.size(), -1);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (!bicoloured(b, parts[i])) return false;
    for (Index v : parts[i]) {
      if (part[v] != -1) return false;
      part[v] = static_cast<long>(i);
    }
  }
  for (Index x = 0; x < b.size(); ++x) {
    if (b.side[x] != 1 || part[x] < 0) continue;
    for (Index y = 0; y < b.size(); ++y) {
      if (b.side[y] != 2 || part[y] < 0 || part[x] == part[y]) continue;
      if (b.graph.adjacent(x, y) != (part[x] < part[y])) return false;
    }
  }
  return true;
}

namespace detail {
/// Smallest down-closed subset D of `rest` with D and rest \ D bicoloured,
/// by enumerating the down-closed sets. Used only when `rest` is
/// disconnected or co-disconnected, where principal closures can miss cuts.
inline std::optional<IndexSet> exhaustive_cut(const BipartiteGraph& b, const IndexSet& rest) {
  const std::size_t m = rest.size();
  if (m > 64) throw ModelError("o_partition: exhaustive cut search is limited to 64 vertices");
  std::vector<std::uint64_t> down(m, 0), up(m, 0);
  for (std::size_t i = 0; i < m; ++i)
    for (Index v : down_closure(b, rest, rest[i])) {
      std::size_t j = static_cast<std::size_t>(std::lower_bound(rest.begin(), rest.end(), v) - rest.begin());
      down[i] |= std::uint64_t{1} << j;
      up[j] |= std::uint64_t{1} << i;
    }
  std::uint64_t c1 = 0, c2 = 0;
  for (std::size_t i = 0; i < m; ++i) (b.side[rest[i]] == 1 ? c1 : c2) |= std::uint64_t{1} << i;
  const std::uint64_t full = m == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << m) - 1;
  std::optional<std::uint64_t> best;
  std::size_t budget = std::size_t{1} << 20;
  std::function<void(std::uint64_t, std::uint64_t)> rec = [&](std::uint64_t in, std::uint64_t out) {
    if (budget == 0) throw ModelError("o_partition: exhaustive cut search exceeded its budget");
    --budget;
    if (best && std::popcount(in) >= std::popcount(*best)) return;
    std::uint64_t open = full & ~(in | out);
    if (!open) {
      std::uint64_t rem = full & ~in;
      if ((in & c1) && (in & c2) && (rem & c1) && (rem & c2)) best = in;
      return;
    }
    std::size_t i = static_cast<std::size_t>(std::countr_zero(open));
    if (!(down[i] & out)) rec(in | down[i], out);
    if (!(up[i] & in)) rec(in, out | up[i]);
  };
  rec(0, 0);
  if (!best) return std::nullopt;
  IndexSet d;
  for (std::size_t i = 0; i < m; ++i)
    if (*best >> i & 1) d.push_back(rest[i]);
  return d;
}
}  // namespace detail

/// Finest ordered partition found by repeatedly cutting off the smallest
/// bicoloured down-closed set whose complement is still bicoloured. On a
/// connected, co-connected graph the principal closures suffice; otherwise
/// the cut falls back to an exhaustive search.
inline std::vector<IndexSet> o_partition(const BipartiteGraph& b) {
  IndexSet all(b.size());
  for (Index v = 0; v < b.size(); ++v) all[v] = v;
  if (b.size() < 2 || !bicoloured(b, all))
    throw ModelError("o_partition: precondition violated (needs both colours)");

  std::vector<IndexSet> parts;
  IndexSet rest = all;
  while (true) {
    std::optional<IndexSet> best;
    for (Index v : rest) {
      auto d = detail::down_closure(b, rest, v);
      if (d.size() == rest.size() || !bicoloured(b, d)) continue;
      IndexSet remain;
      std::set_difference(rest.begin(), rest.end(), d.begin(), d.end(), std::back_inserter(remain));
      if (!bicoloured(b, remain)) continue;
      if (!best || d.size() < best->size()) best = d;
    }
    if (!best && (bip_components_within(b, rest, false).size() > 1 || bip_components_within(b, rest, true).size() > 1))
      best = detail::exhaustive_cut(b, rest);
    if (!best) break;
    IndexSet remain;
    std::set_difference(rest.begin(), rest.end(), best->begin(), best->end(), std::back_inserter(remain));
    parts.push_back(*best);
    rest = remain;
  }
  if (parts.empty()) {
    std::vector<std::string> names;
    for (Index v : rest) names.push_back(b.graph.name(v));
    throw NoOPartition("no ordered partition into two or more bicoloured parts", names);
  }
  parts.push_back(rest);
  if (!is_o_partition(b, parts)) throw ModelError("o_partition: internal error, result violates the definition");
  return parts;
}

// ---------------------------------------------------------------------------
// Decomposition

namespace detail {
inline TModel sob_rec(const BipartiteGraph& b, const IndexSet& s) {
  if (s.size() == 1) return single_leaf(b.graph.name(s[0]), b.side[s[0]], 2);
  auto comps = bip_components_within(b, s, false);
  if (comps.size() > 1) {
    std::vector<TModel> children;
    for (const auto& c : comps) children.push_back(sob_rec(b, c));
    return bicotree_node(NodeType::U, children);
  }
  if (bip_components_within(b, s, true).size() > 1) {
    BipartiteGraph co = bipartite_complement(b);
    return dual_star(sob_rec(co, s));
  }
  BipartiteGraph sub = induced_subgraph(b, s);
  std::vector<IndexSet> parts;
  try {
    parts = o_partition(sub);
  } catch (const NoOPartition& e) {
    std::vector<std::string> w;
    if (auto p = find_induced_path(sub.graph, 7))
      for (Index v : *p) w.push_back(sub.graph.name(v));
    std::string msg = "not a sob: no ordered partition of {";
    for (std::size_t i = 0; i < e.state.size(); ++i) msg += (i ? "," : "") + e.state[i];
    msg += "}";
    if (!w.empty()) {
      msg += "; induced P7";
      for (const auto& x : w) msg += " " + x;
    }
    throw NotSob(msg, w);
  }
  std::vector<TModel> children;
  for (const auto& p : parts) {
    IndexSet orig;
    for (Index v : p) orig.push_back(s[v]);
    children.push_back(sob_rec(b, orig));
  }
  return bicotree_node(NodeType::O, children);
}
}  // namespace detail

/// Clean bicotree of a bipartite graph: U over components, the dual of the
/// complement's decomposition when the bipartite complement is disconnected,
/// otherwise O over the ordered partition.
inline TModel sob_decompose(const BipartiteGraph& b) {
  b.validate();
  if (b.size() == 0) throw ModelError("sob_decompose: empty graph");
  IndexSet all(b.size());
  for (Index v = 0; v < b.size(); ++v) all[v] = v;
  return normalized(detail::sob_rec(b, all));
}

// ---------------------------------------------------------------------------
// Cleaning

namespace detail {
inline IndexSet leaf_indices(const BipartiteGraph& g, const TModel& m, Index u) {
  IndexSet s;
  for (Index l : leaves_below(m, u)) s.push_back(g.graph.index_of(m[l].id));
  std::sort(s.begin(), s.end());
  return s;
}

inline std::vector<std::string> names_of(const BipartiteGraph& g, const IndexSet& s) {
  std::vector<std::string> out;
  for (Index v : s) out.push_back(g.graph.name(v));
  return out;
}

inline TModel clean_rec(const TModel& t);

/// Clean model of the part of child `c` spanned by `s`.
inline TModel clean_part(const TModel& t, const BipartiteGraph& g, Index c, const IndexSet& s) {
  return clean_rec(restrict(subtree_at(t, c), names_of(g, s)));
}

inline TModel clean_rec(const TModel& t) {
  const auto rt = bicotree_type(t, t.root);
  if (t[t.root].is_leaf()) return t;
  if (rt == NodeType::B) return dual_star(clean_rec(dual_star(t)));
  BipartiteGraph g = build_bipartite(t);
  const auto& kids = t[t.root].children;
  std::vector<IndexSet> under;
  std::vector<long> owner(g.size(), -1);
  for (std::size_t i = 0; i < kids.size(); ++i) {
    under.push_back(leaf_indices(g, t, kids[i]));
    for (Index v : under.back()) owner[v] = static_cast<long>(i);
  }
  IndexSet all(g.size());
  for (Index v = 0; v < g.size(); ++v) all[v] = v;

  if (rt == NodeType::U) {
    std::vector<TModel> children;
    for (const auto& comp : bip_components_within(g, all, false))
      children.push_back(clean_part(t, g, kids[owner[comp[0]]], comp));
    return bicotree_node(NodeType::U, children);
  }

  // O root: model every co-component separately and join them with B.
  std::vector<TModel> qmodels;
  for (const auto& q : bip_components_within(g, all, true)) {
    std::vector<IndexSet> pieces(kids.size());
    for (Index v : q) pieces[owner[v]].push_back(v);
    std::vector<std::size_t> used;
    for (std::size_t i = 0; i < kids.size(); ++i)
      if (!pieces[i].empty()) used.push_back(i);
    if (used.size() == 1) {
      qmodels.push_back(clean_part(t, g, kids[used[0]], q));
      continue;
    }
    // Pieces are of type 1, 2 (monochromatic) or b (both). Cut the sequence
    // into blocks 2* b? 1*; inside a block no two children are adjacent,
    // between blocks the order decides.
    auto piece_type = [&](std::size_t i) {
      bool one = false, two = false;
      for (Index v : pieces[i]) (g.side[v] == 1 ? one : two) = true;
      return one && two ? 'b' : (one ? '1' : '2');
    };
    std::vector<std::vector<std::size_t>> blocks;
    std::size_t p = 0;
    while (p < used.size()) {
      std::vector<std::size_t> block;
      while (p < used.size() && piece_type(used[p]) == '2') block.push_back(used[p++]);
      if (p < used.size() && piece_type(used[p]) == 'b') block.push_back(used[p++]);
      while (p < used.size() && piece_type(used[p]) == '1') block.push_back(used[p++]);
      blocks.push_back(block);
    }
    std::vector<TModel> ublocks;
    for (const auto& block : blocks) {
      IndexSet members;
      for (auto i : block) members.insert(members.end(), pieces[i].begin(), pieces[i].end());
      std::sort(members.begin(), members.end());
      if (!bicoloured(g, members)) throw ModelError("clean_bicotree: internal error, monochromatic block");
      std::vector<TModel> comps;
      for (const auto& comp : bip_components_within(g, members, false))
        comps.push_back(clean_part(t, g, kids[owner[comp[0]]], comp));
      ublocks.push_back(bicotree_node(NodeType::U, comps));
    }
    qmodels.push_back(bicotree_node(NodeType::O, ublocks));
  }
  if (qmodels.size() == 1) return qmodels.front();
  return bicotree_node(NodeType::B, qmodels);
}
}  // namespace detail

/// Clean bicotree of the same bipartite graph with height at most three
/// times the input height.
inline TModel clean_bicotree(const TModel& t) {
  require_bicotree(t, "clean_bicotree");
  if (t.empty()) return t;
  return normalized(detail::clean_rec(t));
}

}  // namespace lcw
