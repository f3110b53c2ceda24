#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "lcw/graph.hpp"
#include "lcw/relstructure.hpp"

namespace lcw {

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class NodeKind : std::uint8_t { Leaf, A, C };

// Optional tag for cotrees (U/J) and bicotrees (U/B/O). The semantics are
// carried entirely by kind and kappa; the tag is bookkeeping.
enum class NodeType : std::uint8_t { None, U, J, B, O };

inline constexpr Index npos = static_cast<Index>(-1);

inline const char* kind_name(NodeKind k) {
  switch (k) {
    case NodeKind::Leaf: return "leaf";
    case NodeKind::A: return "A";
    case NodeKind::C: return "C";
  }
  return "?";
}

inline const char* type_name(NodeType t) {
  switch (t) {
    case NodeType::None: return "";
    case NodeType::U: return "U";
    case NodeType::J: return "J";
    case NodeType::B: return "B";
    case NodeType::O: return "O";
  }
  return "?";
}

inline NodeType parse_type(const std::string& s) {
  if (s.empty()) return NodeType::None;
  if (s == "U") return NodeType::U;
  if (s == "J") return NodeType::J;
  if (s == "B") return NodeType::B;
  if (s == "O") return NodeType::O;
  throw ModelError("unknown node type '" + s + "'");
}

struct TNode {
  std::string id;
  NodeKind kind = NodeKind::Leaf;
  Index parent = npos;
  std::vector<Index> children;  // child order at C-nodes
  int color = 0;                // leaves: 1..n
  std::vector<std::uint8_t> kappa;  // internal: n*n, row-major, 0-based colors
  NodeType type = NodeType::None;

  [[nodiscard]] bool is_leaf() const { return kind == NodeKind::Leaf; }
};

/// Semi-plane rooted tree decorated with a leaf colouring and per-node
/// adjacency tables. The root is its own parent. Leaves are the ground.
struct TModel {
  int n = 1;
  std::vector<TNode> nodes;
  Index root = npos;

  [[nodiscard]] bool empty() const { return nodes.empty(); }
  [[nodiscard]] std::size_t size() const { return nodes.size(); }
  const TNode& operator[](Index v) const { return nodes[v]; }
  TNode& operator[](Index v) { return nodes[v]; }

  [[nodiscard]] bool kappa(Index v, int i, int j) const {
    return nodes[v].kappa[static_cast<std::size_t>((i - 1) * n + (j - 1))] != 0;
  }
  void set_kappa(Index v, int i, int j, bool value) {
    nodes[v].kappa[static_cast<std::size_t>((i - 1) * n + (j - 1))] = value ? 1 : 0;
  }

  [[nodiscard]] std::optional<Index> find(const std::string& id) const {
    for (Index v = 0; v < nodes.size(); ++v)
      if (nodes[v].id == id) return v;
    return std::nullopt;
  }

  [[nodiscard]] Index index_of(const std::string& id) const {
    if (auto v = find(id)) return *v;
    throw ModelError("unknown node '" + id + "'");
  }

  /// Appends a node. Without a parent the node becomes the root.
  Index add_node(const std::string& id, NodeKind kind, Index parent = npos) {
    const Index v = nodes.size();
    TNode node;
    node.id = id;
    node.kind = kind;
    if (kind != NodeKind::Leaf) node.kappa.assign(static_cast<std::size_t>(n * n), 0);
    if (parent == npos) {
      if (root != npos) throw ModelError("second root '" + id + "'");
      root = v;
      node.parent = v;
    } else {
      if (parent >= nodes.size()) throw ModelError("parent out of range for '" + id + "'");
      node.parent = parent;
    }
    nodes.push_back(std::move(node));
    if (parent != npos) nodes[parent].children.push_back(v);
    return v;
  }

  Index add_leaf(const std::string& id, int color, Index parent = npos) {
    Index v = add_node(id, NodeKind::Leaf, parent);
    nodes[v].color = color;
    return v;
  }
};

// ---------------------------------------------------------------------------
// Traversals

inline std::vector<Index> preorder(const TModel& m) {
  std::vector<Index> out;
  if (m.empty()) return out;
  std::vector<Index> stack{m.root};
  while (!stack.empty()) {
    Index v = stack.back();
    stack.pop_back();
    out.push_back(v);
    const auto& ch = m[v].children;
    for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back(*it);
  }
  return out;
}

/// Leaves in left-to-right order.
inline std::vector<Index> leaves(const TModel& m) {
  std::vector<Index> out;
  for (Index v : preorder(m))
    if (m[v].is_leaf()) out.push_back(v);
  return out;
}

inline std::vector<std::string> ground(const TModel& m) {
  std::vector<std::string> out;
  for (Index v : leaves(m)) out.push_back(m[v].id);
  return out;
}

inline std::vector<Index> leaves_below(const TModel& m, Index u) {
  std::vector<Index> out;
  std::vector<Index> stack{u};
  while (!stack.empty()) {
    Index v = stack.back();
    stack.pop_back();
    if (m[v].is_leaf()) out.push_back(v);
    const auto& ch = m[v].children;
    for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back(*it);
  }
  return out;
}

inline std::vector<std::size_t> depths(const TModel& m) {
  std::vector<std::size_t> d(m.size(), 0);
  for (Index v : preorder(m))
    if (v != m.root) d[v] = d[m[v].parent] + 1;
  return d;
}

/// Number of vertices on a longest root-leaf path; 0 for the empty model.
inline std::size_t height(const TModel& m) {
  std::size_t h = 0;
  for (auto d : depths(m)) h = std::max(h, d + 1);
  return m.empty() ? 0 : h;
}

inline Index lca(const TModel& m, const std::vector<std::size_t>& depth, Index a, Index b) {
  while (depth[a] > depth[b]) a = m[a].parent;
  while (depth[b] > depth[a]) b = m[b].parent;
  while (a != b) {
    a = m[a].parent;
    b = m[b].parent;
  }
  return a;
}

inline Index lca(const TModel& m, Index a, Index b) { return lca(m, depths(m), a, b); }

/// Child of `w` on the path towards its descendant `y`.
inline Index st(const TModel& m, Index w, Index y) {
  if (y == w) throw ModelError("st: node is not a strict descendant");
  while (m[y].parent != w) {
    if (y == m.root) throw ModelError("st: node is not a descendant");
    y = m[y].parent;
  }
  return y;
}

inline std::size_t child_position(const TModel& m, Index c) {
  const auto& sib = m[m[c].parent].children;
  return static_cast<std::size_t>(std::find(sib.begin(), sib.end(), c) - sib.begin());
}

/// Lexicographic tree order: ancestors first, then the child order at
/// C-nodes inherited by all descendants. Leaves under the same A-node child
/// split are incomparable.
inline bool tree_less(const TModel& m, const std::vector<std::size_t>& depth, Index x, Index y) {
  if (x == y) return false;
  Index w = lca(m, depth, x, y);
  if (w == x) return true;
  if (w == y) return false;
  if (m[w].kind != NodeKind::C) return false;
  return child_position(m, st(m, w, x)) < child_position(m, st(m, w, y));
}

// ---------------------------------------------------------------------------
// Validation

inline std::vector<std::string> validate(const TModel& m) {
  std::vector<std::string> out;
  if (m.empty()) return out;
  if (m.n < 1) out.push_back("n must be at least 1");
  if (m.root >= m.size()) {
    out.push_back("root out of range");
    return out;
  }
  if (m[m.root].parent != m.root) out.push_back("root is not its own parent");
  std::set<std::string> ids;
  for (Index v = 0; v < m.size(); ++v) {
    const auto& node = m[v];
    if (!ids.insert(node.id).second) out.push_back("duplicate node id '" + node.id + "'");
    if (v != m.root) {
      if (node.parent >= m.size() || node.parent == v) {
        out.push_back("node '" + node.id + "' has an invalid parent");
        continue;
      }
      const auto& sib = m[node.parent].children;
      if (std::count(sib.begin(), sib.end(), v) != 1)
        out.push_back("node '" + node.id + "' is not listed exactly once among its parent's children");
    }
    for (Index c : node.children)
      if (c >= m.size() || m[c].parent != v) out.push_back("child list of '" + node.id + "' is inconsistent");
    if (node.is_leaf()) {
      if (!node.children.empty()) out.push_back("leaf '" + node.id + "' has children");
      if (node.color < 1 || node.color > m.n)
        out.push_back("leaf '" + node.id + "' has colour " + std::to_string(node.color) + " outside [n]");
    } else {
      if (node.children.empty()) out.push_back("internal node '" + node.id + "' has no children");
      if (node.kappa.size() != static_cast<std::size_t>(m.n * m.n)) {
        out.push_back("internal node '" + node.id + "' lacks a full kappa table");
      } else if (node.kind == NodeKind::A) {
        for (int i = 1; i <= m.n; ++i)
          for (int j = i + 1; j <= m.n; ++j)
            if (m.kappa(v, i, j) != m.kappa(v, j, i))
              out.push_back("kappa of A-node '" + node.id + "' is not symmetric at (" + std::to_string(i) + "," +
                            std::to_string(j) + ")");
      }
    }
  }
  // Every node must be reachable from the root (and hence the structure is a tree).
  if (preorder(m).size() != m.size()) out.push_back("parent structure is not a rooted tree");
  return out;
}

inline void require_valid(const TModel& m) {
  auto v = validate(m);
  if (!v.empty()) throw ModelError("malformed model: " + v.front());
}

// ---------------------------------------------------------------------------
// Build

/// The graph defined by the model on its leaves. At each internal node w the
/// pairs split between two children of w are decided by kappa_w; at C-nodes
/// the earlier child supplies the first colour.
inline Graph build(const TModel& m) {
  require_valid(m);
  Graph g;
  std::unordered_map<Index, Index> vid;
  for (Index v : leaves(m)) vid[v] = g.add_vertex(m[v].id);
  for (Index w = 0; w < m.size(); ++w) {
    const auto& node = m[w];
    if (node.is_leaf()) continue;
    std::vector<std::vector<Index>> under;
    for (Index c : node.children) under.push_back(leaves_below(m, c));
    for (std::size_t a = 0; a < under.size(); ++a)
      for (std::size_t b = a + 1; b < under.size(); ++b)
        for (Index x : under[a])
          for (Index y : under[b]) {
            const int cx = m[x].color, cy = m[y].color;
            bool e = node.kind == NodeKind::A ? (m.kappa(w, cx, cy) || m.kappa(w, cy, cx)) : m.kappa(w, cx, cy);
            if (e) g.add_edge(vid[x], vid[y]);
          }
  }
  return g;
}

/// Build for two-coloured models; sides are the leaf colours.
inline BipartiteGraph build_bipartite(const TModel& m) {
  if (!m.empty() && m.n != 2) throw ModelError("bipartite build needs n = 2");
  BipartiteGraph b;
  b.graph = build(m);
  b.side.resize(b.graph.size());
  for (Index v : leaves(m)) b.side[b.graph.index_of(m[v].id)] = m[v].color;
  return b;
}

// ---------------------------------------------------------------------------
// Restriction and submodels

/// Model induced by the ancestors of the kept leaves; no unary nodes are
/// suppressed. `keep[v]` is indexed by node.
inline TModel restrict_nodes(const TModel& m, const std::vector<char>& keep_leaf) {
  TModel out;
  out.n = m.n;
  if (m.empty()) return out;
  std::vector<char> keep(m.size(), 0);
  auto order = preorder(m);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Index v = *it;
    if (m[v].is_leaf()) keep[v] = keep_leaf[v];
    else
      for (Index c : m[v].children) keep[v] = keep[v] || keep[c];
  }
  if (!keep[m.root]) return out;
  std::vector<Index> map(m.size(), npos);
  for (Index v : order) {
    if (!keep[v]) continue;
    const auto& node = m[v];
    Index nv = out.add_node(node.id, node.kind, v == m.root ? npos : map[node.parent]);
    map[v] = nv;
    out[nv].color = node.color;
    out[nv].kappa = node.kappa;
    out[nv].type = node.type;
  }
  return out;
}

inline TModel restrict(const TModel& m, const std::vector<std::string>& x) {
  std::vector<char> keep(m.size(), 0);
  for (const auto& id : x) {
    auto v = m.find(id);
    if (!v || !m[*v].is_leaf()) throw ModelError("restrict: '" + id + "' is not a leaf of the model");
    keep[*v] = 1;
  }
  return restrict_nodes(m, keep);
}

inline TModel subtree_at(const TModel& m, Index u) {
  if (u >= m.size()) throw ModelError("subtree_at: node out of range");
  TModel out;
  out.n = m.n;
  std::vector<Index> map(m.size(), npos);
  std::vector<Index> stack{u};
  while (!stack.empty()) {
    Index v = stack.back();
    stack.pop_back();
    const auto& node = m[v];
    Index nv = out.add_node(node.id, node.kind, v == u ? npos : map[node.parent]);
    map[v] = nv;
    out[nv].color = node.color;
    out[nv].kappa = node.kappa;
    out[nv].type = node.type;
    for (auto it = node.children.rbegin(); it != node.children.rend(); ++it) stack.push_back(*it);
  }
  return out;
}

inline TModel subtree_at(const TModel& m, const std::string& id) { return subtree_at(m, m.index_of(id)); }

/// Copies `sub` below node `parent` of `into`; returns the new index of its root.
inline Index graft(TModel& into, Index parent, const TModel& sub) {
  if (sub.empty()) return npos;
  if (sub.n != into.n) throw ModelError("graft: colour counts differ");
  std::vector<Index> map(sub.size(), npos);
  for (Index v : preorder(sub)) {
    const auto& node = sub[v];
    Index nv = into.add_node(node.id, node.kind, v == sub.root ? parent : map[node.parent]);
    map[v] = nv;
    into[nv].color = node.color;
    into[nv].kappa = node.kappa;
    into[nv].type = node.type;
  }
  return map[sub.root];
}

/// Renames internal nodes "#0", "#1", ... in preorder and stores the nodes
/// in preorder. Leaf ids (the ground) are untouched.
inline TModel normalized(const TModel& m) {
  TModel out;
  out.n = m.n;
  if (m.empty()) return out;
  std::vector<Index> map(m.size(), npos);
  std::size_t counter = 0;
  for (Index v : preorder(m)) {
    const auto& node = m[v];
    std::string id = node.is_leaf() ? node.id : "#" + std::to_string(counter++);
    Index nv = out.add_node(id, node.kind, v == m.root ? npos : map[node.parent]);
    map[v] = nv;
    out[nv].color = node.color;
    out[nv].kappa = node.kappa;
    out[nv].type = node.type;
  }
  return out;
}

inline TModel single_leaf(const std::string& id, int color = 1, int n = 1) {
  TModel m;
  m.n = n;
  m.add_leaf(id, color);
  return m;
}

/// New root of the given kind over copies of `children` (empty ones skipped),
/// normalised.
inline TModel make_node(NodeKind kind, NodeType type, const std::vector<std::uint8_t>& kappa,
                        const std::vector<TModel>& children, int n) {
  TModel m;
  m.n = n;
  Index r = m.add_node("#", kind);
  if (kappa.size() != static_cast<std::size_t>(n * n)) throw ModelError("make_node: kappa table size mismatch");
  m[r].kappa = kappa;
  m[r].type = type;
  for (const auto& c : children) graft(m, r, c);
  if (m[r].children.empty()) throw ModelError("make_node: no children");
  return normalized(m);
}

// ---------------------------------------------------------------------------
// Isomorphism fixing the ground

namespace detail {
inline std::string canon_rec(const TModel& m, Index v, std::string& minleaf) {
  const auto& node = m[v];
  if (node.is_leaf()) {
    minleaf = node.id;
    return "L" + std::to_string(node.id.size()) + ":" + node.id + ":" + std::to_string(node.color);
  }
  std::vector<std::pair<std::string, std::string>> parts;
  for (Index c : node.children) {
    std::string ml;
    auto s = canon_rec(m, c, ml);
    parts.emplace_back(ml, std::move(s));
  }
  minleaf = parts.front().first;
  for (const auto& p : parts) minleaf = std::min(minleaf, p.first);
  // Children of A-nodes have disjoint leaf sets, so sorting by smallest leaf
  // id is canonical.
  if (node.kind == NodeKind::A) std::sort(parts.begin(), parts.end());
  std::string s = node.kind == NodeKind::A ? "A" : "C";
  for (auto k : node.kappa) s += k ? '1' : '0';
  s += "(";
  for (const auto& p : parts) s += p.second + ",";
  return s + ")";
}
}  // namespace detail

/// Canonical string of the model up to isomorphisms fixing the leaves.
/// Internal node ids and type tags are ignored.
inline std::string canonical_form(const TModel& m) {
  if (m.empty()) return "empty/" + std::to_string(m.n);
  std::string ml;
  return "n" + std::to_string(m.n) + "/" + detail::canon_rec(m, m.root, ml);
}

inline bool model_iso_fixing_ground(const TModel& a, const TModel& b) { return canonical_form(a) == canonical_form(b); }

/// Leaf bitmasks of every node over a shared ground numbering, so that the
/// canonical form of a restriction can be produced without materialising it.
/// Ground sets are limited to 64 elements.
struct MaskedModel {
  const TModel* model = nullptr;
  std::vector<std::uint64_t> mask;
  std::vector<int> bit;  // per node: ground bit for leaves, -1 otherwise

  MaskedModel() = default;
  MaskedModel(const TModel& m, const std::unordered_map<std::string, int>& ground_bit) : model(&m) {
    mask.assign(m.size(), 0);
    bit.assign(m.size(), -1);
    auto order = preorder(m);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      Index v = *it;
      if (m[v].is_leaf()) {
        auto g = ground_bit.find(m[v].id);
        if (g == ground_bit.end()) throw ModelError("masked model: leaf '" + m[v].id + "' missing from ground");
        if (g->second >= 64) throw ModelError("masked model: ground larger than 64");
        bit[v] = g->second;
        mask[v] = std::uint64_t{1} << g->second;
      } else {
        for (Index c : m[v].children) mask[v] |= mask[c];
      }
    }
  }

  [[nodiscard]] std::uint64_t ground_mask() const { return model->empty() ? 0 : mask[model->root]; }

  /// Token sequence of the restriction to the leaves in `x`.
  void canon(std::uint64_t x, std::vector<std::uint32_t>& out) const {
    out.clear();
    const TModel& m = *model;
    if (m.empty() || !(mask[m.root] & x)) {
      out.push_back(0);
      return;
    }
    rec(m.root, x, out);
  }

 private:
  void rec(Index v, std::uint64_t x, std::vector<std::uint32_t>& out) const {
    const TModel& m = *model;
    const auto& node = m[v];
    if (node.is_leaf()) {
      out.push_back(1);
      out.push_back(static_cast<std::uint32_t>(bit[v]));
      out.push_back(static_cast<std::uint32_t>(node.color));
      return;
    }
    out.push_back(node.kind == NodeKind::A ? 2 : 3);
    std::uint32_t word = 0;
    int used = 0;
    for (auto k : node.kappa) {
      word = (word << 1) | k;
      if (++used == 32) {
        out.push_back(word);
        word = 0;
        used = 0;
      }
    }
    out.push_back(word);
    Index kept[64];
    std::size_t nk = 0;
    for (Index c : node.children)
      if (mask[c] & x) kept[nk++] = c;
    out.push_back(static_cast<std::uint32_t>(nk));
    if (node.kind == NodeKind::A)
      std::sort(kept, kept + nk, [&](Index a, Index b) {
        return std::countr_zero(mask[a] & x) < std::countr_zero(mask[b] & x);
      });
    for (std::size_t i = 0; i < nk; ++i) rec(kept[i], x, out);
  }
};

// ---------------------------------------------------------------------------
// Relational encodings of the tree

/// sigma1: C (unary), Inf(x,y,z) for z = lowest common ancestor of x and y,
/// Ord(x,y) for siblings under a C-node with x before y.
inline RelStructure encode_sigma1(const TModel& m) {
  RelStructure s;
  for (const auto& node : m.nodes) s.add_element(node.id);
  s.declare("C", 1);
  s.declare("Inf", 3);
  s.declare("Ord", 2);
  auto d = depths(m);
  for (Index v = 0; v < m.size(); ++v) {
    if (m[v].kind == NodeKind::C) {
      s.add("C", Tuple{v});
      const auto& ch = m[v].children;
      for (std::size_t a = 0; a < ch.size(); ++a)
        for (std::size_t b = a + 1; b < ch.size(); ++b) s.add("Ord", Tuple{ch[a], ch[b]});
    }
    for (Index u = 0; u < m.size(); ++u) s.add("Inf", Tuple{v, u, lca(m, d, v, u)});
  }
  return s;
}

/// sigma2: Lt (the lexicographic tree order) and E (tree edges, symmetric).
inline RelStructure encode_sigma2(const TModel& m) {
  RelStructure s;
  for (const auto& node : m.nodes) s.add_element(node.id);
  s.declare("Lt", 2);
  s.declare("E", 2);
  auto d = depths(m);
  for (Index v = 0; v < m.size(); ++v) {
    if (v != m.root) {
      s.add("E", Tuple{v, m[v].parent});
      s.add("E", Tuple{m[v].parent, v});
    }
    for (Index u = 0; u < m.size(); ++u)
      if (tree_less(m, d, v, u)) s.add("Lt", Tuple{v, u});
  }
  return s;
}

/// sigma3: Root (unary), E (tree edges, symmetric), Ord (sibling order at C-nodes).
inline RelStructure encode_sigma3(const TModel& m) {
  RelStructure s;
  for (const auto& node : m.nodes) s.add_element(node.id);
  s.declare("Root", 1);
  s.declare("E", 2);
  s.declare("Ord", 2);
  if (m.empty()) return s;
  s.add("Root", Tuple{m.root});
  for (Index v = 0; v < m.size(); ++v) {
    if (v != m.root) {
      s.add("E", Tuple{v, m[v].parent});
      s.add("E", Tuple{m[v].parent, v});
    }
    if (m[v].kind == NodeKind::C) {
      const auto& ch = m[v].children;
      for (std::size_t a = 0; a < ch.size(); ++a)
        for (std::size_t b = a + 1; b < ch.size(); ++b) s.add("Ord", Tuple{ch[a], ch[b]});
    }
  }
  return s;
}

/// Rebuilds the bare tree (kinds, parents, child orders) from its sigma3
/// encoding. Leaves get colour 1 and internal nodes an all-false table. A
/// C-node with a single child carries no Ord pair and comes back as A.
inline TModel decode_sigma3(const RelStructure& s, std::size_t h) {
  TModel m;
  m.n = 1;
  if (s.size() == 0) return m;
  for (const char* r : {"Root", "E", "Ord"})
    if (!s.has_relation(r)) throw ModelError(std::string("sigma3 decode: missing relation ") + r);
  auto roots = s.tuples("Root");
  if (roots.size() != 1) throw ModelError("sigma3 decode: expected exactly one root");
  const Index r = roots[0][0];
  const auto& E = s.relation("E");
  const auto& Ord = s.relation("Ord");
  const std::size_t n = s.size();
  std::vector<Index> parent(n, npos);
  std::vector<std::size_t> depth(n, 0);
  std::vector<char> seen(n, 0);
  std::vector<Index> queue{r};
  seen[r] = 1;
  parent[r] = r;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    Index v = queue[head];
    for (Index u = 0; u < n; ++u) {
      if (!E.contains({v, u})) continue;
      if (!E.contains({u, v})) throw ModelError("sigma3 decode: E is not symmetric");
      if (seen[u]) {
        if (u != parent[v]) throw ModelError("sigma3 decode: E contains a cycle");
        continue;
      }
      seen[u] = 1;
      parent[u] = v;
      depth[u] = depth[v] + 1;
      if (depth[u] + 1 > h) throw ModelError("sigma3 decode: tree deeper than the height bound");
      queue.push_back(u);
    }
  }
  if (queue.size() != n) throw ModelError("sigma3 decode: E is not connected");
  std::vector<std::vector<Index>> children(n);
  for (Index v : queue)
    if (v != r) children[parent[v]].push_back(v);
  for (auto [a, b] : [&] {
         std::vector<std::pair<Index, Index>> p;
         for (const auto& t : Ord.all()) p.emplace_back(t[0], t[1]);
         return p;
       }()) {
    if (a == r || b == r || parent[a] != parent[b] || a == b)
      throw ModelError("sigma3 decode: Ord relates non-siblings");
  }
  std::vector<Index> map(n, npos);
  for (Index v : queue) {
    auto& ch = children[v];
    bool ordered = false;
    for (Index a : ch)
      for (Index b : ch)
        if (Ord.contains({a, b})) ordered = true;
    NodeKind kind = ch.empty() ? NodeKind::Leaf : (ordered ? NodeKind::C : NodeKind::A);
    if (ordered) {
      // Ord must be a strict total order on the children.
      std::vector<std::size_t> rank(n, 0);
      for (Index a : ch) {
        for (Index b : ch)
          if (a != b && Ord.contains({b, a})) ++rank[a];
        for (Index b : ch)
          if (a != b && Ord.contains({a, b}) == Ord.contains({b, a}))
            throw ModelError("sigma3 decode: Ord is not a linear order on the children of '" + s.element(v) + "'");
      }
      std::sort(ch.begin(), ch.end(), [&](Index a, Index b) { return rank[a] < rank[b]; });
    }
    Index nv = m.add_node(s.element(v), kind, v == r ? npos : map[parent[v]]);
    map[v] = nv;
    if (kind == NodeKind::Leaf) m[nv].color = 1;
  }
  return m;
}

/// Same ids, kinds, parents and child sequences (ignoring colours and tables).
inline bool same_tree(const TModel& a, const TModel& b) {
  if (a.size() != b.size()) return false;
  if (a.empty()) return true;
  if (a[a.root].id != b[b.root].id) return false;
  for (const auto& node : a.nodes) {
    auto w = b.find(node.id);
    if (!w) return false;
    const auto& other = b[*w];
    if (node.kind != other.kind) return false;
    if (a[node.parent].id != b[other.parent].id) return false;
    std::vector<std::string> ca, cb;
    for (Index c : node.children) ca.push_back(a[c].id);
    for (Index c : other.children) cb.push_back(b[c].id);
    if (node.kind == NodeKind::A) {
      std::sort(ca.begin(), ca.end());
      std::sort(cb.begin(), cb.end());
    }
    if (ca != cb) return false;
  }
  return true;
}

/// Replaces single-child C-nodes by A-nodes (the sigma3 round-trip normal form).
inline TModel demote_unary_c(TModel m) {
  for (auto& node : m.nodes)
    if (node.kind == NodeKind::C && node.children.size() == 1) node.kind = NodeKind::A;
  return m;
}

/// The model as a single structure for formula evaluation: unaries L, A, C,
/// Col<i>, K<i>_<j>; binary Lt (tree order); ternary Inf.
inline RelStructure model_structure(const TModel& m) {
  RelStructure s;
  for (const auto& node : m.nodes) s.add_element(node.id);
  s.declare("L", 1);
  s.declare("A", 1);
  s.declare("C", 1);
  for (int i = 1; i <= m.n; ++i) {
    s.declare("Col" + std::to_string(i), 1);
    for (int j = 1; j <= m.n; ++j) s.declare("K" + std::to_string(i) + "_" + std::to_string(j), 1);
  }
  s.declare("Lt", 2);
  s.declare("Inf", 3);
  auto d = depths(m);
  for (Index v = 0; v < m.size(); ++v) {
    const auto& node = m[v];
    if (node.is_leaf()) {
      s.add("L", Tuple{v});
      s.add("Col" + std::to_string(node.color), Tuple{v});
    } else {
      s.add(node.kind == NodeKind::A ? "A" : "C", Tuple{v});
      for (int i = 1; i <= m.n; ++i)
        for (int j = 1; j <= m.n; ++j)
          if (m.kappa(v, i, j)) s.add("K" + std::to_string(i) + "_" + std::to_string(j), Tuple{v});
    }
    for (Index u = 0; u < m.size(); ++u) {
      if (tree_less(m, d, v, u)) s.add("Lt", Tuple{v, u});
      s.add("Inf", Tuple{v, u, lca(m, d, v, u)});
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// JSON and text

inline nlohmann::ordered_json to_json(const TModel& m) {
  nlohmann::ordered_json j;
  j["n"] = m.n;
  auto nodes = nlohmann::ordered_json::array();
  auto gamma = nlohmann::ordered_json::object();
  auto kappa = nlohmann::ordered_json::object();
  for (Index v : preorder(m)) {
    const auto& node = m[v];
    nlohmann::ordered_json nj;
    nj["id"] = node.id;
    nj["kind"] = kind_name(node.kind);
    nj["parent"] = m[node.parent].id;
    if (v != m.root && m[node.parent].kind == NodeKind::C) nj["order_index"] = child_position(m, v);
    if (node.type != NodeType::None) nj["type"] = type_name(node.type);
    nodes.push_back(nj);
    if (node.is_leaf()) {
      gamma[node.id] = node.color;
    } else {
      auto rows = nlohmann::ordered_json::array();
      for (int i = 1; i <= m.n; ++i) {
        auto row = nlohmann::ordered_json::array();
        for (int k = 1; k <= m.n; ++k) row.push_back(m.kappa(v, i, k));
        rows.push_back(row);
      }
      kappa[node.id] = rows;
    }
  }
  j["nodes"] = nodes;
  j["gamma"] = gamma;
  j["kappa"] = kappa;
  return j;
}

inline TModel tmodel_from_json(const nlohmann::ordered_json& j) {
  TModel m;
  try {
    m.n = j.at("n").get<int>();
    if (m.n < 1) throw ModelError("n must be at least 1");
    const auto& nodes = j.at("nodes");
    struct Raw {
      std::string id, kind, parent, type;
      std::optional<std::size_t> order;
    };
    std::vector<Raw> raw;
    std::map<std::string, std::size_t> pos;
    for (const auto& nj : nodes) {
      Raw r;
      r.id = nj.at("id").get<std::string>();
      r.kind = nj.at("kind").get<std::string>();
      r.parent = nj.at("parent").get<std::string>();
      if (nj.contains("type")) r.type = nj.at("type").get<std::string>();
      if (nj.contains("order_index")) r.order = nj.at("order_index").get<std::size_t>();
      if (!pos.emplace(r.id, raw.size()).second) throw ModelError("duplicate node id '" + r.id + "'");
      raw.push_back(r);
    }
    if (raw.empty()) return m;
    std::map<std::string, std::vector<std::size_t>> kids;
    std::optional<std::size_t> root;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (raw[i].parent == raw[i].id) {
        if (root) throw ModelError("more than one root");
        root = i;
      } else {
        if (!pos.count(raw[i].parent)) throw ModelError("unknown parent '" + raw[i].parent + "'");
        kids[raw[i].parent].push_back(i);
      }
    }
    if (!root) throw ModelError("no root (a node whose parent is itself)");
    const auto& gamma = j.at("gamma");
    const auto& kappa = j.at("kappa");
    std::function<void(std::size_t, Index)> add = [&](std::size_t i, Index parent) {
      const Raw& r = raw[i];
      NodeKind kind;
      if (r.kind == "leaf") kind = NodeKind::Leaf;
      else if (r.kind == "A") kind = NodeKind::A;
      else if (r.kind == "C") kind = NodeKind::C;
      else throw ModelError("unknown node kind '" + r.kind + "'");
      if (m.size() > raw.size()) throw ModelError("parent structure is not a tree");
      Index v = m.add_node(r.id, kind, parent);
      m[v].type = parse_type(r.type);
      if (kind == NodeKind::Leaf) {
        if (!gamma.contains(r.id)) throw ModelError("leaf '" + r.id + "' has no colour");
        m[v].color = gamma.at(r.id).get<int>();
      } else {
        if (!kappa.contains(r.id)) throw ModelError("internal node '" + r.id + "' has no kappa table");
        const auto& rows = kappa.at(r.id);
        if (rows.size() != static_cast<std::size_t>(m.n)) throw ModelError("kappa of '" + r.id + "' has wrong shape");
        for (int a = 0; a < m.n; ++a) {
          if (rows[a].size() != static_cast<std::size_t>(m.n))
            throw ModelError("kappa of '" + r.id + "' has wrong shape");
          for (int b = 0; b < m.n; ++b) m.set_kappa(v, a + 1, b + 1, rows[a][b].get<bool>());
        }
      }
      auto ch = kids[r.id];
      if (kind == NodeKind::C) {
        for (auto c : ch)
          if (!raw[c].order) throw ModelError("child '" + raw[c].id + "' of C-node lacks order_index");
        std::stable_sort(ch.begin(), ch.end(), [&](auto a, auto b) { return *raw[a].order < *raw[b].order; });
      }
      for (auto c : ch) add(c, v);
    };
    add(*root, npos);
    if (m.size() != raw.size()) throw ModelError("parent structure is not a rooted tree");
  } catch (const nlohmann::json::exception& e) {
    throw ModelError(std::string("malformed model JSON: ") + e.what());
  }
  auto v = validate(m);
  if (!v.empty()) throw ModelError("malformed model: " + v.front());
  return m;
}

/// Indented outline, one node per line.
inline std::string format_tree(const TModel& m) {
  std::ostringstream out;
  if (m.empty()) return "(empty)\n";
  auto d = depths(m);
  for (Index v : preorder(m)) {
    const auto& node = m[v];
    out << std::string(2 * d[v], ' ');
    if (node.is_leaf()) {
      out << node.id << " [" << node.color << "]\n";
      continue;
    }
    out << node.id << ' ' << kind_name(node.kind);
    if (node.type != NodeType::None) out << '/' << type_name(node.type);
    out << " kappa=";
    for (auto k : node.kappa) out << (k ? '1' : '0');
    out << '\n';
  }
  return out.str();
}

}  // namespace lcw
