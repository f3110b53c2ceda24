#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "lcw/bicotree.hpp"
#include "lcw/cotree.hpp"
#include "lcw/graph.hpp"
#include "lcw/relstructure.hpp"
#include "lcw/tmodel.hpp"

namespace lcw {

class AmalgamError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using CellPair = std::pair<int, int>;

/// A colouring of a graph into N cells, with optional witness models for the
/// cells and the cell pairs (as produced from a T-model).
struct Split {
  Graph graph;
  std::vector<int> gamma;  // per vertex index, 1..N
  int N = 1;
  std::size_t h = 1;
  std::map<int, TModel> cell_witness;
  std::map<CellPair, TModel> pair_witness;

  [[nodiscard]] IndexSet cell(int i) const {
    IndexSet out;
    for (Index v = 0; v < graph.size(); ++v)
      if (gamma[v] == i) out.push_back(v);
    return out;
  }
};

struct SplitReport {
  std::vector<std::string> failures;
  std::map<int, std::size_t> cell_heights;
  std::map<CellPair, std::size_t> pair_heights;
  [[nodiscard]] bool ok() const { return failures.empty(); }
};

inline std::string pair_key(int i, int j) { return std::to_string(i) + "," + std::to_string(j); }

/// Cells must be cographs whose clean cotree has height at most h. Pairs
/// must be sobs: a supplied witness must model the pair with height at most
/// h; the deterministic decomposition must succeed with height at most 3h.
inline SplitReport verify_split(const Split& s) {
  SplitReport r;
  if (s.gamma.size() != s.graph.size()) {
    r.failures.push_back("colouring is not total");
    return r;
  }
  for (Index v = 0; v < s.graph.size(); ++v)
    if (s.gamma[v] < 1 || s.gamma[v] > s.N)
      r.failures.push_back("vertex " + s.graph.name(v) + " has colour outside [N]");
  if (!r.ok()) return r;
  for (int i = 1; i <= s.N; ++i) {
    auto cell = s.cell(i);
    if (cell.empty()) continue;
    Graph gi = induced_subgraph(s.graph, cell);
    try {
      auto t = cograph_decompose(gi);
      r.cell_heights[i] = height(t);
      if (height(t) > s.h)
        r.failures.push_back("cell " + std::to_string(i) + ": cotree height " + std::to_string(height(t)) +
                             " exceeds " + std::to_string(s.h));
    } catch (const NotCograph& e) {
      r.failures.push_back("cell " + std::to_string(i) + ": " + e.what());
    }
    if (auto it = s.cell_witness.find(i); it != s.cell_witness.end()) {
      if (!is_cotree(it->second) || !(build(it->second) == gi))
        r.failures.push_back("cell " + std::to_string(i) + ": witness cotree does not model the cell");
      else if (height(it->second) > s.h)
        r.failures.push_back("cell " + std::to_string(i) + ": witness cotree too high");
    }
  }
  for (int i = 1; i <= s.N; ++i)
    for (int j = i + 1; j <= s.N; ++j) {
      auto ci = s.cell(i), cj = s.cell(j);
      if (ci.empty() && cj.empty()) continue;
      BipartiteGraph b = semi_induced(s.graph, ci, cj);
      const std::string key = "pair " + pair_key(i, j) + ": ";
      try {
        auto t = sob_decompose(b);
        r.pair_heights[{i, j}] = height(t);
        if (height(t) > 3 * s.h)
          r.failures.push_back(key + "clean bicotree height " + std::to_string(height(t)) + " exceeds 3h");
      } catch (const NotSob& e) {
        r.failures.push_back(key + e.what());
      }
      if (auto it = s.pair_witness.find({i, j}); it != s.pair_witness.end()) {
        if (!is_bicotree(it->second) || !(build_bipartite(it->second) == b))
          r.failures.push_back(key + "witness bicotree does not model the pair");
        else if (height(it->second) > s.h)
          r.failures.push_back(key + "witness bicotree too high");
      }
    }
  return r;
}

inline SplitReport verify_split(const Graph& g, const std::vector<int>& gamma, int N, std::size_t h) {
  Split s;
  s.graph = g;
  s.gamma = gamma;
  s.N = N;
  s.h = h;
  return verify_split(s);
}

/// Split read off a T-model: cells and pairs get the restricted models,
/// with the tables reduced to the colours involved.
inline Split split_from_tmodel(const TModel& m) {
  require_valid(m);
  Split s;
  s.graph = build(m);
  s.N = m.n;
  s.h = height(m);
  s.gamma.assign(s.graph.size(), 0);
  for (Index v : leaves(m)) s.gamma[s.graph.index_of(m[v].id)] = m[v].color;
  for (int i = 1; i <= m.n; ++i) {
    std::vector<std::string> cell;
    for (Index v : leaves(m))
      if (m[v].color == i) cell.push_back(m[v].id);
    if (cell.empty()) continue;
    TModel r = restrict(m, cell);
    TModel t;
    t.n = 1;
    t.nodes = r.nodes;
    t.root = r.root;
    for (auto& node : t.nodes) {
      if (node.is_leaf()) {
        node.color = 1;
        continue;
      }
      bool k = r.kappa(static_cast<Index>(&node - t.nodes.data()), i, i);
      node.kind = NodeKind::A;
      node.kappa = {static_cast<std::uint8_t>(k)};
      node.type = k ? NodeType::J : NodeType::U;
    }
    s.cell_witness[i] = t;
  }
  for (int i = 1; i <= m.n; ++i)
    for (int j = i + 1; j <= m.n; ++j) {
      std::vector<std::string> cells;
      for (Index v : leaves(m))
        if (m[v].color == i || m[v].color == j) cells.push_back(m[v].id);
      if (cells.empty()) continue;
      TModel r = restrict(m, cells);
      TModel t;
      t.n = 2;
      t.nodes = r.nodes;
      t.root = r.root;
      for (Index v = 0; v < t.size(); ++v) {
        auto& node = t[v];
        if (node.is_leaf()) {
          node.color = node.color == i ? 1 : 2;
          continue;
        }
        bool a = r.kappa(v, i, j), b = r.kappa(v, j, i);
        NodeType type;
        if (a && b) type = NodeType::B;
        else if (!a && !b) type = NodeType::U;
        else type = NodeType::O;
        if (type == NodeType::O && node.kind == NodeKind::A) throw ModelError("split_from_tmodel: asymmetric A-node");
        if (type == NodeType::O && b) std::reverse(node.children.begin(), node.children.end());
        node.kind = type == NodeType::O ? NodeKind::C : NodeKind::A;
        node.kappa = bicotree_kappa(type);
        node.type = type;
      }
      s.pair_witness[{i, j}] = t;
    }
  return s;
}

// ---------------------------------------------------------------------------
// Amalgams

/// Link between a ground vertex and its copy among the leaves of a tree.
/// `j == 0` designates the cell tree of cell `i`.
struct Attachment {
  std::string vertex;
  int i = 0;
  int j = 0;
  std::string leaf;
  friend bool operator==(const Attachment&, const Attachment&) = default;
};

struct Amalgam {
  int n = 1;
  std::vector<std::string> ground;
  std::map<std::string, int> cell;        // L_i
  std::map<int, TModel> cell_trees;       // keys 1..n
  std::map<CellPair, TModel> pair_trees;  // keys (i,j), i<j
  std::map<std::string, std::string> iota_cell;
  std::map<CellPair, std::map<std::string, std::string>> iota_pair;
  std::vector<Attachment> attachments;
};

inline std::string cell_leaf_id(const std::string& v, int i) { return v + "@" + std::to_string(i); }
inline std::string pair_leaf_id(const std::string& v, int i, int j) { return v + "@" + pair_key(i, j); }

inline CellPair ordered_pair(int a, int b) { return a < b ? CellPair{a, b} : CellPair{b, a}; }

inline TModel rename_leaves(TModel m, const std::map<std::string, std::string>& names) {
  for (auto& node : m.nodes)
    if (node.is_leaf()) node.id = names.at(node.id);
  return m;
}

/// All three kinds of structural defects: malformed trees, injection
/// systems that are not bijections onto the leaves with matching colours,
/// and attachment lists that disagree with the injections.
inline std::vector<std::string> validate_amalgam(const Amalgam& a) {
  std::vector<std::string> out;
  std::set<std::string> gset(a.ground.begin(), a.ground.end());
  if (gset.size() != a.ground.size()) out.push_back("duplicate ground vertex");
  for (const auto& v : a.ground) {
    auto it = a.cell.find(v);
    if (it == a.cell.end() || it->second < 1 || it->second > a.n) out.push_back("vertex " + v + " has no valid cell");
  }
  if (a.cell.size() != a.ground.size()) out.push_back("cell map covers non-ground elements");
  if (!out.empty()) return out;

  auto check_tree = [&](const TModel& t, const std::map<std::string, std::string>& iota,
                        const std::map<std::string, int>& expect_colour, const std::string& what) {
    if (!validate(t).empty()) {
      out.push_back(what + ": malformed tree");
      return;
    }
    std::map<std::string, int> leaf_colour;
    for (Index l : leaves(t)) leaf_colour[t[l].id] = t[l].color;
    std::set<std::string> hit;
    for (const auto& [v, colour] : expect_colour) {
      auto it = iota.find(v);
      if (it == iota.end()) {
        out.push_back(what + ": injection misses " + v);
        continue;
      }
      auto lc = leaf_colour.find(it->second);
      if (lc == leaf_colour.end()) out.push_back(what + ": " + v + " maps to a non-leaf '" + it->second + "'");
      else if (lc->second != colour) out.push_back(what + ": colour of " + it->second + " does not match its side");
      if (!hit.insert(it->second).second) out.push_back(what + ": injection is not one-to-one at " + it->second);
    }
    if (iota.size() != expect_colour.size()) out.push_back(what + ": injection has stray entries");
    if (leaf_colour.size() != expect_colour.size()) out.push_back(what + ": leaves are not onto the cells");
  };

  for (int i = 1; i <= a.n; ++i) {
    std::map<std::string, int> expect;
    std::map<std::string, std::string> iota;
    for (const auto& v : a.ground)
      if (a.cell.at(v) == i) {
        expect[v] = 1;
        if (auto it = a.iota_cell.find(v); it != a.iota_cell.end()) iota[v] = it->second;
      }
    auto it = a.cell_trees.find(i);
    if (it == a.cell_trees.end()) {
      out.push_back("cell tree " + std::to_string(i) + " missing");
      continue;
    }
    if (!it->second.empty() && !is_cotree(it->second)) out.push_back("cell tree " + std::to_string(i) + " is not a cotree");
    check_tree(it->second, iota, expect, "cell tree " + std::to_string(i));
  }
  for (const auto& [v, leaf] : a.iota_cell)
    if (!gset.count(v)) out.push_back("cell injection defined on non-ground " + v);
  for (int i = 1; i <= a.n; ++i)
    for (int j = i + 1; j <= a.n; ++j) {
      std::map<std::string, int> expect;
      for (const auto& v : a.ground) {
        int c = a.cell.at(v);
        if (c == i) expect[v] = 1;
        if (c == j) expect[v] = 2;
      }
      auto it = a.pair_trees.find({i, j});
      const std::string what = "pair tree " + pair_key(i, j);
      if (it == a.pair_trees.end()) {
        out.push_back(what + " missing");
        continue;
      }
      if (!it->second.empty() && !is_bicotree(it->second)) out.push_back(what + " is not a bicotree");
      std::map<std::string, std::string> iota;
      if (auto ip = a.iota_pair.find({i, j}); ip != a.iota_pair.end()) iota = ip->second;
      check_tree(it->second, iota, expect, what);
    }

  std::set<std::tuple<std::string, int, int, std::string>> want, have;
  for (const auto& v : a.ground) {
    int c = a.cell.at(v);
    if (auto it = a.iota_cell.find(v); it != a.iota_cell.end()) want.emplace(v, c, 0, it->second);
    for (int k = 1; k <= a.n; ++k) {
      if (k == c) continue;
      auto p = ordered_pair(c, k);
      auto ip = a.iota_pair.find(p);
      if (ip == a.iota_pair.end()) continue;
      if (auto it = ip->second.find(v); it != ip->second.end()) want.emplace(v, p.first, p.second, it->second);
    }
  }
  for (const auto& at : a.attachments) have.emplace(at.vertex, at.i, at.j, at.leaf);
  if (have.size() != a.attachments.size()) out.push_back("duplicate attachment edge");
  for (const auto& w : want)
    if (!have.count(w)) out.push_back("attachment missing for " + std::get<0>(w) + " -> " + std::get<3>(w));
  for (const auto& h : have)
    if (!want.count(h)) out.push_back("stray attachment " + std::get<0>(h) + " -> " + std::get<3>(h));
  return out;
}

inline void require_valid_amalgam(const Amalgam& a) {
  auto v = validate_amalgam(a);
  if (!v.empty()) throw AmalgamError("invalid amalgam: " + v.front());
}

/// Fills injections and attachments for the given trees, whose leaves are
/// already named by cell_leaf_id / pair_leaf_id.
inline void attach_standard(Amalgam& a) {
  a.iota_cell.clear();
  a.iota_pair.clear();
  a.attachments.clear();
  for (const auto& v : a.ground) {
    int c = a.cell.at(v);
    a.iota_cell[v] = cell_leaf_id(v, c);
    a.attachments.push_back({v, c, 0, cell_leaf_id(v, c)});
    for (int k = 1; k <= a.n; ++k) {
      if (k == c) continue;
      auto [i, j] = ordered_pair(c, k);
      a.iota_pair[{i, j}][v] = pair_leaf_id(v, i, j);
      a.attachments.push_back({v, i, j, pair_leaf_id(v, i, j)});
    }
  }
}

/// Amalgam assembled from the clean decompositions of the cells and pairs.
inline Amalgam amalgam_build(const Graph& g, const std::vector<int>& gamma, int N) {
  if (gamma.size() != g.size()) throw AmalgamError("amalgam_build: colouring is not total");
  Amalgam a;
  a.n = N;
  a.ground = g.names();
  for (Index v = 0; v < g.size(); ++v) {
    if (gamma[v] < 1 || gamma[v] > N) throw AmalgamError("amalgam_build: colour outside [N]");
    a.cell[g.name(v)] = gamma[v];
  }
  auto cell = [&](int i) {
    IndexSet s;
    for (Index v = 0; v < g.size(); ++v)
      if (gamma[v] == i) s.push_back(v);
    return s;
  };
  for (int i = 1; i <= N; ++i) {
    auto ci = cell(i);
    TModel t;
    if (!ci.empty()) {
      std::map<std::string, std::string> names;
      for (Index v : ci) names[g.name(v)] = cell_leaf_id(g.name(v), i);
      t = rename_leaves(tag_cotree(cograph_decompose(induced_subgraph(g, ci))), names);
    }
    a.cell_trees[i] = t;
  }
  for (int i = 1; i <= N; ++i)
    for (int j = i + 1; j <= N; ++j) {
      auto ci = cell(i), cj = cell(j);
      TModel t;
      t.n = 2;
      if (!ci.empty() || !cj.empty()) {
        std::map<std::string, std::string> names;
        for (Index v : ci) names[g.name(v)] = pair_leaf_id(g.name(v), i, j);
        for (Index v : cj) names[g.name(v)] = pair_leaf_id(g.name(v), i, j);
        t = rename_leaves(sob_decompose(semi_induced(g, ci, cj)), names);
      }
      a.pair_trees[{i, j}] = t;
    }
  attach_standard(a);
  return a;
}

inline Amalgam amalgam_build(const Split& s) { return amalgam_build(s.graph, s.gamma, s.N); }

/// The graph on the ground: pairs inside a cell are read through the cell
/// tree, pairs across cells through the pair tree.
inline Graph sbuild(const Amalgam& a) {
  require_valid_amalgam(a);
  Graph g(a.ground);
  std::map<int, Graph> cg;
  std::map<CellPair, Graph> pg;
  for (const auto& [i, t] : a.cell_trees)
    if (!t.empty()) cg[i] = build(t);
  for (const auto& [p, t] : a.pair_trees)
    if (!t.empty()) pg[p] = build(t);
  for (Index x = 0; x < g.size(); ++x)
    for (Index y = x + 1; y < g.size(); ++y) {
      const auto &vx = a.ground[x], &vy = a.ground[y];
      int cx = a.cell.at(vx), cy = a.cell.at(vy);
      bool e;
      if (cx == cy) {
        const Graph& t = cg.at(cx);
        e = t.adjacent(t.index_of(a.iota_cell.at(vx)), t.index_of(a.iota_cell.at(vy)));
      } else {
        auto p = ordered_pair(cx, cy);
        const Graph& t = pg.at(p);
        const auto& iota = a.iota_pair.at(p);
        e = t.adjacent(t.index_of(iota.at(vx)), t.index_of(iota.at(vy)));
      }
      if (e) g.add_edge(x, y);
    }
  return g;
}

/// Component-wise restriction to the ground subset `w`.
inline Amalgam amalgam_restrict(const Amalgam& a, const std::vector<std::string>& w) {
  std::set<std::string> keep(w.begin(), w.end());
  for (const auto& v : keep)
    if (!a.cell.count(v)) throw AmalgamError("amalgam_restrict: unknown vertex '" + v + "'");
  Amalgam out;
  out.n = a.n;
  for (const auto& v : a.ground)
    if (keep.count(v)) {
      out.ground.push_back(v);
      out.cell[v] = a.cell.at(v);
      if (auto it = a.iota_cell.find(v); it != a.iota_cell.end()) out.iota_cell[v] = it->second;
    }
  for (const auto& [p, iota] : a.iota_pair)
    for (const auto& [v, leaf] : iota)
      if (keep.count(v)) out.iota_pair[p][v] = leaf;
  for (const auto& at : a.attachments)
    if (keep.count(at.vertex)) out.attachments.push_back(at);
  for (const auto& [i, t] : a.cell_trees) {
    std::vector<std::string> leaves;
    for (const auto& v : out.ground)
      if (out.cell.at(v) == i && out.iota_cell.count(v)) leaves.push_back(out.iota_cell.at(v));
    out.cell_trees[i] = leaves.empty() ? TModel{t.n, {}, npos} : restrict(t, leaves);
  }
  for (const auto& [p, t] : a.pair_trees) {
    std::vector<std::string> leaves;
    if (auto ip = out.iota_pair.find(p); ip != out.iota_pair.end())
      for (const auto& [v, leaf] : ip->second) leaves.push_back(leaf);
    out.pair_trees[p] = leaves.empty() ? TModel{t.n, {}, npos} : restrict(t, leaves);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Coupling view

inline std::string tree_prefix(int i, int j) {
  return j == 0 ? "T" + std::to_string(i) + ":" : "T" + pair_key(i, j) + ":";
}

/// Everything in one structure: ground elements "V:v", tree nodes
/// "T<i>:id" and "T<i>,<j>:id"; E holds tree and attachment edges, Lt the
/// child chains of ordered nodes, Gr the ground, L<i> the cells, and the
/// unaries Leaf, U, J, B, O the node types.
inline RelStructure coupling_view(const Amalgam& a) {
  RelStructure s;
  s.declare("E", 2);
  s.declare("Lt", 2);
  s.declare("Gr", 1);
  for (int i = 1; i <= a.n; ++i) s.declare("L" + std::to_string(i), 1);
  for (const char* t : {"Leaf", "U", "J", "B", "O"}) s.declare(t, 1);
  for (const auto& v : a.ground) {
    Index e = s.add_element("V:" + v);
    s.add("Gr", Tuple{e});
    s.add("L" + std::to_string(a.cell.at(v)), Tuple{e});
  }
  auto add_tree = [&](const TModel& t, const std::string& prefix, bool bico) {
    if (t.empty()) return;
    std::vector<Index> el(t.size());
    for (Index v : preorder(t)) el[v] = s.add_element(prefix + t[v].id);
    for (Index v = 0; v < t.size(); ++v) {
      const auto& node = t[v];
      if (v != t.root) {
        s.add("E", Tuple{el[v], el[node.parent]});
        s.add("E", Tuple{el[node.parent], el[v]});
      }
      if (node.is_leaf()) {
        s.add("Leaf", Tuple{el[v]});
        continue;
      }
      NodeType ty = bico ? bicotree_type(t, v) : (node.kappa[0] ? NodeType::J : NodeType::U);
      if (ty != NodeType::None) s.add(type_name(ty), Tuple{el[v]});
      if (node.kind == NodeKind::C)
        for (std::size_t x = 0; x < node.children.size(); ++x)
          for (std::size_t y = x + 1; y < node.children.size(); ++y)
            s.add("Lt", Tuple{el[node.children[x]], el[node.children[y]]});
    }
  };
  for (const auto& [i, t] : a.cell_trees) add_tree(t, tree_prefix(i, 0), false);
  for (const auto& [p, t] : a.pair_trees) add_tree(t, tree_prefix(p.first, p.second), true);
  for (const auto& at : a.attachments) {
    Index v = s.index_of("V:" + at.vertex);
    Index l = s.index_of(tree_prefix(at.i, at.j) + at.leaf);
    s.add("E", Tuple{v, l});
    s.add("E", Tuple{l, v});
  }
  return s;
}

/// Problems with reading `rel` as a disjoint union of strict linear orders:
/// it must be transitive and irreflexive, and all elements comparable to a
/// given one must be pairwise comparable.
inline std::vector<std::string> chain_union_violations(const RelStructure& s, const std::string& rel) {
  std::vector<std::string> out;
  const auto& r = s.relation(rel);
  const std::size_t n = s.size();
  auto cmp = [&](Index a, Index b) { return r.contains({a, b}) || r.contains({b, a}); };
  for (Index a = 0; a < n && out.size() < 8; ++a) {
    if (r.contains({a, a})) out.push_back("reflexive at " + s.element(a));
    for (Index b = 0; b < n; ++b) {
      if (a == b || !cmp(a, b)) continue;
      if (r.contains({a, b}) && r.contains({b, a})) out.push_back("symmetric pair " + s.element(a) + "," + s.element(b));
      for (Index c = 0; c < n; ++c) {
        if (c == a || c == b || !cmp(a, c)) continue;
        if (!cmp(b, c))
          out.push_back("incomparable " + s.element(b) + "," + s.element(c) + " in the chain of " + s.element(a));
        if (r.contains({a, b}) && r.contains({b, c}) && !r.contains({a, c}))
          out.push_back("not transitive at " + s.element(a) + "," + s.element(b) + "," + s.element(c));
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::ordered_json to_json(const Amalgam& a) {
  nlohmann::ordered_json j;
  j["n"] = a.n;
  j["ground"] = a.ground;
  auto cells = nlohmann::ordered_json::object();
  for (const auto& v : a.ground) cells[v] = a.cell.at(v);
  j["cells"] = cells;
  auto ct = nlohmann::ordered_json::object();
  for (const auto& [i, t] : a.cell_trees) ct[std::to_string(i)] = to_json(t);
  j["cell_trees"] = ct;
  auto pt = nlohmann::ordered_json::object();
  for (const auto& [p, t] : a.pair_trees) pt[pair_key(p.first, p.second)] = to_json(t);
  j["pair_trees"] = pt;
  nlohmann::ordered_json inj;
  auto ic = nlohmann::ordered_json::object();
  for (const auto& [v, l] : a.iota_cell) ic[v] = l;
  inj["cell"] = ic;
  auto ip = nlohmann::ordered_json::object();
  for (const auto& [p, m] : a.iota_pair) {
    auto mj = nlohmann::ordered_json::object();
    for (const auto& [v, l] : m) mj[v] = l;
    ip[pair_key(p.first, p.second)] = mj;
  }
  inj["pair"] = ip;
  j["injections"] = inj;
  auto at = nlohmann::ordered_json::array();
  for (const auto& x : a.attachments) at.push_back({x.vertex, x.j == 0 ? std::to_string(x.i) : pair_key(x.i, x.j), x.leaf});
  j["attachments"] = at;
  return j;
}

inline CellPair parse_pair_key(const std::string& k) {
  auto comma = k.find(',');
  if (comma == std::string::npos) throw AmalgamError("bad pair key '" + k + "'");
  return {std::stoi(k.substr(0, comma)), std::stoi(k.substr(comma + 1))};
}

inline Amalgam amalgam_from_json(const nlohmann::ordered_json& j) {
  Amalgam a;
  try {
    a.n = j.at("n").get<int>();
    a.ground = j.at("ground").get<std::vector<std::string>>();
    for (const auto& [v, c] : j.at("cells").items()) a.cell[v] = c.get<int>();
    for (const auto& [k, t] : j.at("cell_trees").items()) {
      TModel m = t.at("nodes").empty() ? TModel{t.at("n").get<int>(), {}, npos} : tmodel_from_json(t);
      a.cell_trees[std::stoi(k)] = m;
    }
    for (const auto& [k, t] : j.at("pair_trees").items()) {
      TModel m = t.at("nodes").empty() ? TModel{t.at("n").get<int>(), {}, npos} : tmodel_from_json(t);
      a.pair_trees[parse_pair_key(k)] = m;
    }
    for (const auto& [v, l] : j.at("injections").at("cell").items()) a.iota_cell[v] = l.get<std::string>();
    for (const auto& [k, m] : j.at("injections").at("pair").items())
      for (const auto& [v, l] : m.items()) a.iota_pair[parse_pair_key(k)][v] = l.get<std::string>();
    for (const auto& x : j.at("attachments")) {
      Attachment at;
      at.vertex = x.at(0).get<std::string>();
      auto key = x.at(1).get<std::string>();
      if (key.find(',') == std::string::npos) {
        at.i = std::stoi(key);
      } else {
        auto p = parse_pair_key(key);
        at.i = p.first;
        at.j = p.second;
      }
      at.leaf = x.at(2).get<std::string>();
      a.attachments.push_back(at);
    }
  } catch (const nlohmann::json::exception& e) {
    throw AmalgamError(std::string("malformed amalgam JSON: ") + e.what());
  } catch (const std::logic_error& e) {
    throw AmalgamError(std::string("malformed amalgam JSON: ") + e.what());
  }
  return a;
}

}  // namespace lcw
