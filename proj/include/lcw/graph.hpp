#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace lcw {

using Index = std::size_t;
using IndexSet = std::vector<Index>;

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Simple undirected loopless graph over opaque string ids.
///
/// Vertices are addressed by dense indices; the id table keeps the
/// caller's names so that every derived object (cotrees, amalgams,
/// anchors) can be traced back to the input vertices.
class Graph {
 public:
  Graph() = default;

  explicit Graph(const std::vector<std::string>& names) {
    for (const auto& n : names) add_vertex(n);
  }

  Index add_vertex(const std::string& name) {
    if (index_.count(name)) throw GraphError("duplicate vertex id '" + name + "'");
    const Index i = names_.size();
    names_.push_back(name);
    index_.emplace(name, i);
    for (auto& row : adj_) row.push_back(0);
    adj_.emplace_back(names_.size(), 0);
    labels_.emplace_back();
    return i;
  }

  void add_edge(Index u, Index v) {
    check(u);
    check(v);
    if (u == v) throw GraphError("self-loop on '" + names_[u] + "'");
    adj_[u][v] = adj_[v][u] = 1;
  }

  void add_edge(const std::string& u, const std::string& v) { add_edge(index_of(u), index_of(v)); }

  void remove_edge(Index u, Index v) {
    check(u);
    check(v);
    adj_[u][v] = adj_[v][u] = 0;
  }

  void add_label(Index v, const std::string& label) {
    check(v);
    labels_[v].insert(label);
  }

  [[nodiscard]] std::size_t size() const { return names_.size(); }
  [[nodiscard]] bool empty() const { return names_.empty(); }
  [[nodiscard]] bool adjacent(Index u, Index v) const { return adj_[u][v] != 0; }
  [[nodiscard]] const std::string& name(Index v) const { return names_[v]; }
  [[nodiscard]] const std::vector<std::string>& names() const { return names_; }
  [[nodiscard]] const std::set<std::string>& labels(Index v) const { return labels_[v]; }

  [[nodiscard]] std::optional<Index> find(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  [[nodiscard]] Index index_of(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw GraphError("unknown vertex id '" + name + "'");
    return it->second;
  }

  [[nodiscard]] IndexSet neighbors(Index v) const {
    IndexSet out;
    for (Index u = 0; u < size(); ++u)
      if (adj_[v][u]) out.push_back(u);
    return out;
  }

  [[nodiscard]] std::size_t degree(Index v) const {
    return static_cast<std::size_t>(std::count(adj_[v].begin(), adj_[v].end(), 1));
  }

  [[nodiscard]] std::size_t edge_count() const {
    std::size_t m = 0;
    for (Index u = 0; u < size(); ++u)
      for (Index v = u + 1; v < size(); ++v) m += adj_[u][v];
    return m;
  }

  [[nodiscard]] std::vector<std::pair<Index, Index>> edges() const {
    std::vector<std::pair<Index, Index>> out;
    for (Index u = 0; u < size(); ++u)
      for (Index v = u + 1; v < size(); ++v)
        if (adj_[u][v]) out.emplace_back(u, v);
    return out;
  }

  /// Same vertex ids and same adjacency, independent of insertion order.
  /// Labels are ignored.
  friend bool operator==(const Graph& a, const Graph& b) {
    if (a.size() != b.size()) return false;
    std::vector<Index> map(a.size());
    for (Index i = 0; i < a.size(); ++i) {
      auto j = b.find(a.name(i));
      if (!j) return false;
      map[i] = *j;
    }
    for (Index u = 0; u < a.size(); ++u)
      for (Index v = u + 1; v < a.size(); ++v)
        if (a.adjacent(u, v) != b.adjacent(map[u], map[v])) return false;
    return true;
  }

 private:
  void check(Index v) const {
    if (v >= names_.size()) throw GraphError("vertex index out of range");
  }

  std::vector<std::string> names_;
  std::unordered_map<std::string, Index> index_;
  std::vector<std::vector<std::uint8_t>> adj_;
  std::vector<std::set<std::string>> labels_;
};

/// Bipartite graph with an explicit side (γ) per vertex, 1 or 2.
struct BipartiteGraph {
  Graph graph;
  std::vector<int> side;

  [[nodiscard]] std::size_t size() const { return graph.size(); }

  Index add_vertex(const std::string& name, int s) {
    if (s != 1 && s != 2) throw GraphError("side must be 1 or 2");
    side.push_back(s);
    return graph.add_vertex(name);
  }

  void validate() const {
    if (side.size() != graph.size()) throw GraphError("side map is not total");
    for (auto [u, v] : graph.edges())
      if (side[u] == side[v])
        throw GraphError("edge " + graph.name(u) + "-" + graph.name(v) + " joins vertices of the same side");
  }

  friend bool operator==(const BipartiteGraph& a, const BipartiteGraph& b) {
    if (!(a.graph == b.graph)) return false;
    for (Index i = 0; i < a.size(); ++i)
      if (a.side[i] != b.side[b.graph.index_of(a.graph.name(i))]) return false;
    return true;
  }
};

// ---------------------------------------------------------------------------
// Elementary operations

inline Graph induced_subgraph(const Graph& g, const IndexSet& x) {
  Graph out;
  std::vector<char> seen(g.size(), 0);
  for (Index v : x) {
    if (v >= g.size()) throw GraphError("vertex index out of range");
    if (seen[v]) continue;
    seen[v] = 1;
    Index nv = out.add_vertex(g.name(v));
    for (const auto& l : g.labels(v)) out.add_label(nv, l);
  }
  for (Index a = 0; a < out.size(); ++a)
    for (Index b = a + 1; b < out.size(); ++b)
      if (g.adjacent(g.index_of(out.name(a)), g.index_of(out.name(b)))) out.add_edge(a, b);
  return out;
}

inline Graph induced_subgraph(const Graph& g, const std::vector<std::string>& ids) {
  IndexSet x;
  x.reserve(ids.size());
  for (const auto& id : ids) x.push_back(g.index_of(id));
  return induced_subgraph(g, x);
}

inline BipartiteGraph induced_subgraph(const BipartiteGraph& b, const IndexSet& x) {
  BipartiteGraph out;
  out.graph = induced_subgraph(b.graph, x);
  out.side.resize(out.graph.size());
  for (Index i = 0; i < out.graph.size(); ++i) out.side[i] = b.side[b.graph.index_of(out.graph.name(i))];
  return out;
}

inline Graph complement(const Graph& g) {
  Graph out(g.names());
  for (Index u = 0; u < g.size(); ++u)
    for (Index v = u + 1; v < g.size(); ++v)
      if (!g.adjacent(u, v)) out.add_edge(u, v);
  return out;
}

/// Complements the edge relation between the two sides only.
inline BipartiteGraph bipartite_complement(const BipartiteGraph& b) {
  BipartiteGraph out;
  out.graph = Graph(b.graph.names());
  out.side = b.side;
  for (Index u = 0; u < b.size(); ++u)
    for (Index v = u + 1; v < b.size(); ++v)
      if (b.side[u] != b.side[v] && !b.graph.adjacent(u, v)) out.graph.add_edge(u, v);
  return out;
}

/// The bipartite graph semi-induced between two disjoint vertex sets:
/// only edges with one end in each set are kept; `left` gets side 1.
inline BipartiteGraph semi_induced(const Graph& g, const IndexSet& left, const IndexSet& right) {
  BipartiteGraph out;
  for (Index v : left) out.add_vertex(g.name(v), 1);
  for (Index v : right) out.add_vertex(g.name(v), 2);
  for (Index a = 0; a < left.size(); ++a)
    for (Index b = 0; b < right.size(); ++b)
      if (g.adjacent(left[a], right[b])) out.graph.add_edge(a, left.size() + b);
  return out;
}

inline std::vector<IndexSet> connected_components(const Graph& g) {
  std::vector<IndexSet> comps;
  std::vector<char> seen(g.size(), 0);
  for (Index s = 0; s < g.size(); ++s) {
    if (seen[s]) continue;
    IndexSet comp{s};
    seen[s] = 1;
    for (std::size_t head = 0; head < comp.size(); ++head) {
      Index v = comp[head];
      for (Index u = 0; u < g.size(); ++u)
        if (g.adjacent(v, u) && !seen[u]) {
          seen[u] = 1;
          comp.push_back(u);
        }
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  return comps;
}

/// Components of the bipartite complement: the "co-components" of a
/// bipartite graph.
inline std::vector<IndexSet> bipartite_co_components(const BipartiteGraph& b) {
  return connected_components(bipartite_complement(b).graph);
}

/// Graph distance. `std::nullopt` stands for infinity.
using Distance = std::optional<std::size_t>;

inline std::vector<Distance> bfs_distances(const Graph& g, Index src) {
  std::vector<Distance> dist(g.size());
  dist[src] = 0;
  IndexSet queue{src};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    Index v = queue[head];
    for (Index u = 0; u < g.size(); ++u)
      if (g.adjacent(v, u) && !dist[u]) {
        dist[u] = *dist[v] + 1;
        queue.push_back(u);
      }
  }
  return dist;
}

inline Distance distance(const Graph& g, const std::string& u, const std::string& v) {
  return bfs_distances(g, g.index_of(u))[g.index_of(v)];
}

/// Vertex sequence of a shortest path from `from` to `to`, ties broken towards
/// the smallest vertex index. Empty when `to` is unreachable.
inline IndexSet shortest_path(const Graph& g, Index from, Index to) {
  auto dist = bfs_distances(g, to);
  if (!dist[from]) return {};
  IndexSet path{from};
  Index cur = from;
  while (cur != to) {
    for (Index u = 0; u < g.size(); ++u)
      if (g.adjacent(cur, u) && dist[u] && *dist[u] + 1 == *dist[cur]) {
        cur = u;
        break;
      }
    path.push_back(cur);
  }
  return path;
}

/// Smallest d such that every subgraph has a vertex of degree at most d,
/// computed by repeatedly peeling a minimum-degree vertex.
inline std::size_t degeneracy(const Graph& g) {
  const std::size_t n = g.size();
  std::vector<std::size_t> deg(n);
  std::vector<char> removed(n, 0);
  for (Index v = 0; v < n; ++v) deg[v] = g.degree(v);
  std::size_t best = 0;
  for (std::size_t step = 0; step < n; ++step) {
    Index pick = n;
    for (Index v = 0; v < n; ++v)
      if (!removed[v] && (pick == n || deg[v] < deg[pick])) pick = v;
    best = std::max(best, deg[pick]);
    removed[pick] = 1;
    for (Index u = 0; u < n; ++u)
      if (!removed[u] && g.adjacent(pick, u)) --deg[u];
  }
  return best;
}

/// Returns an induced path on k vertices if one exists.
inline std::optional<IndexSet> find_induced_path(const Graph& g, std::size_t k) {
  if (k == 0) throw GraphError("induced path length must be at least 1");
  if (g.size() < k) return std::nullopt;
  IndexSet path;
  std::vector<char> on(g.size(), 0);
  // Extends `path` with vertices adjacent to the last one and to no other
  // path vertex; the first vertex is the smallest index to halve the search.
  std::function<bool()> extend = [&]() -> bool {
    if (path.size() == k) return path.size() < 2 || path.front() < path.back();
    const Index last = path.back();
    for (Index u = 0; u < g.size(); ++u) {
      if (on[u] || !g.adjacent(last, u)) continue;
      bool chord = false;
      for (std::size_t i = 0; i + 1 < path.size() && !chord; ++i) chord = g.adjacent(path[i], u);
      if (chord) continue;
      path.push_back(u);
      on[u] = 1;
      if (extend()) return true;
      on[u] = 0;
      path.pop_back();
    }
    return false;
  };
  for (Index s = 0; s < g.size(); ++s) {
    path = {s};
    on[s] = 1;
    if (extend()) return path;
    on[s] = 0;
  }
  return std::nullopt;
}

inline bool has_induced_path(const Graph& g, std::size_t k) { return find_induced_path(g, k).has_value(); }

/// Returns the two sides of a (not necessarily induced) K_{t,t} subgraph.
inline std::optional<std::pair<IndexSet, IndexSet>> find_ktt_subgraph(const Graph& g, std::size_t t) {
  if (t == 0) throw GraphError("t must be at least 1");
  const std::size_t n = g.size();
  if (n < 2 * t) return std::nullopt;
  IndexSet left;
  std::optional<std::pair<IndexSet, IndexSet>> found;
  // Chooses the side containing the smallest vertex first; the other side is
  // any t vertices of the common neighbourhood.
  std::function<void(Index, const IndexSet&)> rec = [&](Index start, const IndexSet& common) {
    if (found) return;
    if (common.size() < t) return;
    if (left.size() == t) {
      IndexSet right;
      for (Index v : common)
        if (v > left.front() && right.size() < t) right.push_back(v);
      if (right.size() == t) found = std::make_pair(left, right);
      return;
    }
    for (Index v = start; v < n && !found; ++v) {
      IndexSet next;
      for (Index u : common)
        if (g.adjacent(u, v)) next.push_back(u);
      left.push_back(v);
      rec(v + 1, next);
      left.pop_back();
    }
  };
  IndexSet all(n);
  for (Index v = 0; v < n; ++v) all[v] = v;
  rec(0, all);
  return found;
}

inline bool has_ktt_subgraph(const Graph& g, std::size_t t) { return find_ktt_subgraph(g, t).has_value(); }

// ---------------------------------------------------------------------------
// Text formats

/// Edge-list format: one `u v` pair per line, `u` alone for an isolated
/// vertex, `# label u L` attaches a label, `# side u 1|2` sets a bipartite
/// side; other `#` lines are comments.
struct EdgeListFile {
  Graph graph;
  std::map<std::string, int> sides;
};

inline EdgeListFile read_edge_list(std::istream& in) {
  EdgeListFile out;
  auto ensure = [&](const std::string& id) {
    if (auto i = out.graph.find(id)) return *i;
    return out.graph.add_vertex(id);
  };
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string a;
    if (!(ls >> a)) continue;
    if (a[0] == '#') {
      std::string kw, v, val;
      if (a == "#") ls >> kw;
      else kw = a.substr(1);
      if (kw == "label" || kw == "side") {
        if (!(ls >> v >> val)) throw GraphError("line " + std::to_string(lineno) + ": malformed '# " + kw + "' line");
        Index iv = ensure(v);
        if (kw == "label") {
          out.graph.add_label(iv, val);
        } else {
          if (val != "1" && val != "2") throw GraphError("line " + std::to_string(lineno) + ": side must be 1 or 2");
          out.sides[v] = val == "1" ? 1 : 2;
        }
      }
      continue;
    }
    std::string b;
    if (!(ls >> b)) {
      ensure(a);
      continue;
    }
    std::string extra;
    if (ls >> extra) throw GraphError("line " + std::to_string(lineno) + ": expected 'u v'");
    Index ia = ensure(a);
    Index ib = ensure(b);
    out.graph.add_edge(ia, ib);
  }
  return out;
}

inline BipartiteGraph to_bipartite(const EdgeListFile& f) {
  BipartiteGraph b;
  b.graph = f.graph;
  b.side.resize(f.graph.size());
  for (Index v = 0; v < f.graph.size(); ++v) {
    auto it = f.sides.find(f.graph.name(v));
    if (it == f.sides.end()) throw GraphError("vertex '" + f.graph.name(v) + "' has no side");
    b.side[v] = it->second;
  }
  b.validate();
  return b;
}

inline void write_edge_list(std::ostream& out, const Graph& g, const std::vector<int>* sides = nullptr) {
  for (Index v = 0; v < g.size(); ++v) {
    if (sides) out << "# side " << g.name(v) << ' ' << (*sides)[v] << '\n';
    for (const auto& l : g.labels(v)) out << "# label " << g.name(v) << ' ' << l << '\n';
  }
  for (Index v = 0; v < g.size(); ++v)
    if (g.degree(v) == 0) out << g.name(v) << '\n';
  for (auto [u, v] : g.edges()) out << g.name(u) << ' ' << g.name(v) << '\n';
}

inline std::string dot_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

inline void write_dot(std::ostream& out, const Graph& g, const std::string& name = "G",
                      const std::function<std::string(Index)>& attrs = {}) {
  out << "graph " << dot_quote(name) << " {\n";
  for (Index v = 0; v < g.size(); ++v) {
    out << "  " << dot_quote(g.name(v));
    if (attrs) {
      auto a = attrs(v);
      if (!a.empty()) out << " [" << a << "]";
    }
    out << ";\n";
  }
  for (auto [u, v] : g.edges()) out << "  " << dot_quote(g.name(u)) << " -- " << dot_quote(g.name(v)) << ";\n";
  out << "}\n";
}

// ---------------------------------------------------------------------------
// Small named graphs used throughout the tests and the CLI.

inline Graph path_graph(std::size_t k, const std::string& prefix = "p") {
  Graph g;
  for (std::size_t i = 0; i < k; ++i) g.add_vertex(prefix + std::to_string(i + 1));
  for (std::size_t i = 0; i + 1 < k; ++i) g.add_edge(i, i + 1);
  return g;
}

inline Graph cycle_graph(std::size_t k, const std::string& prefix = "c") {
  Graph g = path_graph(k, prefix);
  if (k >= 3) g.add_edge(k - 1, 0);
  return g;
}

inline Graph complete_graph(std::size_t k, const std::string& prefix = "k") {
  Graph g;
  for (std::size_t i = 0; i < k; ++i) g.add_vertex(prefix + std::to_string(i + 1));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) g.add_edge(i, j);
  return g;
}

/// Bipartite path; consecutive vertices alternate sides starting with side 1.
inline BipartiteGraph bipartite_path(std::size_t k, const std::string& prefix = "p") {
  BipartiteGraph b;
  for (std::size_t i = 0; i < k; ++i) b.add_vertex(prefix + std::to_string(i + 1), i % 2 == 0 ? 1 : 2);
  for (std::size_t i = 0; i + 1 < k; ++i) b.graph.add_edge(i, i + 1);
  return b;
}

/// Half-graph H_k: a_i (side 1) adjacent to b_j (side 2) iff i <= j.
inline BipartiteGraph half_graph(std::size_t k) {
  BipartiteGraph b;
  for (std::size_t i = 1; i <= k; ++i) b.add_vertex("a" + std::to_string(i), 1);
  for (std::size_t i = 1; i <= k; ++i) b.add_vertex("b" + std::to_string(i), 2);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i; j < k; ++j) b.graph.add_edge(i, k + j);
  return b;
}

}  // namespace lcw
