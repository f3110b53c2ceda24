#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "lcw/graph.hpp"
#include "lcw/tmodel.hpp"

namespace lcw {

class NotCograph : public ModelError {
 public:
  NotCograph(const std::string& what, std::vector<std::string> p4) : ModelError(what), witness(std::move(p4)) {}
  std::vector<std::string> witness;  // an induced P4, in path order
};

/// Components of g[s] (or of its complement when `co` is set), each sorted,
/// listed by smallest member.
inline std::vector<IndexSet> components_within(const Graph& g, const IndexSet& s, bool co) {
  std::vector<IndexSet> comps;
  std::vector<char> done(s.size(), 0);
  for (std::size_t a = 0; a < s.size(); ++a) {
    if (done[a]) continue;
    std::vector<std::size_t> queue{a};
    done[a] = 1;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      Index v = s[queue[head]];
      for (std::size_t b = 0; b < s.size(); ++b)
        if (!done[b] && b != queue[head] && g.adjacent(v, s[b]) != co) {
          done[b] = 1;
          queue.push_back(b);
        }
    }
    IndexSet comp;
    for (auto q : queue) comp.push_back(s[q]);
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  return comps;
}

inline std::vector<std::uint8_t> cotree_kappa(NodeType t) { return {static_cast<std::uint8_t>(t == NodeType::J)}; }

inline TModel cotree_node(NodeType t, const std::vector<TModel>& children) {
  return make_node(NodeKind::A, t, cotree_kappa(t), children, 1);
}

namespace detail {
inline TModel cograph_rec(const Graph& g, const IndexSet& s) {
  if (s.size() == 1) return single_leaf(g.name(s[0]));
  auto comps = components_within(g, s, false);
  NodeType t = NodeType::U;
  if (comps.size() == 1) {
    comps = components_within(g, s, true);
    t = NodeType::J;
    if (comps.size() == 1) {
      Graph sub = induced_subgraph(g, s);
      std::vector<std::string> w;
      if (auto p = find_induced_path(sub, 4))
        for (Index v : *p) w.push_back(sub.name(v));
      std::string msg = "not a cograph: induced P4";
      for (const auto& x : w) msg += " " + x;
      throw NotCograph(msg, w);
    }
  }
  std::vector<TModel> children;
  for (const auto& c : comps) children.push_back(cograph_rec(g, c));
  return cotree_node(t, children);
}
}  // namespace detail

/// The unique clean cotree of a cograph. Children appear in order of their
/// smallest vertex index; internal nodes are named "#k" in preorder.
inline TModel cograph_decompose(const Graph& g) {
  if (g.empty()) throw ModelError("cograph_decompose: empty graph");
  IndexSet all(g.size());
  for (Index v = 0; v < g.size(); ++v) all[v] = v;
  return normalized(detail::cograph_rec(g, all));
}

inline bool is_cotree(const TModel& m) {
  if (m.n != 1 || !validate(m).empty()) return false;
  for (const auto& node : m.nodes)
    if (node.kind == NodeKind::C) return false;
  return true;
}

/// Alternating types along every branch and at least two children per
/// internal node.
inline bool is_clean_cotree(const TModel& m) {
  if (!is_cotree(m)) return false;
  for (Index v = 0; v < m.size(); ++v) {
    const auto& node = m[v];
    if (node.is_leaf()) continue;
    if (node.children.size() < 2) return false;
    if (v != m.root && node.kappa[0] == m[node.parent].kappa[0]) return false;
  }
  return true;
}

inline std::size_t cotree_height(const TModel& m) { return height(m); }

/// Sets U/J tags from the tables.
inline TModel tag_cotree(TModel m) {
  for (auto& node : m.nodes)
    if (!node.is_leaf()) node.type = node.kappa[0] ? NodeType::J : NodeType::U;
  return m;
}

}  // namespace lcw
