#pragma once

#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lcw/graph.hpp"
#include "lcw/poset.hpp"
#include "lcw/relstructure.hpp"

namespace lcw {

/// A poset with the clone marks P1..P4 and the ground mark Gr.
struct ColoredPoset {
  Poset poset;
  std::vector<std::uint8_t> gr;
  std::vector<int> mark;        // 1..4
  std::vector<Index> clone_of;  // index into the source structure
  std::vector<std::string> source;

  [[nodiscard]] std::size_t size() const { return poset.size(); }
};

inline std::string clone_name(const std::string& e, int k) { return e + "/" + std::to_string(k); }

/// Checks that the source has a strict partial order Lt, a symmetric
/// irreflexive E and a unary Gr.
inline void check_coupling(const RelStructure& m) {
  for (auto [name, arity] : {std::pair<const char*, int>{"Lt", 2}, {"E", 2}, {"Gr", 1}})
    if (!m.has_relation(name) || m.arity(name) != arity)
      throw PosetError(std::string("structure lacks relation ") + name + "/" + std::to_string(arity));
  const auto& lt = m.relation("Lt");
  const auto& e = m.relation("E");
  const std::size_t n = m.size();
  for (Index a = 0; a < n; ++a) {
    if (lt.contains({a, a})) throw PosetError("Lt is not irreflexive at " + m.element(a));
    if (e.contains({a, a})) throw PosetError("E has a loop at " + m.element(a));
    for (Index b = 0; b < n; ++b) {
      if (e.contains({a, b}) != e.contains({b, a})) throw PosetError("E is not symmetric");
      if (!lt.contains({a, b})) continue;
      if (lt.contains({b, a})) throw PosetError("Lt is not asymmetric");
      for (Index c = 0; c < n; ++c)
        if (lt.contains({b, c}) && !lt.contains({a, c})) throw PosetError("Lt is not transitive");
    }
  }
}

/// Generating pairs of the encoded order, over clone indices 4*e + (k-1).
inline PairSet encode_generators(const RelStructure& m) {
  PairSet gens;
  const std::size_t n = m.size();
  auto c = [](Index e, int k) { return 4 * e + static_cast<Index>(k - 1); };
  const auto& lt = m.relation("Lt");
  const auto& e = m.relation("E");
  for (Index u = 0; u < n; ++u) {
    for (int k = 2; k <= 4; ++k) gens.emplace_back(c(u, k), c(u, 1));
    for (Index v = 0; v < n; ++v) {
      if (lt.contains({u, v})) gens.emplace_back(c(u, 4), c(v, 4));
      if (e.contains({u, v})) {
        gens.emplace_back(c(u, 2), c(v, 3));
        gens.emplace_back(c(u, 2), c(v, 1));
      }
    }
  }
  return gens;
}

inline std::vector<std::string> encoded_names(const RelStructure& m) {
  std::vector<std::string> names;
  for (const auto& e : m.domain())
    for (int k = 1; k <= 4; ++k) names.push_back(clone_name(e, k));
  return names;
}

/// Four clones per element; the order is the transitive closure of the
/// generators (the P4 clones copy Lt, every clone lies below its P1 clone,
/// and E(u,v) puts u's P2 clone below v's P3 and P1 clones).
inline ColoredPoset encode_poset(const RelStructure& m) {
  check_coupling(m);
  ColoredPoset p;
  p.poset = poset_from_generators(encoded_names(m), encode_generators(m));
  p.source = m.domain();
  const auto& gr = m.relation("Gr");
  for (Index e = 0; e < m.size(); ++e)
    for (int k = 1; k <= 4; ++k) {
      p.mark.push_back(k);
      p.clone_of.push_back(e);
      p.gr.push_back(k == 1 && gr.contains({e}) ? 1 : 0);
    }
  return p;
}

namespace detail {
inline std::optional<Index> unique_below(const ColoredPoset& p, Index u, int mark,
                                         const std::function<bool(Index)>& extra = {}) {
  std::optional<Index> found;
  for (Index a = 0; a < p.size(); ++a) {
    if (p.mark[a] != mark || !p.poset.less(a, u)) continue;
    if (extra && !extra(a)) continue;
    if (found) return std::nullopt;
    found = a;
  }
  return found;
}
}  // namespace detail

/// Inverse interpretation. For a ground element u let u4 be the largest P4
/// element below u, u3 the P3 element below u, and u2 the P2 element below u
/// that is not below u3; then u < v iff u4 < v4 and E(u,v) iff u2 < v3.
inline RelStructure decode_poset(const ColoredPoset& p) {
  RelStructure out;
  out.declare("Lt", 2);
  out.declare("E", 2);
  out.declare("Gr", 1);
  std::vector<Index> g;
  for (Index a = 0; a < p.size(); ++a)
    if (p.gr[a]) g.push_back(a);
  std::vector<Index> o2, o3, o4;
  for (Index u : g) {
    std::optional<Index> u4;
    for (Index a = 0; a < p.size(); ++a)
      if (p.mark[a] == 4 && p.poset.less(a, u) && (!u4 || p.poset.less(*u4, a))) u4 = a;
    if (u4)
      for (Index a = 0; a < p.size(); ++a)
        if (p.mark[a] == 4 && p.poset.less(a, u) && a != *u4 && !p.poset.less(a, *u4)) u4.reset();
    auto u3 = detail::unique_below(p, u, 3);
    if (!u4 || !u3) throw PosetError("decode: ground element " + p.poset.element(u) + " lacks its clones");
    auto u2 = detail::unique_below(p, u, 2, [&](Index a) { return !p.poset.less(a, *u3); });
    if (!u2) throw PosetError("decode: ground element " + p.poset.element(u) + " lacks its P2 clone");
    o2.push_back(*u2);
    o3.push_back(*u3);
    o4.push_back(*u4);
    std::string name = p.source.empty() ? p.poset.element(u) : p.source[p.clone_of[u]];
    out.add("Gr", Tuple{out.add_element(name)});
  }
  for (Index a = 0; a < g.size(); ++a)
    for (Index b = 0; b < g.size(); ++b) {
      if (a == b) continue;
      if (p.poset.less(o4[a], o4[b])) out.add("Lt", Tuple{a, b});
      if (p.poset.less(o2[a], o3[b])) out.add("E", Tuple{a, b});
    }
  return out;
}

inline bool weak_sparseness_probe(const ColoredPoset& p, std::size_t t) {
  return !has_ktt_subgraph(cover_graph(p.poset), t);
}

/// Poset axioms plus the mark invariants.
inline std::vector<std::string> poset_violations(const ColoredPoset& p) {
  std::vector<std::string> out = p.poset.violations();
  for (Index a = 0; a < p.size(); ++a) {
    if (p.mark[a] < 1 || p.mark[a] > 4) out.push_back("element " + p.poset.element(a) + " has no P-mark");
    if (p.gr[a] && p.mark[a] != 1) out.push_back("Gr element " + p.poset.element(a) + " is not a P1 clone");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Structures, JSON and DOT

inline RelStructure to_structure(const ColoredPoset& p) {
  RelStructure s;
  for (const auto& e : p.poset.elements()) s.add_element(e);
  s.declare("Lt", 2);
  s.declare("Gr", 1);
  for (int k = 1; k <= 4; ++k) s.declare("P" + std::to_string(k), 1);
  for (auto [a, b] : p.poset.relation()) s.add("Lt", Tuple{a, b});
  for (Index a = 0; a < p.size(); ++a) {
    s.add("P" + std::to_string(p.mark[a]), Tuple{a});
    if (p.gr[a]) s.add("Gr", Tuple{a});
  }
  return s;
}

inline ColoredPoset colored_poset_from_structure(const RelStructure& s) {
  ColoredPoset p;
  p.poset = Poset(s.domain());
  for (const auto& t : s.tuples("Lt")) p.poset.set_less(t[0], t[1]);
  p.gr.assign(s.size(), 0);
  p.mark.assign(s.size(), 0);
  p.clone_of.assign(s.size(), 0);
  for (const auto& t : s.tuples("Gr")) p.gr[t[0]] = 1;
  for (int k = 1; k <= 4; ++k)
    for (const auto& t : s.tuples("P" + std::to_string(k))) {
      if (p.mark[t[0]]) throw PosetError("element " + s.element(t[0]) + " carries two P-marks");
      p.mark[t[0]] = k;
    }
  // Provenance from clone names "e/k".
  std::map<std::string, Index> src;
  for (Index a = 0; a < s.size(); ++a) {
    const auto& name = s.element(a);
    auto slash = name.rfind('/');
    std::string base = slash == std::string::npos ? name : name.substr(0, slash);
    auto [it, fresh] = src.emplace(base, p.source.size());
    if (fresh) p.source.push_back(base);
    p.clone_of[a] = it->second;
  }
  return p;
}

inline nlohmann::ordered_json to_json(const ColoredPoset& p) { return to_json(to_structure(p)); }

inline void write_cover_dot(std::ostream& out, const ColoredPoset& p) {
  static const char* colours[] = {"black", "red", "blue", "darkgreen", "orange"};
  write_dot(out, cover_graph(p.poset), "cover", [&](Index v) {
    std::string a = "color=" + std::string(colours[p.mark[v] >= 1 && p.mark[v] <= 4 ? p.mark[v] : 0]);
    if (p.gr[v]) a += ",shape=box";
    return a;
  });
}

}  // namespace lcw
