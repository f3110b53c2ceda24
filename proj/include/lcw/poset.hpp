#pragma once

#include <string>
#include <utility>
#include <vector>

#include "lcw/graph.hpp"

namespace lcw {

using PairSet = std::vector<std::pair<Index, Index>>;

class PosetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Finite strict partial order. The full relation is stored (not only the
/// covers) so that transitivity can be asserted directly.
class Poset {
 public:
  Poset() = default;
  explicit Poset(std::vector<std::string> elements)
      : elements_(std::move(elements)), lt_(elements_.size(), std::vector<std::uint8_t>(elements_.size(), 0)) {}

  Index add_element(const std::string& e) {
    elements_.push_back(e);
    for (auto& row : lt_) row.push_back(0);
    lt_.emplace_back(elements_.size(), 0);
    return elements_.size() - 1;
  }

  void set_less(Index a, Index b, bool value = true) { lt_[a][b] = value ? 1 : 0; }

  [[nodiscard]] bool less(Index a, Index b) const { return lt_[a][b] != 0; }
  [[nodiscard]] std::size_t size() const { return elements_.size(); }
  [[nodiscard]] const std::string& element(Index i) const { return elements_[i]; }
  [[nodiscard]] const std::vector<std::string>& elements() const { return elements_; }

  [[nodiscard]] PairSet relation() const {
    PairSet out;
    for (Index a = 0; a < size(); ++a)
      for (Index b = 0; b < size(); ++b)
        if (lt_[a][b]) out.emplace_back(a, b);
    return out;
  }

  /// Empty when the relation is a strict partial order; otherwise one
  /// message per violated axiom instance (first few only).
  [[nodiscard]] std::vector<std::string> violations(std::size_t cap = 8) const {
    std::vector<std::string> out;
    auto push = [&](std::string s) {
      if (out.size() < cap) out.push_back(std::move(s));
    };
    for (Index a = 0; a < size(); ++a) {
      if (lt_[a][a]) push("irreflexivity: " + elements_[a] + " < " + elements_[a]);
      for (Index b = 0; b < size(); ++b) {
        if (a != b && lt_[a][b] && lt_[b][a]) push("asymmetry: " + elements_[a] + " <> " + elements_[b]);
        if (!lt_[a][b]) continue;
        for (Index c = 0; c < size(); ++c)
          if (lt_[b][c] && !lt_[a][c])
            push("transitivity: " + elements_[a] + " < " + elements_[b] + " < " + elements_[c]);
      }
    }
    return out;
  }

  [[nodiscard]] bool is_valid() const { return violations(1).empty(); }

  friend bool operator==(const Poset& a, const Poset& b) { return a.elements_ == b.elements_ && a.lt_ == b.lt_; }

 private:
  std::vector<std::string> elements_;
  std::vector<std::vector<std::uint8_t>> lt_;
};

/// Warshall closure of an arbitrary relation on n points.
inline std::vector<std::vector<std::uint8_t>> transitive_closure(std::size_t n, const PairSet& rel) {
  std::vector<std::vector<std::uint8_t>> m(n, std::vector<std::uint8_t>(n, 0));
  for (auto [a, b] : rel) m[a][b] = 1;
  for (Index k = 0; k < n; ++k)
    for (Index i = 0; i < n; ++i)
      if (m[i][k])
        for (Index j = 0; j < n; ++j)
          if (m[k][j]) m[i][j] = 1;
  return m;
}

inline Poset poset_from_generators(const std::vector<std::string>& elements, const PairSet& gens) {
  Poset p(elements);
  auto m = transitive_closure(elements.size(), gens);
  for (Index a = 0; a < elements.size(); ++a)
    for (Index b = 0; b < elements.size(); ++b)
      if (m[a][b]) p.set_less(a, b);
  return p;
}

/// Pairs a < b with no c such that a < c < b.
inline PairSet cover_relation(const Poset& p) {
  PairSet out;
  for (Index a = 0; a < p.size(); ++a)
    for (Index b = 0; b < p.size(); ++b) {
      if (!p.less(a, b)) continue;
      bool covered = true;
      for (Index c = 0; c < p.size() && covered; ++c)
        if (p.less(a, c) && p.less(c, b)) covered = false;
      if (covered) out.emplace_back(a, b);
    }
  return out;
}

inline Graph cover_graph(const Poset& p) {
  Graph g(p.elements());
  for (auto [a, b] : cover_relation(p)) g.add_edge(a, b);
  return g;
}

/// Chain on `k` elements named prefix1 < prefix2 < ...
inline Poset chain_poset(std::size_t k, const std::string& prefix = "") {
  std::vector<std::string> el;
  for (std::size_t i = 1; i <= k; ++i) el.push_back(prefix + std::to_string(i));
  PairSet gens;
  for (std::size_t i = 0; i + 1 < k; ++i) gens.emplace_back(i, i + 1);
  return poset_from_generators(el, gens);
}

}  // namespace lcw
