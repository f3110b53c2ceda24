#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "lcw/graph.hpp"

namespace lcw {

using Tuple = std::vector<Index>;

class StructureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Finite relational structure: a domain of named elements and a set of
/// tuples per relation symbol. Unary and binary relations are stored as
/// dense tables, higher arities as tuple sets.
class RelStructure {
 public:
  RelStructure() = default;

  Index add_element(const std::string& name) {
    if (index_.count(name)) throw StructureError("duplicate element '" + name + "'");
    const Index i = domain_.size();
    domain_.push_back(name);
    index_.emplace(name, i);
    for (auto& [_, rel] : relations_) rel.grow(domain_.size());
    return i;
  }

  void declare(const std::string& rel, int arity) {
    if (arity < 1) throw StructureError("relation '" + rel + "' must have positive arity");
    auto it = relations_.find(rel);
    if (it != relations_.end()) {
      if (it->second.arity != arity)
        throw StructureError("relation '" + rel + "' redeclared with arity " + std::to_string(arity));
      return;
    }
    Relation r;
    r.arity = arity;
    r.grow(domain_.size());
    relations_.emplace(rel, std::move(r));
  }

  void add(const std::string& rel, const Tuple& t) {
    auto it = relations_.find(rel);
    if (it == relations_.end()) throw StructureError("undeclared relation '" + rel + "'");
    auto& r = it->second;
    if (static_cast<int>(t.size()) != r.arity)
      throw StructureError("tuple of size " + std::to_string(t.size()) + " for relation '" + rel + "' of arity " +
                           std::to_string(r.arity));
    for (Index e : t)
      if (e >= domain_.size()) throw StructureError("tuple element out of domain in '" + rel + "'");
    r.insert(t);
  }

  void add(const std::string& rel, const std::vector<std::string>& t) {
    Tuple idx;
    for (const auto& e : t) idx.push_back(index_of(e));
    add(rel, idx);
  }

  [[nodiscard]] bool has_relation(const std::string& rel) const { return relations_.count(rel) > 0; }

  [[nodiscard]] int arity(const std::string& rel) const {
    auto it = relations_.find(rel);
    if (it == relations_.end()) throw StructureError("undeclared relation '" + rel + "'");
    return it->second.arity;
  }

  [[nodiscard]] bool holds(const std::string& rel, const Tuple& t) const {
    auto it = relations_.find(rel);
    if (it == relations_.end()) throw StructureError("undeclared relation '" + rel + "'");
    return it->second.contains(t);
  }

  /// Direct access used by the evaluator's hot loop.
  struct Relation {
    int arity = 0;
    std::size_t n = 0;
    std::vector<std::uint8_t> table;  // arity 1: n entries, arity 2: n*n entries
    std::set<Tuple> tuples;           // arity >= 3

    void grow(std::size_t new_n) {
      if (arity == 1) {
        table.resize(new_n, 0);
      } else if (arity == 2) {
        std::vector<std::uint8_t> t(new_n * new_n, 0);
        for (std::size_t a = 0; a < n; ++a)
          for (std::size_t b = 0; b < n; ++b) t[a * new_n + b] = table[a * n + b];
        table.swap(t);
      }
      n = new_n;
    }
    void insert(const Tuple& t) {
      if (arity == 1) table[t[0]] = 1;
      else if (arity == 2) table[t[0] * n + t[1]] = 1;
      else tuples.insert(t);
    }
    [[nodiscard]] bool contains(const Tuple& t) const {
      if (arity == 1) return table[t[0]] != 0;
      // size check keeps gcc's bounds analysis quiet on one-element tuples
      if (arity == 2 && t.size() == 2) return table[t[0] * n + t[1]] != 0;
      return tuples.count(t) > 0;
    }
    [[nodiscard]] std::vector<Tuple> all() const {
      std::vector<Tuple> out;
      if (arity == 1) {
        for (std::size_t a = 0; a < n; ++a)
          if (table[a]) out.push_back({a});
      } else if (arity == 2) {
        for (std::size_t a = 0; a < n; ++a)
          for (std::size_t b = 0; b < n; ++b)
            if (table[a * n + b]) out.push_back({a, b});
      } else {
        out.assign(tuples.begin(), tuples.end());
      }
      return out;
    }
  };

  [[nodiscard]] const Relation& relation(const std::string& rel) const {
    auto it = relations_.find(rel);
    if (it == relations_.end()) throw StructureError("undeclared relation '" + rel + "'");
    return it->second;
  }

  [[nodiscard]] std::vector<Tuple> tuples(const std::string& rel) const { return relation(rel).all(); }

  [[nodiscard]] std::map<std::string, int> signature() const {
    std::map<std::string, int> sig;
    for (const auto& [name, r] : relations_) sig.emplace(name, r.arity);
    return sig;
  }

  [[nodiscard]] std::size_t size() const { return domain_.size(); }
  [[nodiscard]] const std::vector<std::string>& domain() const { return domain_; }
  [[nodiscard]] const std::string& element(Index i) const { return domain_[i]; }

  [[nodiscard]] std::optional<Index> find(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  [[nodiscard]] Index index_of(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw StructureError("unknown element '" + name + "'");
    return it->second;
  }

  /// Same domain names, same signature, same tuples (by name).
  friend bool operator==(const RelStructure& a, const RelStructure& b) {
    if (a.size() != b.size() || a.signature() != b.signature()) return false;
    std::vector<Index> map(a.size());
    for (Index i = 0; i < a.size(); ++i) {
      auto j = b.find(a.element(i));
      if (!j) return false;
      map[i] = *j;
    }
    for (const auto& [name, rel] : a.relations_) {
      const auto& other = b.relation(name);
      auto ta = rel.all();
      if (ta.size() != other.all().size()) return false;
      for (auto t : ta) {
        for (auto& e : t) e = map[e];
        if (!other.contains(t)) return false;
      }
    }
    return true;
  }

 private:
  std::vector<std::string> domain_;
  std::unordered_map<std::string, Index> index_;
  std::map<std::string, Relation> relations_;
};

/// Restriction of every relation to the given elements (in the given order).
inline RelStructure substructure(const RelStructure& s, const IndexSet& keep) {
  RelStructure out;
  std::vector<long> map(s.size(), -1);
  for (Index e : keep) map[e] = static_cast<long>(out.add_element(s.element(e)));
  for (const auto& [name, arity] : s.signature()) {
    out.declare(name, arity);
    for (const auto& t : s.tuples(name)) {
      Tuple nt;
      bool ok = true;
      for (Index e : t) {
        if (map[e] < 0) {
          ok = false;
          break;
        }
        nt.push_back(static_cast<Index>(map[e]));
      }
      if (ok) out.add(name, nt);
    }
  }
  return out;
}

inline RelStructure reduct(const RelStructure& s, const std::set<std::string>& keep) {
  RelStructure out;
  for (const auto& e : s.domain()) out.add_element(e);
  for (const auto& [name, arity] : s.signature()) {
    if (!keep.count(name)) continue;
    out.declare(name, arity);
    for (const auto& t : s.tuples(name)) out.add(name, t);
  }
  return out;
}

/// JSON form: {"signature": {R: arity}, "domain": [...], "relations": {R: [[e, ...], ...]}}.
inline nlohmann::ordered_json to_json(const RelStructure& s) {
  nlohmann::ordered_json j;
  nlohmann::ordered_json sig = nlohmann::ordered_json::object();
  for (const auto& [name, arity] : s.signature()) sig[name] = arity;
  j["signature"] = sig;
  j["domain"] = s.domain();
  nlohmann::ordered_json rels = nlohmann::ordered_json::object();
  for (const auto& [name, _] : s.signature()) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& t : s.tuples(name)) {
      auto tj = nlohmann::ordered_json::array();
      for (Index e : t) tj.push_back(s.element(e));
      arr.push_back(tj);
    }
    rels[name] = arr;
  }
  j["relations"] = rels;
  return j;
}

inline RelStructure relstructure_from_json(const nlohmann::ordered_json& j) {
  RelStructure s;
  try {
    for (const auto& e : j.at("domain")) s.add_element(e.get<std::string>());
    for (const auto& [name, arity] : j.at("signature").items()) s.declare(name, arity.get<int>());
    if (j.contains("relations"))
      for (const auto& [name, tuples] : j.at("relations").items()) {
        if (!s.has_relation(name)) throw StructureError("relation '" + name + "' missing from signature");
        for (const auto& t : tuples) {
          std::vector<std::string> names;
          if (t.is_string()) names.push_back(t.get<std::string>());
          else
            for (const auto& e : t) names.push_back(e.get<std::string>());
          s.add(name, names);
        }
      }
  } catch (const nlohmann::json::exception& e) {
    throw StructureError(std::string("malformed structure JSON: ") + e.what());
  }
  return s;
}

}  // namespace lcw
