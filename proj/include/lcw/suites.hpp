#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "lcw/anchor.hpp"
#include "lcw/bicotree.hpp"
#include "lcw/cotree.hpp"
#include "lcw/folang.hpp"
#include "lcw/generate.hpp"
#include "lcw/posetenc.hpp"
#include "lcw/report.hpp"
#include "lcw/splitdec.hpp"
#include "lcw/tmodel.hpp"

namespace lcw {

/// Shared knobs. `scale` multiplies instance counts and time budgets; zero
/// bounds mean the suite's own defaults.
struct SuiteOptions {
  std::uint64_t seed = 1;
  double scale = 1.0;
  std::size_t max_leaves = 0;
  std::size_t height = 0;

  [[nodiscard]] std::size_t count(std::size_t n) const {
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(static_cast<double>(n) * scale)));
  }
  [[nodiscard]] std::size_t leaves(std::size_t d) const { return max_leaves ? max_leaves : d; }
  [[nodiscard]] std::size_t heights(std::size_t d) const { return height ? height : d; }
  [[nodiscard]] double budget(double s) const { return s * std::max(1.0, scale); }
  [[nodiscard]] std::uint64_t stream(std::uint64_t tag, std::size_t i) const {
    return derive_seed(derive_seed(seed, tag), i);
  }
};

namespace detail {
inline std::string seed_witness(std::uint64_t s, const std::string& what = {}) {
  return "seed " + std::to_string(s) + (what.empty() ? "" : ": " + what);
}

inline void finish(RunReport& r, const Stopwatch& sw, double limit) {
  r.seconds = sw.seconds();
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f s", r.seconds);
  r.add("runtime under " + std::to_string(static_cast<long>(limit)) + " s", r.seconds < limit, buf);
}

template <class F>
void guarded(Tally& t, std::uint64_t s, F&& body) {
  try {
    body();
  } catch (const std::exception& e) {
    t.record(false, seed_witness(s, e.what()));
  }
}

inline std::vector<std::string> names_in(const std::vector<std::string>& all, std::uint64_t mask) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < all.size(); ++i)
    if (mask >> i & 1) out.push_back(all[i]);
  return out;
}
}  // namespace detail

// ---------------------------------------------------------------------------
// Cograph round trip

inline RunReport suite_cograph(const SuiteOptions& o = {}) {
  RunReport r;
  r.command = "suite cograph";
  r.seed = o.seed;
  Stopwatch sw;
  const std::size_t L = o.leaves(10), H = o.heights(5);
  Tally generated, clean, iso, same;
  std::size_t max_leaves = 0, max_height = 0;
  for (std::size_t i = 0; i < o.count(500); ++i) {
    const auto s = o.stream(1, i);
    detail::guarded(iso, s, [&] {
      TModel t = gen_clean_cotree(s, L, H);
      max_leaves = std::max(max_leaves, ground(t).size());
      max_height = std::max(max_height, height(t));
      generated.record(is_clean_cotree(t) && height(t) <= H, detail::seed_witness(s));
      Graph g = build(t);
      TModel d = cograph_decompose(g);
      clean.record(is_clean_cotree(d), detail::seed_witness(s));
      iso.record(model_iso_fixing_ground(d, t), detail::seed_witness(s, format_tree(t)));
      same.record(build(d) == g, detail::seed_witness(s));
    });
  }
  generated.into(r, "generated cotrees are clean within the bounds");
  iso.into(r, "cograph_decompose(build(t)) is isomorphic to t fixing leaves");
  clean.into(r, "decomposition is a clean cotree");
  same.into(r, "decomposition builds the same graph");
  r.stats = {{"instances", iso.total}, {"max_leaves", max_leaves}, {"max_height", max_height}};
  detail::finish(r, sw, o.budget(30));
  return r;
}

// ---------------------------------------------------------------------------
// Sob pipeline

inline RunReport suite_sob(const SuiteOptions& o = {}) {
  RunReport r;
  r.command = "suite sob";
  r.seed = o.seed;
  Stopwatch sw;
  const std::size_t L = o.leaves(12), H = o.heights(4);
  Tally generated, same, clean, p7, dual, raw_height, raw_same, raw_clean;
  std::size_t max_leaves = 0, max_height = 0, with_o = 0, raw_unclean = 0, raw_max_ratio_num = 0, raw_max_h = 0;
  for (std::size_t i = 0; i < o.count(500); ++i) {
    const auto s = o.stream(2, i);
    detail::guarded(same, s, [&] {
      TModel t = gen_clean_bicotree(s, L, H);
      max_leaves = std::max(max_leaves, ground(t).size());
      max_height = std::max(max_height, height(t));
      for (Index v = 0; v < t.size(); ++v)
        if (bicotree_type(t, v) == NodeType::O) {
          ++with_o;
          break;
        }
      generated.record(is_clean_bicotree(t) && height(t) <= H, detail::seed_witness(s));
      BipartiteGraph b = build_bipartite(t);
      TModel d = sob_decompose(b);
      same.record(build_bipartite(d) == b, detail::seed_witness(s, format_tree(t)));
      clean.record(is_clean_bicotree(d), detail::seed_witness(s));
      p7.record(!has_induced_path(b.graph, 7), detail::seed_witness(s));
      dual.record(build_bipartite(dual_star(t)) == bipartite_complement(b), detail::seed_witness(s));
    });
  }
  for (std::size_t i = 0; i < o.count(500); ++i) {
    const auto s = o.stream(3, i);
    detail::guarded(raw_height, s, [&] {
      TModel t = gen_raw_bicotree(s, L, H);
      if (!is_clean_bicotree(t)) ++raw_unclean;
      TModel c = clean_bicotree(t);
      const std::size_t h = height(t);
      raw_max_h = std::max(raw_max_h, height(c));
      raw_max_ratio_num = std::max(raw_max_ratio_num, height(c) * 100 / h);
      raw_height.record(height(c) <= 3 * h, detail::seed_witness(s, "height " + std::to_string(height(c)) + " vs h " +
                                                                         std::to_string(h)));
      BipartiteGraph b = build_bipartite(t);
      raw_same.record(build_bipartite(c) == b, detail::seed_witness(s));
      raw_clean.record(is_clean_bicotree(c), detail::seed_witness(s));
      p7.record(!has_induced_path(b.graph, 7), detail::seed_witness(s));
    });
  }
  generated.into(r, "generated bicotrees are clean within the bounds");
  same.into(r, "sob_decompose(build(t)) builds the same bipartite graph");
  clean.into(r, "decomposition is a clean bicotree");
  raw_height.into(r, "clean_bicotree on raw inputs has height at most 3h");
  raw_same.into(r, "clean_bicotree preserves the graph");
  raw_clean.into(r, "clean_bicotree output is clean");
  p7.into(r, "every accepted graph is induced-P7-free");
  dual.into(r, "dual_star builds the bipartite complement");
  r.stats = {{"instances", same.total},
             {"with_O_node", with_o},
             {"max_leaves", max_leaves},
             {"max_height", max_height},
             {"raw_instances", raw_height.total},
             {"raw_not_clean", raw_unclean},
             {"raw_max_cleaned_height", raw_max_h},
             {"raw_max_height_ratio_percent", raw_max_ratio_num}};
  detail::finish(r, sw, o.budget(120));
  return r;
}

// ---------------------------------------------------------------------------
// Amalgam pairing

inline RunReport suite_amalgam(const SuiteOptions& o = {}) {
  RunReport r;
  r.command = "suite amalgam";
  r.seed = o.seed;
  Stopwatch sw;
  const std::size_t L = o.leaves(8), H = o.heights(3);
  Tally split_ok, valid, sb, restrict_ok, chains;
  std::size_t subsets = 0, max_ground = 0;
  for (std::size_t i = 0; i < o.count(200); ++i) {
    const auto s = o.stream(4, i);
    detail::guarded(sb, s, [&] {
      const int n = 1 + static_cast<int>(i % 3);
      TModel m = gen_tmodel(s, n, L, H);
      Split sp = split_from_tmodel(m);
      auto rep = verify_split(sp);
      split_ok.record(rep.ok(), detail::seed_witness(s, rep.ok() ? "" : rep.failures.front()));
      Amalgam a = amalgam_build(sp);
      auto bad = validate_amalgam(a);
      valid.record(bad.empty(), detail::seed_witness(s, bad.empty() ? "" : bad.front()));
      sb.record(sbuild(a) == sp.graph && sp.graph == build(m), detail::seed_witness(s));
      max_ground = std::max(max_ground, a.ground.size());
      bool all = true;
      std::string why;
      if (a.ground.size() <= 16) {
        for (std::uint64_t w = 1; w < (std::uint64_t{1} << a.ground.size()) && all; ++w) {
          auto names = detail::names_in(a.ground, w);
          Amalgam ar = amalgam_restrict(a, names);
          ++subsets;
          if (!validate_amalgam(ar).empty() || !(sbuild(ar) == induced_subgraph(sp.graph, names))) {
            all = false;
            why = "W of size " + std::to_string(names.size());
          }
        }
      }
      restrict_ok.record(all, detail::seed_witness(s, why));
      auto cv = chain_union_violations(coupling_view(a), "Lt");
      chains.record(cv.empty(), detail::seed_witness(s, cv.empty() ? "" : cv.front()));
    });
  }
  split_ok.into(r, "split_from_tmodel passes verify_split");
  valid.into(r, "amalgam_build output passes validate_amalgam");
  sb.into(r, "sbuild(amalgam_build(G)) equals G");
  restrict_ok.into(r, "amalgam_restrict commutes with induced_subgraph on every W");
  chains.into(r, "coupling_view Lt-reduct is a disjoint union of chains");
  r.stats = {{"instances", sb.total}, {"restricted_subsets", subsets}, {"max_ground", max_ground}};
  detail::finish(r, sw, o.budget(120));
  return r;
}

// ---------------------------------------------------------------------------
// Poset encoding

inline RunReport suite_posetenc(const SuiteOptions& o = {}) {
  RunReport r;
  r.command = "suite posetenc";
  r.seed = o.seed;
  Stopwatch sw;
  Tally round, axioms, premise, sparse;
  std::size_t full_ground = 0, max_poset = 0;
  for (std::size_t i = 0; i < o.count(500); ++i) {
    const auto s = o.stream(5, i);
    detail::guarded(round, s, [&] {
      const std::size_t n = 1 + i % 6;
      const bool partial = i % 4 == 3;
      RelStructure m = gen_coupling(s, n, partial);
      ColoredPoset p = encode_poset(m);
      max_poset = std::max(max_poset, p.size());
      IndexSet g;
      for (const auto& t : m.tuples("Gr")) g.push_back(t[0]);
      std::sort(g.begin(), g.end());
      if (g.size() == m.size()) ++full_ground;
      RelStructure want = reduct(substructure(m, g), {"Lt", "E", "Gr"});
      round.record(decode_poset(p) == want, detail::seed_witness(s));
      auto v = poset_violations(p);
      axioms.record(v.empty(), detail::seed_witness(s, v.empty() ? "" : v.front()));
    });
  }
  for (std::size_t i = 0; i < o.count(200); ++i) {
    const auto s = o.stream(6, i);
    detail::guarded(sparse, s, [&] {
      RelStructure m = gen_sparse_coupling(s, 3 + i % 6);
      Graph e(m.domain());
      for (const auto& t : m.tuples("E"))
        if (t[0] < t[1]) e.add_edge(t[0], t[1]);
      premise.record(!has_ktt_subgraph(e, 2) && chain_union_violations(m, "Lt").empty(), detail::seed_witness(s));
      ColoredPoset p = encode_poset(m);
      sparse.record(weak_sparseness_probe(p, 3), detail::seed_witness(s));
    });
  }
  round.into(r, "decode_poset(encode_poset(M)) equals M on Lt, E, Gr");
  axioms.into(r, "encoded posets satisfy the poset invariants");
  premise.into(r, "sparse couplings have K22-free E and chain-union Lt");
  sparse.into(r, "cover graphs of sparse couplings are K33-free");
  r.stats = {{"instances", round.total},
             {"full_ground", full_ground},
             {"max_encoded_size", max_poset},
             {"sparse_instances", sparse.total}};
  detail::finish(r, sw, o.budget(60));
  return r;
}

// ---------------------------------------------------------------------------
// Anchors

inline RunReport suite_anchors(const SuiteOptions& o = {}) {
  RunReport r;
  r.command = "suite anchors";
  r.seed = o.seed;
  Stopwatch sw;
  const std::size_t L = o.leaves(10);
  Tally cot_size, bic_size, verified, restricted_ok, am_size, cover;
  std::size_t lprimes = 0, xs = 0, max_cot = 0, max_bic = 0, max_am = 0, sampled = 0;
  for (std::size_t i = 0; i < o.count(100); ++i) {
    const auto s = o.stream(7, i);
    const bool bico = i % 2 == 1;
    detail::guarded(verified, s, [&] {
      TModel t = bico ? gen_clean_bicotree(s, L, o.heights(3)) : gen_clean_cotree(s, L, o.heights(4));
      AnchorEngine e(t);
      Anchor F = e.anchor();
      const std::size_t h = height(t);
      const bool size_ok = F.violations().empty() && (bico ? F.size() < pow5(h + 1) : F.size() <= h);
      (bico ? bic_size : cot_size).record(size_ok, detail::seed_witness(s, "|F| = " + std::to_string(F.size())));
      (bico ? max_bic : max_cot) = std::max(bico ? max_bic : max_cot, F.size());
      const std::uint64_t all = e.ground_mask();
      bool ok = true, rok = true;
      std::string why;
      Graph g = build(t);
      for (std::uint64_t lp = all;; lp = (lp - 1) & all) {
        if (lp) {
          TModel tp = e.restricted(lp);
          auto names = e.names_of(lp);
          const bool clean = bico ? is_clean_bicotree(tp) : is_clean_cotree(tp);
          if (!clean || !(build(tp) == induced_subgraph(g, names))) rok = false;
          auto rep = verify_anchoring(t, tp, F, s);
          ++lprimes;
          xs += rep.checked;
          if (!rep.exhaustive) ++sampled;
          if (!rep.ok && ok) {
            ok = false;
            why = rep.message;
          }
        }
        if (!lp) break;
      }
      verified.record(ok, detail::seed_witness(s, why));
      restricted_ok.record(rok, detail::seed_witness(s));
    });
  }
  for (std::size_t i = 0; i < o.count(60); ++i) {
    const auto s = o.stream(8, i);
    detail::guarded(cover, s, [&] {
      const int n = 1 + static_cast<int>(i % 3);
      TModel m = gen_tmodel(s, n, L, 3);
      Amalgam a = amalgam_build(split_from_tmodel(m));
      auto an = amalgam_anchors(a);
      max_am = std::max(max_am, an.F.size());
      am_size.record(an.F.violations().empty() && an.F.size() <= amalgam_anchor_bound(an.h, a.n),
                     detail::seed_witness(s, "|F| = " + std::to_string(an.F.size())));
      auto zeta = gen_colouring(derive_seed(s, 1), a.ground, 4);
      for (std::size_t so : {std::size_t{0}, std::size_t{2}, std::size_t{3}}) {
        auto rep = build_cover(a, zeta, 2, so);
        cover.record(rep.ok(), detail::seed_witness(s, "s=" + std::to_string(rep.s) +
                                                           (rep.ok() ? "" : ": " + rep.failures.front())));
      }
    });
  }
  cot_size.into(r, "cotree anchors have size at most h");
  bic_size.into(r, "bicotree anchors have size below 5^(h+1)");
  verified.into(r, "verify_anchoring passes for every L' and every X");
  restricted_ok.into(r, "restricted models are clean and model G[L']");
  am_size.into(r, "amalgam anchors have size at most h + 5^(h+1)(n-1)");
  cover.into(r, "build_cover: M<Y_X> equals R_S<Y_X> for every X of size at most 2");
  r.stats = {{"instances", verified.total},
             {"lprimes", lprimes},
             {"x_checked", xs},
             {"non_exhaustive", sampled},
             {"max_cotree_anchor", max_cot},
             {"max_bicotree_anchor", max_bic},
             {"amalgam_instances", am_size.total},
             {"max_amalgam_anchor", max_am}};
  detail::finish(r, sw, o.budget(300));
  return r;
}

// ---------------------------------------------------------------------------
// Formula oracles

inline RunReport suite_oracles(const SuiteOptions& o = {}) {
  RunReport r;
  r.command = "suite oracles";
  r.seed = o.seed;
  Stopwatch sw;
  Tally lambda, gens, closure, decode, dist, same, left;
  std::size_t pairs = 0, chi_parts = 0;
  for (std::size_t i = 0; i < o.count(200); ++i) {
    const auto s = o.stream(9, i);
    detail::guarded(lambda, s, [&] {
      const int n = 1 + static_cast<int>(i % 3);
      TModel m = gen_tmodel(s, n, o.leaves(8), o.heights(3));
      RelStructure st = model_structure(m);
      Evaluator ev(st, parse_formula(edge_text(n), model_signature(n)), {"x", "y"});
      Graph g = build(m);
      bool ok = true;
      for (Index a = 0; a < g.size(); ++a)
        for (Index b = 0; b < g.size(); ++b) {
          ++pairs;
          if (ev({st.index_of(g.name(a)), st.index_of(g.name(b))}) != (a != b && g.adjacent(a, b))) ok = false;
        }
      lambda.record(ok, detail::seed_witness(s));
    });
  }
  for (std::size_t i = 0; i < o.count(100); ++i) {
    const auto s = o.stream(10, i);
    detail::guarded(gens, s, [&] {
      RelStructure m = gen_coupling(s, 1 + i % 5, i % 2 == 1);
      ColoredPoset p = encode_poset(m);
      RelStructure viaf = encode_via_formulas(m);
      auto names = encoded_names(m);
      std::set<std::pair<std::string, std::string>> want, got;
      for (auto [a, b] : encode_generators(m)) want.emplace(names[a], names[b]);
      for (const auto& t : viaf.tuples("Lt")) got.emplace(viaf.element(t[0]), viaf.element(t[1]));
      gens.record(want == got, detail::seed_witness(s));
      PairSet rel;
      for (const auto& t : viaf.tuples("Lt")) rel.emplace_back(t[0], t[1]);
      Poset closed = poset_from_generators(viaf.domain(), rel);
      closure.record(closed == p.poset, detail::seed_witness(s));
      decode.record(decode_via_formulas(to_structure(p)) == decode_poset(p), detail::seed_witness(s));
    });
  }
  const auto lib = builtin_formulas();
  for (std::size_t i = 0; i < o.count(100); ++i) {
    const auto s = o.stream(11, i);
    detail::guarded(dist, s, [&] {
      Graph g = gen_graph(s, 10, 0.15 + 0.05 * static_cast<double>(i % 4));
      RelStructure st = graph_structure(g);
      Evaluator ev(st, lib.at("dist_le6").formula, {"x", "y"});
      bool ok = true;
      for (Index a = 0; a < g.size(); ++a) {
        auto d = bfs_distances(g, a);
        for (Index b = 0; b < g.size(); ++b)
          if (ev({a, b}) != (d[b] && *d[b] <= 6)) ok = false;
      }
      dist.record(ok, detail::seed_witness(s));
    });
  }
  for (std::size_t i = 0; i < o.count(100); ++i) {
    const auto s = o.stream(12, i);
    detail::guarded(same, s, [&] {
      BipartiteGraph b = build_bipartite(gen_o_partitionable(s, 16));
      auto parts = o_partition(b);
      chi_parts = std::max(chi_parts, parts.size());
      std::vector<std::size_t> part(b.size());
      for (std::size_t k = 0; k < parts.size(); ++k)
        for (Index v : parts[k]) part[v] = k;
      RelStructure st = indexed_bipartite_structure(b, part);
      Evaluator sp(st, lib.at("same_part").formula, {"x", "y"});
      Evaluator c2(st, lib.at("chi2").formula, {"x", "y"});
      bool ok_same = true, ok_left = true;
      for (Index x = 0; x < b.size(); ++x)
        for (Index y = 0; y < b.size(); ++y) {
          if (sp({x, y}) != (part[x] == part[y])) ok_same = false;
          if (b.side[x] == 1 && b.side[y] == 2 && part[x] % 3 == part[y] % 3 && c2({x, y}) != (part[x] < part[y]))
            ok_left = false;
        }
      same.record(ok_same, detail::seed_witness(s));
      left.record(ok_left, detail::seed_witness(s));
    });
  }
  lambda.into(r, "lambda formulas match build edge for edge");
  gens.into(r, "encode formulas reproduce the encoding generators");
  closure.into(r, "closure of the formula encoding equals encode_poset");
  decode.into(r, "decode formulas match decode_poset");
  dist.into(r, "dist<=6 formula matches BFS");
  left.into(r, "chi2 matches the o_partition order");
  same.into(r, "same_part matches the o_partition parts");
  r.stats = {{"lambda_models", lambda.total},
             {"lambda_pairs", pairs},
             {"couplings", gens.total},
             {"graphs", dist.total},
             {"o_instances", same.total},
             {"max_parts", chi_parts}};
  detail::finish(r, sw, o.budget(60));
  return r;
}

// ---------------------------------------------------------------------------
// Negative controls

namespace mutate {

/// Replaces `leaf` by a unary node above it, typed opposite to the parent.
inline TModel wrap_in_unary(TModel m, Index leaf) {
  const Index p = m[leaf].parent;
  TNode w;
  w.id = "#wrap";
  w.kind = NodeKind::A;
  w.kappa.assign(static_cast<std::size_t>(m.n * m.n), m[p].kappa[0] ? 0 : 1);
  w.type = w.kappa[0] ? NodeType::J : NodeType::U;
  w.parent = p;
  w.children = {leaf};
  const Index wi = m.size();
  m.nodes.push_back(w);
  std::replace(m[p].children.begin(), m[p].children.end(), leaf, wi);
  m[leaf].parent = wi;
  return m;
}

inline Index first_internal_child(const TModel& m, Index v) {
  for (Index c : m[v].children)
    if (!m[c].is_leaf()) return c;
  return npos;
}

/// Two cells given by the sides of an O-partitionable graph, so the pair
/// tree has an O-root and the coupling view has a chain.
inline Amalgam ordered_amalgam(std::uint64_t seed) {
  BipartiteGraph b = build_bipartite(gen_o_partitionable(seed, 8));
  return amalgam_build(b.graph, b.side, 2);
}

}  // namespace mutate

inline RunReport suite_negative(const SuiteOptions& o = {}) {
  RunReport r;
  r.command = "suite negative";
  r.seed = o.seed;
  Stopwatch sw;
  auto join = [](const std::vector<std::string>& w) {
    std::string s;
    for (const auto& x : w) s += (s.empty() ? "" : " ") + x;
    return s;
  };

  {
    bool ok = false;
    std::string d = "no exception";
    try {
      cograph_decompose(path_graph(4));
    } catch (const NotCograph& e) {
      ok = e.witness.size() == 4 && has_induced_path(induced_subgraph(path_graph(4), e.witness), 4);
      d = "witness " + join(e.witness);
    } catch (const std::exception& e) {
      d = e.what();
    }
    r.add("P4 raises NotCograph with an induced P4", ok, d);
  }
  {
    bool ok = false;
    std::string d = "no exception";
    BipartiteGraph p7 = bipartite_path(7);
    try {
      sob_decompose(p7);
    } catch (const NotSob& e) {
      ok = e.witness.size() == 7 && has_induced_path(induced_subgraph(p7.graph, e.witness), 7);
      d = "witness " + join(e.witness);
    } catch (const std::exception& e) {
      d = e.what();
    }
    r.add("P7 raises NotSob with an induced P7", ok, d);
  }
  {
    bool ok = false;
    std::string d = "no exception";
    BipartiteGraph c6;
    for (int i = 0; i < 6; ++i) c6.add_vertex("c" + std::to_string(i + 1), i % 2 ? 2 : 1);
    for (Index i = 0; i < 6; ++i) c6.graph.add_edge(i, (i + 1) % 6);
    try {
      o_partition(c6);
    } catch (const NoOPartition& e) {
      ok = e.state.size() == 6;
      d = "unsplittable set " + join(e.state);
    } catch (const std::exception& e) {
      d = e.what();
    }
    r.add("C6 raises NoOPartition naming the unsplittable set", ok, d);
  }

  // Each mutation: the advertised validator accepts the original and rejects
  // the mutant. Where the mutant is still well formed, the lambda also
  // records whether the structural layer below accepts it (`upstream`), so
  // the rejection is pinned to the advertised validator.
  std::size_t caught = 0, total = 0;
  bool upstream = true;
  auto mutation = [&](const std::string& name, const std::string& validator, const std::function<bool()>& original_ok,
                      const std::function<bool()>& mutant_ok) {
    ++total;
    bool base = false, mut = true;
    upstream = true;
    std::string d;
    try {
      base = original_ok();
      mut = mutant_ok();
    } catch (const std::exception& e) {
      d = std::string("exception: ") + e.what();
    }
    const bool pass = base && !mut && upstream;
    if (pass) ++caught;
    if (d.empty())
      d = std::string("original ") + (base ? "accepted" : "rejected") + ", mutant " + (mut ? "accepted" : "rejected") +
          (upstream ? "" : " but already by an upstream validator");
    r.add("mutation " + std::to_string(total) + ": " + name + " caught by " + validator, pass, d);
  };

  const TModel bico = gen_clean_bicotree(o.stream(13, 0), 10, 3);
  const TModel opart = gen_o_partitionable(o.stream(13, 1), 12);
  auto valid = [](const TModel& m) { return validate(m).empty(); };

  mutation("asymmetric kappa at an A-node", "validate", [&] { return valid(bico); }, [&] {
    TModel m = bico;
    m.set_kappa(m.root, 1, 2, !m.kappa(m.root, 2, 1));
    return valid(m);
  });
  mutation("leaf colour outside [n]", "validate", [&] { return valid(bico); }, [&] {
    TModel m = bico;
    m[leaves(m).front()].color = 3;
    return valid(m);
  });
  mutation("node re-parented without updating child lists", "validate", [&] { return valid(opart); }, [&] {
    TModel m = opart;
    Index a = m[m.root].children[0], b = m[m.root].children[1];
    m[m[b].children.front()].parent = a;
    return valid(m);
  });

  TModel cot;
  for (std::size_t k = 0; k < 200; ++k) {
    cot = gen_clean_cotree(o.stream(13, 100 + k), 10, 4);
    if (height(cot) >= 3) break;
  }
  mutation("alternation broken below the root", "is_clean_cotree", [&] { return is_clean_cotree(cot); }, [&] {
    TModel m = cot;
    Index c = mutate::first_internal_child(m, m.root);
    m[c].kappa[0] = m[m.root].kappa[0];
    upstream = is_cotree(m);
    return is_clean_cotree(m);
  });
  mutation("internal node with a single child", "is_clean_cotree", [&] { return is_clean_cotree(cot); }, [&] {
    TModel m = mutate::wrap_in_unary(cot, leaves(cot).front());
    upstream = is_cotree(m);
    return is_clean_cotree(m);
  });
  mutation("monochrome child of an O-node", "is_clean_bicotree", [&] { return is_clean_bicotree(opart); }, [&] {
    TModel m = opart;
    for (Index l : leaves_below(m, m[m.root].children.front())) m[l].color = 1;
    upstream = is_bicotree(m);
    return is_clean_bicotree(m);
  });
  mutation("kappa matching none of U, B, O", "is_bicotree", [&] { return is_bicotree(bico); }, [&] {
    TModel m = bico;
    m[m.root].kappa = {1, 0, 0, 0};
    upstream = valid(m);
    return is_bicotree(m);
  });

  const BipartiteGraph h4 = half_graph(4);
  const auto h4parts = o_partition(h4);
  mutation("two parts swapped", "is_o_partition", [&] { return is_o_partition(h4, h4parts); }, [&] {
    auto p = h4parts;
    std::swap(p[0], p[1]);
    return is_o_partition(h4, p);
  });
  mutation("colour-2 vertex moved out of its part", "is_o_partition", [&] { return is_o_partition(h4, h4parts); },
           [&] {
             auto p = h4parts;
             auto it = std::find_if(p[0].begin(), p[0].end(), [&](Index v) { return h4.side[v] == 2; });
             p[1].push_back(*it);
             p[0].erase(it);
             return is_o_partition(h4, p);
           });

  const Amalgam am = mutate::ordered_amalgam(o.stream(13, 2));
  auto amalgam_ok = [](const Amalgam& a) { return validate_amalgam(a).empty(); };
  mutation("two vertices injected onto one leaf", "validate_amalgam", [&] { return amalgam_ok(am); }, [&] {
    Amalgam a = am;
    a.iota_cell[a.ground[1]] = a.iota_cell.at(a.ground[0]);
    return amalgam_ok(a);
  });
  mutation("injection onto a missing leaf", "validate_amalgam", [&] { return amalgam_ok(am); }, [&] {
    Amalgam a = am;
    a.iota_cell[a.ground[0]] = "absent";
    return amalgam_ok(a);
  });
  mutation("pair-tree leaf on the wrong side", "validate_amalgam", [&] { return amalgam_ok(am); }, [&] {
    Amalgam a = am;
    TModel& t = a.pair_trees.at({1, 2});
    Index l = t.index_of(a.iota_pair.at({1, 2}).at(a.ground[0]));
    t[l].color = 3 - t[l].color;
    return amalgam_ok(a);
  });
  mutation("attachment edge dropped", "validate_amalgam", [&] { return amalgam_ok(am); }, [&] {
    Amalgam a = am;
    a.attachments.pop_back();
    return amalgam_ok(a);
  });
  const Graph amg = sbuild(am);
  mutation("cell-tree kappa corrupted", "sbuild equality", [&] { return sbuild(am) == amg; }, [&] {
    Amalgam a = am;
    TModel& t = a.cell_trees.at(1);
    t[t.root].kappa[0] ^= 1;
    upstream = amalgam_ok(a);
    return sbuild(a) == amg;
  });

  const Graph p4 = path_graph(4);
  mutation("recolouring that puts a P4 in one cell", "verify_split",
           [&] { return verify_split(p4, {1, 2, 1, 2}, 2, 2).ok(); },
           [&] { return verify_split(p4, {1, 1, 1, 1}, 2, 2).ok(); });

  TModel broot;
  for (std::size_t k = 0; k < 200; ++k) {
    broot = gen_clean_bicotree(o.stream(13, 300 + k), 10, 3, NodeType::B);
    TModel u = broot;
    u[u.root].kappa = bicotree_kappa(NodeType::U);
    if (!(build(u) == build(broot))) break;
  }
  const Anchor bF = bicotree_anchor(broot);
  const TModel bfull = AnchorEngine(broot).restricted(AnchorEngine(broot).ground_mask());
  mutation("kappa corrupted in the replacement model", "verify_anchoring",
           [&] { return verify_anchoring(broot, bfull, bF).ok; }, [&] {
             TModel m = bfull;
             m[m.root].kappa = bicotree_kappa(NodeType::U);
             upstream = is_bicotree(m);
             return verify_anchoring(broot, m, bF).ok;
           });
  mutation("element removed from its own witness set", "Anchor::violations", [&] { return bF.violations().empty(); },
           [&] {
             Anchor f = bF;
             auto& w = f.F.begin()->second;
             w.erase(std::find(w.begin(), w.end(), f.F.begin()->first));
             return f.violations().empty();
           });
  mutation("sole cover piece dropped", "check_cover", [&] {
    std::map<std::string, int> zeta;
    for (std::size_t k = 0; k < am.ground.size(); ++k) zeta[am.ground[k]] = 1 + static_cast<int>(k % 2);
    return build_cover(am, zeta, 2).ok();
  }, [&] {
    std::map<std::string, int> zeta;
    for (std::size_t k = 0; k < am.ground.size(); ++k) zeta[am.ground[k]] = 1 + static_cast<int>(k % 2);
    CoverReport rep = build_cover(am, zeta, 2);
    rep.pieces.erase(rep.pieces.begin());
    check_cover(am, amalgam_anchor(am), zeta, 2, rep);
    return rep.ok();
  });

  RelStructure two;
  two.add_element("a");
  two.add_element("b");
  two.declare("Lt", 2);
  two.declare("E", 2);
  two.declare("Gr", 1);
  two.add("Lt", std::vector<std::string>{"a", "b"});
  two.add("E", std::vector<std::string>{"a", "b"});
  two.add("E", std::vector<std::string>{"b", "a"});
  two.add("Gr", std::vector<std::string>{"a"});
  two.add("Gr", std::vector<std::string>{"b"});
  const ColoredPoset enc = encode_poset(two);
  mutation("transitive pair removed", "poset_violations", [&] { return poset_violations(enc).empty(); }, [&] {
    ColoredPoset p = enc;
    for (Index a = 0; a < p.size(); ++a)
      for (Index b = 0; b < p.size(); ++b)
        for (Index c = 0; c < p.size(); ++c)
          if (p.poset.less(a, b) && p.poset.less(b, c)) {
            p.poset.set_less(a, c, false);
            return poset_violations(p).empty();
          }
    return true;
  });
  const RelStructure view = coupling_view(am);
  mutation("cross-chain pair added", "chain_union_violations",
           [&] { return chain_union_violations(view, "Lt").empty(); }, [&] {
             RelStructure v = view;
             auto lt = v.tuples("Lt");
             if (lt.empty()) return true;
             v.add("Lt", Tuple{lt.front()[0], v.index_of("V:" + am.ground[0])});
             return chain_union_violations(v, "Lt").empty();
           });

  r.stats = {{"mutations", total}, {"caught", caught}};
  detail::finish(r, sw, o.budget(60));
  return r;
}

// ---------------------------------------------------------------------------
// Single-input round trips

inline RunReport roundtrip_cograph(const Graph& g, bool expect_reject = false) {
  RunReport r;
  r.command = "roundtrip cograph";
  Stopwatch sw;
  try {
    TModel t = cograph_decompose(g);
    r.add("input is a cograph", !expect_reject, expect_reject ? "expected a rejection" : "");
    r.add("decomposition is a clean cotree", is_clean_cotree(t));
    r.add("decomposition builds the input", build(t) == g);
    r.stats = {{"vertices", g.size()}, {"height", height(t)}};
  } catch (const NotCograph& e) {
    r.add(expect_reject ? "rejected as expected (NotCograph)" : "input is a cograph", expect_reject, e.what());
  }
  r.seconds = sw.seconds();
  return r;
}

inline RunReport roundtrip_sob(const BipartiteGraph& b, bool expect_reject = false) {
  RunReport r;
  r.command = "roundtrip sob";
  Stopwatch sw;
  try {
    TModel t = sob_decompose(b);
    r.add("input is a sob", !expect_reject, expect_reject ? "expected a rejection" : "");
    r.add("decomposition is a clean bicotree", is_clean_bicotree(t));
    r.add("decomposition builds the input", build_bipartite(t) == b);
    r.stats = {{"vertices", b.size()}, {"height", height(t)}};
  } catch (const NotSob& e) {
    r.add(expect_reject ? "rejected as expected (NotSob)" : "input is a sob", expect_reject, e.what());
  }
  r.seconds = sw.seconds();
  return r;
}

inline RunReport roundtrip_amalgam(const Graph& g, const std::vector<int>& gamma, int N) {
  RunReport r;
  r.command = "roundtrip amalgam";
  Stopwatch sw;
  Amalgam a = amalgam_build(g, gamma, N);
  auto bad = validate_amalgam(a);
  r.add("amalgam is valid", bad.empty(), bad.empty() ? "" : bad.front());
  r.add("sbuild returns the input", sbuild(a) == g);
  auto cv = chain_union_violations(coupling_view(a), "Lt");
  r.add("coupling Lt is a union of chains", cv.empty(), cv.empty() ? "" : cv.front());
  auto an = amalgam_anchors(a);
  r.stats = {{"vertices", g.size()}, {"cells", N}, {"height", an.h}, {"anchor_size", an.F.size()}};
  r.seconds = sw.seconds();
  return r;
}

inline RunReport roundtrip_poset(const RelStructure& m) {
  RunReport r;
  r.command = "roundtrip poset";
  Stopwatch sw;
  ColoredPoset p = encode_poset(m);
  IndexSet g;
  for (const auto& t : m.tuples("Gr")) g.push_back(t[0]);
  std::sort(g.begin(), g.end());
  r.add("decode(encode(M)) equals M on its ground", decode_poset(p) == reduct(substructure(m, g), {"Lt", "E", "Gr"}));
  auto v = poset_violations(p);
  r.add("encoding is a poset", v.empty(), v.empty() ? "" : v.front());
  r.stats = {{"elements", m.size()}, {"encoded", p.size()}};
  r.seconds = sw.seconds();
  return r;
}

// ---------------------------------------------------------------------------

using SuiteFn = RunReport (*)(const SuiteOptions&);

/// Acceptance criterion id, suite name, runner.
inline const std::vector<std::tuple<std::string, std::string, SuiteFn>>& suite_table() {
  static const std::vector<std::tuple<std::string, std::string, SuiteFn>> t = {
      {"A1", "cograph", suite_cograph},   {"A2", "sob", suite_sob},         {"A3", "amalgam", suite_amalgam},
      {"A4", "posetenc", suite_posetenc}, {"A5", "anchors", suite_anchors}, {"A6", "oracles", suite_oracles},
      {"A7", "negative", suite_negative}};
  return t;
}

}  // namespace lcw
