// Command-line front end. Every command is a thin shell over the library.
// Exit codes: 0 pass, 1 check failure, 2 input or usage error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lcw/lcw.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace lcw;

struct Globals {
  std::uint64_t seed = 1;
  std::size_t max_leaves = 0;
  std::size_t height = 0;
  std::string format = "json";
  std::string out;
  double scale = 1.0;
};

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
  if (path == "-") {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json(const std::string& path) {
  try {
    return json::parse(slurp(path));
  } catch (const json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
}

EdgeListFile read_graph(const std::string& path) {
  std::istringstream in(slurp(path));
  return read_edge_list(in);
}

class Output {
 public:
  explicit Output(const Globals& g) : g_(g) {}
  [[nodiscard]] bool text() const { return g_.format == "text"; }

  void emit(const std::string& s) const {
    if (g_.out.empty()) {
      std::cout << s;
      if (!s.empty() && s.back() != '\n') std::cout << '\n';
      return;
    }
    std::ofstream f(g_.out);
    if (!f) throw InputError("cannot write '" + g_.out + "'");
    f << s;
    if (!s.empty() && s.back() != '\n') f << '\n';
  }
  void emit(const json& j) const { emit(j.dump(2)); }

  int report(RunReport r) const {
    r.seed = g_.seed;
    emit(text() ? render_text(r) : to_json(r).dump(2));
    return r.ok() ? 0 : 1;
  }

  int model(const TModel& m) const {
    emit(text() ? format_tree(m) : to_json(m).dump(2));
    return 0;
  }

 private:
  const Globals& g_;
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, ','))
    if (!cur.empty()) out.push_back(cur);
  return out;
}

/// Cells come from `# label v cell=K` lines.
std::pair<std::vector<int>, int> cells_from_labels(const Graph& g) {
  std::vector<int> gamma(g.size(), 0);
  int n = 0;
  for (Index v = 0; v < g.size(); ++v) {
    for (const auto& l : g.labels(v))
      if (l.rfind("cell=", 0) == 0) gamma[v] = std::stoi(l.substr(5));
    if (gamma[v] < 1) throw InputError("vertex '" + g.name(v) + "' has no '# label " + g.name(v) + " cell=K' line");
    n = std::max(n, gamma[v]);
  }
  return {gamma, n};
}

Amalgam amalgam_input(const std::string& path) {
  if (path.size() > 5 && path.substr(path.size() - 5) == ".json") {
    json j = read_json(path);
    if (j.contains("nodes")) return amalgam_build(split_from_tmodel(tmodel_from_json(j)));
    return amalgam_from_json(j);
  }
  auto f = read_graph(path);
  auto [gamma, n] = cells_from_labels(f.graph);
  return amalgam_build(f.graph, gamma, n);
}

std::string edge_list(const Graph& g, const std::vector<int>* sides = nullptr) {
  std::ostringstream s;
  write_edge_list(s, g, sides);
  return s.str();
}

SuiteOptions suite_options(const Globals& g) {
  SuiteOptions o;
  o.seed = g.seed;
  o.scale = g.scale;
  o.max_leaves = g.max_leaves;
  o.height = g.height;
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lcw: models, anchors and encodings for graph classes of bounded linear clique-width"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "64-bit seed for every random choice");
  app.add_option("--max-leaves", g.max_leaves, "leaf bound for generators and suites");
  app.add_option("--height", g.height, "height bound for generators and suites");
  app.add_option("--format", g.format, "output format")->check(CLI::IsMember({"json", "text"}));
  app.add_option("--out", g.out, "write output to this file");
  Output out(g);
  std::function<int()> run;

  // cotree / sob
  std::string input;
  auto* cot = app.add_subcommand("cotree", "clean cotree of a cograph (edge-list input)");
  cot->add_option("graph", input, "edge-list file, '-' for stdin")->required();
  cot->callback([&] { run = [&] { return out.model(cograph_decompose(read_graph(input).graph)); }; });

  auto* sob = app.add_subcommand("sob", "clean bicotree of a sob (edge list with '# side v 1|2' lines)");
  sob->add_option("graph", input, "edge-list file")->required();
  sob->callback([&] { run = [&] { return out.model(sob_decompose(to_bipartite(read_graph(input)))); }; });

  // tmodel
  auto* tm = app.add_subcommand("tmodel", "T-model utilities");
  tm->require_subcommand(1);
  auto* tm_build = tm->add_subcommand("build", "graph of a T-model (edge list)");
  tm_build->add_option("model", input, "TModel JSON")->required();
  tm_build->callback([&] {
    run = [&] {
      TModel m = tmodel_from_json(read_json(input));
      require_valid(m);
      out.emit(edge_list(build(m)));
      return 0;
    };
  });
  auto* tm_check = tm->add_subcommand("validate", "structural checks on a T-model");
  tm_check->add_option("model", input, "TModel JSON")->required();
  tm_check->callback([&] {
    run = [&] {
      TModel m = tmodel_from_json(read_json(input));
      RunReport r;
      r.command = "tmodel validate";
      auto v = validate(m);
      r.add("model is well formed", v.empty(), v.empty() ? "" : v.front());
      if (v.empty()) {
        r.stats = {{"leaves", ground(m).size()}, {"height", height(m)}, {"n", m.n}};
        r.stats["clean_cotree"] = is_clean_cotree(m);
        r.stats["clean_bicotree"] = is_clean_bicotree(m);
      }
      return out.report(r);
    };
  });
  auto* tm_canon = tm->add_subcommand("canon", "canonical form fixing the leaves");
  tm_canon->add_option("model", input, "TModel JSON")->required();
  tm_canon->callback([&] {
    run = [&] {
      out.emit(canonical_form(tmodel_from_json(read_json(input))));
      return 0;
    };
  });

  // amalgam
  std::string keep;
  auto* am = app.add_subcommand("amalgam", "split amalgams");
  am->require_subcommand(1);
  auto* am_build = am->add_subcommand("build", "amalgam of a coloured graph ('# label v cell=K') or of a T-model");
  am_build->add_option("input", input, "edge list or TModel JSON")->required();
  am_build->callback([&] {
    run = [&] {
      out.emit(to_json(amalgam_input(input)));
      return 0;
    };
  });
  auto* am_sb = am->add_subcommand("sbuild", "graph of an amalgam (edge list)");
  am_sb->add_option("amalgam", input, "Amalgam JSON")->required();
  am_sb->callback([&] {
    run = [&] {
      out.emit(edge_list(sbuild(amalgam_from_json(read_json(input)))));
      return 0;
    };
  });
  auto* am_re = am->add_subcommand("restrict", "amalgam restricted to a vertex set");
  am_re->add_option("amalgam", input, "Amalgam JSON")->required();
  am_re->add_option("--keep", keep, "comma-separated ground vertices")->required();
  am_re->callback([&] {
    run = [&] {
      out.emit(to_json(amalgam_restrict(amalgam_from_json(read_json(input)), split_list(keep))));
      return 0;
    };
  });
  auto* am_co = am->add_subcommand("coupling", "coupling view of an amalgam (structure JSON)");
  am_co->add_option("amalgam", input, "Amalgam JSON")->required();
  am_co->callback([&] {
    run = [&] {
      out.emit(to_json(coupling_view(amalgam_from_json(read_json(input)))));
      return 0;
    };
  });

  // posetenc
  bool dot = false;
  std::size_t t = 3;
  auto* pe = app.add_subcommand("posetenc", "coupling to coloured poset encoding");
  pe->require_subcommand(1);
  auto* pe_enc = pe->add_subcommand("encode", "encode a coupling {Lt, E, Gr}");
  pe_enc->add_option("structure", input, "structure JSON")->required();
  pe_enc->add_flag("--dot", dot, "emit the cover graph as DOT");
  pe_enc->callback([&] {
    run = [&] {
      ColoredPoset p = encode_poset(relstructure_from_json(read_json(input)));
      if (dot) {
        std::ostringstream s;
        write_cover_dot(s, p);
        out.emit(s.str());
      } else {
        out.emit(to_json(p));
      }
      return 0;
    };
  });
  auto* pe_dec = pe->add_subcommand("decode", "decode a coloured poset structure");
  pe_dec->add_option("poset", input, "structure JSON with Lt, Gr, P1..P4")->required();
  pe_dec->callback([&] {
    run = [&] {
      out.emit(to_json(decode_poset(colored_poset_from_structure(relstructure_from_json(read_json(input))))));
      return 0;
    };
  });
  auto* pe_probe = pe->add_subcommand("probe", "check the cover graph of the encoding for K_{t,t}");
  pe_probe->add_option("structure", input, "structure JSON")->required();
  pe_probe->add_option("-t", t, "biclique size")->capture_default_str();
  pe_probe->callback([&] {
    run = [&] {
      ColoredPoset p = encode_poset(relstructure_from_json(read_json(input)));
      RunReport r;
      r.command = "posetenc probe";
      Graph cg = cover_graph(p.poset);
      auto hit = find_ktt_subgraph(cg, t);
      std::string d;
      if (hit) {
        for (Index v : hit->first) d += cg.name(v) + " ";
        d += "| ";
        for (Index v : hit->second) d += cg.name(v) + " ";
      }
      r.add("cover graph has no K_{" + std::to_string(t) + "," + std::to_string(t) + "} subgraph", !hit, d);
      r.stats = {{"elements", p.size()}, {"cover_edges", cg.edge_count()}, {"degeneracy", degeneracy(cg)}};
      return out.report(r);
    };
  });

  // anchor
  std::size_t p = 2, colours = 4, s_override = 0;
  bool literal = false;
  auto* an = app.add_subcommand("anchor", "anchors, restricted models and covers");
  an->require_subcommand(1);
  auto anchor_cmd = [&](const char* name, bool bico) {
    auto* c = an->add_subcommand(name, std::string("anchor of a clean ") + (bico ? "bicotree" : "cotree"));
    c->add_option("model", input, "TModel JSON")->required();
    c->callback([&, bico] {
      run = [&, bico] {
        TModel m = tmodel_from_json(read_json(input));
        Anchor F = bico ? bicotree_anchor(m) : cotree_anchor(m);
        out.emit(to_json(F));
        return F.violations().empty() ? 0 : 1;
      };
    });
  };
  anchor_cmd("cotree", false);
  anchor_cmd("bicotree", true);
  auto* an_am = an->add_subcommand("amalgam", "anchor of an amalgam");
  an_am->add_option("input", input, "Amalgam JSON, TModel JSON or labelled edge list")->required();
  an_am->callback([&] {
    run = [&] {
      Anchor F = amalgam_anchor(amalgam_input(input));
      out.emit(to_json(F));
      return F.violations().empty() ? 0 : 1;
    };
  });
  auto* an_ver = an->add_subcommand("verify", "verify restricted models for one L' (--keep) or for every L'");
  an_ver->add_option("model", input, "TModel JSON (clean cotree or bicotree)")->required();
  an_ver->add_option("--keep", keep, "comma-separated L'");
  an_ver->callback([&] {
    run = [&] {
      TModel m = tmodel_from_json(read_json(input));
      AnchorEngine e(m);
      Anchor F = e.anchor();
      RunReport r;
      r.command = "anchor verify";
      r.seed = g.seed;
      Tally tally;
      std::size_t xs = 0;
      auto one = [&](std::uint64_t lp) {
        auto rep = verify_anchoring(m, e.restricted(lp), F, g.seed);
        xs += rep.checked;
        std::string w;
        for (const auto& x : rep.witness) w += x + " ";
        tally.record(rep.ok, "L' = {" + [&] {
          std::string s;
          for (const auto& n : e.names_of(lp)) s += n + " ";
          return s;
        }() + "} X = {" + w + "}");
      };
      if (!keep.empty()) {
        one(e.mask_of(split_list(keep)));
      } else {
        if (e.names().size() > 16) throw InputError("anchor verify without --keep is limited to 16 leaves");
        for (std::uint64_t lp = e.ground_mask(); lp; lp = (lp - 1) & e.ground_mask()) one(lp);
      }
      r.add("anchor has no violations", F.violations().empty());
      tally.into(r, "M<X> equals M'<X> for every admissible X");
      r.stats = {{"anchor_size", F.size()}, {"bound", F.bound}, {"x_checked", xs}};
      return out.report(r);
    };
  });
  auto* an_cov = an->add_subcommand("cover", "build and check a cover for a random colouring");
  an_cov->add_option("input", input, "Amalgam JSON, TModel JSON or labelled edge list")->required();
  an_cov->add_option("-p", p, "size of the element sets X")->capture_default_str();
  an_cov->add_option("--colours", colours, "number of colours of the random colouring")->capture_default_str();
  an_cov->add_option("--set-size", s_override, "size of the colour sets (default min(pq, colours))");
  an_cov->add_flag("--literal", literal, "build R_S on U_S instead of the colour classes of S");
  an_cov->callback([&] {
    run = [&] {
      Amalgam a = amalgam_input(input);
      auto zeta = gen_colouring(g.seed, a.ground, static_cast<int>(colours));
      CoverReport rep = build_cover(a, zeta, p, s_override, literal);
      RunReport r;
      r.command = "anchor cover";
      r.seed = g.seed;
      r.add("every checked X satisfies M<Y_X> = R_S<Y_X>", rep.ok(), rep.ok() ? "" : rep.failures.front());
      json pieces = json::array();
      for (const auto& pc : rep.pieces) pieces.push_back({{"S", pc.S}, {"U", pc.U}, {"W", pc.W}});
      r.stats = {{"q", rep.q}, {"s", rep.s}, {"checked", rep.checked}, {"skipped", rep.skipped}, {"pieces", pieces}};
      return out.report(r);
    };
  });

  // folang
  std::string formula, vars;
  auto* fo = app.add_subcommand("folang", "first-order formulas over relational structures");
  fo->require_subcommand(1);
  auto* fo_eval = fo->add_subcommand("eval", "evaluate a formula; with free variables, list the satisfying tuples");
  fo_eval->add_option("structure", input, "structure JSON")->required();
  fo_eval->add_option("formula", formula, "formula text or @name of a built-in formula")->required();
  fo_eval->add_option("--vars", vars, "comma-separated order of the free variables");
  fo_eval->callback([&] {
    run = [&] {
      RelStructure st = relstructure_from_json(read_json(input));
      FormulaPtr f;
      if (!formula.empty() && formula[0] == '@') {
        auto lib = builtin_formulas();
        auto it = lib.find(formula.substr(1));
        if (it == lib.end()) throw InputError("unknown built-in formula '" + formula.substr(1) + "'");
        f = parse_formula(it->second.text, st.signature());
      } else {
        f = parse_formula(formula, st.signature());
      }
      std::vector<std::string> order = vars.empty() ? std::vector<std::string>{} : split_list(vars);
      if (order.empty())
        for (const auto& v : free_variables(*f)) order.push_back(v);
      json j;
      j["formula"] = to_string(*f);
      j["variables"] = order;
      if (order.empty()) {
        j["value"] = eval(st, f, {});
      } else {
        json rows = json::array();
        for (const auto& tup : satisfying(st, f, order)) {
          json row = json::array();
          for (Index e : tup) row.push_back(st.element(e));
          rows.push_back(row);
        }
        j["satisfying"] = rows;
      }
      out.emit(j);
      return 0;
    };
  });
  auto* fo_list = fo->add_subcommand("list", "list the built-in formulas");
  fo_list->callback([&] {
    run = [&] {
      json j = json::object();
      for (const auto& [name, nf] : builtin_formulas()) j[name] = {{"params", nf.params}, {"text", nf.text}};
      out.emit(j);
      return 0;
    };
  });

  // roundtrip
  bool expect_reject = false;
  auto* rt = app.add_subcommand("roundtrip", "decompose/build or encode/decode one input and compare");
  rt->require_subcommand(1);
  auto rt_cmd = [&](const char* name, const char* what, std::function<RunReport()> body) {
    auto* c = rt->add_subcommand(name, what);
    c->add_option("input", input, "input file")->required();
    c->add_flag("--expect-reject", expect_reject, "the input is a negative control; rejection passes");
    c->callback([&, body] {
      run = [&, body] {
        RunReport r = body();
        r.seed = g.seed;
        return out.report(r);
      };
    });
  };
  rt_cmd("cograph", "edge list", [&] { return roundtrip_cograph(read_graph(input).graph, expect_reject); });
  rt_cmd("sob", "edge list with sides", [&] { return roundtrip_sob(to_bipartite(read_graph(input)), expect_reject); });
  rt_cmd("amalgam", "edge list with '# label v cell=K'", [&] {
    auto f = read_graph(input);
    auto [gamma, n] = cells_from_labels(f.graph);
    return roundtrip_amalgam(f.graph, gamma, n);
  });
  rt_cmd("poset", "coupling structure JSON", [&] { return roundtrip_poset(relstructure_from_json(read_json(input))); });

  // suite
  std::string suite_name;
  auto* su = app.add_subcommand("suite", "run an acceptance suite");
  su->add_option("name", suite_name, "roundtrips (A1-A3), cograph, sob, amalgam, posetenc, anchors, oracles, negative, all")
      ->required();
  su->add_option("--scale", g.scale, "multiplier for instance counts and time budgets")->capture_default_str();
  su->callback([&] {
    run = [&] {
      SuiteOptions o = suite_options(g);
      std::vector<std::string> pick;
      if (suite_name == "all") {
        for (const auto& [id, name, fn] : suite_table()) pick.push_back(name);
      } else if (suite_name == "roundtrips") {
        pick = {"cograph", "sob", "amalgam"};
      } else {
        pick = {suite_name};
      }
      RunReport total;
      total.command = "suite " + suite_name;
      total.seed = g.seed;
      for (const auto& n : pick) {
        bool found = false;
        for (const auto& [id, name, fn] : suite_table())
          if (name == n) {
            found = true;
            RunReport r = fn(o);
            for (auto& c : r.checks) c.name = id + " " + c.name;
            r.command = id + " " + name;
            total.merge(r);
          }
        if (!found) throw InputError("unknown suite '" + n + "'");
      }
      return out.report(total);
    };
  });

  // gen
  std::string what;
  int n = 2;
  auto* ge = app.add_subcommand("gen", "seeded instance generators");
  ge->add_option("kind", what, "cotree, bicotree, raw-bicotree, o-partitionable, tmodel, graph, coupling")->required();
  ge->add_option("-n", n, "colours (tmodel) or elements (graph, coupling)")->capture_default_str();
  ge->callback([&] {
    run = [&] {
      const std::size_t L = g.max_leaves ? g.max_leaves : 10, H = g.height ? g.height : 3;
      if (what == "cotree") return out.model(gen_clean_cotree(g.seed, L, H));
      if (what == "bicotree") return out.model(gen_clean_bicotree(g.seed, L, H));
      if (what == "raw-bicotree") return out.model(gen_raw_bicotree(g.seed, L, H));
      if (what == "o-partitionable") return out.model(gen_o_partitionable(g.seed, std::max<std::size_t>(L, 8)));
      if (what == "tmodel") return out.model(gen_tmodel(g.seed, n, L, H));
      if (what == "graph") {
        out.emit(edge_list(gen_graph(g.seed, static_cast<std::size_t>(n), 0.3)));
        return 0;
      }
      if (what == "coupling") {
        out.emit(to_json(gen_coupling(g.seed, static_cast<std::size_t>(n))));
        return 0;
      }
      throw InputError("unknown generator '" + what + "'");
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  try {
    return run ? run() : 2;
  } catch (const NotCograph& e) {
    std::cerr << "lcw: " << e.what() << "\n";
    return 1;
  } catch (const NotSob& e) {
    std::cerr << "lcw: " << e.what() << "\n";
    return 1;
  } catch (const NoOPartition& e) {
    std::cerr << "lcw: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "lcw: " << e.what() << "\n";
    return 2;
  }
}
