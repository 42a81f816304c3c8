// Command-line front end: LP solving, facial hitting, separator planning,
// the full solver, exact oracles, and corpus benchmarking on .emd files.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "dfvs/emd_io.hpp"
#include "dfvs/harness.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace dfvs;

namespace {

std::string rat_str(const Rat& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

Rat parse_rat(const std::string& s) {
  Rat r;
  if (r.set_str(s, 10) != 0) throw CLI::ValidationError("rational", s);
  r.canonicalize();
  if (r <= 0) throw CLI::ValidationError("rational must be positive", s);
  return r;
}

EmbeddedDigraph load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("cannot open " + path);
  return read_emd(in);
}

json cycle_json(const DiCycle& c) {
  json j = json::array();
  for (VertexId v : c.vertices) j.push_back(v);
  return j;
}

json set_json(const std::set<VertexId>& s) {
  json j = json::array();
  for (VertexId v : s) j.push_back(v);
  return j;
}

json audit_json(const LayerAudit& a) {
  return json{{"family", a.family},
              {"chosen_index", a.chosen_index},
              {"chosen_cost", rat_str(a.chosen_cost)},
              {"family_total", rat_str(a.family_total)},
              {"family_bound", rat_str(a.family_bound)},
              {"chosen_bound", rat_str(a.chosen_bound)},
              {"ok", a.ok}};
}

json node_json(const SolveCertificate::Node& n) {
  json costs = json::object();
  for (auto& [k, c] : n.local_cost) costs[k] = rat_str(c);
  json children = json::array();
  for (auto& ch : n.children) children.push_back(node_json(ch));
  return json{{"genus", n.genus},
              {"vertices", n.num_vertices},
              {"branch", n.branch},
              {"local_cost", costs},
              {"children", children}};
}

// Plain key=value manifest describing one generated instance.
InstanceSpec read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("cannot open " + path);
  InstanceSpec spec;
  spec.name = fs::path(path).stem().string();
  std::string line;
  while (std::getline(in, line)) {
    auto eq = line.find('=');
    if (line.empty() || line[0] == '#' || eq == std::string::npos) continue;
    auto key = line.substr(0, eq), val = line.substr(eq + 1);
    auto trim = [](std::string& s) {
      s.erase(0, s.find_first_not_of(" \t"));
      s.erase(s.find_last_not_of(" \t\r") + 1);
    };
    trim(key);
    trim(val);
    if (key == "family") {
      if (val == "toroidal_grid") spec.family = Family::TOROIDAL_GRID;
      else if (val == "planar") spec.family = Family::PLANAR;
      else if (val == "random_rotation") spec.family = Family::RANDOM_ROTATION;
      else throw CLI::ValidationError("unknown family " + val);
    } else if (key == "n") spec.n = std::stoi(val);
    else if (key == "m" || key == "chords") spec.m = std::stoi(val);
    else if (key == "seed") spec.seed = std::stoull(val);
    else if (key == "max_genus") spec.max_genus = std::stoi(val);
    else if (key == "expected_genus") spec.expected_genus = std::stoi(val);
    else if (key == "rotation")
      spec.grid_rotation =
          val == "alternating" ? GridRotation::ALTERNATING : GridRotation::QUAD;
    else if (key == "cost")
      spec.cost_model =
          val == "uniform_1_10" ? CostModel::UNIFORM_1_10 : CostModel::UNIT;
    else if (key == "name") spec.name = val;
    else throw CLI::ValidationError("unknown manifest key " + key);
  }
  return spec;
}

Corpus load_corpus_dir(const std::string& dir) {
  std::vector<fs::path> emds, manifests;
  for (auto& e : fs::directory_iterator(dir)) {
    if (e.path().extension() == ".emd") emds.push_back(e.path());
    if (e.path().extension() == ".toml") manifests.push_back(e.path());
  }
  std::sort(emds.begin(), emds.end());
  std::sort(manifests.begin(), manifests.end());
  Corpus corpus;
  for (auto& p : emds) corpus.push_back({p.stem().string(), load(p.string())});
  for (auto& p : manifests) {
    auto spec = read_manifest(p.string());
    corpus.push_back({spec.name, generate(spec)});
  }
  return corpus;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"minimum-cost directed feedback vertex set on embedded digraphs"};
  app.require_subcommand(1);

  std::string file, eps_str = "1/12", out, corpus_dir, sub;
  bool use_float = false, as_json = false, emit_trace = false;
  int cap = 18, oracle_cap = 14;

  auto add_eps = [&](CLI::App* cmd) {
    cmd->add_option("--epsilon", eps_str, "separator margin as p/q");
  };

  auto* lp = app.add_subcommand("lp", "solve the dicycle-cover LP");
  lp->add_option("file", file, "instance (.emd)")->required();
  lp->add_flag("--float", use_float, "double-precision simplex");
  add_eps(lp);

  auto* hit = app.add_subcommand("hit-facial", "primal-dual facial hitting");
  hit->add_option("file", file, "instance (.emd)")->required();
  hit->add_flag("--emit-trace", emit_trace, "JSON-lines iteration trace");

  auto* sep = app.add_subcommand("separate-plan",
                                 "heavy rounding plus one separator round");
  sep->add_option("file", file, "instance (.emd)")->required();
  sep->add_flag("--json", as_json);
  add_eps(sep);

  auto* solve_cmd = app.add_subcommand("solve", "full recursive solver");
  solve_cmd->add_option("file", file, "instance (.emd)")->required();
  solve_cmd->add_flag("--json", as_json);
  solve_cmd->add_option("--oracle-cap", cap, "fallback size cap");
  add_eps(solve_cmd);

  auto* oracle_cmd = app.add_subcommand("oracle", "exact reference solvers");
  oracle_cmd->add_option("mode", sub, "dfvs | pack | cycles")
      ->required()
      ->check(CLI::IsMember({"dfvs", "pack", "cycles"}));
  oracle_cmd->add_option("file", file, "instance (.emd)")->required();
  oracle_cmd->add_option("--cap", cap, "instance size cap");

  auto* bench = app.add_subcommand("bench", "run a corpus, emit a CSV report");
  bench->add_option("--corpus", corpus_dir,
                    "directory of .emd files and key=value .toml manifests");
  bench->add_option("--out", out, "report path")->required();
  bench->add_option("--oracle-cap", oracle_cap, "exact-column size cap");

  auto* gen = app.add_subcommand("gen", "write the default corpus as .emd files");
  gen->add_option("--out", out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*lp) {
      LpOptions opt;
      opt.exact = !use_float;
      opt.epsilon = parse_rat(eps_str);
      auto g = load(file);
      auto sol = solve_lp(g, opt);
      auto [N, w] = scale_and_weigh(sol.x, opt.epsilon);
      std::cout << "objective " << sol.objective << "\n";
      std::cout << "N " << N << "\n";
      std::cout << "pool " << sol.active_cycles.size() << "\n";
      for (auto& [v, xv] : sol.x)
        if (xv != 0) std::cout << "x[" << v << "] " << xv << "\n";
      if (sol.approximate) std::cout << "approximate true\n";
    } else if (*hit) {
      auto g = load(file);
      auto r = run_facial_hitter(g);
      if (emit_trace) {
        for (size_t t = 0; t < r.iteration_cycles.size(); ++t) {
          json faces = json::array();
          for (auto& c : r.iteration_cycles[t]) faces.push_back(cycle_json(c));
          json raised = json::array();
          for (auto& e : r.ledger.raised)
            if (e.iteration == static_cast<int>(t))
              raised.push_back({{"cycle", cycle_json(e.cycle)},
                                {"y", rat_str(e.y)}});
          std::cout << json{{"iteration", t},
                            {"faces", faces},
                            {"raised", raised}}
                           .dump()
                    << "\n";
        }
      }
      auto rep = verify_certificate(g, r);
      std::cout << "S " << set_json(r.S).dump() << "\n";
      std::cout << "cost " << r.cost << "\n";
      std::cout << "dual " << r.dual_total << "\n";
      std::cout << "certificate " << (rep.all_pass() ? "pass" : "fail") << "\n";
      if (!rep.all_pass()) std::cout << rep.detail << "\n";
    } else if (*sep) {
      Rat eps = parse_rat(eps_str);
      LpOptions opt;
      opt.epsilon = eps;
      auto g = load(file).residual({});
      auto rh = round_heavy(g, opt);
      EmbeddedDigraph res = g.residual(rh.F);
      json j{{"heavy", set_json(rh.F)},
             {"heavy_cost", rat_str(rh.cost_F)},
             {"audits", json::array()}};
      auto t = tight_cycle(res, rh.sol);
      if (!t) {
        j["branch"] = "done";
        j["removed"] = json::array();
      } else {
        auto ports = build_ports(res, *t);
        auto p = plan(ports, rh.sol, eps);
        j["branch"] = p.branch == SeparatorPlan::Branch::FAR ? "far" : "close";
        j["cycle"] = cycle_json(*t);
        j["removed"] = set_json(p.removed);
        for (auto& a : p.layer_audit) j["audits"].push_back(audit_json(a));
      }
      if (as_json) {
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << "branch " << j["branch"].get<std::string>() << "\n";
        std::cout << "heavy " << j["heavy"].dump() << "\n";
        std::cout << "removed " << j["removed"].dump() << "\n";
        std::cout << "audits " << j["audits"].size() << "\n";
        for (auto& a : j["audits"])
          std::cout << "  " << a["family"].get<std::string>() << " chosen "
                    << a["chosen_cost"].get<std::string>() << " <= "
                    << a["chosen_bound"].get<std::string>() << " "
                    << (a["ok"].get<bool>() ? "ok" : "VIOLATED") << "\n";
      }
    } else if (*solve_cmd) {
      SolveOptions opt;
      opt.oracle_cap = cap;
      opt.lp.epsilon = parse_rat(eps_str);
      auto g = load(file);
      SolveCertificate cert;
      try {
        cert = solve(g, opt);
      } catch (const AbortError& e) {
        std::cerr << "abort: " << e.what() << "\n" << e.diagnostic;
        return 2;
      }
      if (as_json) {
        json audits = json::array();
        for (auto& a : cert.audits) audits.push_back(audit_json(a));
        json j{{"schema", "dfvs-cert/1"},
               {"solution", set_json(cert.solution)},
               {"cost", rat_str(cert.cost)},
               {"lp_bound", rat_str(cert.lp_bound)},
               {"valid", cert.valid},
               {"approximate", cert.approximate},
               {"used_oracle_fallback", cert.used_oracle_fallback},
               {"phase_attribution", json::object()},
               {"audits", audits},
               {"recursion_tree", node_json(cert.recursion_tree)}};
        for (auto& [k, c] : cert.phase_attribution)
          j["phase_attribution"][k] = rat_str(c);
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << "solution " << set_json(cert.solution).dump() << "\n";
        std::cout << "cost " << cert.cost << "\n";
        std::cout << "lp_bound " << cert.lp_bound << "\n";
        std::cout << "valid " << (cert.valid ? "true" : "false") << "\n";
      }
      return cert.valid ? 0 : 1;
    } else if (*oracle_cmd) {
      auto g = load(file);
      if (sub == "dfvs") {
        auto r = exact_dfvs(g, cap);
        std::cout << "optimum "
                  << (r.optimum.is_infinite() ? "inf"
                                              : rat_str(r.optimum.value()))
                  << "\n";
        std::cout << "solution " << set_json(r.solution).dump() << "\n";
        std::cout << "nodes " << r.nodes_explored << "\n";
      } else if (sub == "pack") {
        auto r = max_dicycle_packing(g, cap);
        std::cout << "packing " << r.optimum.value() << "\n";
      } else {
        for (auto& c : enumerate_dicycles(g, cap))
          std::cout << cycle_json(c).dump() << "\n";
      }
    } else if (*bench) {
      ExperimentConfig cfg;
      cfg.oracle_cap = oracle_cap;
      cfg.packing_cap = oracle_cap;
      Corpus corpus =
          corpus_dir.empty() ? default_corpus() : load_corpus_dir(corpus_dir);
      std::ofstream os(out);
      if (!os) throw CLI::ValidationError("cannot write " + out);
      os << run_experiment(corpus, cfg);
      std::cout << "wrote " << out << " (" << corpus.size() << " instances)\n";
    } else if (*gen) {
      fs::create_directories(out);
      auto corpus = default_corpus();
      for (auto& [name, g] : corpus) {
        std::ofstream os(fs::path(out) / (name + ".emd"));
        os << to_emd_string(g);
      }
      std::cout << "wrote " << corpus.size() << " instances to " << out << "\n";
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
