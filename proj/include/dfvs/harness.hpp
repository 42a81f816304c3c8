#pragma once

#include <chrono>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dfvs/generators.hpp"
#include "dfvs/genus_solver.hpp"
#include "dfvs/oracle.hpp"

namespace dfvs {

struct ExperimentConfig {
  SolveOptions solve;
  int oracle_cap = 14;   // exact DFVS column
  int packing_cap = 14;  // packing column
  bool timing = true;    // fill the isolated timing/timestamp column
};

// Named instances ready to run.
using Corpus = std::vector<std::pair<std::string, EmbeddedDigraph>>;

// Deterministic default corpus: planar chorded cycles, toroidal grids
// n = 2..6 in both rotation variants, sparse random rotation systems of
// genus <= 3, and disjoint unions. Size >= 200.
inline std::vector<InstanceSpec> default_corpus_specs() {
  std::vector<InstanceSpec> specs;
  auto add = [&](InstanceSpec s) {
    std::ostringstream name;
    name << "i" << specs.size() << "_" << s.name;
    s.name = name.str();
    specs.push_back(std::move(s));
  };
  // Toroidal grids, both rotations and cost models: 20 instances.
  for (int n = 2; n <= 6; ++n)
    for (auto rot : {GridRotation::QUAD, GridRotation::ALTERNATING})
      for (auto cm : {CostModel::UNIT, CostModel::UNIFORM_1_10}) {
        InstanceSpec s;
        s.family = Family::TOROIDAL_GRID;
        s.n = n;
        s.grid_rotation = rot;
        s.cost_model = cm;
        s.seed = 1000 + n;
        // The quad rotation is the standard torus embedding; the
        // alternating rotation trades faces for genus as n grows. The
        // n=2 maps degenerate (parallel arcs), so their genus is left
        // to be recomputed instead of pinned.
        if (n >= 3)
          s.expected_genus =
              rot == GridRotation::QUAD ? 1 : (n - 1) * (n - 2) / 2;
        s.name = "torus_n" + std::to_string(n) +
                 (rot == GridRotation::QUAD ? "_quad" : "_alt") +
                 (cm == CostModel::UNIT ? "_unit" : "_rand");
        add(s);
      }
  // Planar chorded cycles: 96 instances.
  for (int k : {5, 7, 9, 12})
    for (int chords : {2, 4, 6})
      for (uint64_t seed = 1; seed <= 8; ++seed) {
        InstanceSpec s;
        s.family = Family::PLANAR;
        s.n = k;
        s.m = chords;
        s.cost_model = seed % 2 ? CostModel::UNIT : CostModel::UNIFORM_1_10;
        s.seed = seed;
        s.expected_genus = 0;
        s.name = "planar_k" + std::to_string(k) + "_c" +
                 std::to_string(chords) + "_s" + std::to_string(seed);
        add(s);
      }
  // Sparse random rotation systems, genus <= 3: 80 instances.
  for (int n : {8, 10, 12, 14})
    for (uint64_t seed = 1; seed <= 20; ++seed) {
      InstanceSpec s;
      s.family = Family::RANDOM_ROTATION;
      s.n = n;
      s.m = n + 4;
      s.max_genus = 3;
      s.cost_model = seed % 2 ? CostModel::UNIFORM_1_10 : CostModel::UNIT;
      s.seed = 9000 + 131 * n + seed;
      s.name = "rand_n" + std::to_string(n) + "_s" + std::to_string(seed);
      add(s);
    }
  // Disjoint unions of small planar parts: 12 instances.
  for (uint64_t seed = 1; seed <= 12; ++seed) {
    InstanceSpec s;
    s.family = Family::DISJOINT_UNION;
    int parts = 2 + static_cast<int>(seed % 2);
    for (int p = 0; p < parts; ++p) {
      InstanceSpec part;
      part.family = Family::PLANAR;
      part.n = 5 + static_cast<int>((seed + p) % 4);
      part.m = 2;
      part.cost_model = p % 2 ? CostModel::UNIFORM_1_10 : CostModel::UNIT;
      part.seed = 10 * seed + p;
      s.parts.push_back(part);
    }
    s.name = "union_p" + std::to_string(parts) + "_s" + std::to_string(seed);
    add(s);
  }
  return specs;
}

inline Corpus default_corpus() {
  Corpus corpus;
  for (auto& s : default_corpus_specs()) corpus.push_back({s.name, generate(s)});
  return corpus;
}

namespace harness_detail {

inline std::string rat_str(const Rat& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

inline std::string ratio_str(const Rat& num, const Rat& den) {
  if (den == 0) return "";
  return rat_str(num / den);
}

}  // namespace harness_detail

// One CSV report; columns are fixed and versioned by the header line.
// The final `timing` column carries wall-clock data (timestamp and
// per-phase milliseconds) and is the only nondeterministic column.
inline std::string run_experiment(const Corpus& corpus,
                                  const ExperimentConfig& cfg = {}) {
  std::ostringstream out;
  out << "# dfvs-report/1\n";
  out << "instance,vertices,arcs,genus,lp,exact_opt,cost,cost_over_lp,"
         "cost_over_opt,packing,valid,error,timing\n";
  for (auto& [name, g] : corpus) {
    out << name << "," << g.num_vertices() << "," << g.num_arcs() << ","
        << g.genus() << ",";
    std::string err;
    auto t0 = std::chrono::steady_clock::now();
    std::optional<SolveCertificate> cert;
    try {
      cert = solve(g, cfg.solve);
    } catch (const std::exception& e) {
      err = e.what();
    }
    std::optional<Rat> opt;
    if (static_cast<int>(g.num_vertices()) <= cfg.oracle_cap) {
      try {
        auto r = exact_dfvs(g, cfg.oracle_cap);
        if (!r.optimum.is_infinite()) opt = r.optimum.value();
      } catch (const std::exception& e) {
        if (err.empty()) err = e.what();
      }
    }
    std::optional<Rat> packing;
    if (static_cast<int>(g.num_vertices()) <= cfg.packing_cap) {
      try {
        packing = max_dicycle_packing(g, cfg.packing_cap).optimum.value();
      } catch (const std::exception& e) {
        if (err.empty()) err = e.what();
      }
    }
    auto t1 = std::chrono::steady_clock::now();
    using harness_detail::rat_str;
    if (cert) {
      out << rat_str(cert->lp_bound) << ",";
      out << (opt ? rat_str(*opt) : "") << ",";
      out << rat_str(cert->cost) << ",";
      out << harness_detail::ratio_str(cert->cost, cert->lp_bound) << ",";
      out << (opt ? harness_detail::ratio_str(cert->cost, *opt) : "") << ",";
      out << (packing ? rat_str(*packing) : "") << ",";
      out << (cert->valid ? "true" : "false") << ",";
    } else {
      out << ",";
      out << (opt ? rat_str(*opt) : "") << ",,,,";
      out << (packing ? rat_str(*packing) : "") << ",,";
    }
    // Commas inside error messages would shift columns.
    for (char& c : err)
      if (c == ',' || c == '\n') c = ';';
    out << err << ",";
    if (cfg.timing) {
      auto ms =
          std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0);
      auto now = std::chrono::system_clock::now().time_since_epoch();
      out << "ts="
          << std::chrono::duration_cast<std::chrono::seconds>(now).count()
          << ";ms=" << ms.count();
    }
    out << "\n";
  }
  return out.str();
}

// Comparison helper: strip the trailing timing column of every data row.
inline std::string strip_timing_column(const std::string& csv) {
  std::istringstream in(csv);
  std::ostringstream out;
  std::string line;
  bool first_data = true;
  while (std::getline(in, line)) {
    if (!line.empty() && (line[0] == '#' || first_data)) {
      if (line[0] != '#') first_data = false;
      out << line << "\n";
      continue;
    }
    auto pos = line.rfind(',');
    out << (pos == std::string::npos ? line : line.substr(0, pos + 1)) << "\n";
  }
  return out.str();
}

}  // namespace dfvs
