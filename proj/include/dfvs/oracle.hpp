#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "dfvs/dfvs_lp.hpp"
#include "dfvs/embedded_digraph.hpp"

namespace dfvs {

struct ExactResult {
  Cost optimum;
  std::set<VertexId> solution;
  long nodes_explored = 0;
  std::string method;
};

class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// All simple dicycles, deduplicated up to rotation: each cycle is found with
// its minimum vertex as anchor, extending only over larger vertices.
inline std::vector<DiCycle> enumerate_dicycles(const EmbeddedDigraph& g,
                                               int cap = 18) {
  if (static_cast<int>(g.num_vertices()) > cap)
    throw CapExceeded("enumerate_dicycles: |V| > cap");
  std::vector<DiCycle> out;
  auto verts = g.vertex_ids();
  std::vector<VertexId> path;
  std::set<VertexId> on_path;

  std::function<void(VertexId, VertexId)> dfs = [&](VertexId anchor,
                                                    VertexId v) {
    path.push_back(v);
    on_path.insert(v);
    for (auto [a, u] : g.out_arcs(v)) {
      if (u == anchor) {
        DiCycle c;
        c.vertices = path;
        for (size_t i = 0; i < path.size(); ++i) {
          VertexId s = path[i], t = path[(i + 1) % path.size()];
          ArcId chosen = -1;
          for (auto [aid, head] : g.out_arcs(s))
            if (head == t && (chosen == -1 || aid < chosen)) chosen = aid;
          c.arcs.push_back(chosen);
        }
        out.push_back(std::move(c));
      } else if (u > anchor && !on_path.count(u)) {
        dfs(anchor, u);
      }
    }
    path.pop_back();
    on_path.erase(v);
  };
  for (VertexId s : verts) dfs(s, s);
  std::sort(out.begin(), out.end());
  return out;
}

namespace oracle_detail {

inline std::optional<DiCycle> shortest_dicycle(const EmbeddedDigraph& g) {
  std::map<VertexId, Rat> zero;
  return separate(g, zero, Rat(0));  // x == 0: minimizes vertex count
}

// Greedy vertex-disjoint dicycle packing; sum of each cycle's cheapest
// vertex is a valid DFVS lower bound.
inline Rat packing_lower_bound(const EmbeddedDigraph& g) {
  Rat lb(0);
  EmbeddedDigraph cur = g.residual({});
  while (!cur.empty()) {
    auto c = shortest_dicycle(cur);
    if (!c) break;
    std::optional<Rat> cheapest;
    std::set<VertexId> drop(c->vertices.begin(), c->vertices.end());
    for (VertexId v : c->vertices) {
      const Cost& cv = cur.cost(v);
      if (!cv.is_infinite() && (!cheapest || cv.value() < *cheapest))
        cheapest = cv.value();
    }
    if (cheapest) lb += *cheapest;
    cur = cur.residual(drop);
  }
  return lb;
}

}  // namespace oracle_detail

// Exact minimum-cost DFVS by branch and bound: branch on the vertices of a
// shortest dicycle, bound with the LP value of the remaining graph plus a
// greedy packing bound.
inline ExactResult exact_dfvs(const EmbeddedDigraph& g, int cap = 18) {
  if (static_cast<int>(g.num_vertices()) > cap)
    throw CapExceeded("exact_dfvs: |V| > cap");
  ExactResult best;
  best.method = "branch-and-bound";
  // Start from the trivial solution: all finite vertices on dicycles.
  {
    auto r = g.residual({});
    Rat total(0);
    std::set<VertexId> all;
    for (auto& [v, c] : r.costs())
      if (!c.is_infinite()) {
        total += c.value();
        all.insert(v);
      }
    best.optimum = Cost(total);
    best.solution = all;
    if (!g.residual(all).empty()) best.optimum = Cost::infinity();
  }

  long nodes = 0;
  std::function<void(const EmbeddedDigraph&, Rat, std::set<VertexId>&)> go =
      [&](const EmbeddedDigraph& cur, Rat spent, std::set<VertexId>& chosen) {
        ++nodes;
        auto cyc = oracle_detail::shortest_dicycle(cur);
        if (!cyc) {
          if (Cost(spent) < best.optimum) {
            best.optimum = Cost(spent);
            best.solution = chosen;
          }
          return;
        }
        Rat lb = oracle_detail::packing_lower_bound(cur);
        if (!(Cost(spent + lb) < best.optimum)) return;
        for (VertexId v : cyc->vertices) {
          const Cost& cv = cur.cost(v);
          if (cv.is_infinite()) continue;
          if (!(Cost(spent + cv.value()) < best.optimum)) continue;
          chosen.insert(v);
          go(cur.residual({v}), spent + cv.value(), chosen);
          chosen.erase(v);
        }
      };
  std::set<VertexId> chosen;
  go(g.residual({}), Rat(0), chosen);
  best.nodes_explored = nodes;
  if (best.optimum.is_infinite() && !g.residual({}).empty())
    throw InfeasibleError("exact_dfvs: no finite-cost hitting set");
  return best;
}

// Exhaustive minimum-cost hitting set over the full dicycle family;
// an independent cross-check of exact_dfvs for very small graphs.
inline ExactResult exact_dfvs_exhaustive(const EmbeddedDigraph& g,
                                         int cap = 10) {
  if (static_cast<int>(g.num_vertices()) > cap)
    throw CapExceeded("exact_dfvs_exhaustive: |V| > cap");
  auto cycles = enumerate_dicycles(g, cap);
  auto verts = g.vertex_ids();
  size_t n = verts.size();
  ExactResult best;
  best.method = "exhaustive";
  best.optimum = Cost::infinity();
  for (uint64_t mask = 0; mask < (1ull << n); ++mask) {
    std::set<VertexId> s;
    Cost total(Rat(0));
    for (size_t i = 0; i < n; ++i)
      if (mask & (1ull << i)) {
        s.insert(verts[i]);
        total += g.cost(verts[i]);
      }
    if (!(total < best.optimum)) continue;
    bool hits_all = true;
    for (auto& c : cycles) {
      bool hit = false;
      for (VertexId v : c.vertices)
        if (s.count(v)) {
          hit = true;
          break;
        }
      if (!hit) {
        hits_all = false;
        break;
      }
    }
    if (hits_all) {
      best.optimum = total;
      best.solution = s;
    }
  }
  if (best.optimum.is_infinite()) {
    if (cycles.empty()) {
      best.optimum = Cost(Rat(0));
      best.solution.clear();
    } else {
      throw InfeasibleError("exhaustive: no finite hitting set");
    }
  }
  return best;
}

// Exact minimum-cost hitting set for an explicit cycle family (for facial
// hitting cross-checks).
inline ExactResult exact_hitting_set(const EmbeddedDigraph& g,
                                     const std::vector<DiCycle>& family,
                                     int cap = 18) {
  auto verts = g.vertex_ids();
  size_t n = verts.size();
  if (static_cast<int>(n) > cap)
    throw CapExceeded("exact_hitting_set: |V| > cap");
  ExactResult best;
  best.method = "hitting-set";
  best.optimum = Cost::infinity();
  for (uint64_t mask = 0; mask < (1ull << n); ++mask) {
    std::set<VertexId> s;
    Cost total(Rat(0));
    for (size_t i = 0; i < n; ++i)
      if (mask & (1ull << i)) {
        s.insert(verts[i]);
        total += g.cost(verts[i]);
      }
    if (!(total < best.optimum)) continue;
    bool ok = true;
    for (auto& c : family) {
      bool hit = false;
      for (VertexId v : c.vertices) hit = hit || s.count(v);
      if (!hit) {
        ok = false;
        break;
      }
    }
    if (ok) {
      best.optimum = total;
      best.solution = s;
    }
  }
  if (best.optimum.is_infinite()) {
    if (family.empty()) {
      best.optimum = Cost(Rat(0));
    } else {
      throw InfeasibleError("hitting-set: infeasible");
    }
  }
  return best;
}

// Maximum cardinality vertex-disjoint dicycle packing by exact search.
inline ExactResult max_dicycle_packing(const EmbeddedDigraph& g, int cap = 14) {
  if (static_cast<int>(g.num_vertices()) > cap)
    throw CapExceeded("max_dicycle_packing: |V| > cap");
  auto cycles = enumerate_dicycles(g, cap);
  auto verts = g.vertex_ids();
  std::map<VertexId, int> idx;
  for (size_t i = 0; i < verts.size(); ++i) idx[verts[i]] = (int)i;
  std::vector<uint64_t> masks;
  for (auto& c : cycles) {
    uint64_t m = 0;
    for (VertexId v : c.vertices) m |= 1ull << idx[v];
    masks.push_back(m);
  }
  int best = 0;
  long nodes = 0;
  std::function<void(size_t, uint64_t, int)> go = [&](size_t i, uint64_t used,
                                                      int count) {
    ++nodes;
    best = std::max(best, count);
    if (i >= masks.size()) return;
    if (count + static_cast<int>(masks.size() - i) <= best) return;
    for (size_t j = i; j < masks.size(); ++j)
      if (!(masks[j] & used)) go(j + 1, used | masks[j], count + 1);
  };
  go(0, 0, 0);
  ExactResult res;
  res.method = "packing";
  res.optimum = Cost(Rat(best));
  res.nodes_explored = nodes;
  return res;
}

// Full-enumeration LP value: every dicycle as a constraint. Reference for
// the cutting-plane solver.
inline Rat full_lp_value(const EmbeddedDigraph& g, int cap = 14) {
  auto cycles = enumerate_dicycles(g, cap);
  auto r = lp_detail::solve_pool_lp<Rat>(g, cycles, Rat(0));
  return r.objective;
}

}  // namespace dfvs
