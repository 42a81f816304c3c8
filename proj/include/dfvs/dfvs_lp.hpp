#pragma once

#include <cmath>
#include <map>
#include <string>
#include <optional>
#include <queue>
#include <set>
#include <vector>

#include "dfvs/embedded_digraph.hpp"
#include "dfvs/simplex.hpp"

namespace dfvs {

class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LpSolution {
  std::map<VertexId, Rat> x;
  Rat objective{0};
  std::vector<DiCycle> active_cycles;  // constraint pool
  std::vector<Rat> cycle_duals;        // working-set duals, for reporting
  Int N{0};
  std::map<VertexId, Int> w;  // w_v = N * x_v
  bool approximate = false;   // float-mode rationalization happened
};

struct LpOptions {
  bool exact = true;
  double float_tol = 1e-9;
  Rat epsilon = Rat(1, 12);
  int iteration_cap = 2000;
  int cuts_per_sweep = 16;
};

namespace lp_detail {

// Shortest-path label under vertex weights x: (weight sum, vertex count,
// vertex sequence), compared lexicographically. The sum includes every
// vertex on the path, both endpoints.
struct Label {
  Rat sum;
  std::vector<VertexId> path;
  bool better_than(const Label& o) const {
    if (sum != o.sum) return sum < o.sum;
    if (path.size() != o.path.size()) return path.size() < o.path.size();
    return path < o.path;
  }
};

// Best x-weight dicycle through each arc closing a shortest head->tail path.
// Returns all distinct cycles of value < bound (bound unset: the single
// global minimum).
inline std::vector<std::pair<Rat, DiCycle>> min_cycles(
    const EmbeddedDigraph& g, const std::map<VertexId, Rat>& x,
    const std::optional<Rat>& bound, size_t max_cycles) {
  auto xval = [&](VertexId v) {
    auto it = x.find(v);
    return it == x.end() ? Rat(0) : it->second;
  };
  std::vector<std::pair<Rat, DiCycle>> found;

  // Single-source labels from each arc head.
  std::set<VertexId> sources;
  for (auto& [a, arc] : g.arcs()) sources.insert(arc.head);
  std::map<VertexId, std::map<VertexId, Label>> from;  // source -> settled
  for (VertexId s : sources) {
    auto& dist = from[s];
    auto cmp = [](const std::pair<Label, VertexId>& a,
                  const std::pair<Label, VertexId>& b) {
      return b.first.better_than(a.first) ||
             (!a.first.better_than(b.first) && a.second > b.second);
    };
    std::priority_queue<std::pair<Label, VertexId>,
                        std::vector<std::pair<Label, VertexId>>, decltype(cmp)>
        pq(cmp);
    pq.push({Label{xval(s), {s}}, s});
    while (!pq.empty()) {
      auto [lab, v] = pq.top();
      pq.pop();
      if (dist.count(v)) continue;
      dist.emplace(v, lab);
      for (auto [a, u] : g.out_arcs(v)) {
        if (dist.count(u)) continue;
        Label nl{lab.sum + xval(u), lab.path};
        nl.path.push_back(u);
        pq.push({std::move(nl), u});
      }
    }
  }

  // Close each arc (u,v) with the best v->u path.
  std::optional<std::pair<Rat, DiCycle>> best;
  std::set<std::vector<VertexId>> seen;
  for (auto& [a, arc] : g.arcs()) {
    auto fit = from.find(arc.head);
    if (fit == from.end()) continue;
    auto dit = fit->second.find(arc.tail);
    if (dit == fit->second.end()) continue;
    const Label& lab = dit->second;
    // Assemble cycle: path head..tail plus this arc.
    DiCycle c;
    c.vertices = lab.path;
    bool simple = true;
    {
      std::set<VertexId> uniq(c.vertices.begin(), c.vertices.end());
      simple = uniq.size() == c.vertices.size();
    }
    if (!simple) continue;  // zero-weight repeats; a better closure exists
    for (size_t i = 0; i < c.vertices.size(); ++i) {
      VertexId s = c.vertices[i];
      VertexId t = c.vertices[(i + 1) % c.vertices.size()];
      ArcId chosen = -1;
      if (i + 1 == c.vertices.size()) {
        chosen = a;
      } else {
        for (auto [aid, head] : g.out_arcs(s))
          if (head == t && (chosen == -1 || aid < chosen)) chosen = aid;
      }
      (void)s;
      c.arcs.push_back(chosen);
    }
    c.canonicalize();
    Rat value = lab.sum;
    if (bound) {
      if (value < *bound && seen.insert(c.vertices).second) {
        found.push_back({value, c});
        if (found.size() >= max_cycles) break;
      }
    } else {
      std::pair<Rat, DiCycle> cand{value, c};
      auto better = [](const std::pair<Rat, DiCycle>& p,
                       const std::pair<Rat, DiCycle>& q) {
        if (p.first != q.first) return p.first < q.first;
        return p.second < q.second;
      };
      if (!best || better(cand, *best)) best = cand;
    }
  }
  if (!bound && best) found.push_back(*best);
  return found;
}

}  // namespace lp_detail

// Minimum-x-weight dicycle; NONE iff every dicycle has x(C) >= 1 - tol.
inline std::optional<DiCycle> separate(const EmbeddedDigraph& g,
                                       const std::map<VertexId, Rat>& x,
                                       const Rat& tol = Rat(0)) {
  auto best = lp_detail::min_cycles(g, x, std::nullopt, 1);
  if (best.empty()) return std::nullopt;
  if (best[0].first >= Rat(1) - tol) return std::nullopt;
  return best[0].second;
}

namespace lp_detail {

// Pool LP: min c.x s.t. x(C) >= 1 per pool cycle, x >= 0, solved through its
// dual (max 1.y, sum_{C ni v} y_C <= c_v, y >= 0) whose initial slack basis
// is feasible. x is recovered from the dual row of the final tableau.
template <class T>
struct PoolLpResult {
  std::map<VertexId, T> x;
  T objective{};
  std::vector<T> y;
};

template <class T>
PoolLpResult<T> solve_pool_lp(const EmbeddedDigraph& g,
                              const std::vector<DiCycle>& pool, T tol) {
  std::vector<VertexId> rows;  // finite-cost vertices
  std::map<VertexId, size_t> row_of;
  for (auto& [v, c] : g.costs())
    if (!c.is_infinite()) {
      row_of[v] = rows.size();
      rows.push_back(v);
    }
  size_t m = rows.size(), n = pool.size();
  std::vector<std::vector<T>> A(m, std::vector<T>(n, T(0)));
  for (size_t j = 0; j < n; ++j) {
    bool hittable = false;
    for (VertexId v : pool[j].vertices) {
      auto it = row_of.find(v);
      if (it != row_of.end()) {
        A[it->second][j] = T(1);
        hittable = true;
      }
    }
    if (!hittable)
      throw InfeasibleError("cycle with only infinite-cost vertices");
  }
  std::vector<T> b(m), d(n, T(1));
  for (size_t i = 0; i < m; ++i) {
    if constexpr (std::is_same_v<T, Rat>)
      b[i] = g.cost(rows[i]).value();
    else
      b[i] = g.cost(rows[i]).value().get_d();
  }
  auto res = simplex_max<T>(A, b, d, tol);
  PoolLpResult<T> out;
  out.y = res.z;
  for (size_t i = 0; i < m; ++i) {
    T xv = res.duals[i];
    if (xv < T(0)) xv = T(0);
    if (xv > T(1)) xv = T(1);
    if (xv != T(0)) out.x[rows[i]] = xv;
  }
  // Objective recomputed from x; equals the dual optimum at exact arithmetic.
  out.objective = T(0);
  for (auto& [v, xv] : out.x) {
    if constexpr (std::is_same_v<T, Rat>)
      out.objective += g.cost(v).value() * xv;
    else
      out.objective += g.cost(v).value().get_d() * xv;
  }
  return out;
}

inline Rat rationalize(double v, long max_den = 1000000) {
  // Stern-Brocot / continued fraction approximation with bounded denominator.
  if (v <= 0) return Rat(0);
  if (v >= 1) return Rat(1);
  long pa = 0, qa = 1, pb = 1, qb = 1;
  while (qa + qb <= max_den) {
    long pm = pa + pb, qm = qa + qb;
    double mid = double(pm) / double(qm);
    if (std::abs(mid - v) < 1e-12) return Rat(pm, qm);
    if (v < mid)
      pb = pm, qb = qm;
    else
      pa = pm, qa = qm;
  }
  return std::abs(double(pa) / qa - v) < std::abs(double(pb) / qb - v)
             ? Rat(pa, qa)
             : Rat(pb, qb);
}

}  // namespace lp_detail

// (N, w) with N x integral and epsilon N integral.
inline std::pair<Int, std::map<VertexId, Int>> scale_and_weigh(
    const std::map<VertexId, Rat>& x, const Rat& epsilon) {
  Int N = epsilon.get_den();
  for (auto& [v, xv] : x) {
    Int den = xv.get_den();
    mpz_lcm(N.get_mpz_t(), N.get_mpz_t(), den.get_mpz_t());
  }
  std::map<VertexId, Int> w;
  for (auto& [v, xv] : x) {
    Rat scaled = Rat(N) * xv;
    w[v] = scaled.get_num();  // denominator is 1 by construction
  }
  return {N, w};
}

// Cutting-plane solve of the DFVS LP. `pool` persists across calls (never
// shrinks within a solve); pass a warm pool to reuse cuts.
inline LpSolution solve_lp(const EmbeddedDigraph& g,
                           const LpOptions& opt = {},
                           std::vector<DiCycle> pool = {}) {
  // Drop warm cuts that left the graph.
  std::vector<DiCycle> live;
  for (auto& c : pool) {
    bool ok = true;
    for (size_t i = 0; i < c.vertices.size() && ok; ++i) {
      auto it = g.arcs().find(c.arcs[i]);
      ok = it != g.arcs().end() && it->second.tail == c.vertices[i] &&
           it->second.head == c.vertices[(i + 1) % c.vertices.size()];
    }
    if (ok) live.push_back(c);
  }
  pool = std::move(live);

  LpSolution sol;
  Rat sep_tol = opt.exact ? Rat(0) : lp_detail::rationalize(opt.float_tol * 100);
  for (int iter = 0;; ++iter) {
    if (iter > opt.iteration_cap)
      throw ResourceError("solve_lp: iteration cap at pool size " +
                          std::to_string(pool.size()));
    std::map<VertexId, Rat> x;
    Rat objective(0);
    std::vector<Rat> duals;
    if (opt.exact) {
      auto r = lp_detail::solve_pool_lp<Rat>(g, pool, Rat(0));
      x = r.x;
      objective = r.objective;
      duals = r.y;
    } else {
      auto r = lp_detail::solve_pool_lp<double>(g, pool, opt.float_tol);
      for (auto& [v, xv] : r.x) x[v] = lp_detail::rationalize(xv);
      for (double yv : r.y) duals.push_back(lp_detail::rationalize(yv));
      for (auto& [v, xv] : x) objective += g.cost(v).value() * xv;
      sol.approximate = true;
    }
    auto cuts = lp_detail::min_cycles(g, x, Rat(1) - sep_tol,
                                      static_cast<size_t>(opt.cuts_per_sweep));
    if (cuts.empty()) {
      sol.x = std::move(x);
      sol.objective = objective;
      sol.active_cycles = pool;
      sol.cycle_duals = duals;
      auto [N, w] = scale_and_weigh(sol.x, opt.epsilon);
      sol.N = N;
      sol.w = std::move(w);
      return sol;
    }
    std::set<std::vector<VertexId>> have;
    for (auto& c : pool) have.insert(c.vertices);
    for (auto& [val, c] : cuts)
      if (have.insert(c.vertices).second) pool.push_back(c);
  }
}

// Weighted distances under w = N*x: the weight of a path counts every vertex
// except the last. Infinite distances are absent from the maps.
class WeightedDistanceOracle {
 public:
  WeightedDistanceOracle(const EmbeddedDigraph& g, std::map<VertexId, Int> w)
      : g_(&g), w_(std::move(w)) {}

  Int weight(VertexId v) const {
    auto it = w_.find(v);
    return it == w_.end() ? Int(0) : it->second;
  }

  // d(S, v) for all v, in the graph minus `forbidden`.
  std::map<VertexId, Int> dist_from(const std::set<VertexId>& sources,
                                    const std::set<VertexId>& forbidden = {}) const {
    return run(sources, forbidden, /*forward=*/true);
  }

  // d(v, T) for all v.
  std::map<VertexId, Int> dist_to(const std::set<VertexId>& targets,
                                  const std::set<VertexId>& forbidden = {}) const {
    return run(targets, forbidden, /*forward=*/false);
  }

  std::optional<Int> distance(const std::set<VertexId>& S,
                              const std::set<VertexId>& T,
                              const std::set<VertexId>& forbidden = {}) const {
    auto d = dist_from(S, forbidden);
    std::optional<Int> best;
    for (VertexId t : T) {
      auto it = d.find(t);
      if (it != d.end() && (!best || it->second < *best)) best = it->second;
    }
    return best;
  }

 private:
  std::map<VertexId, Int> run(const std::set<VertexId>& roots,
                              const std::set<VertexId>& forbidden,
                              bool forward) const {
    std::map<VertexId, Int> dist;
    std::set<std::pair<Int, VertexId>> pq;
    for (VertexId s : roots) {
      if (!g_->has_vertex(s) || forbidden.count(s)) continue;
      dist[s] = 0;
      pq.insert({Int(0), s});
    }
    while (!pq.empty()) {
      auto [dv, v] = *pq.begin();
      pq.erase(pq.begin());
      if (dist[v] < dv) continue;
      const auto& adj = forward ? g_->out_arcs(v) : g_->in_arcs(v);
      for (auto [a, u] : adj) {
        if (forbidden.count(u)) continue;
        // Forward: extend past v, paying w(v). Backward (distance to a
        // target set): prepend u, paying w(u).
        Int nd = dv + (forward ? weight(v) : weight(u));
        auto it = dist.find(u);
        if (it == dist.end() || nd < it->second) {
          if (it != dist.end()) pq.erase({it->second, u});
          dist[u] = nd;
          pq.insert({nd, u});
        }
      }
    }
    return dist;
  }

  const EmbeddedDigraph* g_;
  std::map<VertexId, Int> w_;
};

}  // namespace dfvs
