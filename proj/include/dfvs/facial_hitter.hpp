#pragma once

#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dfvs/dfvs_lp.hpp"
#include "dfvs/embedded_digraph.hpp"

namespace dfvs {

struct DualLedger {
  // One entry per raised face cycle (duplicate face boundaries appear once
  // per face), tagged with the iteration that raised it.
  struct Entry {
    DiCycle cycle;
    Rat y;
    int iteration;
  };
  std::vector<Entry> raised;
  std::map<VertexId, Rat> slack;  // finite-cost vertices only

  Rat total() const {
    Rat t(0);
    for (auto& e : raised) t += e.y;
    return t;
  }
};

struct HitterResult {
  std::set<VertexId> S;
  DualLedger ledger;
  std::vector<VertexId> addition_order;
  std::vector<std::vector<DiCycle>> iteration_cycles;  // faces per iteration
  // (|C_t|, sum over C in C_t of |S intersect C|), with the final S.
  std::vector<std::pair<size_t, size_t>> per_iteration_stats;
  Rat cost{0};
  Rat dual_total{0};
};

struct HitterReport {
  bool dual_feasible = false;
  bool tightness = false;
  bool debit_bound = false;
  bool residual_facial_free = false;
  bool minimality = false;
  bool cost_bound = false;
  std::string detail;

  bool all_pass() const {
    return dual_feasible && tightness && debit_bound && residual_facial_free &&
           minimality && cost_bound;
  }
};

namespace hitter_detail {

inline std::string cycle_name(const DiCycle& c) {
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < c.vertices.size(); ++i)
    os << (i ? "," : "") << c.vertices[i];
  os << ")";
  return os.str();
}

}  // namespace hitter_detail

// Primal-dual facial hitting: uniform event-driven raises on the current
// residual's face-minimal cycles, add all newly tight vertices, then reverse
// deletion.
inline HitterResult run_facial_hitter(const EmbeddedDigraph& g) {
  HitterResult r;
  for (auto& [v, c] : g.costs())
    if (!c.is_infinite()) r.ledger.slack[v] = c.value();

  for (int iter = 0;; ++iter) {
    EmbeddedDigraph cur = g.residual(r.S);
    auto faces = cur.face_minimal_faces();
    if (faces.empty()) break;

    std::map<VertexId, int> cover;
    for (auto& c : faces) {
      bool hittable = false;
      for (VertexId v : c.vertices) {
        if (!g.cost(v).is_infinite()) hittable = true;
        ++cover[v];
      }
      if (!hittable)
        throw InfeasibleError("unhittable face-minimal cycle " +
                              hitter_detail::cycle_name(c));
    }

    std::optional<Rat> delta;
    for (auto& [v, k] : cover) {
      if (g.cost(v).is_infinite()) continue;
      Rat step = r.ledger.slack.at(v) / k;
      if (!delta || step < *delta) delta = step;
    }
    for (auto& c : faces)
      r.ledger.raised.push_back({c, *delta, iter});
    r.iteration_cycles.push_back(faces);

    for (auto& [v, k] : cover) {
      if (g.cost(v).is_infinite()) continue;
      Rat& s = r.ledger.slack.at(v);
      s -= *delta * k;
      if (s == 0 && !r.S.count(v)) {
        // cover iterates in VertexId order, so ties are added in order.
        r.S.insert(v);
        r.addition_order.push_back(v);
      }
    }
  }

  // Reverse deletion.
  for (auto it = r.addition_order.rbegin(); it != r.addition_order.rend();
       ++it) {
    std::set<VertexId> without = r.S;
    without.erase(*it);
    if (g.residual(without).face_minimal_faces().empty()) r.S = without;
  }
  std::vector<VertexId> kept;
  for (VertexId v : r.addition_order)
    if (r.S.count(v)) kept.push_back(v);
  r.addition_order = kept;

  for (auto& faces : r.iteration_cycles) {
    size_t debit = 0;
    for (auto& c : faces)
      for (VertexId v : c.vertices) debit += r.S.count(v);
    r.per_iteration_stats.push_back({faces.size(), debit});
  }
  for (VertexId v : r.S) r.cost += g.cost(v).value();
  r.dual_total = r.ledger.total();
  return r;
}

// Independent recomputation of the Algorithm 1 certificate.
inline HitterReport verify_certificate(const EmbeddedDigraph& g,
                                       const HitterResult& r) {
  HitterReport rep;
  std::ostringstream detail;
  int genus = g.genus();
  Rat beta = Rat(3 + 3 * genus);

  // Dual feasibility, replayed iteration by iteration: partial sums must
  // respect every finite cost at every event point.
  std::map<VertexId, Rat> load;
  rep.dual_feasible = true;
  int max_iter = -1;
  for (auto& e : r.ledger.raised) max_iter = std::max(max_iter, e.iteration);
  for (int t = 0; t <= max_iter; ++t) {
    for (auto& e : r.ledger.raised) {
      if (e.iteration != t) continue;
      if (e.y < 0) rep.dual_feasible = false;
      for (VertexId v : e.cycle.vertices) load[v] += e.y;
    }
    for (auto& [v, sum] : load) {
      const Cost& c = g.cost(v);
      if (!c.is_infinite() && sum > c.value()) {
        rep.dual_feasible = false;
        detail << "dual overload at vertex " << v << " after iteration " << t
               << "; ";
      }
    }
    if (!rep.dual_feasible) break;
  }

  // Complementary tightness of every chosen vertex.
  rep.tightness = true;
  for (VertexId v : r.S) {
    const Cost& c = g.cost(v);
    if (c.is_infinite() || load[v] != c.value()) {
      rep.tightness = false;
      detail << "untight vertex " << v << " in S; ";
    }
  }

  // Per-iteration debit bound: sum |S cap C| <= (3+3g)|C_t|.
  rep.debit_bound = true;
  for (auto& faces : r.iteration_cycles) {
    size_t debit = 0;
    for (auto& c : faces)
      for (VertexId v : c.vertices) debit += r.S.count(v);
    if (Rat(static_cast<long>(debit)) >
        beta * Rat(static_cast<long>(faces.size()))) {
      rep.debit_bound = false;
      detail << "debit " << debit << " > beta*" << faces.size() << "; ";
    }
  }

  rep.residual_facial_free = g.residual(r.S).face_minimal_faces().empty();

  rep.minimality = true;
  for (VertexId v : r.S) {
    std::set<VertexId> without = r.S;
    without.erase(v);
    if (g.residual(without).face_minimal_faces().empty()) {
      rep.minimality = false;
      detail << "vertex " << v << " is redundant; ";
    }
  }

  Rat cost(0);
  bool finite = true;
  for (VertexId v : r.S) {
    if (g.cost(v).is_infinite())
      finite = false;
    else
      cost += g.cost(v).value();
  }
  rep.cost_bound = finite && cost <= beta * r.ledger.total();
  if (!rep.cost_bound) detail << "cost exceeds (3+3g) * dual total; ";

  rep.detail = detail.str();
  return rep;
}

}  // namespace dfvs
