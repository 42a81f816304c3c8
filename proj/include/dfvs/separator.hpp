#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dfvs/dfvs_lp.hpp"
#include "dfvs/embedded_digraph.hpp"

namespace dfvs {

class InternalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class TopologyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// --- 1/24 rounding -----------------------------------------------------

struct RoundHeavyResult {
  std::set<VertexId> F;
  LpSolution sol;       // LP on the residual after removing F
  Rat initial_lp{0};    // LP value before any rounding
  Rat cost_F{0};
  bool audit_ok = false;  // cost_F <= 24 * initial_lp
};

// Iterated rounding: remove every vertex with x_v >= threshold, re-solve on
// the residual, repeat until all values are below the threshold.
inline RoundHeavyResult round_heavy(const EmbeddedDigraph& g,
                                    const LpOptions& opt = {},
                                    const Rat& threshold = Rat(1, 24)) {
  RoundHeavyResult r;
  EmbeddedDigraph cur = g.residual({});
  std::vector<DiCycle> pool;
  if (cur.empty()) {
    auto [N, w] = scale_and_weigh({}, opt.epsilon);
    r.sol.N = N;
    r.audit_ok = true;
    return r;
  }
  r.sol = solve_lp(cur, opt, pool);
  r.initial_lp = r.sol.objective;
  for (;;) {
    std::set<VertexId> heavy;
    for (auto& [v, xv] : r.sol.x)
      if (xv >= threshold) heavy.insert(v);
    if (heavy.empty()) break;
    for (VertexId v : heavy) {
      r.F.insert(v);
      r.cost_F += cur.cost(v).value();
    }
    pool = r.sol.active_cycles;
    cur = cur.residual(heavy);
    if (cur.empty()) {
      r.sol = LpSolution{};
      auto [N, w] = scale_and_weigh({}, opt.epsilon);
      r.sol.N = N;
      break;
    }
    r.sol = solve_lp(cur, opt, pool);
  }
  r.audit_ok = r.cost_F <= Rat(24) * r.initial_lp;
  return r;
}

// --- tight cycle --------------------------------------------------------

// Binding pool constraint with fewest vertices, ties lexicographic;
// nullopt signals DONE (acyclic residual / no binding constraint).
inline std::optional<DiCycle> tight_cycle(const EmbeddedDigraph& g,
                                          const LpSolution& sol) {
  std::optional<DiCycle> best;
  for (auto& c : sol.active_cycles) {
    bool live = true;
    for (size_t i = 0; i < c.vertices.size() && live; ++i) {
      auto it = g.arcs().find(c.arcs[i]);
      live = it != g.arcs().end() && it->second.tail == c.vertices[i];
    }
    if (!live) continue;
    Rat val(0);
    for (VertexId v : c.vertices) {
      auto it = sol.x.find(v);
      if (it != sol.x.end()) val += it->second;
    }
    if (val != 1) continue;
    if (!best || c < *best) best = c;
  }
  return best;
}

// --- boundary subdivision -----------------------------------------------

struct Port {
  VertexId id;       // subdivision vertex
  size_t pos;        // index of the incident cycle vertex in the cycle
  ArcId original;    // arc of the pre-subdivision graph
};

struct BoundaryPorts {
  EmbeddedDigraph graph;  // g with every boundary-incident arc subdivided
  DiCycle cycle;
  std::vector<Port> U, W, B, D;  // out-left, in-right, in-left, out-right

  std::set<VertexId> cycle_vertices() const {
    return {cycle.vertices.begin(), cycle.vertices.end()};
  }
  std::set<VertexId> port_ids() const {
    std::set<VertexId> s;
    for (auto* f : {&U, &W, &B, &D})
      for (auto& p : *f) s.insert(p.id);
    return s;
  }
};

inline BoundaryPorts build_ports(const EmbeddedDigraph& g, const DiCycle& c1) {
  BoundaryPorts out;
  out.cycle = c1;
  auto sides = g.classify_sides(c1);
  std::set<VertexId> on_cycle(c1.vertices.begin(), c1.vertices.end());
  std::set<ArcId> cycle_arcs(c1.arcs.begin(), c1.arcs.end());
  std::map<VertexId, size_t> pos;
  for (size_t i = 0; i < c1.vertices.size(); ++i) pos[c1.vertices[i]] = i;

  EmbeddedDigraph::Builder b;
  for (auto& [v, c] : g.costs()) b.add_vertex(v, c);
  VertexId next_v = b.next_vertex_id();
  ArcId next_a = 0;
  for (auto& [a, arc] : g.arcs()) next_a = std::max(next_a, a + 1);

  // Dart substitution table for rotation rewriting.
  std::map<Dart, Dart> dart_map;

  for (auto& [a, arc] : g.arcs()) {
    bool sub_tail = !cycle_arcs.count(a) && on_cycle.count(arc.tail);
    bool sub_head = !cycle_arcs.count(a) && on_cycle.count(arc.head);
    if (!sub_tail && !sub_head) {
      b.add_arc(a, arc.tail, arc.head);
      continue;
    }
    std::vector<VertexId> chain{arc.tail};
    if (sub_tail) {
      VertexId p = next_v++;
      b.add_vertex(p, Cost::infinity());
      chain.push_back(p);
      Side s = sides.at(tail_dart(a));
      Port port{p, pos.at(arc.tail), a};
      (s == Side::LEFT ? out.U : out.D).push_back(port);
    }
    if (sub_head) {
      VertexId p = next_v++;
      b.add_vertex(p, Cost::infinity());
      chain.push_back(p);
      Side s = sides.at(head_dart(a));
      Port port{p, pos.at(arc.head), a};
      (s == Side::RIGHT ? out.W : out.B).push_back(port);
    }
    chain.push_back(arc.head);
    std::vector<ArcId> ids;
    for (size_t i = 0; i + 1 < chain.size(); ++i) {
      ArcId na = next_a++;
      b.add_arc(na, chain[i], chain[i + 1]);
      ids.push_back(na);
    }
    dart_map[tail_dart(a)] = tail_dart(ids.front());
    dart_map[head_dart(a)] = head_dart(ids.back());
    // Degree-2 rotations for the new vertices.
    for (size_t i = 1; i + 1 < chain.size(); ++i)
      b.set_rotation(chain[i], {head_dart(ids[i - 1]), tail_dart(ids[i])});
  }

  for (auto& [v, rot] : g.rotations()) {
    std::vector<Dart> nr;
    for (Dart d : rot) {
      auto it = dart_map.find(d);
      nr.push_back(it == dart_map.end() ? d : it->second);
    }
    b.set_rotation(v, std::move(nr));
  }
  out.graph = b.build();
  return out;
}

// --- port reach sets ----------------------------------------------------

struct ReachSets {
  std::set<size_t> tau_minus, tau_plus, kappa_minus, kappa_plus;
};

// tau: U -> W reachability below epsN in G^F minus the cycle's vertices
// (ports retained); kappa: the D -> B analogue.
inline ReachSets port_reach_sets(const BoundaryPorts& ports,
                                 const std::map<VertexId, Int>& w,
                                 const Int& epsN) {
  ReachSets rs;
  WeightedDistanceOracle o(ports.graph, w);
  auto no_cycle = ports.cycle_vertices();
  auto sweep = [&](const std::vector<Port>& from, const std::vector<Port>& to,
                   std::set<size_t>& minus, std::set<size_t>& plus) {
    for (auto& f : from) {
      auto d = o.dist_from({f.id}, no_cycle);
      for (auto& t : to) {
        auto it = d.find(t.id);
        if (it != d.end() && it->second < epsN) {
          minus.insert(t.pos);
          plus.insert(f.pos);
        }
      }
    }
  };
  sweep(ports.U, ports.W, rs.tau_minus, rs.tau_plus);
  sweep(ports.D, ports.B, rs.kappa_minus, rs.kappa_plus);
  return rs;
}

// --- plan ---------------------------------------------------------------

struct LayerAudit {
  std::string family;   // "S", "T", "Y" (suffix _k for the kappa mirror),
                        // "R", "K+"
  long chosen_index = -1;
  Rat chosen_cost{0};
  Rat family_total{0};  // sum of all layer costs in the family
  Rat family_bound{0};  // N * OPT_LP (layer disjointness accounting)
  Rat chosen_bound{0};  // OPT_LP / epsilon
  bool ok = false;
};

struct SeparatorPlan {
  enum class Branch { FAR, CLOSE };
  Branch branch = Branch::FAR;
  std::set<VertexId> removed;
  std::vector<LayerAudit> layer_audit;
  ReachSets reach;
  // CLOSE-branch witnesses (vertex sequences; paths end on the cycle).
  std::string close_side;  // "tau" or "kappa"
  std::vector<VertexId> p1, p2, p3;
  std::vector<VertexId> seg1, seg2;  // C1 segments (v_a..v_i), (v_j..v_b)
};

namespace sep_detail {

// Lexicographically smallest minimum-weight path: Dijkstra over the
// composite label (weight, vertex sequence).
inline std::optional<std::vector<VertexId>> lex_shortest_path(
    const EmbeddedDigraph& g, const WeightedDistanceOracle& o,
    const std::set<VertexId>& sources, const std::set<VertexId>& targets,
    const std::set<VertexId>& forbidden, const Int& max_weight) {
  struct Lab {
    Int d;
    std::vector<VertexId> path;
    bool operator<(const Lab& other) const {
      if (d != other.d) return d < other.d;
      if (path.size() != other.path.size())
        return path.size() < other.path.size();
      return path < other.path;
    }
  };
  std::map<VertexId, Lab> settled;
  std::set<std::pair<Lab, VertexId>> pq;
  for (VertexId s : sources) {
    if (!g.has_vertex(s) || forbidden.count(s)) continue;
    pq.insert({Lab{Int(0), {s}}, s});
  }
  std::optional<Lab> best;
  while (!pq.empty()) {
    auto [lab, v] = *pq.begin();
    pq.erase(pq.begin());
    if (settled.count(v)) continue;
    settled.emplace(v, lab);
    if (targets.count(v)) {
      if (lab.d <= max_weight && (!best || lab < *best)) best = lab;
      continue;  // any extension through a target is not a simple witness
    }
    for (auto [a, u] : g.out_arcs(v)) {
      if (forbidden.count(u) || settled.count(u)) continue;
      Lab nl{lab.d + o.weight(v), lab.path};
      nl.path.push_back(u);
      pq.insert({std::move(nl), u});
    }
  }
  if (!best) return std::nullopt;
  return best->path;
}

struct LayerFamily {
  long chosen = -1;
  Rat chosen_cost{0};
  Rat total{0};
  std::set<VertexId> members;
};

// Choose the cheapest layer i in [lo, hi] where vertex v with distance d
// belongs to layers [d + a_off, d + b_off] for offsets determined by the
// family shape; here membership is passed in directly as an interval.
inline LayerFamily cheapest_layer(
    const EmbeddedDigraph& g, const std::map<VertexId, Int>& dist,
    const std::map<VertexId, Int>& w, long lo, long hi, bool from_side) {
  // from_side: layers [d, d + w - 1]; to-side: layers [d - w + 1, d].
  std::vector<Rat> cost(static_cast<size_t>(hi + 1), Rat(0));
  LayerFamily fam;
  for (auto& [v, d] : dist) {
    auto wi = w.find(v);
    if (wi == w.end() || wi->second == 0) continue;
    if (g.cost(v).is_infinite()) continue;
    if (!d.fits_slong_p() || !wi->second.fits_slong_p())
      throw ResourceError("layer index overflow");
    long dv = d.get_si(), wv = wi->second.get_si();
    long a = from_side ? dv : dv - wv + 1;
    long b = from_side ? dv + wv - 1 : dv;
    for (long i = std::max(a, lo); i <= std::min(b, hi); ++i)
      cost[static_cast<size_t>(i)] += g.cost(v).value();
  }
  for (long i = lo; i <= hi; ++i) {
    fam.total += cost[static_cast<size_t>(i)];
    if (fam.chosen < 0 || cost[static_cast<size_t>(i)] < fam.chosen_cost) {
      fam.chosen = i;
      fam.chosen_cost = cost[static_cast<size_t>(i)];
    }
  }
  if (fam.chosen >= 0) {
    for (auto& [v, d] : dist) {
      auto wi = w.find(v);
      if (wi == w.end() || wi->second == 0) continue;
      if (g.cost(v).is_infinite()) continue;
      long dv = d.get_si(), wv = wi->second.get_si();
      long a = from_side ? dv : dv - wv + 1;
      long b = from_side ? dv + wv - 1 : dv;
      if (a <= fam.chosen && fam.chosen <= b) fam.members.insert(v);
    }
  }
  return fam;
}

inline std::set<VertexId> port_set(const std::vector<Port>& ports,
                                   const std::set<size_t>& exclude_pos) {
  std::set<VertexId> s;
  for (auto& p : ports)
    if (!exclude_pos.count(p.pos)) s.insert(p.id);
  return s;
}

// Cycle segment v_from .. v_to, inclusive, walking forward.
inline std::vector<VertexId> cycle_segment(const DiCycle& c, size_t from,
                                           size_t to) {
  std::vector<VertexId> seg;
  size_t l = c.vertices.size();
  for (size_t i = from;; i = (i + 1) % l) {
    seg.push_back(c.vertices[i]);
    if (i == to) break;
  }
  return seg;
}

}  // namespace sep_detail

inline SeparatorPlan plan(const BoundaryPorts& ports, const LpSolution& sol,
                          const Rat& epsilon) {
  const EmbeddedDigraph& g = ports.graph;
  WeightedDistanceOracle o(g, sol.w);
  Rat epsN_rat = epsilon * Rat(sol.N);
  if (epsN_rat.get_den() != 1)
    throw InternalError("epsilon * N is not integral");
  Int epsN = epsN_rat.get_num();
  if (!epsN.fits_slong_p() || epsN.get_si() > 1000000)
    throw ResourceError("epsilon * N too large for layer scan");
  long he = epsN.get_si();  // layer index horizon

  SeparatorPlan p;
  p.reach = port_reach_sets(ports, sol.w, epsN);
  auto no_cycle = ports.cycle_vertices();
  auto vpos = [&](const std::set<size_t>& idx) {
    std::set<VertexId> s;
    for (size_t i : idx) s.insert(ports.cycle.vertices[i]);
    return s;
  };

  // Branch tests in the full residual graph (the weaker reading: +inf when
  // either index set is empty).
  auto side_distance = [&](const std::set<size_t>& minus,
                           const std::set<size_t>& plus) -> std::optional<Int> {
    if (minus.empty() || plus.empty()) return std::nullopt;
    return o.distance(vpos(minus), vpos(plus));
  };
  auto tau_d = side_distance(p.reach.tau_minus, p.reach.tau_plus);
  auto kappa_d = side_distance(p.reach.kappa_minus, p.reach.kappa_plus);
  bool tau_far = !tau_d || *tau_d > epsN;
  bool kappa_far = !kappa_d || *kappa_d > epsN;

  Rat opt = sol.objective;
  auto audit = [&](const std::string& name, sep_detail::LayerFamily& fam,
                   long lo) {
    LayerAudit a;
    a.family = name;
    a.chosen_index = fam.chosen;
    a.chosen_cost = fam.chosen_cost;
    a.family_total = fam.total;
    a.family_bound = Rat(sol.N) * opt;
    a.chosen_bound = epsilon == 0 ? Rat(0) : opt / epsilon;
    a.ok = fam.total <= a.family_bound &&
           (fam.chosen < 0 || fam.chosen_cost <= a.chosen_bound);
    (void)lo;
    p.layer_audit.push_back(a);
    for (VertexId v : fam.members) p.removed.insert(v);
  };

  if (tau_far && kappa_far) {
    p.branch = SeparatorPlan::Branch::FAR;
    auto far_side = [&](const std::vector<Port>& from_ports,
                        const std::vector<Port>& to_ports,
                        const std::set<size_t>& minus,
                        const std::set<size_t>& plus,
                        const std::string& suffix) {
      // S layers: distance from (out-ports minus plus-indexed) in G^F \ C1.
      auto srcs = sep_detail::port_set(from_ports, plus);
      auto s_dist = o.dist_from(srcs, no_cycle);
      auto s_fam =
          sep_detail::cheapest_layer(g, s_dist, sol.w, 0, he, true);
      audit("S" + suffix, s_fam, 0);
      // T layers: distance to (in-ports minus minus-indexed) in G^F \ C1.
      auto tgts = sep_detail::port_set(to_ports, minus);
      auto t_dist = o.dist_to(tgts, no_cycle);
      auto t_fam =
          sep_detail::cheapest_layer(g, t_dist, sol.w, 0, he, false);
      audit("T" + suffix, t_fam, 0);
      // Y layers: distance from V_minus in the full graph.
      auto y_dist = o.dist_from(vpos(minus));
      auto y_fam =
          sep_detail::cheapest_layer(g, y_dist, sol.w, 0, he, true);
      audit("Y" + suffix, y_fam, 0);
    };
    far_side(ports.U, ports.W, p.reach.tau_minus, p.reach.tau_plus, "");
    far_side(ports.D, ports.B, p.reach.kappa_minus, p.reach.kappa_plus, "_k");

    // Post-assertion: no residual SCC has a U->W or D->B path avoiding C1.
    EmbeddedDigraph res = g.residual(p.removed);
    for (auto& comp : res.scc()) {
      std::set<VertexId> keep(comp.begin(), comp.end());
      for (VertexId v : no_cycle) keep.erase(v);
      EmbeddedDigraph sub = res.induced(keep);
      auto path_free = [&](const std::vector<Port>& from,
                           const std::vector<Port>& to) {
        std::set<VertexId> srcs, tgts;
        for (auto& q : from)
          if (keep.count(q.id)) srcs.insert(q.id);
        for (auto& q : to)
          if (keep.count(q.id)) tgts.insert(q.id);
        if (srcs.empty() || tgts.empty()) return true;
        WeightedDistanceOracle so(sub, {});
        return !so.distance(srcs, tgts).has_value();
      };
      if (!path_free(ports.U, ports.W) || !path_free(ports.D, ports.B))
        throw TopologyError("FAR residual SCC retains a boundary path");
    }
    return p;
  }

  // CLOSE branch on whichever side is near.
  p.branch = SeparatorPlan::Branch::CLOSE;
  bool use_tau = !tau_far;
  p.close_side = use_tau ? "tau" : "kappa";
  const auto& minus = use_tau ? p.reach.tau_minus : p.reach.kappa_minus;
  const auto& plus = use_tau ? p.reach.tau_plus : p.reach.kappa_plus;
  const auto& outs = use_tau ? ports.U : ports.D;
  const auto& ins = use_tau ? ports.W : ports.B;
  const DiCycle& c1 = ports.cycle;
  size_t l = c1.vertices.size();

  // Pick (i, j) minimizing d(v_i, v_j), ties lexicographic.
  std::optional<Int> best_d;
  size_t ci = 0, cj = 0;
  for (size_t i : minus) {
    auto d = o.dist_from({c1.vertices[i]});
    for (size_t j : plus) {
      auto it = d.find(c1.vertices[j]);
      if (it == d.end() || it->second > epsN) continue;
      if (!best_d || it->second < *best_d ||
          (it->second == *best_d && std::make_pair(i, j) < std::make_pair(ci, cj))) {
        best_d = it->second;
        ci = i;
        cj = j;
      }
    }
  }
  if (!best_d) throw InternalError("CLOSE branch without a near (i,j) pair");

  // Witness paths. P1: some out-port -> in-port at position ci, then v_ci.
  // P2: out-port at position cj -> some in-port, then that cycle vertex.
  // P3: v_ci -> v_cj in the full graph.
  auto in_at = [&](std::optional<size_t> only_pos) {
    std::set<VertexId> s;
    for (auto& q : ins)
      if (!only_pos || q.pos == *only_pos) s.insert(q.id);
    return s;
  };
  auto out_at = [&](std::optional<size_t> only_pos) {
    std::set<VertexId> s;
    for (auto& q : outs)
      if (!only_pos || q.pos == *only_pos) s.insert(q.id);
    return s;
  };
  Int strict = epsN - 1;  // port-to-port distances are < epsN
  auto p1 = sep_detail::lex_shortest_path(g, o, out_at(std::nullopt),
                                          in_at(ci), no_cycle, strict);
  auto p2 = sep_detail::lex_shortest_path(g, o, out_at(cj),
                                          in_at(std::nullopt), no_cycle, strict);
  if (!p1 || !p2)
    throw InternalError("CLOSE witness path extraction failed");
  auto p3 = sep_detail::lex_shortest_path(g, o, {c1.vertices[ci]},
                                          {c1.vertices[cj]}, {}, epsN);
  if (!p3) throw InternalError("CLOSE witness path P3 extraction failed");

  auto port_pos = [&](const std::vector<Port>& fam, VertexId id) {
    for (auto& q : fam)
      if (q.id == id) return q.pos;
    throw InternalError("unknown port id");
  };
  size_t a = port_pos(outs, p1->front());
  size_t bpos = port_pos(ins, p2->back());
  p.p1 = *p1;
  p.p1.push_back(c1.vertices[ci]);
  p.p2 = *p2;
  p.p2.push_back(c1.vertices[bpos]);
  p.p3 = *p3;
  p.seg1 = sep_detail::cycle_segment(c1, a % l, ci);
  p.seg2 = sep_detail::cycle_segment(c1, cj, bpos);

  // R layers: distance from P2 union C1(v_{j+1} .. v_b) in the full graph.
  std::set<VertexId> r_src(p.p2.begin(), p.p2.end());
  for (VertexId v : sep_detail::cycle_segment(c1, (cj + 1) % l, bpos))
    r_src.insert(v);
  auto r_dist = o.dist_from(r_src);
  auto r_fam = sep_detail::cheapest_layer(g, r_dist, sol.w, 0, he, true);
  audit("R", r_fam, 0);
  // K+ layers: distance from v_j, indices 1..epsN.
  auto k_dist = o.dist_from({c1.vertices[cj]});
  auto k_fam =
      sep_detail::cheapest_layer(g, k_dist, sol.w, std::min(1L, he), he, true);
  audit("K+", k_fam, 0);

  // Post-assertion: each residual SCC avoids P1 u seg1 or P2 u seg2.
  std::set<VertexId> side1(p.p1.begin(), p.p1.end());
  side1.insert(p.seg1.begin(), p.seg1.end());
  std::set<VertexId> side2(p.p2.begin(), p.p2.end());
  side2.insert(p.seg2.begin(), p.seg2.end());
  EmbeddedDigraph res = g.residual(p.removed);
  for (auto& comp : res.scc()) {
    bool hit1 = false, hit2 = false;
    for (VertexId v : comp) {
      hit1 = hit1 || side1.count(v);
      hit2 = hit2 || side2.count(v);
    }
    if (hit1 && hit2)
      throw TopologyError("CLOSE residual SCC meets both decomposition sides");
  }
  return p;
}

}  // namespace dfvs
