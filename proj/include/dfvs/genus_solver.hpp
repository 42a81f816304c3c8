#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "dfvs/dfvs_lp.hpp"
#include "dfvs/emd_io.hpp"
#include "dfvs/embedded_digraph.hpp"
#include "dfvs/facial_hitter.hpp"
#include "dfvs/oracle.hpp"
#include "dfvs/separator.hpp"

namespace dfvs {

// Progress failure with no oracle available: carries a reproducer.
class AbortError : public std::runtime_error {
 public:
  AbortError(const std::string& msg, std::string emd)
      : std::runtime_error(msg), diagnostic(std::move(emd)) {}
  std::string diagnostic;  // .emd dump of the stuck subgraph
};

struct SolveOptions {
  LpOptions lp;        // epsilon lives here
  int oracle_cap = 18;
};

struct SolveCertificate {
  struct Node {
    int genus = 0;
    size_t num_vertices = 0;
    std::string branch;  // "done", "split", "pipeline", "oracle"
    std::map<std::string, Rat> local_cost;
    std::vector<Node> children;
  };

  std::set<VertexId> solution;
  Rat cost{0};
  Rat lp_bound{0};  // root LP value
  std::map<std::string, Rat> phase_attribution;
  Node recursion_tree;
  bool valid = false;
  bool approximate = false;
  bool used_oracle_fallback = false;
  std::vector<LayerAudit> audits;
  std::vector<HitterReport> hitter_reports;
};

inline bool check_solution(const EmbeddedDigraph& g,
                           const std::set<VertexId>& s) {
  return g.residual(s).empty();
}

namespace solver_detail {

struct Ctx {
  const SolveOptions* opt;
  SolveCertificate* cert;
};

inline Rat set_cost(const EmbeddedDigraph& g, const std::set<VertexId>& s) {
  Rat c(0);
  for (VertexId v : s) c += g.cost(v).value();
  return c;
}

inline Rat node_total(const SolveCertificate::Node& n) {
  Rat t(0);
  for (auto& [k, c] : n.local_cost) t += c;
  for (auto& ch : n.children) t += node_total(ch);
  return t;
}

inline SolveCertificate::Node solve_node(Ctx& ctx, const EmbeddedDigraph& g);

// Oracle fallback or abort for a stuck subgraph.
inline SolveCertificate::Node fallback(Ctx& ctx, const EmbeddedDigraph& g,
                                       const std::string& reason) {
  SolveCertificate::Node node;
  node.genus = g.genus();
  node.num_vertices = g.num_vertices();
  node.branch = "oracle";
  if (static_cast<int>(g.num_vertices()) > ctx.opt->oracle_cap)
    throw AbortError("progress failure beyond oracle cap: " + reason,
                     to_emd_string(g));
  auto r = exact_dfvs(g, ctx.opt->oracle_cap);
  for (VertexId v : r.solution) ctx.cert->solution.insert(v);
  node.local_cost["oracle"] = r.optimum.value();
  ctx.cert->used_oracle_fallback = true;
  return node;
}

inline SolveCertificate::Node solve_node(Ctx& ctx, const EmbeddedDigraph& g) {
  EmbeddedDigraph cur = g.residual({});
  SolveCertificate::Node node;
  node.genus = cur.genus();
  node.num_vertices = cur.num_vertices();
  if (cur.empty()) {
    node.branch = "done";
    return node;
  }

  auto recurse_sccs = [&](const EmbeddedDigraph& res) {
    for (auto& comp : res.scc()) {
      std::set<VertexId> keep(comp.begin(), comp.end());
      EmbeddedDigraph sub = res.induced(keep);
      auto child = solve_node(ctx, sub);
      // Lexicographic progress: genus can only drop under deletion, so
      // equal genus demands strictly fewer vertices.
      if (child.num_vertices > 0 && child.genus == node.genus &&
          child.num_vertices >= node.num_vertices) {
        child = fallback(ctx, sub.residual({}), "child measure did not drop");
      }
      node.children.push_back(std::move(child));
    }
  };

  // Stripping alone may disconnect; solve components independently so that
  // disjoint unions decompose exactly.
  auto sccs = cur.scc();
  if (sccs.size() > 1) {
    node.branch = "split";
    recurse_sccs(cur);
    return node;
  }

  node.branch = "pipeline";

  // Phase 1: facial hitting.
  auto hit = run_facial_hitter(cur);
  ctx.cert->hitter_reports.push_back(verify_certificate(cur, hit));
  for (VertexId v : hit.S) ctx.cert->solution.insert(v);
  node.local_cost["facial"] = hit.cost;
  EmbeddedDigraph res = cur.residual(hit.S);
  if (res.empty()) return node;
  if (node.genus == 0)
    return fallback(ctx, res,
                    "planar residual retains dicycles after facial hitting");

  // Phase 2: heavy rounding on the facial-free residual.
  RoundHeavyResult rh;
  try {
    rh = round_heavy(res, ctx.opt->lp);
  } catch (const ResourceError&) {
    return fallback(ctx, res, "LP iteration cap");
  }
  for (VertexId v : rh.F) ctx.cert->solution.insert(v);
  node.local_cost["heavy"] = rh.cost_F;
  if (rh.sol.approximate) ctx.cert->approximate = true;
  EmbeddedDigraph res2 = res.residual(rh.F);
  if (res2.empty()) return node;

  // Phase 3: one separator round, then split and recurse.
  auto t = tight_cycle(res2, rh.sol);
  if (!t) return fallback(ctx, res2, "no binding cycle on a cyclic residual");
  std::set<VertexId> removed;
  try {
    auto ports = build_ports(res2, *t);
    auto p = plan(ports, rh.sol, ctx.opt->lp.epsilon);
    removed = p.removed;
    for (auto& a : p.layer_audit) ctx.cert->audits.push_back(a);
  } catch (const TopologyError& e) {
    return fallback(ctx, res2, e.what());
  } catch (const InternalError& e) {
    return fallback(ctx, res2, e.what());
  }
  for (VertexId v : removed) ctx.cert->solution.insert(v);
  node.local_cost["separator"] = set_cost(res2, removed);
  EmbeddedDigraph res3 = res2.residual(removed);

  if (removed.empty() && res3.num_vertices() == node.num_vertices)
    return fallback(ctx, res2, "separator removed nothing");
  recurse_sccs(res3);
  return node;
}

}  // namespace solver_detail

inline SolveCertificate solve(const EmbeddedDigraph& g,
                              const SolveOptions& opt = {}) {
  SolveCertificate cert;
  solver_detail::Ctx ctx{&opt, &cert};

  // Root LP bound on the stripped graph (additive over components).
  EmbeddedDigraph stripped = g.residual({});
  if (!stripped.empty()) {
    try {
      auto root_sol = solve_lp(stripped, opt.lp);
      cert.lp_bound = root_sol.objective;
      if (root_sol.approximate) cert.approximate = true;
    } catch (const ResourceError&) {
      cert.lp_bound = 0;  // bound unavailable; certificate stays valid
    }
  }

  cert.recursion_tree = solver_detail::solve_node(ctx, g);
  cert.cost = solver_detail::set_cost(g, cert.solution);
  cert.valid = check_solution(g, cert.solution);

  // Top-level attribution: the root node's own phases plus everything done
  // in recursion children.
  for (auto& [k, c] : cert.recursion_tree.local_cost)
    cert.phase_attribution[k] += c;
  Rat recursive(0);
  for (auto& ch : cert.recursion_tree.children)
    recursive += solver_detail::node_total(ch);
  if (recursive != 0 || !cert.recursion_tree.children.empty())
    cert.phase_attribution["recursive"] = recursive;
  return cert;
}

}  // namespace dfvs
