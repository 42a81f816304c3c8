#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "dfvs/rational.hpp"

namespace dfvs {

using VertexId = int;
using ArcId = int;

// A dart is one of the two sides of an arc record: the tail dart lives in
// the rotation of the tail vertex, the head dart in the rotation of the head.
using Dart = int;

inline Dart tail_dart(ArcId a) { return 2 * a; }
inline Dart head_dart(ArcId a) { return 2 * a + 1; }
inline ArcId dart_arc(Dart d) { return d >> 1; }
inline bool is_tail_dart(Dart d) { return (d & 1) == 0; }
inline Dart reversal(Dart d) { return d ^ 1; }

struct Arc {
  VertexId tail;
  VertexId head;
};

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Face of the embedding: cyclic dart sequence obtained by tracing
// next = rotation-successor of the reversal of the current dart.
struct FaceWalk {
  std::vector<Dart> darts;  // empty for an isolated vertex's face
  VertexId anchor = -1;     // the isolated vertex when darts is empty
};

// Simple directed cycle: vertices in arc direction, arcs[i] joins
// vertices[i] -> vertices[(i+1) % size].
struct DiCycle {
  std::vector<VertexId> vertices;
  std::vector<ArcId> arcs;

  // Rotates so the smallest vertex comes first; used for dedup and
  // deterministic ordering.
  void canonicalize() {
    if (vertices.empty()) return;
    auto it = std::min_element(vertices.begin(), vertices.end());
    auto k = static_cast<size_t>(it - vertices.begin());
    std::rotate(vertices.begin(), vertices.begin() + k, vertices.end());
    std::rotate(arcs.begin(), arcs.begin() + k, arcs.end());
  }

  friend bool operator==(const DiCycle& a, const DiCycle& b) {
    return a.vertices == b.vertices;
  }
  friend bool operator<(const DiCycle& a, const DiCycle& b) {
    if (a.vertices.size() != b.vertices.size())
      return a.vertices.size() < b.vertices.size();
    return a.vertices < b.vertices;
  }
};

enum class Side { LEFT, RIGHT };

class EmbeddedDigraph {
 public:
  class Builder;

  const std::map<VertexId, Cost>& costs() const { return costs_; }
  const std::map<ArcId, Arc>& arcs() const { return arcs_; }
  const std::map<VertexId, std::vector<Dart>>& rotations() const {
    return rotation_;
  }

  bool has_vertex(VertexId v) const { return costs_.count(v) != 0; }
  const Cost& cost(VertexId v) const { return costs_.at(v); }
  const Arc& arc(ArcId a) const { return arcs_.at(a); }
  size_t num_vertices() const { return costs_.size(); }
  size_t num_arcs() const { return arcs_.size(); }
  bool empty() const { return costs_.empty(); }

  std::vector<VertexId> vertex_ids() const {
    std::vector<VertexId> out;
    out.reserve(costs_.size());
    for (auto& [v, c] : costs_) out.push_back(v);
    return out;
  }

  VertexId dart_vertex(Dart d) const {
    const Arc& a = arcs_.at(dart_arc(d));
    return is_tail_dart(d) ? a.tail : a.head;
  }

  // Successor of d in the rotation of its vertex.
  Dart rotation_successor(Dart d) const {
    auto [v, idx] = dart_pos_.at(d);
    const auto& rot = rotation_.at(v);
    return rot[(idx + 1) % rot.size()];
  }

  const std::vector<std::pair<ArcId, VertexId>>& out_arcs(VertexId v) const {
    return out_adj_.at(v);
  }
  const std::vector<std::pair<ArcId, VertexId>>& in_arcs(VertexId v) const {
    return in_adj_.at(v);
  }

  Builder to_builder() const;

  // ---- face tracing -------------------------------------------------------

  std::vector<FaceWalk> trace_faces() const {
    std::vector<FaceWalk> faces;
    std::set<Dart> seen;
    for (auto& [a, arc] : arcs_) {
      for (Dart d0 : {tail_dart(a), head_dart(a)}) {
        if (seen.count(d0)) continue;
        FaceWalk f;
        Dart d = d0;
        do {
          seen.insert(d);
          f.darts.push_back(d);
          d = rotation_successor(reversal(d));
        } while (d != d0);
        faces.push_back(std::move(f));
      }
    }
    for (auto& [v, rot] : rotation_) {
      if (rot.empty()) {
        FaceWalk f;
        f.anchor = v;
        faces.push_back(std::move(f));
      }
    }
    return faces;
  }

  // Genus from Euler's formula, applied per connected component of the
  // underlying undirected graph and summed.
  int genus() const {
    if (costs_.empty()) return 0;
    // Union-find over vertices.
    std::map<VertexId, VertexId> parent;
    for (auto& [v, c] : costs_) parent[v] = v;
    std::function<VertexId(VertexId)> find = [&](VertexId v) {
      while (parent[v] != v) v = parent[v] = parent[parent[v]];
      return v;
    };
    for (auto& [a, arc] : arcs_) parent[find(arc.tail)] = find(arc.head);

    std::map<VertexId, long> nv, na, nf;
    for (auto& [v, c] : costs_) nv[find(v)]++;
    for (auto& [a, arc] : arcs_) na[find(arc.tail)]++;
    for (const FaceWalk& f : trace_faces()) {
      VertexId rep =
          f.darts.empty() ? find(f.anchor) : find(dart_vertex(f.darts[0]));
      nf[rep]++;
    }
    long total = 0;
    for (auto& [rep, V] : nv) {
      long defect = 2 - V + na[rep] - nf[rep];
      if (defect % 2 != 0 || defect < 0)
        throw std::logic_error("odd or negative Euler defect; map corrupt");
      total += defect / 2;
    }
    return static_cast<int>(total);
  }

  // ---- strongly connected components --------------------------------------

  // Tarjan; classes are returned sorted by smallest member, members sorted.
  std::vector<std::vector<VertexId>> scc() const {
    std::vector<std::vector<VertexId>> out;
    std::map<VertexId, int> index, low;
    std::map<VertexId, bool> on_stack;
    std::vector<VertexId> stack;
    int counter = 0;

    struct Frame {
      VertexId v;
      size_t next;
    };
    for (auto& [root, c] : costs_) {
      if (index.count(root)) continue;
      std::vector<Frame> call{{root, 0}};
      index[root] = low[root] = counter++;
      stack.push_back(root);
      on_stack[root] = true;
      while (!call.empty()) {
        Frame& fr = call.back();
        const auto& adj = out_adj_.at(fr.v);
        if (fr.next < adj.size()) {
          VertexId w = adj[fr.next++].second;
          if (!index.count(w)) {
            index[w] = low[w] = counter++;
            stack.push_back(w);
            on_stack[w] = true;
            call.push_back({w, 0});
          } else if (on_stack[w]) {
            low[fr.v] = std::min(low[fr.v], index[w]);
          }
        } else {
          if (low[fr.v] == index[fr.v]) {
            std::vector<VertexId> comp;
            VertexId w;
            do {
              w = stack.back();
              stack.pop_back();
              on_stack[w] = false;
              comp.push_back(w);
            } while (w != fr.v);
            std::sort(comp.begin(), comp.end());
            out.push_back(std::move(comp));
          }
          VertexId child = fr.v;
          call.pop_back();
          if (!call.empty())
            low[call.back().v] = std::min(low[call.back().v], low[child]);
        }
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  // Sub-map induced by `keep`; rotation orders are inherited by restriction.
  EmbeddedDigraph induced(const std::set<VertexId>& keep) const {
    EmbeddedDigraph g;
    for (auto& [v, c] : costs_)
      if (keep.count(v)) g.costs_.emplace(v, c);
    for (auto& [a, arc] : arcs_)
      if (keep.count(arc.tail) && keep.count(arc.head)) g.arcs_.emplace(a, arc);
    for (auto& [v, rot] : rotation_) {
      if (!keep.count(v)) continue;
      std::vector<Dart> r;
      for (Dart d : rot)
        if (g.arcs_.count(dart_arc(d))) r.push_back(d);
      g.rotation_.emplace(v, std::move(r));
    }
    g.index();
    return g;
  }

  // Residual graph: sub-map induced by vertices lying on some dicycle of
  // g minus `removed` (SCC contains an internal arc, or a self-loop).
  EmbeddedDigraph residual(const std::set<VertexId>& removed) const {
    std::set<VertexId> alive;
    for (auto& [v, c] : costs_)
      if (!removed.count(v)) alive.insert(v);
    EmbeddedDigraph sub = induced(alive);

    std::map<VertexId, int> comp_of;
    auto comps = sub.scc();
    for (size_t i = 0; i < comps.size(); ++i)
      for (VertexId v : comps[i]) comp_of[v] = static_cast<int>(i);
    std::set<int> cyclic;
    for (auto& [a, arc] : sub.arcs_)
      if (comp_of[arc.tail] == comp_of[arc.head]) cyclic.insert(comp_of[arc.tail]);
    std::set<VertexId> keep;
    for (auto& [v, i] : comp_of)
      if (cyclic.count(i)) keep.insert(v);
    return sub.induced(keep);
  }

  // ---- face-minimal dicycles ----------------------------------------------

  // A face whose boundary is a simple directed cycle consists of darts all
  // of one kind: all tail darts (walk follows arc direction) or all head
  // darts (walk is the reverse traversal of a directed cycle).
  static std::optional<DiCycle> directed_face(const EmbeddedDigraph& g,
                                              const FaceWalk& f) {
    if (f.darts.empty()) return std::nullopt;
    bool all_tail = true, all_head = true;
    for (Dart d : f.darts) (is_tail_dart(d) ? all_head : all_tail) = false;
    if (!all_tail && !all_head) return std::nullopt;
    DiCycle c;
    if (all_tail) {
      for (Dart d : f.darts) {
        c.arcs.push_back(dart_arc(d));
        c.vertices.push_back(g.arc(dart_arc(d)).tail);
      }
    } else {
      // Head-dart walk visits the cycle against arc direction; reverse it.
      for (auto it = f.darts.rbegin(); it != f.darts.rend(); ++it) {
        c.arcs.push_back(dart_arc(*it));
        c.vertices.push_back(g.arc(dart_arc(*it)).tail);
      }
    }
    std::set<VertexId> uniq(c.vertices.begin(), c.vertices.end());
    if (uniq.size() != c.vertices.size()) return std::nullopt;
    c.canonicalize();
    return c;
  }

  // All faces bounded by a simple directed cycle, one entry per face
  // (a sphere-embedded cycle appears twice here).
  std::vector<DiCycle> face_minimal_faces() const {
    std::vector<DiCycle> out;
    for (const FaceWalk& f : trace_faces())
      if (auto c = directed_face(*this, f)) out.push_back(std::move(*c));
    std::sort(out.begin(), out.end());
    return out;
  }

  // Deduplicated face-minimal dicycles.
  std::vector<DiCycle> face_minimal_dicycles() const {
    auto out = face_minimal_faces();
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  // ---- left/right classification around a dicycle --------------------------

  // At each cycle vertex, walking the rotation from the incoming cycle
  // dart's reversal, the darts met before the outgoing cycle dart are LEFT,
  // the rest RIGHT. Classifies every non-cycle dart at cycle vertices.
  std::map<Dart, Side> classify_sides(const DiCycle& c) const {
    size_t n = c.vertices.size();
    if (n == 0 || c.arcs.size() != n)
      throw std::invalid_argument("classify_sides: malformed cycle");
    for (size_t i = 0; i < n; ++i) {
      auto it = arcs_.find(c.arcs[i]);
      if (it == arcs_.end() || it->second.tail != c.vertices[i] ||
          it->second.head != c.vertices[(i + 1) % n])
        throw std::invalid_argument("classify_sides: not a cycle of this map");
    }
    std::set<ArcId> cycle_arcs(c.arcs.begin(), c.arcs.end());
    std::map<Dart, Side> side;
    for (size_t i = 0; i < n; ++i) {
      VertexId v = c.vertices[i];
      ArcId in_arc = c.arcs[(i + n - 1) % n];
      ArcId out_arc = c.arcs[i];
      const auto& rot = rotation_.at(v);
      size_t start = dart_pos_.at(head_dart(in_arc)).second;
      bool left = true;
      for (size_t k = 1; k < rot.size(); ++k) {
        Dart d = rot[(start + k) % rot.size()];
        if (d == tail_dart(out_arc)) {
          left = false;
          continue;
        }
        if (cycle_arcs.count(dart_arc(d)) &&
            (d == head_dart(in_arc) || d == tail_dart(out_arc)))
          continue;
        side[d] = left ? Side::LEFT : Side::RIGHT;
      }
    }
    return side;
  }

  // Reverses every rotation; swaps the surface orientation.
  EmbeddedDigraph reversed_orientation() const {
    EmbeddedDigraph g = *this;
    for (auto& [v, rot] : g.rotation_) std::reverse(rot.begin(), rot.end());
    g.index();
    return g;
  }

 private:
  friend class Builder;

  void index() {
    dart_pos_.clear();
    out_adj_.clear();
    in_adj_.clear();
    for (auto& [v, c] : costs_) {
      out_adj_[v];
      in_adj_[v];
    }
    for (auto& [v, rot] : rotation_)
      for (size_t i = 0; i < rot.size(); ++i)
        dart_pos_[rot[i]] = {v, static_cast<int>(i)};
    for (auto& [a, arc] : arcs_) {
      out_adj_[arc.tail].push_back({a, arc.head});
      in_adj_[arc.head].push_back({a, arc.tail});
    }
  }

  std::map<VertexId, Cost> costs_;
  std::map<ArcId, Arc> arcs_;
  std::map<VertexId, std::vector<Dart>> rotation_;
  std::unordered_map<Dart, std::pair<VertexId, int>> dart_pos_;
  std::map<VertexId, std::vector<std::pair<ArcId, VertexId>>> out_adj_;
  std::map<VertexId, std::vector<std::pair<ArcId, VertexId>>> in_adj_;
};

class EmbeddedDigraph::Builder {
 public:
  Builder& add_vertex(VertexId v, Cost c = Cost(1)) {
    if (costs_.count(v)) throw ValidationError("duplicate vertex id");
    costs_.emplace(v, std::move(c));
    return *this;
  }

  ArcId add_arc(VertexId tail, VertexId head) {
    return add_arc(next_arc_id(), tail, head);
  }
  ArcId add_arc(ArcId a, VertexId tail, VertexId head) {
    if (arcs_.count(a)) throw ValidationError("duplicate arc id");
    if (!costs_.count(tail) || !costs_.count(head))
      throw ValidationError("arc endpoint not a vertex");
    arcs_.emplace(a, Arc{tail, head});
    return a;
  }

  // Rotation input order is authoritative; unset vertices get their darts
  // in arc-id order (tail dart before head dart per arc).
  Builder& set_rotation(VertexId v, std::vector<Dart> darts) {
    rotation_[v] = std::move(darts);
    return *this;
  }

  bool has_vertex(VertexId v) const { return costs_.count(v) != 0; }
  ArcId next_arc_id() const {
    return arcs_.empty() ? 0 : arcs_.rbegin()->first + 1;
  }
  VertexId next_vertex_id() const {
    return costs_.empty() ? 0 : costs_.rbegin()->first + 1;
  }
  const std::map<ArcId, Arc>& arcs() const { return arcs_; }
  std::map<VertexId, std::vector<Dart>>& rotations() { return rotation_; }

  // Non-strict builds append any incident darts missing from an explicit
  // rotation (in arc-id order); strict builds reject them. The .emd parser
  // builds strictly so that incomplete rotation lines are reported.
  EmbeddedDigraph build(bool strict = false) const {
    EmbeddedDigraph g;
    g.costs_ = costs_;
    g.arcs_ = arcs_;
    g.rotation_ = rotation_;
    for (auto& [v, c] : costs_)
      if (!g.rotation_.count(v)) g.rotation_[v] = {};
    std::map<VertexId, std::vector<Dart>> incident;
    for (auto& [a, arc] : arcs_) {
      incident[arc.tail].push_back(tail_dart(a));
      incident[arc.head].push_back(head_dart(a));
    }
    if (!strict) {
      for (auto& [v, darts] : incident) {
        if (!g.costs_.count(v)) continue;
        auto& rot = g.rotation_[v];
        for (Dart d : darts)
          if (std::find(rot.begin(), rot.end(), d) == rot.end())
            rot.push_back(d);
      }
    }

    // Validate: every dart appears exactly once, at its own vertex.
    std::set<Dart> seen;
    for (auto& [v, rot] : g.rotation_) {
      if (!g.costs_.count(v))
        throw ValidationError("rotation for unknown vertex " +
                              std::to_string(v));
      for (Dart d : rot) {
        ArcId a = dart_arc(d);
        auto it = g.arcs_.find(a);
        if (it == g.arcs_.end())
          throw ValidationError("rotation dart refers to unknown arc " +
                                std::to_string(a));
        VertexId expect = is_tail_dart(d) ? it->second.tail : it->second.head;
        if (expect != v)
          throw ValidationError("dart " + std::string(is_tail_dart(d) ? "+" : "-") +
                                std::to_string(a) + " listed at vertex " +
                                std::to_string(v) + " but belongs to vertex " +
                                std::to_string(expect));
        if (!seen.insert(d).second)
          throw ValidationError("dart " + std::string(is_tail_dart(d) ? "+" : "-") +
                                std::to_string(a) + " appears twice");
      }
    }
    if (seen.size() != 2 * g.arcs_.size())
      throw ValidationError("missing darts in rotation system");
    g.index();
    return g;
  }

 private:
  std::map<VertexId, Cost> costs_;
  std::map<ArcId, Arc> arcs_;
  std::map<VertexId, std::vector<Dart>> rotation_;
};

inline EmbeddedDigraph::Builder EmbeddedDigraph::to_builder() const {
  Builder b;
  for (auto& [v, c] : costs_) b.add_vertex(v, c);
  for (auto& [a, arc] : arcs_) b.add_arc(a, arc.tail, arc.head);
  for (auto& [v, rot] : rotation_) b.set_rotation(v, rot);
  return b;
}

}  // namespace dfvs
