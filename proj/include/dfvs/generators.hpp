#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "dfvs/embedded_digraph.hpp"

namespace dfvs {

enum class Family { TOROIDAL_GRID, RANDOM_ROTATION, PLANAR, DISJOINT_UNION };
enum class CostModel { UNIT, UNIFORM_1_10 };

// Toroidal grid rotation variants. QUAD gives the C_n x C_n map whose nine
// (n=3) faces are quadrilaterals of mixed orientation, so the map has no
// face-minimal dicycle. ALTERNATING interleaves in- and out-darts, making
// every face boundary a directed cycle (rows, columns and staircases).
enum class GridRotation { QUAD, ALTERNATING };

struct InstanceSpec {
  Family family = Family::PLANAR;
  int n = 3;                  // grid side / cycle length / vertex count
  int m = 0;                  // arc count (RANDOM_ROTATION) / chords (PLANAR)
  GridRotation grid_rotation = GridRotation::QUAD;
  int max_genus = 3;          // RANDOM_ROTATION acceptance bound
  CostModel cost_model = CostModel::UNIT;
  uint64_t seed = 1;
  std::vector<InstanceSpec> parts;  // DISJOINT_UNION
  std::optional<int> expected_genus;
  std::string name;
};

namespace detail {

inline Cost draw_cost(CostModel m, std::mt19937_64& rng) {
  if (m == CostModel::UNIT) return Cost(1);
  return Cost(static_cast<long>(1 + rng() % 10));
}

// C_n x C_n with arcs right and down. Vertex (r,c) -> r*n+c.
inline EmbeddedDigraph toroidal_grid(int n, GridRotation variant,
                                     CostModel cm, uint64_t seed) {
  if (n < 2) throw std::invalid_argument("grid side must be >= 2");
  std::mt19937_64 rng(seed);
  EmbeddedDigraph::Builder b;
  auto vid = [&](int r, int c) { return ((r + n) % n) * n + (c + n) % n; };
  for (int v = 0; v < n * n; ++v) b.add_vertex(v, draw_cost(cm, rng));
  // right arc of (r,c): id r*n+c; down arc: n*n + r*n+c
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      b.add_arc(r * n + c, vid(r, c), vid(r, c + 1));
      b.add_arc(n * n + r * n + c, vid(r, c), vid(r + 1, c));
    }
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      Dart in_left = head_dart(r * n + (c + n - 1) % n);
      Dart in_up = head_dart(n * n + ((r + n - 1) % n) * n + c);
      Dart out_right = tail_dart(r * n + c);
      Dart out_down = tail_dart(n * n + r * n + c);
      std::vector<Dart> rot =
          variant == GridRotation::QUAD
              ? std::vector<Dart>{in_left, in_up, out_right, out_down}
              : std::vector<Dart>{in_left, out_right, in_up, out_down};
      b.set_rotation(vid(r, c), std::move(rot));
    }
  return b.build();
}

// Directed cycle 0..k-1 in convex position, plus non-crossing chords drawn
// inside; rotations follow circular order of the other endpoint, which is a
// valid planar embedding for any graph in convex position with non-crossing
// chords.
inline EmbeddedDigraph planar_chorded_cycle(int k, int num_chords,
                                            CostModel cm, uint64_t seed) {
  if (k < 2) throw std::invalid_argument("cycle length must be >= 2");
  std::mt19937_64 rng(seed);
  EmbeddedDigraph::Builder b;
  for (int v = 0; v < k; ++v) b.add_vertex(v, draw_cost(cm, rng));
  std::vector<std::pair<int, int>> edges;  // endpoint indices on the circle
  std::vector<Arc> arcs;
  for (int v = 0; v < k; ++v) {
    edges.push_back({v, (v + 1) % k});
    arcs.push_back({v, (v + 1) % k});
  }
  // Non-crossing chords via random nesting: repeatedly pick an interval
  // [l, r] (r >= l+2) that does not cross any existing chord.
  std::vector<std::pair<int, int>> chords;
  auto crosses = [&](int l, int r) {
    for (auto& [a, c] : chords) {
      bool a_in = a > l && a < r, c_in = c > l && c < r;
      if (a_in != c_in && a != l && a != r && c != l && c != r) return true;
    }
    return false;
  };
  int attempts = 0;
  while (static_cast<int>(chords.size()) < num_chords && attempts < 200) {
    ++attempts;
    int l = static_cast<int>(rng() % k);
    // Span capped at k-2: a span of k-1 would run parallel to a cycle edge,
    // and the far-endpoint rotation sort cannot orient parallel edges.
    int span = 2 + static_cast<int>(rng() % std::max(1, k - 3));
    int r = l + span;
    if (r >= k) continue;
    if (crosses(l, r)) continue;
    bool dup = false;
    for (auto& ch : chords)
      if (ch == std::make_pair(l, r)) dup = true;
    if (dup) continue;
    chords.push_back({l, r});
    bool fwd = rng() % 2 == 0;
    edges.push_back({l, r});
    arcs.push_back(fwd ? Arc{l, r} : Arc{r, l});
  }
  for (size_t a = 0; a < arcs.size(); ++a) b.add_arc((ArcId)a, arcs[a].tail, arcs[a].head);
  // Rotation: darts sorted by circular offset of the far endpoint.
  for (int v = 0; v < k; ++v) {
    std::vector<std::pair<std::pair<int, size_t>, Dart>> keyed;
    for (size_t a = 0; a < arcs.size(); ++a) {
      auto [p, q] = edges[a];
      if (p == v)
        keyed.push_back({{(q - v + k) % k, a},
                         arcs[a].tail == v ? tail_dart((ArcId)a) : head_dart((ArcId)a)});
      else if (q == v)
        keyed.push_back({{(p - v + k) % k, a},
                         arcs[a].tail == v ? tail_dart((ArcId)a) : head_dart((ArcId)a)});
    }
    std::sort(keyed.begin(), keyed.end());
    std::vector<Dart> rot;
    for (auto& [key, d] : keyed) rot.push_back(d);
    b.set_rotation(v, std::move(rot));
  }
  return b.build();
}

// Random digraph with a random rotation system; rotations are resampled
// until the computed genus is within max_genus.
inline EmbeddedDigraph random_rotation(int n, int m, int max_genus,
                                       CostModel cm, uint64_t seed) {
  std::mt19937_64 rng(seed);
  EmbeddedDigraph::Builder base;
  for (int v = 0; v < n; ++v) base.add_vertex(v, draw_cost(cm, rng));
  std::set<std::pair<int, int>> used;
  int added = 0, tries = 0;
  while (added < m && tries < 50 * m) {
    ++tries;
    int u = static_cast<int>(rng() % n), w = static_cast<int>(rng() % n);
    if (u == w || used.count({u, w})) continue;
    used.insert({u, w});
    base.add_arc(u, w);
    ++added;
  }
  for (int attempt = 0;; ++attempt) {
    EmbeddedDigraph::Builder b = base;
    std::map<VertexId, std::vector<Dart>> incident;
    for (auto& [a, arc] : b.arcs()) {
      incident[arc.tail].push_back(tail_dart(a));
      incident[arc.head].push_back(head_dart(a));
    }
    for (auto& [v, darts] : incident) {
      std::shuffle(darts.begin(), darts.end(), rng);
      b.set_rotation(v, darts);
    }
    EmbeddedDigraph g = b.build();
    if (g.genus() <= max_genus) return g;
    if (attempt > 500)
      throw std::runtime_error("random_rotation: genus bound unreachable");
  }
}

inline EmbeddedDigraph disjoint_union(const std::vector<EmbeddedDigraph>& parts) {
  EmbeddedDigraph::Builder b;
  int voff = 0, aoff = 0;
  for (const auto& g : parts) {
    int vmax = 0, amax = 0;
    for (auto& [v, c] : g.costs()) {
      b.add_vertex(v + voff, c);
      vmax = std::max(vmax, v + 1);
    }
    for (auto& [a, arc] : g.arcs()) {
      b.add_arc(a + aoff, arc.tail + voff, arc.head + voff);
      amax = std::max(amax, a + 1);
    }
    for (auto& [v, rot] : g.rotations()) {
      std::vector<Dart> r;
      for (Dart d : rot) {
        ArcId a = dart_arc(d) + aoff;
        r.push_back(is_tail_dart(d) ? tail_dart(a) : head_dart(a));
      }
      b.set_rotation(v + voff, std::move(r));
    }
    voff += vmax;
    aoff += amax;
  }
  return b.build();
}

}  // namespace detail

inline EmbeddedDigraph generate(const InstanceSpec& spec) {
  EmbeddedDigraph g;
  switch (spec.family) {
    case Family::TOROIDAL_GRID:
      g = detail::toroidal_grid(spec.n, spec.grid_rotation, spec.cost_model,
                                spec.seed);
      break;
    case Family::PLANAR:
      g = detail::planar_chorded_cycle(spec.n, spec.m, spec.cost_model,
                                       spec.seed);
      break;
    case Family::RANDOM_ROTATION:
      g = detail::random_rotation(spec.n, spec.m, spec.max_genus,
                                  spec.cost_model, spec.seed);
      break;
    case Family::DISJOINT_UNION: {
      std::vector<EmbeddedDigraph> parts;
      for (const auto& p : spec.parts) parts.push_back(generate(p));
      g = detail::disjoint_union(parts);
      break;
    }
  }
  if (spec.expected_genus && g.genus() != *spec.expected_genus)
    throw std::runtime_error("generated genus " + std::to_string(g.genus()) +
                             " != expected " +
                             std::to_string(*spec.expected_genus));
  return g;
}

}  // namespace dfvs
