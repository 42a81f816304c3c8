#pragma once

#include <vector>

#include "dfvs/embedded_digraph.hpp"
#include "dfvs/generators.hpp"

namespace fixtures {

using namespace dfvs;

// Directed k-cycle with given costs (unit by default), planar rotation.
inline EmbeddedDigraph dicycle(int k, std::vector<Cost> costs = {}) {
  EmbeddedDigraph::Builder b;
  for (int v = 0; v < k; ++v)
    b.add_vertex(v, costs.empty() ? Cost(1) : costs[v]);
  for (int v = 0; v < k; ++v) b.add_arc(v, v, (v + 1) % k);
  for (int v = 0; v < k; ++v)
    b.set_rotation(v, {head_dart((v + k - 1) % k), tail_dart(v)});
  return b.build();
}

inline EmbeddedDigraph triangle() { return dicycle(3); }

// Bidirected triangle: arcs i->i+1 (ids 0..2) and i+1->i (ids 3..5),
// planar rotation (parallel arcs adjacent).
inline EmbeddedDigraph bidirected_triangle() {
  EmbeddedDigraph::Builder b;
  for (int v = 0; v < 3; ++v) b.add_vertex(v, Cost(1));
  for (int v = 0; v < 3; ++v) b.add_arc(v, v, (v + 1) % 3);
  for (int v = 0; v < 3; ++v) b.add_arc(3 + v, (v + 1) % 3, v);
  for (int v = 0; v < 3; ++v) {
    int prev = (v + 2) % 3;
    b.set_rotation(v, {head_dart(prev), tail_dart(3 + prev), head_dart(3 + v),
                       tail_dart(v)});
  }
  return b.build();
}

// Two unit triangles sharing vertex 0: 0-1-2 and 0-3-4.
inline EmbeddedDigraph two_triangles_shared() {
  EmbeddedDigraph::Builder b;
  for (int v = 0; v < 5; ++v) b.add_vertex(v, Cost(1));
  b.add_arc(0, 0, 1);
  b.add_arc(1, 1, 2);
  b.add_arc(2, 2, 0);
  b.add_arc(3, 0, 3);
  b.add_arc(4, 3, 4);
  b.add_arc(5, 4, 0);
  b.set_rotation(0, {head_dart(2), tail_dart(0), head_dart(5), tail_dart(3)});
  return b.build();
}

inline EmbeddedDigraph two_disjoint_triangles() {
  return detail::disjoint_union({triangle(), triangle()});
}

inline EmbeddedDigraph grid(int n, GridRotation rot = GridRotation::QUAD) {
  return detail::toroidal_grid(n, rot, CostModel::UNIT, 1);
}

}  // namespace fixtures
