#pragma once
// Ear-clipping triangulation, its dual tree, and the balanced-diagonal search
// used to cut 6..9-edge pieces off a polygon.

#include "guardsim/geometry.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace guardsim {

using Diagonal = std::pair<std::size_t, std::size_t>;

struct Triangulation {
  SimplePolygon polygon;
  std::vector<std::array<std::size_t, 3>> triangles;
  /// Pairs (i, j) with i < j, in the order the ears exposed them.
  std::vector<Diagonal> diagonals;
  /// Vertex the ear scan was rotated to start from.
  std::size_t start = 0;
};

/// Ear clipping. The scan for the next ear always begins just after `start`,
/// so a convex polygon yields the fan from vertex `start`.
Triangulation triangulate(const SimplePolygon& polygon, std::size_t start = 0);

struct DualTree {
  std::size_t node_count = 0;
  /// Edge k joins the two triangles sharing diagonal k.
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::vector<std::vector<std::size_t>> adjacency;
};

DualTree dual_tree(const Triangulation& triangulation);

struct BalancedCut {
  Diagonal diagonal;
  std::size_t diagonal_index = 0;
  /// Polygon edges on the cut-off side.
  int side_edge_count = 0;
  /// True when the cut-off side is the chain diagonal.first .. diagonal.second.
  bool inner_side = true;
};

/// First diagonal (by index) whose smaller side holds 5..8 polygon edges.
/// Throws TooSmall below 10 vertices; returns nullopt when the scan fails.
std::optional<BalancedCut> balanced_diagonal(const Triangulation& triangulation);

/// Like balanced_diagonal, but either side may hold the 5..8 edges.
std::optional<BalancedCut> any_side_diagonal(const Triangulation& triangulation);

/// True if the segment between vertices i and j is a proper diagonal.
bool is_diagonal(const SimplePolygon& polygon, std::size_t i, std::size_t j);

}  // namespace guardsim
