#pragma once

#include <map>
#include <set>
#include <vector>

#include "biot/mesh.hpp"

namespace biot {

/// Boundary conditions for the elasticity and flow sub-problems. Each
/// boundary side must appear in exactly one set of each pair.
struct BoundarySpec {
  std::set<BoundaryTag> displacement_dirichlet;
  /// Sides with prescribed traction; a zero vector means traction free.
  std::map<BoundaryTag, Point> traction;
  std::set<BoundaryTag> no_flow;
  std::set<BoundaryTag> pressure_dirichlet;

  /// Throws std::invalid_argument when a side is missing from, or duplicated
  /// across, either pair.
  void validate() const;

  bool clamped(BoundaryTag tag) const { return displacement_dirichlet.contains(tag); }
  bool sealed(BoundaryTag tag) const { return no_flow.contains(tag); }

  /// u = 0 and w.n = 0 on the whole boundary.
  static BoundarySpec clamped_no_flow();
  /// Left side clamped, traction on top, right and bottom traction free,
  /// no flow everywhere.
  static BoundarySpec cantilever(const Point& top_traction);
};

inline constexpr int kConstrained = -1;

/// Global numbering for the five unknown families. Within the monolithic
/// system the families are laid out as (bubble, linear, pressure,
/// multiplier, velocity).
struct DofMap {
  int n_bub = 0;
  int n_ulin = 0;
  int n_p = 0;
  int n_beta = 0;
  int n_w = 0;

  /// Per edge: bubble index or kConstrained.
  std::vector<int> bubble;
  /// Per (vertex, component) at 2 * v + c: linear index or kConstrained.
  std::vector<int> linear;
  /// Per edge: multiplier index or kConstrained.
  std::vector<int> multiplier;
  /// Per (triangle, local edge) at 3 * t + k: velocity index or kConstrained.
  std::vector<int> velocity;

  int total() const { return n_bub + n_ulin + n_p + n_beta + n_w; }
  int condensed_size() const { return n_ulin + n_p + n_beta; }

  int offset_bubble() const { return 0; }
  int offset_linear() const { return n_bub; }
  int offset_pressure() const { return n_bub + n_ulin; }
  int offset_multiplier() const { return n_bub + n_ulin + n_p; }
  int offset_velocity() const { return n_bub + n_ulin + n_p + n_beta; }
};

/// Interior edges plus boundary edges that are not displacement-clamped.
std::vector<int> bubble_edge_set(const Mesh& mesh, const BoundarySpec& bc);

/// with_bubbles = false gives the plain P1-RT0-P0 numbering (n_bub = 0).
DofMap build_dof_map(const Mesh& mesh, const BoundarySpec& bc, bool with_bubbles = true);

}  // namespace biot
