#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace biot {

using Point = Eigen::Vector2d;

enum class BoundaryTag : std::uint8_t { interior, bottom, right, top, left };

std::string_view to_string(BoundaryTag tag);

/// Uniform right-triangle mesh of the unit square.
///
/// Each square cell is split along its lower-left to upper-right diagonal.
/// Triangles are stored counter-clockwise; local edge k of a triangle is the
/// edge opposite its local vertex k. Every edge carries a fixed unit normal
/// that points from its first incident triangle (T+, the smaller index) into
/// the second (T-), or outward on the boundary.
struct Mesh {
  int n = 0;
  double h = 0.0;
  std::vector<Point> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<std::array<int, 2>> edges;
  /// {T+, T-}; T- is -1 on boundary edges.
  std::vector<std::array<int, 2>> edge_to_tri;
  std::vector<Point> edge_normal;
  std::vector<BoundaryTag> boundary_tag;
  /// Global edge index of each local edge.
  std::vector<std::array<int, 3>> tri_edges;

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_triangles() const { return static_cast<int>(triangles.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }
  int num_boundary_edges() const;
  int num_interior_edges() const { return num_edges() - num_boundary_edges(); }
  bool is_boundary_vertex(int v) const;
};

Mesh build_uniform_grid(int n);

struct ElementGeometry {
  double area = 0.0;
  std::array<Point, 3> vertices;
  std::array<Point, 3> grad_lambda;
  /// Indexed by local edge (opposite local vertex k).
  std::array<double, 3> edge_length{};
  std::array<Point, 3> outward_normal;
  /// n_e . n_{e,T}: +1 if T is the T+ side of the edge, -1 otherwise.
  std::array<int, 3> sign{};

  /// Global normal n_e of local edge k.
  Point edge_normal(int k) const { return sign[k] * outward_normal[k]; }
};

/// Geometry of a counter-clockwise triangle with explicitly given edge signs.
ElementGeometry make_geometry(const std::array<Point, 3>& vertices,
                              const std::array<int, 3>& sign = {1, 1, 1});

ElementGeometry element_geometry(const Mesh& mesh, int t);

/// Debug dump: "v x y" and "t i j k" lines.
void write_mesh_text(const Mesh& mesh, std::ostream& out);

}  // namespace biot
