#include "biot/mesh.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>

namespace biot {

std::string_view to_string(BoundaryTag tag) {
  switch (tag) {
    case BoundaryTag::interior: return "interior";
    case BoundaryTag::bottom: return "bottom";
    case BoundaryTag::right: return "right";
    case BoundaryTag::top: return "top";
    case BoundaryTag::left: return "left";
  }
  return "unknown";
}

int Mesh::num_boundary_edges() const {
  int count = 0;
  for (const auto& tri : edge_to_tri) count += tri[1] < 0 ? 1 : 0;
  return count;
}

bool Mesh::is_boundary_vertex(int v) const {
  const int i = v % (n + 1);
  const int j = v / (n + 1);
  return i == 0 || j == 0 || i == n || j == n;
}

Mesh build_uniform_grid(int n) {
  if (n < 1) throw std::invalid_argument("build_uniform_grid: N must be positive, got " + std::to_string(n));

  Mesh mesh;
  mesh.n = n;
  mesh.h = 1.0 / n;
  const int nv = n + 1;
  auto vid = [nv](int i, int j) { return j * nv + i; };

  mesh.vertices.reserve(static_cast<std::size_t>(nv * nv));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) mesh.vertices.emplace_back(double(i) / n, double(j) / n);

  mesh.triangles.reserve(static_cast<std::size_t>(2 * n * n));
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int v00 = vid(i, j), v10 = vid(i + 1, j), v11 = vid(i + 1, j + 1), v01 = vid(i, j + 1);
      mesh.triangles.push_back({v00, v10, v11});
      mesh.triangles.push_back({v00, v11, v01});
    }
  }

  std::map<std::pair<int, int>, int> edge_index;
  mesh.tri_edges.resize(mesh.triangles.size());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int k = 0; k < 3; ++k) {
      const int a = tri[(k + 1) % 3], b = tri[(k + 2) % 3];
      const auto key = std::minmax(a, b);
      auto [it, inserted] = edge_index.try_emplace({key.first, key.second}, mesh.num_edges());
      if (inserted) {
        mesh.edges.push_back({key.first, key.second});
        mesh.edge_to_tri.push_back({t, -1});
      } else {
        mesh.edge_to_tri[it->second][1] = t;
      }
      mesh.tri_edges[t][k] = it->second;
    }
  }

  mesh.edge_normal.resize(mesh.edges.size());
  mesh.boundary_tag.assign(mesh.edges.size(), BoundaryTag::interior);
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const int t = mesh.edge_to_tri[e][0];
    const ElementGeometry geom = make_geometry(
        {mesh.vertices[mesh.triangles[t][0]], mesh.vertices[mesh.triangles[t][1]], mesh.vertices[mesh.triangles[t][2]]});
    for (int k = 0; k < 3; ++k)
      if (mesh.tri_edges[t][k] == e) mesh.edge_normal[e] = geom.outward_normal[k];

    if (mesh.edge_to_tri[e][1] >= 0) continue;
    const int a = mesh.edges[e][0], b = mesh.edges[e][1];
    const int ia = a % nv, ja = a / nv, ib = b % nv, jb = b / nv;
    if (ja == 0 && jb == 0) mesh.boundary_tag[e] = BoundaryTag::bottom;
    else if (ia == n && ib == n) mesh.boundary_tag[e] = BoundaryTag::right;
    else if (ja == n && jb == n) mesh.boundary_tag[e] = BoundaryTag::top;
    else if (ia == 0 && ib == 0) mesh.boundary_tag[e] = BoundaryTag::left;
    else throw std::logic_error("build_uniform_grid: boundary edge off the square boundary");
  }
  return mesh;
}

ElementGeometry make_geometry(const std::array<Point, 3>& vertices, const std::array<int, 3>& sign) {
  ElementGeometry g;
  g.vertices = vertices;
  g.sign = sign;
  const Point d1 = vertices[1] - vertices[0];
  const Point d2 = vertices[2] - vertices[0];
  g.area = 0.5 * (d1.x() * d2.y() - d1.y() * d2.x());
  if (!(g.area > 0.0)) throw std::invalid_argument("make_geometry: degenerate or clockwise triangle");
  for (int k = 0; k < 3; ++k) {
    const Point& a = vertices[(k + 1) % 3];
    const Point& b = vertices[(k + 2) % 3];
    g.grad_lambda[k] = Point(a.y() - b.y(), b.x() - a.x()) / (2.0 * g.area);
    g.edge_length[k] = (b - a).norm();
    g.outward_normal[k] = -g.grad_lambda[k].normalized();
  }
  return g;
}

ElementGeometry element_geometry(const Mesh& mesh, int t) {
  if (t < 0 || t >= mesh.num_triangles()) throw std::out_of_range("element_geometry: triangle index out of range");
  const auto& tri = mesh.triangles[t];
  std::array<int, 3> sign{};
  for (int k = 0; k < 3; ++k) sign[k] = mesh.edge_to_tri[mesh.tri_edges[t][k]][0] == t ? 1 : -1;
  return make_geometry({mesh.vertices[tri[0]], mesh.vertices[tri[1]], mesh.vertices[tri[2]]}, sign);
}

void write_mesh_text(const Mesh& mesh, std::ostream& out) {
  for (const auto& v : mesh.vertices) out << "v " << v.x() << ' ' << v.y() << '\n';
  for (const auto& t : mesh.triangles) out << "t " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

}  // namespace biot
