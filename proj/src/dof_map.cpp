#include "biot/dof_map.hpp"

#include <stdexcept>
#include <string>

namespace biot {

namespace {

constexpr BoundaryTag kSides[] = {BoundaryTag::bottom, BoundaryTag::right, BoundaryTag::top, BoundaryTag::left};

}  // namespace

void BoundarySpec::validate() const {
  for (BoundaryTag side : kSides) {
    const int mech = int(displacement_dirichlet.contains(side)) + int(traction.contains(side));
    const int flow = int(no_flow.contains(side)) + int(pressure_dirichlet.contains(side));
    if (mech != 1)
      throw std::invalid_argument("BoundarySpec: side '" + std::string(to_string(side)) +
                                  "' must be either displacement-clamped or traction");
    if (flow != 1)
      throw std::invalid_argument("BoundarySpec: side '" + std::string(to_string(side)) +
                                  "' must be either no-flow or pressure-Dirichlet");
  }
  for (BoundaryTag tag : displacement_dirichlet)
    if (tag == BoundaryTag::interior) throw std::invalid_argument("BoundarySpec: interior is not a boundary side");
}

BoundarySpec BoundarySpec::clamped_no_flow() {
  BoundarySpec bc;
  for (BoundaryTag side : kSides) {
    bc.displacement_dirichlet.insert(side);
    bc.no_flow.insert(side);
  }
  return bc;
}

BoundarySpec BoundarySpec::cantilever(const Point& top_traction) {
  BoundarySpec bc;
  bc.displacement_dirichlet = {BoundaryTag::left};
  bc.traction = {{BoundaryTag::top, top_traction},
                 {BoundaryTag::right, Point::Zero()},
                 {BoundaryTag::bottom, Point::Zero()}};
  for (BoundaryTag side : kSides) bc.no_flow.insert(side);
  return bc;
}

std::vector<int> bubble_edge_set(const Mesh& mesh, const BoundarySpec& bc) {
  std::vector<int> edges;
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const BoundaryTag tag = mesh.boundary_tag[e];
    if (tag == BoundaryTag::interior || !bc.clamped(tag)) edges.push_back(e);
  }
  return edges;
}

DofMap build_dof_map(const Mesh& mesh, const BoundarySpec& bc, bool with_bubbles) {
  bc.validate();
  DofMap dm;

  dm.bubble.assign(mesh.num_edges(), kConstrained);
  if (with_bubbles)
    for (int e : bubble_edge_set(mesh, bc)) dm.bubble[e] = dm.n_bub++;

  // A vertex is clamped when it touches a clamped boundary edge.
  std::vector<bool> clamped_vertex(mesh.num_vertices(), false);
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const BoundaryTag tag = mesh.boundary_tag[e];
    if (tag != BoundaryTag::interior && bc.clamped(tag)) {
      clamped_vertex[mesh.edges[e][0]] = true;
      clamped_vertex[mesh.edges[e][1]] = true;
    }
  }
  dm.linear.assign(2 * mesh.num_vertices(), kConstrained);
  for (int v = 0; v < mesh.num_vertices(); ++v)
    if (!clamped_vertex[v])
      for (int c = 0; c < 2; ++c) dm.linear[2 * v + c] = dm.n_ulin++;

  dm.n_p = mesh.num_triangles();

  // Multipliers live on interior edges only: on pressure-Dirichlet edges the
  // trace is the known value 0 and drops out.
  dm.multiplier.assign(mesh.num_edges(), kConstrained);
  for (int e = 0; e < mesh.num_edges(); ++e)
    if (mesh.boundary_tag[e] == BoundaryTag::interior) dm.multiplier[e] = dm.n_beta++;

  dm.velocity.assign(3 * mesh.num_triangles(), kConstrained);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    for (int k = 0; k < 3; ++k) {
      const BoundaryTag tag = mesh.boundary_tag[mesh.tri_edges[t][k]];
      if (tag != BoundaryTag::interior && bc.sealed(tag)) continue;
      dm.velocity[3 * t + k] = dm.n_w++;
    }
  }
  return dm;
}

}  // namespace biot
