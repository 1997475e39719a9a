#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "biot/mesh.hpp"

using namespace biot;

TEST(Mesh, CountsForFourByFour) {
  const Mesh m = build_uniform_grid(4);
  EXPECT_EQ(m.num_vertices(), 25);
  EXPECT_EQ(m.num_triangles(), 32);
  EXPECT_EQ(m.num_edges(), 56);
  EXPECT_EQ(m.num_boundary_edges(), 16);
  EXPECT_EQ(m.num_interior_edges(), 40);
  EXPECT_DOUBLE_EQ(m.h, 0.25);
}

TEST(Mesh, EulerCharacteristic) {
  for (int n : {1, 2, 3, 7, 16}) {
    const Mesh m = build_uniform_grid(n);
    EXPECT_EQ(m.num_vertices() - m.num_edges() + m.num_triangles(), 1) << "n=" << n;
  }
}

TEST(Mesh, TrianglesAreCounterClockwiseAndTileTheSquare) {
  const Mesh m = build_uniform_grid(5);
  double total = 0.0;
  for (int t = 0; t < m.num_triangles(); ++t) {
    const auto& tri = m.triangles[t];
    const Point a = m.vertices[tri[0]], b = m.vertices[tri[1]], c = m.vertices[tri[2]];
    const double cross = (b - a).x() * (c - a).y() - (b - a).y() * (c - a).x();
    EXPECT_GT(cross, 0.0);
    total += 0.5 * cross;
  }
  EXPECT_NEAR(total, 1.0, 1e-14);
}

TEST(Mesh, LocalEdgeIsOppositeLocalVertex) {
  const Mesh m = build_uniform_grid(3);
  for (int t = 0; t < m.num_triangles(); ++t)
    for (int k = 0; k < 3; ++k) {
      const auto& e = m.edges[m.tri_edges[t][k]];
      const int opposite = m.triangles[t][k];
      EXPECT_NE(e[0], opposite);
      EXPECT_NE(e[1], opposite);
      const std::set<int> ends{e[0], e[1]};
      EXPECT_TRUE(ends.contains(m.triangles[t][(k + 1) % 3]));
      EXPECT_TRUE(ends.contains(m.triangles[t][(k + 2) % 3]));
    }
}

TEST(Mesh, EdgeNormalsPointFromPlusToMinusOrOutward) {
  const Mesh m = build_uniform_grid(4);
  auto centroid = [&](int t) {
    const auto& tri = m.triangles[t];
    return Point((m.vertices[tri[0]] + m.vertices[tri[1]] + m.vertices[tri[2]]) / 3.0);
  };
  for (int e = 0; e < m.num_edges(); ++e) {
    const auto [tp, tm] = m.edge_to_tri[e];
    const Point n = m.edge_normal[e];
    EXPECT_NEAR(n.norm(), 1.0, 1e-15);
    const Point d = m.vertices[m.edges[e][1]] - m.vertices[m.edges[e][0]];
    EXPECT_NEAR(n.dot(d), 0.0, 1e-15);
    const Point mid = 0.5 * (m.vertices[m.edges[e][0]] + m.vertices[m.edges[e][1]]);
    EXPECT_GT(n.dot(mid - centroid(tp)), 0.0);
    if (tm >= 0) {
      EXPECT_LT(tp, tm);
      EXPECT_EQ(m.boundary_tag[e], BoundaryTag::interior);
    } else {
      EXPECT_NE(m.boundary_tag[e], BoundaryTag::interior);
    }
  }
}

TEST(Mesh, BoundaryTags) {
  const Mesh m = build_uniform_grid(4);
  int count[5] = {};
  for (int e = 0; e < m.num_edges(); ++e) {
    const BoundaryTag tag = m.boundary_tag[e];
    ++count[static_cast<int>(tag)];
    const Point mid = 0.5 * (m.vertices[m.edges[e][0]] + m.vertices[m.edges[e][1]]);
    const Point n = m.edge_normal[e];
    switch (tag) {
      case BoundaryTag::bottom: EXPECT_DOUBLE_EQ(mid.y(), 0.0); EXPECT_DOUBLE_EQ(n.y(), -1.0); break;
      case BoundaryTag::right: EXPECT_DOUBLE_EQ(mid.x(), 1.0); EXPECT_DOUBLE_EQ(n.x(), 1.0); break;
      case BoundaryTag::top: EXPECT_DOUBLE_EQ(mid.y(), 1.0); EXPECT_DOUBLE_EQ(n.y(), 1.0); break;
      case BoundaryTag::left: EXPECT_DOUBLE_EQ(mid.x(), 0.0); EXPECT_DOUBLE_EQ(n.x(), -1.0); break;
      case BoundaryTag::interior: break;
    }
  }
  for (int s = 1; s <= 4; ++s) EXPECT_EQ(count[s], 4);
}

TEST(Mesh, BarycentricGradientsSumToZero) {
  const Mesh m = build_uniform_grid(6);
  for (int t = 0; t < m.num_triangles(); ++t) {
    const ElementGeometry g = element_geometry(m, t);
    const Point s = g.grad_lambda[0] + g.grad_lambda[1] + g.grad_lambda[2];
    EXPECT_LT(s.norm(), 1e-12);
    // grad lambda_i . (x_j - x_i) = -1 for j != i
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const double v = g.grad_lambda[i].dot(g.vertices[j] - g.vertices[i]);
        EXPECT_NEAR(v, i == j ? 0.0 : -1.0, 1e-12);
      }
  }
}

TEST(Mesh, OutwardNormalsIntegrateToZero) {
  // sum_k |e_k| n_k = 0 for a closed polygon
  const ElementGeometry g = make_geometry({Point(0.1, 0.2), Point(1.3, 0.4), Point(0.5, 1.7)});
  Point s = Point::Zero();
  for (int k = 0; k < 3; ++k) s += g.edge_length[k] * g.outward_normal[k];
  EXPECT_LT(s.norm(), 1e-14);
}

TEST(Mesh, EdgeSignMatchesGlobalNormal) {
  const Mesh m = build_uniform_grid(3);
  for (int t = 0; t < m.num_triangles(); ++t) {
    const ElementGeometry g = element_geometry(m, t);
    for (int k = 0; k < 3; ++k) {
      const int e = m.tri_edges[t][k];
      EXPECT_LT((g.edge_normal(k) - m.edge_normal[e]).norm(), 1e-14);
      EXPECT_EQ(g.sign[k], m.edge_to_tri[e][0] == t ? 1 : -1);
    }
  }
}

TEST(Mesh, RejectsEmptyGrid) { EXPECT_THROW(build_uniform_grid(0), std::invalid_argument); }

TEST(Mesh, TextDump) {
  const Mesh m = build_uniform_grid(1);
  std::ostringstream os;
  write_mesh_text(m, os);
  const std::string s = os.str();
  EXPECT_NE(s.find("v 1 1"), std::string::npos);
  EXPECT_NE(s.find("t "), std::string::npos);
}
