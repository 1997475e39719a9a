#include <gtest/gtest.h>

#include <algorithm>

#include "biot/dof_map.hpp"

using namespace biot;

namespace {

// every non-negative entry must be a distinct index in [0, n)
void expect_numbering(const std::vector<int>& map, int n) {
  std::vector<int> seen;
  for (int g : map)
    if (g >= 0) seen.push_back(g);
  std::sort(seen.begin(), seen.end());
  ASSERT_EQ(static_cast<int>(seen.size()), n);
  for (int i = 0; i < n; ++i) EXPECT_EQ(seen[i], i);
}

}  // namespace

TEST(DofMap, ClampedNoFlowCounts) {
  const Mesh m = build_uniform_grid(4);
  const DofMap dm = build_dof_map(m, BoundarySpec::clamped_no_flow());
  EXPECT_EQ(dm.n_ulin, 18);  // 9 interior vertices
  EXPECT_EQ(dm.n_bub, 40);
  EXPECT_EQ(dm.n_p, 32);
  EXPECT_EQ(dm.n_beta, 40);
  EXPECT_EQ(dm.n_w, 3 * 32 - 16);
  EXPECT_EQ(dm.total(), 18 + 40 + 32 + 40 + 80);
  EXPECT_EQ(dm.condensed_size(), 18 + 32 + 40);
  expect_numbering(dm.linear, dm.n_ulin);
  expect_numbering(dm.bubble, dm.n_bub);
  expect_numbering(dm.multiplier, dm.n_beta);
  expect_numbering(dm.velocity, dm.n_w);
}

TEST(DofMap, CantileverCounts) {
  const Mesh m = build_uniform_grid(4);
  const DofMap dm = build_dof_map(m, BoundarySpec::cantilever({0.0, -1.0}));
  EXPECT_EQ(dm.n_ulin, 2 * 20);   // left column clamped
  EXPECT_EQ(dm.n_bub, 40 + 12);   // interior + traction edges
  EXPECT_EQ(dm.n_beta, 40);
  EXPECT_EQ(dm.n_w, 80);
  for (int e = 0; e < m.num_edges(); ++e)
    EXPECT_EQ(dm.bubble[e] < 0, m.boundary_tag[e] == BoundaryTag::left) << e;
}

TEST(DofMap, WithoutBubbles) {
  const Mesh m = build_uniform_grid(4);
  const DofMap dm = build_dof_map(m, BoundarySpec::clamped_no_flow(), false);
  EXPECT_EQ(dm.n_bub, 0);
  EXPECT_TRUE(std::all_of(dm.bubble.begin(), dm.bubble.end(), [](int g) { return g == kConstrained; }));
  EXPECT_EQ(dm.offset_linear(), 0);
}

TEST(DofMap, OffsetsFollowFamilyOrder) {
  const DofMap dm = build_dof_map(build_uniform_grid(3), BoundarySpec::clamped_no_flow());
  EXPECT_EQ(dm.offset_bubble(), 0);
  EXPECT_EQ(dm.offset_linear(), dm.n_bub);
  EXPECT_EQ(dm.offset_pressure(), dm.n_bub + dm.n_ulin);
  EXPECT_EQ(dm.offset_multiplier(), dm.offset_pressure() + dm.n_p);
  EXPECT_EQ(dm.offset_velocity(), dm.offset_multiplier() + dm.n_beta);
}

TEST(DofMap, BoundaryVelocitiesConstrainedOnlyOnNoFlowEdges) {
  const Mesh m = build_uniform_grid(3);
  const DofMap dm = build_dof_map(m, BoundarySpec::clamped_no_flow());
  for (int t = 0; t < m.num_triangles(); ++t)
    for (int k = 0; k < 3; ++k)
      EXPECT_EQ(dm.velocity[3 * t + k] < 0, m.boundary_tag[m.tri_edges[t][k]] != BoundaryTag::interior);
}

TEST(DofMap, IncompleteBoundarySpecRejected) {
  BoundarySpec bc = BoundarySpec::clamped_no_flow();
  bc.no_flow.erase(BoundaryTag::top);
  EXPECT_THROW(build_dof_map(build_uniform_grid(2), bc), std::invalid_argument);
  BoundarySpec dup = BoundarySpec::clamped_no_flow();
  dup.traction[BoundaryTag::left] = Point::Zero();
  EXPECT_THROW(dup.validate(), std::invalid_argument);
}
