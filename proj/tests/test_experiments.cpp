#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "biot/experiments.hpp"
#include "biot/quadrature.hpp"
#include "biot/report.hpp"

using namespace biot;

TEST(Manufactured, BodyForceMatchesSymbolicOracle) {
  // values frozen from tests/oracles/body_force.py (mu = 1)
  struct Case {
    double x, y, fx, fy;
  };
  for (const Case& c : {Case{0.5, 0.25, 0.5625, 0.0}, Case{0.3, 0.7, -0.29904, -0.29904},
                        Case{0.9, 0.1, -0.05472, -0.05472}}) {
    const Point f = manufactured::body_force({c.x, c.y}, 1.0);
    EXPECT_NEAR(f.x(), c.fx, 1e-10);
    EXPECT_NEAR(f.y(), c.fy, 1e-10);
  }
  // linear in mu
  EXPECT_NEAR(manufactured::body_force({0.3, 0.7}, 2.5).x(), 2.5 * -0.29904, 1e-10);
}

TEST(Manufactured, DisplacementIsDivergenceFreeAndVanishesOnBoundary) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const Point x(u(rng), u(rng));
    EXPECT_NEAR(manufactured::displacement_gradient(x).trace(), 0.0, 1e-12);
  }
  for (double s : {0.0, 0.2, 0.5, 0.9, 1.0})
    for (const Point& x : {Point(s, 0.0), Point(s, 1.0), Point(0.0, s), Point(1.0, s)})
      EXPECT_EQ(manufactured::displacement(x).norm(), 0.0);
}

TEST(Manufactured, GradientMatchesFiniteDifferences) {
  const Point x(0.37, 0.61);
  const double h = 1e-6;
  for (int c = 0; c < 2; ++c) {
    Point e = Point::Zero();
    e(c) = h;
    const Point d = (manufactured::displacement(x + e) - manufactured::displacement(x - e)) / (2 * h);
    EXPECT_NEAR(d.x(), manufactured::displacement_gradient(x)(0, c), 1e-9);
    EXPECT_NEAR(d.y(), manufactured::displacement_gradient(x)(1, c), 1e-9);
  }
}

TEST(Manufactured, InterpolantErrorHalvesWithMesh) {
  // nodal interpolant of u, exact p: zero pressure error, first-order energy error
  auto interpolant_errors = [](int n) {
    const Mesh mesh = build_uniform_grid(n);
    const DofMap dm = build_dof_map(mesh, BoundarySpec::clamped_no_flow());
    State s = State::zero(dm);
    for (int v = 0; v < mesh.num_vertices(); ++v)
      for (int c = 0; c < 2; ++c)
        if (dm.linear[2 * v + c] >= 0) s.u_lin(dm.linear[2 * v + c]) = manufactured::displacement(mesh.vertices[v])(c);
    s.p.setOnes();
    return manufactured_errors(mesh, dm, s, manufactured::params(1e-6));
  };
  const ErrorNorms e16 = interpolant_errors(16), e32 = interpolant_errors(32);
  EXPECT_LT(e16.pressure, 1e-12);
  EXPECT_NEAR(std::log2(e16.energy / e32.energy), 1.0, 0.1);
  const Mesh mesh = build_uniform_grid(16);
  const DofMap dm = build_dof_map(mesh, BoundarySpec::clamped_no_flow());
  const ErrorNorms zero = manufactured_errors(mesh, dm, State::zero(dm), manufactured::params(1e-6));
  EXPECT_GT(zero.energy, 3.0 * e16.energy);
  EXPECT_NEAR(zero.pressure, 1.0, 1e-12);
}

TEST(Manufactured, DiscreteFieldEvaluation) {
  const Mesh mesh = build_uniform_grid(2);
  const DofMap dm = build_dof_map(mesh, BoundarySpec::clamped_no_flow());
  State s = State::zero(dm);
  s.u_bub.setConstant(1.0);
  // a bubble-only field vanishes at vertices and is n_e / 4 at an edge midpoint
  const Point v = discrete_displacement(mesh, dm, s, 0, {0.0, 0.0});
  EXPECT_EQ(v.norm(), 0.0);
  const ElementGeometry g = element_geometry(mesh, 0);
  for (int k = 0; k < 3; ++k) {
    if (dm.bubble[mesh.tri_edges[0][k]] < 0) continue;
    Eigen::Vector3d lam = Eigen::Vector3d::Constant(0.5);
    lam(k) = 0.0;
    const Point mid = discrete_displacement(mesh, dm, s, 0, {lam(1), lam(2)});
    EXPECT_LT((mid - 0.25 * g.edge_normal(k)).norm(), 1e-15);
  }
}

TEST(Convergence, StabilizedCoarseCellsMatchReference) {
  // reference values of the stabilized scheme, K = 1e-4
  const std::vector<ConvergenceCell> cells = run_convergence(Scheme::stabilized, {1e-4}, {4, 8});
  ASSERT_EQ(cells.size(), 2u);
  EXPECT_NEAR(cells[0].e_energy, 0.0369, 0.15 * 0.0369);
  EXPECT_NEAR(cells[0].e_p, 0.0511, 0.15 * 0.0511);
  EXPECT_NEAR(cells[1].e_energy, 0.0183, 0.15 * 0.0183);
  ASSERT_TRUE(cells[1].rate_energy.has_value());
  EXPECT_NEAR(*cells[1].rate_energy, 1.0, 0.15);
  EXPECT_FALSE(cells[0].rate_energy.has_value());
}

TEST(Convergence, UnstabilizedPressureGrowsForTinyPermeability) {
  const std::vector<ConvergenceCell> cells = run_convergence(Scheme::unstabilized, {1e-10}, {4, 8, 16});
  EXPECT_LT(cells[0].e_p, cells[1].e_p);
  EXPECT_LT(cells[1].e_p, cells[2].e_p);
  EXPECT_NEAR(cells[2].e_p, 0.7271, 0.15 * 0.7271);
}

TEST(Convergence, EnrichedSchemeErrorsAreComparable) {
  const ManufacturedRun st = run_manufactured(Scheme::stabilized, 8, manufactured::params(1e-8));
  const ManufacturedRun en = run_manufactured(Scheme::enriched, 8, manufactured::params(1e-8));
  EXPECT_LT(en.errors.energy, 1.5 * st.errors.energy);
  EXPECT_GT(en.errors.energy, 0.5 * st.errors.energy);
}

TEST(Convergence, IterativeSolveAgreesWithDirect) {
  SolverConfig cfg;
  cfg.method = SolveMethod::fgmres;
  cfg.tol = 1e-11;
  const ManufacturedRun it = run_manufactured(Scheme::stabilized, 8, manufactured::params(1e-6), cfg);
  const ManufacturedRun di = run_manufactured(Scheme::stabilized, 8, manufactured::params(1e-6));
  EXPECT_NEAR(it.errors.energy, di.errors.energy, 1e-8);
  EXPECT_NEAR(it.errors.pressure, di.errors.pressure, 1e-8);
  EXPECT_GT(it.report.iterations, 0);
}

TEST(Oscillation, ConstantFieldIsZero) {
  const Mesh mesh = build_uniform_grid(4);
  EXPECT_EQ(oscillation_index(mesh, Vec::Constant(32, 3.0)), 0.0);
}

TEST(Oscillation, CheckerboardOnFourByFour) {
  // neighbouring triangles always differ in parity of their index
  const Mesh mesh = build_uniform_grid(4);
  Vec p(mesh.num_triangles());
  for (int t = 0; t < mesh.num_triangles(); ++t) p(t) = t % 2 == 0 ? 1.0 : -1.0;
  for (int e = 0; e < mesh.num_edges(); ++e)
    if (mesh.edge_to_tri[e][1] >= 0) ASSERT_NE(p(mesh.edge_to_tri[e][0]), p(mesh.edge_to_tri[e][1]));
  EXPECT_DOUBLE_EQ(oscillation_index(mesh, p), 40.0);
  EXPECT_THROW(oscillation_index(mesh, Vec::Zero(3)), std::invalid_argument);
}

TEST(Cantilever, CoarseMeshOscillation) {
  // on N = 4 the unstabilized pressure is visibly rougher; on fine meshes the
  // two indices are close (see README)
  const PhysicalParams p = cantilever::params();
  const CantileverRun st = run_cantilever(Scheme::stabilized, 4, p, cantilever::kSteps);
  const CantileverRun un = run_cantilever(Scheme::unstabilized, 4, p, cantilever::kSteps);
  EXPECT_NEAR(st.final_time, 0.005, 1e-15);
  EXPECT_LT(st.oscillation, 0.5 * un.oscillation);
  EXPECT_GT(st.state.p.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Bench, TableShapes) {
  EXPECT_EQ(bench_table("manufactured-k-nu").size(), 12u);
  EXPECT_EQ(bench_table("manufactured-h-tau").size(), 25u);
  EXPECT_EQ(bench_table("cantilever-k-nu").size(), 12u);
  EXPECT_EQ(bench_table("cantilever-h-tau").size(), 25u);
  EXPECT_THROW(bench_table("nope"), std::invalid_argument);
  const BenchPoint pt = bench_table("cantilever-k-nu").back();
  EXPECT_EQ(pt.n, 64);
  EXPECT_NEAR(*pt.params.poisson, 0.49, 1e-15);
  EXPECT_NEAR(pt.params.permeability, 1e-7, 1e-22);
  EXPECT_EQ(all_bench_preconds().size(), 6u);
  EXPECT_EQ((BenchPrecond{PrecondKind::lower, true}).name(), "L-inexact");
}

TEST(Bench, SmallRunIsReproducible) {
  BenchPoint pt;
  pt.sweep = "s";
  pt.label = "p";
  pt.params = manufactured::params(1e-6);
  pt.n = 8;
  BenchOptions opts;
  opts.repetitions = 3;
  const auto a = run_precond_bench({pt}, all_bench_preconds(), opts);
  const auto b = run_precond_bench({pt}, all_bench_preconds(), opts);
  ASSERT_EQ(a.size(), 6u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_TRUE(a[i].converged);
    EXPECT_EQ(a[i].iterations, b[i].iterations);
    EXPECT_EQ(a[i].iterations.size(), 3u);
  }
  std::ostringstream csv1, csv2;
  write_bench_csv(a, csv1);
  write_bench_csv(b, csv2);
  EXPECT_EQ(csv1.str(), csv2.str());
}

TEST(Spectral, PerturbedBubbleFormBoundsFullForm) {
  const SpectralProbe sp = spectral_equivalence_probe(4, 2.0, 1.0, 50, 7);
  EXPECT_GE(sp.eig_min, 1.0 - 1e-10);
  EXPECT_GE(sp.q_min, 1.0 - 1e-10);
  EXPECT_LE(sp.q_max, sp.eta * (1.0 + 1e-12));
  EXPECT_GT(sp.eta, 1.0);
}

TEST(Report, ConvergenceTableLayout) {
  std::vector<ConvergenceCell> cells(2);
  cells[0].K = 1e-4;
  cells[0].n = 4;
  cells[0].e_energy = 0.0369;
  cells[0].e_p = 0.0511;
  cells[1] = cells[0];
  cells[1].n = 8;
  cells[1].ok = false;
  std::ostringstream md, csv;
  write_convergence_markdown(cells, md);
  write_convergence_csv(cells, csv);
  EXPECT_NE(md.str().find("| 1e-04 | energy | 0.0369 | - |"), std::string::npos);
  EXPECT_EQ(csv.str().substr(0, csv.str().find('\n')), "K,N,e_energy,e_p,rate_energy,rate_p,ok");
  EXPECT_EQ(format_double(0.1), "0.1");
}
