#include "biot/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include "biot/quadrature.hpp"

namespace biot {

namespace manufactured {

namespace {

// a(s) = s^2 (1 - s)^2 and its derivatives
double a0(double s) { return s * s * (1.0 - s) * (1.0 - s); }
double a1(double s) { return 2.0 * s - 6.0 * s * s + 4.0 * s * s * s; }
double a2(double s) { return 2.0 - 12.0 * s + 12.0 * s * s; }
double a3(double s) { return -12.0 + 24.0 * s; }

}  // namespace

Point displacement(const Point& x) { return {a0(x.x()) * a1(x.y()), -a1(x.x()) * a0(x.y())}; }

Eigen::Matrix2d displacement_gradient(const Point& x) {
  Eigen::Matrix2d g;
  g << a1(x.x()) * a1(x.y()), a0(x.x()) * a2(x.y()), -a2(x.x()) * a0(x.y()), -a1(x.x()) * a1(x.y());
  return g;
}

Point body_force(const Point& x, double mu) {
  const double lap1 = a2(x.x()) * a1(x.y()) + a0(x.x()) * a3(x.y());
  const double lap2 = -(a3(x.x()) * a0(x.y()) + a1(x.x()) * a2(x.y()));
  return {-mu * lap1, -mu * lap2};
}

double pressure(const Point&) { return 1.0; }

PhysicalParams params(double permeability) {
  PhysicalParams p;
  p.lambda = 2.0;
  p.mu = 1.0;
  p.alpha = 1.0;
  p.biot_modulus = 1e6;
  p.permeability = permeability;
  p.tau = 1.0;
  return p;
}

}  // namespace manufactured

namespace {

double elastic_energy_density(const Eigen::Matrix2d& g, double lambda, double mu) {
  const Eigen::Matrix2d eps = 0.5 * (g + g.transpose());
  return 2.0 * mu * eps.squaredNorm() + lambda * g.trace() * g.trace();
}

double vertex_value(const DofMap& dm, const State& s, int v, int c) {
  const int g = dm.linear[2 * v + c];
  return g >= 0 ? s.u_lin(g) : 0.0;
}

double bubble_value(const DofMap& dm, const State& s, int e) {
  const int g = dm.bubble[e];
  return (g >= 0 && s.u_bub.size() > 0) ? s.u_bub(g) : 0.0;
}

}  // namespace

Eigen::Matrix2d discrete_displacement_gradient(const Mesh& mesh, const DofMap& dm, const State& s, int t,
                                               const Point& ref) {
  const ElementGeometry geom = element_geometry(mesh, t);
  const Eigen::Vector3d lam = barycentric(ref);
  Eigen::Matrix2d g = Eigen::Matrix2d::Zero();
  for (int l = 0; l < 3; ++l) {
    const int v = mesh.triangles[t][l];
    const Point u(vertex_value(dm, s, v, 0), vertex_value(dm, s, v, 1));
    g += u * geom.grad_lambda[l].transpose();
  }
  for (int k = 0; k < 3; ++k) {
    const double c = bubble_value(dm, s, mesh.tri_edges[t][k]);
    if (c == 0.0) continue;
    const int a = (k + 1) % 3, b = (k + 2) % 3;
    const Point grad_phi = lam(a) * geom.grad_lambda[b] + lam(b) * geom.grad_lambda[a];
    g += c * geom.edge_normal(k) * grad_phi.transpose();
  }
  return g;
}

Point discrete_displacement(const Mesh& mesh, const DofMap& dm, const State& s, int t, const Point& ref) {
  const ElementGeometry geom = element_geometry(mesh, t);
  const Eigen::Vector3d lam = barycentric(ref);
  Point u = Point::Zero();
  for (int l = 0; l < 3; ++l) {
    const int v = mesh.triangles[t][l];
    u += lam(l) * Point(vertex_value(dm, s, v, 0), vertex_value(dm, s, v, 1));
  }
  for (int k = 0; k < 3; ++k)
    u += bubble_value(dm, s, mesh.tri_edges[t][k]) * lam((k + 1) % 3) * lam((k + 2) % 3) * geom.edge_normal(k);
  return u;
}

ErrorNorms manufactured_errors(const Mesh& mesh, const DofMap& dm, const State& s, const PhysicalParams& params,
                               int quad_degree) {
  const QuadratureRule& rule = quadrature_rule(quad_degree);
  double e_a = 0.0, e_p = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const ElementGeometry geom = element_geometry(mesh, t);
    for (int q = 0; q < rule.size(); ++q) {
      const Point x = map_to_element(geom, rule.points[q]);
      const double w = rule.weights[q] * 2.0 * geom.area;
      const Eigen::Matrix2d diff =
          manufactured::displacement_gradient(x) - discrete_displacement_gradient(mesh, dm, s, t, rule.points[q]);
      e_a += w * elastic_energy_density(diff, params.lambda, params.mu);
      const double dp = manufactured::pressure(x) - s.p(t);
      e_p += w * dp * dp;
    }
  }
  return {std::sqrt(e_a), std::sqrt(e_p)};
}

ManufacturedRun run_manufactured(Scheme scheme, int n, const PhysicalParams& params, const SolverConfig& cfg) {
  const Mesh mesh = build_uniform_grid(n);
  const BoundarySpec bc = BoundarySpec::clamped_no_flow();
  const DofMap dm = build_dof_map(mesh, bc, scheme != Scheme::unstabilized);
  State prev = State::zero(dm);
  prev.p.setOnes();
  Loads loads;
  const double mu = params.mu;
  loads.f = [mu](const Point& x) { return manufactured::body_force(x, mu); };

  ManufacturedRun run;
  StepResult r = step(mesh, dm, params, bc, loads, prev, scheme, cfg);
  run.state = std::move(r.state);
  run.report = std::move(r.report);
  run.errors = manufactured_errors(mesh, dm, run.state, params);
  return run;
}

std::vector<ConvergenceCell> run_convergence(Scheme scheme, const std::vector<double>& Ks, const std::vector<int>& Ns,
                                             const SolverConfig& cfg) {
  std::vector<ConvergenceCell> cells;
  for (double K : Ks) {
    const ConvergenceCell* prev = nullptr;
    const std::size_t first = cells.size();
    for (int n : Ns) {
      ConvergenceCell c;
      c.K = K;
      c.n = n;
      try {
        const ManufacturedRun run = run_manufactured(scheme, n, manufactured::params(K), cfg);
        c.e_energy = run.errors.energy;
        c.e_p = run.errors.pressure;
      } catch (const std::exception& ex) {
        c.ok = false;
        c.message = ex.what();
      }
      cells.push_back(c);
      prev = cells.size() > first + 1 ? &cells[cells.size() - 2] : nullptr;
      if (prev && prev->ok && cells.back().ok) {
        ConvergenceCell& cur = cells.back();
        const double ratio = std::log(double(cur.n) / prev->n);
        cur.rate_energy = std::log(prev->e_energy / cur.e_energy) / ratio;
        cur.rate_p = std::log(prev->e_p / cur.e_p) / ratio;
      }
    }
  }
  return cells;
}

namespace cantilever {

PhysicalParams params() { return PhysicalParams::from_young_poisson(1e5, 0.45, 0.93, 1e10, 1e-7, 1e-3); }

}  // namespace cantilever

CantileverRun run_cantilever(Scheme scheme, int n, const PhysicalParams& params, int steps,
                             const SolverConfig& cfg) {
  if (steps < 1) throw std::invalid_argument("run_cantilever: need at least one step");
  const Mesh mesh = build_uniform_grid(n);
  const BoundarySpec bc = BoundarySpec::cantilever(cantilever::kTopTraction);
  const DofMap dm = build_dof_map(mesh, bc, scheme != Scheme::unstabilized);
  CantileverRun run;
  run.state = State::zero(dm);
  for (int k = 0; k < steps; ++k) {
    StepResult r = step(mesh, dm, params, bc, Loads{}, run.state, scheme, cfg);
    run.state = std::move(r.state);
    run.reports.push_back(std::move(r.report));
  }
  run.steps = steps;
  run.final_time = steps * params.tau;
  run.oscillation = oscillation_index(mesh, run.state.p);
  return run;
}

double oscillation_index(const Mesh& mesh, const Vec& p) {
  if (p.size() != mesh.num_triangles()) throw std::invalid_argument("oscillation_index: one value per triangle");
  const double range = p.maxCoeff() - p.minCoeff();
  if (!(range > 0.0)) return 0.0;
  double jumps = 0.0;
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const auto& tt = mesh.edge_to_tri[e];
    if (tt[1] < 0) continue;
    jumps += std::abs(p(tt[0]) - p(tt[1]));
  }
  return jumps / range;
}

std::string_view to_string(BenchCase c) { return c == BenchCase::manufactured ? "manufactured" : "cantilever"; }

std::string BenchPrecond::name() const {
  std::string s = kind == PrecondKind::diag ? "D" : kind == PrecondKind::lower ? "L" : "U";
  return inexact ? s + "-inexact" : s;
}

std::vector<BenchPrecond> all_bench_preconds() {
  std::vector<BenchPrecond> out;
  for (bool inexact : {false, true})
    for (PrecondKind k : {PrecondKind::diag, PrecondKind::upper, PrecondKind::lower}) out.push_back({k, inexact});
  return out;
}

std::vector<std::string> bench_table_names() {
  return {"manufactured-k-nu", "manufactured-h-tau", "cantilever-k-nu", "cantilever-h-tau"};
}

namespace {

std::string fmt_g(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

std::vector<BenchPoint> bench_table(const std::string& name) {
  const std::vector<double> Ks{1e-2, 1e-4, 1e-6, 1e-8, 1e-10, 1e-12};
  const std::vector<double> nus{0.0, 0.1, 0.2, 0.4, 0.45, 0.49};
  const std::vector<double> taus{1.0, 0.1, 0.01, 0.001, 0.0001};
  const std::vector<int> ns{4, 8, 16, 32, 64};
  std::vector<BenchPoint> pts;

  if (name == "manufactured-k-nu") {
    for (double K : Ks)
      pts.push_back({"nu=0", "K=" + fmt_g(K), BenchCase::manufactured,
                     PhysicalParams::from_young_poisson(1.0, 0.0, 1.0, 1e6, K, 1.0), 64});
    for (double nu : nus)
      pts.push_back({"K=1e-06", "nu=" + fmt_g(nu), BenchCase::manufactured,
                     PhysicalParams::from_young_poisson(1.0, nu, 1.0, 1e6, 1e-6, 1.0), 64});
  } else if (name == "manufactured-h-tau") {
    for (double tau : taus)
      for (int n : ns) {
        PhysicalParams p = manufactured::params(1e-6);
        p.tau = tau;
        pts.push_back({"tau=" + fmt_g(tau), "h=1/" + std::to_string(n), BenchCase::manufactured, p, n});
      }
  } else if (name == "cantilever-k-nu") {
    for (double K : Ks)
      pts.push_back({"nu=0.45", "K=" + fmt_g(K), BenchCase::cantilever,
                     PhysicalParams::from_young_poisson(1e5, 0.45, 0.93, 1e10, K, 1.0), 64});
    for (double nu : nus)
      pts.push_back({"K=1e-07", "nu=" + fmt_g(nu), BenchCase::cantilever,
                     PhysicalParams::from_young_poisson(1e5, nu, 0.93, 1e10, 1e-7, 1.0), 64});
  } else if (name == "cantilever-h-tau") {
    for (double tau : taus)
      for (int n : ns)
        pts.push_back({"tau=" + fmt_g(tau), "h=1/" + std::to_string(n), BenchCase::cantilever,
                       PhysicalParams::from_young_poisson(1e5, 0.45, 0.93, 1e10, 1e-7, tau), n});
  } else {
    throw std::invalid_argument("unknown benchmark table '" + name + "'");
  }
  return pts;
}

CondensedSystem bench_system(const BenchPoint& pt) {
  const Mesh mesh = build_uniform_grid(pt.n);
  const BoundarySpec bc = pt.problem == BenchCase::manufactured ? BoundarySpec::clamped_no_flow()
                                                                : BoundarySpec::cantilever(cantilever::kTopTraction);
  const DofMap dm = build_dof_map(mesh, bc);
  return condense(assemble_full(mesh, dm, pt.params, bc, Loads{}, State::zero(dm)));
}

std::vector<BenchCell> run_precond_bench(const std::vector<BenchPoint>& points,
                                         const std::vector<BenchPrecond>& preconds, const BenchOptions& opts) {
  using Clock = std::chrono::steady_clock;
  std::vector<BenchCell> cells;
  for (const BenchPoint& pt : points) {
    const CondensedSystem cond = bench_system(pt);
    const SparseMat ae = cond.matrix();
    const LinearOperator apply_a = [&ae](const Vec& x, Vec& y) { y = ae * x; };
    const Vec zero = Vec::Zero(cond.size());

    for (const BenchPrecond& bp : preconds) {
      const auto start = Clock::now();
      BenchCell cell;
      cell.point = pt;
      cell.precond = bp;
      PrecondConfig pc;
      pc.kind = bp.kind;
      pc.inexact = bp.inexact;
      pc.inner_tol = opts.inner_tol;
      pc.inner_max_iter = opts.inner_max_iter;
      const BlockPreconditioner prec(cond, pt.params, pc);
      KrylovOptions ko;
      ko.tol = opts.tol;
      ko.max_iter = opts.max_iter;
      double sum = 0.0;
      for (int r = 0; r < opts.repetitions; ++r) {
        // same initial guesses for every preconditioner at a point
        std::mt19937_64 rng(opts.seed + static_cast<std::uint64_t>(r));
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        Vec x(cond.size());
        for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = unif(rng);
        const SolverReport rep = fgmres(apply_a, prec.op(), zero, x, ko);
        cell.iterations.push_back(rep.iterations);
        cell.converged = cell.converged && rep.converged;
        sum += rep.iterations;
      }
      cell.mean_iterations = static_cast<int>(std::lround(sum / opts.repetitions));
      cell.inner_failures = prec.inner_failures();
      cell.seconds = std::chrono::duration<double>(Clock::now() - start).count();
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

SpectralProbe spectral_equivalence_probe(int n, double lambda, double mu, int samples, std::uint64_t seed) {
  const Mesh mesh = build_uniform_grid(n);
  const BoundarySpec bc = BoundarySpec::clamped_no_flow();
  const DofMap dm = build_dof_map(mesh, bc);
  PhysicalParams p;
  p.lambda = lambda;
  p.mu = mu;
  const BlockSystem sys = assemble_full(mesh, dm, p, bc, Loads{}, State::zero(dm), Scheme::enriched);

  const int nb = dm.n_bub, nl = dm.n_ulin, dim = nb + nl;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(dim, dim);
  a.topLeftCorner(nb, nb) = Eigen::MatrixXd(sys.bubble_full);
  a.topRightCorner(nb, nl) = Eigen::MatrixXd(sys.A_bl);
  a.bottomLeftCorner(nl, nb) = Eigen::MatrixXd(sys.A_bl).transpose();
  a.bottomRightCorner(nl, nl) = Eigen::MatrixXd(sys.A_ll);
  Eigen::MatrixXd ad = a;
  ad.topLeftCorner(nb, nb) = sys.D_bb.asDiagonal();

  SpectralProbe out;
  out.n = n;
  out.dim = dim;
  const Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(ad, a, Eigen::EigenvaluesOnly);
  if (ges.info() != Eigen::Success) throw std::runtime_error("spectral_equivalence_probe: eigensolver failed");
  out.eig_min = ges.eigenvalues()(0);
  out.eta = ges.eigenvalues()(dim - 1);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  out.q_min = std::numeric_limits<double>::infinity();
  out.q_max = -out.q_min;
  for (int s = 0; s < samples; ++s) {
    Vec v(dim);
    for (int i = 0; i < dim; ++i) v(i) = unif(rng);
    const double q = v.dot(ad * v) / v.dot(a * v);
    out.q_min = std::min(out.q_min, q);
    out.q_max = std::max(out.q_max, q);
  }
  return out;
}

}  // namespace biot
