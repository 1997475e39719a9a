#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "biot/dof_map.hpp"
#include "biot/mesh.hpp"
#include "biot/precond.hpp"
#include "biot/system.hpp"

namespace biot {

// ---------------------------------------------------------------------------
// Manufactured solution: u = curl phi, phi = [x y (1-x)(1-y)]^2, p = 1, w = 0.

namespace manufactured {

Point displacement(const Point& x);
/// rows: components of u, columns: d/dx, d/dy
Eigen::Matrix2d displacement_gradient(const Point& x);
/// f = -mu Lap(u); the lambda term vanishes since div u = 0
Point body_force(const Point& x, double mu);
double pressure(const Point& x);

/// lambda = 2, mu = 1, alpha = 1, M = 1e6, tau = 1 and the given K.
PhysicalParams params(double permeability);

}  // namespace manufactured

struct ErrorNorms {
  double energy = 0.0;
  double pressure = 0.0;
};

/// Displacement gradient of the discrete field (linear plus bubble part) at a
/// reference point of triangle t.
Eigen::Matrix2d discrete_displacement_gradient(const Mesh& mesh, const DofMap& dm, const State& s, int t,
                                               const Point& ref);
/// Discrete displacement at a reference point of triangle t.
Point discrete_displacement(const Mesh& mesh, const DofMap& dm, const State& s, int t, const Point& ref);

/// sqrt(a(u - u_h, u - u_h)) and ||p - p_h|| against the manufactured
/// solution, integrated with the given quadrature degree.
ErrorNorms manufactured_errors(const Mesh& mesh, const DofMap& dm, const State& s, const PhysicalParams& params,
                               int quad_degree = 10);

struct ManufacturedRun {
  State state;
  ErrorNorms errors;
  SolverReport report;
};

/// One step of size tau from u^0 = 0, p^0 = 1 (the exact data at t = 0
/// enter the mass row only through (1/M)(p^0, q) + alpha (div u^0, q), and
/// div u^0 = 0).
ManufacturedRun run_manufactured(Scheme scheme, int n, const PhysicalParams& params, const SolverConfig& cfg = {});

struct ConvergenceCell {
  double K = 0.0;
  int n = 0;
  double e_energy = 0.0;
  double e_p = 0.0;
  /// log2(e(N/2) / e(N)); empty for the coarsest mesh
  std::optional<double> rate_energy;
  std::optional<double> rate_p;
  bool ok = true;
  std::string message;
};

std::vector<ConvergenceCell> run_convergence(Scheme scheme, const std::vector<double>& Ks, const std::vector<int>& Ns,
                                             const SolverConfig& cfg = {});

// ---------------------------------------------------------------------------
// Cantilever: left side clamped, downward traction on top, no flow.

namespace cantilever {

/// nu = 0.45, E = 1e5, K = 1e-7, alpha = 0.93, M = 1e10, tau = 1e-3.
PhysicalParams params();
inline constexpr int kSteps = 5;
inline const Point kTopTraction{0.0, -1.0};

}  // namespace cantilever

struct CantileverRun {
  State state;
  int steps = 0;
  double final_time = 0.0;
  double oscillation = 0.0;
  std::vector<SolverReport> reports;
};

CantileverRun run_cantilever(Scheme scheme, int n, const PhysicalParams& params, int steps,
                             const SolverConfig& cfg = {});

/// Sum over interior edges of |p(T+) - p(T-)|, divided by max p - min p.
/// Zero for a constant field.
double oscillation_index(const Mesh& mesh, const Vec& p);

// ---------------------------------------------------------------------------
// Preconditioner benchmarks.

enum class BenchCase { manufactured, cantilever };
std::string_view to_string(BenchCase c);

struct BenchPoint {
  /// row label (e.g. "nu=0 K=1e-06" or "tau=0.1 h=1/16")
  std::string sweep;
  std::string label;
  BenchCase problem = BenchCase::manufactured;
  PhysicalParams params;
  int n = 64;
};

struct BenchPrecond {
  PrecondKind kind = PrecondKind::diag;
  bool inexact = false;
  std::string name() const;
};

std::vector<BenchPrecond> all_bench_preconds();

/// Parameter points of a benchmark table. Names: manufactured-k-nu,
/// manufactured-h-tau, cantilever-k-nu, cantilever-h-tau.
std::vector<BenchPoint> bench_table(const std::string& name);
std::vector<std::string> bench_table_names();

struct BenchCell {
  BenchPoint point;
  BenchPrecond precond;
  std::vector<int> iterations;
  /// rounded mean over the repetitions
  int mean_iterations = 0;
  bool converged = true;
  int inner_failures = 0;
  double seconds = 0.0;
};

struct BenchOptions {
  int repetitions = 5;
  std::uint64_t seed = 2024;
  double tol = 1e-8;
  int max_iter = 500;
  double inner_tol = 1e-3;
  int inner_max_iter = 200;
};

/// A^E of a benchmark point (zero loads, zero previous state).
CondensedSystem bench_system(const BenchPoint& pt);

/// FGMRES on A^E x = 0 from uniform [0, 1) random initial guesses.
std::vector<BenchCell> run_precond_bench(const std::vector<BenchPoint>& points,
                                         const std::vector<BenchPrecond>& preconds, const BenchOptions& opts = {});

// ---------------------------------------------------------------------------
// Spectral equivalence of the perturbed bubble block.

struct SpectralProbe {
  int n = 0;
  int dim = 0;
  /// largest generalized eigenvalue of (a^D, a) on the displacement space
  double eta = 0.0;
  double eig_min = 0.0;
  double q_min = 0.0;
  double q_max = 0.0;
};

/// Rayleigh quotients a^D(u, u) / a(u, u) for `samples` random displacement
/// fields on the clamped unit square.
SpectralProbe spectral_equivalence_probe(int n, double lambda, double mu, int samples, std::uint64_t seed);

}  // namespace biot
