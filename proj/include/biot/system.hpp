#pragma once

#include <iosfwd>
#include <string>

#include <Eigen/SparseCore>

#include "biot/dof_map.hpp"
#include "biot/krylov.hpp"
#include "biot/local_assembly.hpp"
#include "biot/mesh.hpp"

namespace biot {

using SparseMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;

enum class Scheme {
  /// bubbles with the diagonal perturbed block, eliminated with the velocity
  stabilized,
  /// plain P1-RT0-P0, no bubbles
  unstabilized,
  /// bubbles with the full a(.,.) block; solved monolithically
  enriched,
};

std::string_view to_string(Scheme s);
Scheme parse_scheme(std::string_view s);

/// Coefficients of all five families, sized by a DofMap.
struct State {
  Vec u_lin;
  Vec u_bub;
  Vec p;
  Vec beta;
  Vec w;

  static State zero(const DofMap& dm);
};

struct Loads {
  /// body force; empty means zero
  VectorField f;
  /// fluid source; empty means zero
  ScalarField g;
  int quad_degree = 10;
};

/// The monolithic system A^D x = b in blocks. The bubble-bubble block is the
/// diagonal d_b for the stabilized scheme and the full a(.,.) block (bubble_full)
/// for the enriched one.
struct BlockSystem {
  Scheme scheme = Scheme::stabilized;
  PhysicalParams params;
  DofMap dm;

  Vec D_bb;
  SparseMat bubble_full;
  SparseMat A_bl;  // n_bub x n_ulin
  SparseMat A_ll;
  SparseMat B_b;   // n_p x n_bub
  SparseMat B_l;   // n_p x n_ulin
  Vec M_p;
  SparseMat B_w;     // n_p x n_w
  SparseMat B_beta;  // n_beta x n_w
  SparseMat M_w;     // element block diagonal
  /// velocity dofs of each triangle (free ones only), for blockwise inverses
  std::vector<std::vector<int>> w_blocks;

  Vec b_b, b_l, b_p, b_beta, b_w;

  /// A^D with the block signs
  ///   [D_bb     A_bl  aB_b^T   0         0      ]
  ///   [A_bl^T   A_ll  aB_l^T   0         0      ]
  ///   [-aB_b   -aB_l  M_p/M    0        -tB_w   ]
  ///   [0        0     0        0        -tB_beta]
  ///   [0        0     tB_w^T   tB_beta^T tM_w   ]
  SparseMat full_matrix() const;
  Vec full_rhs() const;
  /// Split a monolithic vector back into families.
  State split(const Vec& x) const;
  Vec join(const State& s) const;
};

BlockSystem assemble_full(const Mesh& mesh, const DofMap& dm, const PhysicalParams& params, const BoundarySpec& bc,
                          const Loads& loads, const State& prev, Scheme scheme = Scheme::stabilized);

/// The eliminated system A^E on (linear, pressure, multiplier):
///   [A_u      aB_u^T  0     ]
///   [-aB_u    B_p     C_pb  ]
///   [0        C_pb^T  C_bb  ]
struct CondensedSystem {
  double alpha = 1.0;
  double tau = 1.0;
  int n_u = 0, n_p = 0, n_beta = 0;

  SparseMat A_u;
  SparseMat B_u;  // n_p x n_u
  SparseMat B_p;
  SparseMat C_pb;
  SparseMat C_bb;
  Vec b_u, b_p, b_beta;
  /// element areas, kept for the preconditioner's pressure augmentation
  Vec M_p;

  Vec D_inv;
  SparseMat M_w_inv;

  int size() const { return n_u + n_p + n_beta; }
  SparseMat matrix() const;
  Vec rhs() const;
  /// [[B_p, C_pb], [C_pb^T, C_bb]]
  SparseMat B_pbeta() const;
  /// [B_u; 0], (n_p + n_beta) x n_u
  SparseMat B_upbeta() const;
};

/// Eliminates bubbles (through D_bb^-1) and velocity (through the element
/// blocks of M_w). Not available for the enriched scheme.
CondensedSystem condense(const BlockSystem& sys);

/// Recovers U_b and W from a solution (U_l, P, B) of the condensed system.
State back_substitute(const BlockSystem& sys, const CondensedSystem& cond, const Vec& solution);

/// Sparse LU solve of A^E x = b.
Vec solve_direct(const CondensedSystem& cond);

/// Solves A^D x = b directly, without any elimination.
State solve_monolithic(const BlockSystem& sys);

enum class SolveMethod { direct, fgmres };

enum class PrecondKind { diag, lower, upper };
std::string_view to_string(PrecondKind k);
PrecondKind parse_precond_kind(std::string_view s);

struct SolverConfig {
  SolveMethod method = SolveMethod::direct;
  PrecondKind kind = PrecondKind::upper;
  bool inexact = false;
  double tol = 1e-8;
  int max_iter = 500;
  double inner_tol = 1e-3;
  int inner_max_iter = 200;
};

struct StepResult {
  State state;
  SolverReport report;
};

/// One backward Euler step from prev.
StepResult step(const Mesh& mesh, const DofMap& dm, const PhysicalParams& params, const BoundarySpec& bc,
                const Loads& loads, const State& prev, Scheme scheme, const SolverConfig& cfg = {});

/// Matrix Market coordinate format.
void write_matrix_market(const SparseMat& a, std::ostream& out);

}  // namespace biot
