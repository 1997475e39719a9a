#pragma once

#include <atomic>
#include <memory>

#include "biot/amg.hpp"
#include "biot/system.hpp"

namespace biot {

struct PrecondConfig {
  PrecondKind kind = PrecondKind::upper;
  bool inexact = false;
  double inner_tol = 1e-3;
  int inner_max_iter = 200;
  AmgConfig amg;
};

/// The two diagonal blocks and the coupling of A^E in (u, [p; beta]) form.
struct PrecondBlocks {
  double alpha = 1.0;
  SparseMat A_u;
  /// B_pbeta with (alpha^2 / zeta^2) M_p added to the pressure block
  SparseMat A_pb;
  /// [B_u; 0]
  SparseMat B_upb;
};

PrecondBlocks make_precond_blocks(const CondensedSystem& cond, const PhysicalParams& params);

/// Block diagonal, lower or upper triangular preconditioner for A^E, with the
/// diagonal blocks either factorized or approximated by AMG-preconditioned CG.
///   diag:  y_u = A_u^-1 r_u,                       y_pb = A_pb^-1 r_pb
///   lower: y_u = A_u^-1 r_u,                       y_pb = A_pb^-1 (r_pb + a B y_u)
///   upper: y_pb = A_pb^-1 r_pb,                    y_u = A_u^-1 (r_u - a B^T y_pb)
class BlockPreconditioner {
 public:
  BlockPreconditioner(const CondensedSystem& cond, const PhysicalParams& params, const PrecondConfig& cfg);
  ~BlockPreconditioner();

  void apply(const Vec& r, Vec& y) const;
  LinearOperator op() const;

  const PrecondBlocks& blocks() const { return blocks_; }
  const PrecondConfig& config() const { return cfg_; }
  /// inner CG solves that missed inner_tol within inner_max_iter
  int inner_failures() const { return inner_failures_.load(); }
  int inner_iterations_max() const { return inner_iter_max_.load(); }

 private:
  void solve_u(const Vec& r, Vec& y) const;
  void solve_pb(const Vec& r, Vec& y) const;
  void inner(const SparseMat& a, const AmgHierarchy& amg, const Vec& r, Vec& y) const;

  PrecondConfig cfg_;
  PrecondBlocks blocks_;
  int n_u_ = 0;
  struct Exact;
  std::unique_ptr<Exact> exact_;
  std::unique_ptr<AmgHierarchy> amg_u_, amg_pb_;
  mutable std::atomic<int> inner_failures_{0};
  mutable std::atomic<int> inner_iter_max_{0};
};

struct FovEstimate {
  /// diag: sigma_max / sigma_min of D^-1/2 A^E D^-T/2
  double condition = 0.0;
  /// smallest eigenvalue of the symmetric part of the preconditioned operator
  /// in the D^-1 inner product
  double lower = 0.0;
  /// its norm in the same inner product
  double upper = 0.0;
};

inline constexpr int kFovMaxSize = 3000;

/// Dense estimates for the exact preconditioner of the given kind, with
/// D = blockdiag(A_u, A_pb) = L L^T and G = L^-1 A^E B L (B = D^-1 for diag).
FovEstimate fov_probe(const CondensedSystem& cond, const PrecondBlocks& blocks, PrecondKind kind);

}  // namespace biot
