#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace biot {

using Vec = Eigen::VectorXd;

/// y = Op(x). Callbacks must be reentrant.
using LinearOperator = std::function<void(const Vec& x, Vec& y)>;

struct SolverReport {
  int iterations = 0;
  /// Relative residual after each iteration, entry 0 is the initial one.
  std::vector<double> relative_residuals;
  bool converged = false;
  double wall_time = 0.0;
  /// Empty on success; otherwise "breakdown", "max_iter", "indefinite", ...
  std::string message;

  double final_residual() const { return relative_residuals.empty() ? 0.0 : relative_residuals.back(); }
};

struct KrylovOptions {
  double tol = 1e-8;
  int max_iter = 500;
  /// FGMRES restart length; 0 means no restart.
  int restart = 0;
};

/// Flexible GMRES, right preconditioned. Relative residuals are measured as
/// ||b - A x|| / ||b||, or against ||b - A x0|| when b = 0. x holds the
/// initial guess on entry.
SolverReport fgmres(const LinearOperator& apply_a, const LinearOperator& apply_p, const Vec& b, Vec& x,
                    const KrylovOptions& opts = {});

/// Preconditioned conjugate gradients for SPD A and P, same residual
/// convention as fgmres.
SolverReport pcg(const LinearOperator& apply_a, const LinearOperator& apply_p, const Vec& b, Vec& x,
                 const KrylovOptions& opts = {});

/// The identity as a preconditioner.
LinearOperator identity_operator();

}  // namespace biot
