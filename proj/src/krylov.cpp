#include "biot/krylov.hpp"

#include <chrono>
#include <cmath>

#include <Eigen/Dense>

namespace biot {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

LinearOperator identity_operator() {
  return [](const Vec& x, Vec& y) { y = x; };
}

SolverReport fgmres(const LinearOperator& apply_a, const LinearOperator& apply_p, const Vec& b, Vec& x,
                    const KrylovOptions& opts) {
  const auto start = Clock::now();
  SolverReport rep;
  const Eigen::Index n = b.size();
  if (x.size() != n) x = Vec::Zero(n);

  Vec r(n), tmp(n);
  apply_a(x, tmp);
  r = b - tmp;
  double beta = r.norm();
  const double ref = b.norm() > 0.0 ? b.norm() : beta;
  if (ref == 0.0) {
    rep.relative_residuals.push_back(0.0);
    rep.converged = true;
    rep.wall_time = seconds_since(start);
    return rep;
  }
  rep.relative_residuals.push_back(beta / ref);

  const int m = opts.restart > 0 ? opts.restart : opts.max_iter;
  Eigen::MatrixXd v(n, m + 1), z(n, m);
  Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(m + 1, m);
  Vec cs(m), sn(m), g(m + 1);

  while (rep.iterations < opts.max_iter) {
    v.col(0) = r / beta;
    g.setZero();
    g(0) = beta;
    int j = 0;
    bool breakdown = false;
    for (; j < m && rep.iterations < opts.max_iter; ++j) {
      Vec zj(n);
      apply_p(v.col(j), zj);
      z.col(j) = zj;
      apply_a(zj, tmp);
      // modified Gram-Schmidt
      for (int i = 0; i <= j; ++i) {
        hess(i, j) = v.col(i).dot(tmp);
        tmp -= hess(i, j) * v.col(i);
      }
      hess(j + 1, j) = tmp.norm();
      if (hess(j + 1, j) > 0.0) v.col(j + 1) = tmp / hess(j + 1, j);

      for (int i = 0; i < j; ++i) {
        const double t = cs(i) * hess(i, j) + sn(i) * hess(i + 1, j);
        hess(i + 1, j) = -sn(i) * hess(i, j) + cs(i) * hess(i + 1, j);
        hess(i, j) = t;
      }
      const double rho = std::hypot(hess(j, j), hess(j + 1, j));
      if (rho == 0.0) {
        breakdown = true;
        break;
      }
      cs(j) = hess(j, j) / rho;
      sn(j) = hess(j + 1, j) / rho;
      hess(j, j) = rho;
      hess(j + 1, j) = 0.0;
      g(j + 1) = -sn(j) * g(j);
      g(j) = cs(j) * g(j);

      ++rep.iterations;
      rep.relative_residuals.push_back(std::abs(g(j + 1)) / ref);
      // an invariant Krylov space (zero subdiagonal) also lands here, g(j + 1) = 0
      if (std::abs(g(j + 1)) <= opts.tol * ref) {
        ++j;
        break;
      }
    }
    if (j > 0) {
      const Vec y = hess.topLeftCorner(j, j).triangularView<Eigen::Upper>().solve(g.head(j));
      x += z.leftCols(j) * y;
    }
    apply_a(x, tmp);
    r = b - tmp;
    beta = r.norm();
    if (beta <= opts.tol * ref) {
      rep.relative_residuals.back() = beta / ref;
      rep.converged = true;
      break;
    }
    if (breakdown) {
      rep.message = "breakdown";
      break;
    }
  }
  if (!rep.converged && rep.message.empty()) rep.message = "max_iter";
  rep.wall_time = seconds_since(start);
  return rep;
}

SolverReport pcg(const LinearOperator& apply_a, const LinearOperator& apply_p, const Vec& b, Vec& x,
                 const KrylovOptions& opts) {
  const auto start = Clock::now();
  SolverReport rep;
  const Eigen::Index n = b.size();
  if (x.size() != n) x = Vec::Zero(n);

  Vec r(n), z(n), p(n), ap(n);
  apply_a(x, ap);
  r = b - ap;
  double rnorm = r.norm();
  const double ref = b.norm() > 0.0 ? b.norm() : rnorm;
  rep.relative_residuals.push_back(ref > 0.0 ? rnorm / ref : 0.0);
  if (rnorm <= opts.tol * ref || ref == 0.0) {
    rep.converged = true;
    rep.wall_time = seconds_since(start);
    return rep;
  }

  apply_p(r, z);
  p = z;
  double rz = r.dot(z);
  while (rep.iterations < opts.max_iter) {
    apply_a(p, ap);
    const double pap = p.dot(ap);
    if (!(pap > 0.0)) {
      rep.message = "indefinite";
      break;
    }
    const double step = rz / pap;
    x += step * p;
    r -= step * ap;
    ++rep.iterations;
    rnorm = r.norm();
    rep.relative_residuals.push_back(rnorm / ref);
    if (rnorm <= opts.tol * ref) {
      rep.converged = true;
      break;
    }
    apply_p(r, z);
    const double rz_new = r.dot(z);
    p = z + (rz_new / rz) * p;
    rz = rz_new;
  }
  if (!rep.converged && rep.message.empty()) rep.message = "max_iter";
  rep.wall_time = seconds_since(start);
  return rep;
}

}  // namespace biot
