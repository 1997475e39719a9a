#include "biot/precond.hpp"

#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

namespace biot {

struct BlockPreconditioner::Exact {
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> u, pb;
};

PrecondBlocks make_precond_blocks(const CondensedSystem& cond, const PhysicalParams& params) {
  PrecondBlocks b;
  b.alpha = cond.alpha;
  b.A_u = cond.A_u;
  b.A_pb = cond.B_pbeta();
  const double z2 = params.zeta() * params.zeta();
  const double s = cond.alpha * cond.alpha / z2;
  for (int i = 0; i < cond.n_p; ++i) b.A_pb.coeffRef(i, i) += s * cond.M_p(i);
  b.A_pb.makeCompressed();
  b.B_upb = cond.B_upbeta();
  return b;
}

BlockPreconditioner::BlockPreconditioner(const CondensedSystem& cond, const PhysicalParams& params,
                                         const PrecondConfig& cfg)
    : cfg_(cfg), blocks_(make_precond_blocks(cond, params)), n_u_(cond.n_u) {
  if (cfg.inexact) {
    if (!(cfg.inner_tol > 0.0 && cfg.inner_tol < 1.0))
      throw std::invalid_argument("BlockPreconditioner: inner_tol must lie in (0, 1)");
    if (n_u_ > 0) amg_u_ = std::make_unique<AmgHierarchy>(blocks_.A_u, cfg.amg);
    amg_pb_ = std::make_unique<AmgHierarchy>(blocks_.A_pb, cfg.amg);
  } else {
    exact_ = std::make_unique<Exact>();
    if (n_u_ > 0) {
      exact_->u.compute(Eigen::SparseMatrix<double>(blocks_.A_u));
      if (exact_->u.info() != Eigen::Success)
        throw std::runtime_error("BlockPreconditioner: A_u is not SPD");
    }
    exact_->pb.compute(Eigen::SparseMatrix<double>(blocks_.A_pb));
    if (exact_->pb.info() != Eigen::Success) throw std::runtime_error("BlockPreconditioner: A_pb is not SPD");
  }
}

BlockPreconditioner::~BlockPreconditioner() = default;

void BlockPreconditioner::inner(const SparseMat& a, const AmgHierarchy& amg, const Vec& r, Vec& y) const {
  y = Vec::Zero(r.size());
  KrylovOptions opts;
  opts.tol = cfg_.inner_tol;
  opts.max_iter = cfg_.inner_max_iter;
  const SolverReport rep = pcg([&a](const Vec& x, Vec& out) { out = a * x; }, amg.op(), r, y, opts);
  if (!rep.converged) ++inner_failures_;
  int seen = inner_iter_max_.load();
  while (rep.iterations > seen && !inner_iter_max_.compare_exchange_weak(seen, rep.iterations)) {
  }
}

void BlockPreconditioner::solve_u(const Vec& r, Vec& y) const {
  if (n_u_ == 0) {
    y.resize(0);
    return;
  }
  if (exact_)
    y = exact_->u.solve(r);
  else
    inner(blocks_.A_u, *amg_u_, r, y);
}

void BlockPreconditioner::solve_pb(const Vec& r, Vec& y) const {
  if (exact_)
    y = exact_->pb.solve(r);
  else
    inner(blocks_.A_pb, *amg_pb_, r, y);
}

void BlockPreconditioner::apply(const Vec& r, Vec& y) const {
  const Eigen::Index n_pb = r.size() - n_u_;
  const Vec r_u = r.head(n_u_);
  const Vec r_pb = r.tail(n_pb);
  Vec y_u, y_pb;
  switch (cfg_.kind) {
    case PrecondKind::diag:
      solve_u(r_u, y_u);
      solve_pb(r_pb, y_pb);
      break;
    case PrecondKind::lower:
      solve_u(r_u, y_u);
      solve_pb(r_pb + blocks_.alpha * (blocks_.B_upb * y_u), y_pb);
      break;
    case PrecondKind::upper:
      solve_pb(r_pb, y_pb);
      solve_u(r_u - blocks_.alpha * (blocks_.B_upb.transpose() * y_pb), y_u);
      break;
  }
  y.resize(r.size());
  y << y_u, y_pb;
}

LinearOperator BlockPreconditioner::op() const {
  return [this](const Vec& r, Vec& y) { apply(r, y); };
}

FovEstimate fov_probe(const CondensedSystem& cond, const PrecondBlocks& blocks, PrecondKind kind) {
  const int n = cond.size(), nu = cond.n_u;
  if (n > kFovMaxSize) throw std::invalid_argument("fov_probe: system too large for dense analysis");
  const Eigen::MatrixXd a(cond.matrix());

  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  d.topLeftCorner(nu, nu) = Eigen::MatrixXd(blocks.A_u);
  d.bottomRightCorner(n - nu, n - nu) = Eigen::MatrixXd(blocks.A_pb);
  const Eigen::LLT<Eigen::MatrixXd> llt(d);
  if (llt.info() != Eigen::Success) throw std::runtime_error("fov_probe: block diagonal is not SPD");
  const Eigen::MatrixXd l = llt.matrixL();

  Eigen::MatrixXd g;
  if (kind == PrecondKind::diag) {
    // L^-1 A L^-T
    const Eigen::MatrixXd t = llt.matrixL().solve(a);
    g = llt.matrixL().solve(t.transpose()).transpose();
  } else {
    Eigen::MatrixXd tri = d;
    const Eigen::MatrixXd b(blocks.B_upb);
    if (kind == PrecondKind::lower)
      tri.bottomLeftCorner(n - nu, nu) = -blocks.alpha * b;
    else
      tri.topRightCorner(nu, n - nu) = blocks.alpha * b.transpose();
    const Eigen::MatrixXd x = tri.partialPivLu().solve(l);
    g = llt.matrixL().solve(a * x);
  }

  FovEstimate est;
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(g);
  const Vec sv = svd.singularValues();
  est.upper = sv(0);
  est.condition = sv(0) / sv(sv.size() - 1);
  const Eigen::MatrixXd sym = 0.5 * (g + g.transpose());
  est.lower = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(sym, Eigen::EigenvaluesOnly).eigenvalues()(0);
  return est;
}

}  // namespace biot
